#include "synthlab/kernels.hpp"

#include "kernels_impl.hpp"
#include "synthlab/accum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace synthlab::kernels {
namespace detail {

double scalar_sum(const double* a, std::size_t n) {
    NeumaierSum acc;
    for (std::size_t i = 0; i < n; ++i)
        acc.add(a[i]);
    return acc.value();
}

double scalar_dot(const double* a, const double* b, std::size_t n) {
    NeumaierSum acc;
    for (std::size_t i = 0; i < n; ++i)
        acc.add(a[i] * b[i]);
    return acc.value();
}

double scalar_min_sq_dist_torus(const double* p, int dim, const double* const* coords,
                                std::size_t n) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            double dx = std::abs(p[c] - coords[c][i]);
            dx = std::min(dx, kTwoPi - dx);
            d2 += dx * dx;
        }
        best = std::min(best, d2);
    }
    return best;
}

double scalar_min_sq_dist_euclid3(const double* p, const double* xs, const double* ys,
                                  const double* zs, std::size_t n) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double dx = p[0] - xs[i];
        double dy = p[1] - ys[i];
        double dz = p[2] - zs[i];
        double d2 = dx * dx + dy * dy + dz * dz;
        best = std::min(best, d2);
    }
    return best;
}

struct VTable {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*min_sq_dist_torus)(const double*, int, const double* const*, std::size_t);
    double (*min_sq_dist_euclid3)(const double*, const double*, const double*, const double*,
                                  std::size_t);
    Backend backend;
};

constexpr VTable kScalarTable{scalar_sum, scalar_dot, scalar_min_sq_dist_torus,
                              scalar_min_sq_dist_euclid3, Backend::Scalar};

#ifdef SYNTHLAB_KERNELS_HAVE_AVX2_TU
constexpr VTable kAvx2Table{avx2_sum, avx2_dot, avx2_min_sq_dist_torus, avx2_min_sq_dist_euclid3,
                            Backend::Avx2};
#endif

bool avx2_available() {
#ifdef SYNTHLAB_KERNELS_HAVE_AVX2_TU
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const VTable* resolve_initial() {
    if (const char* env = std::getenv("SYNTHLAB_KERNELS")) {
        std::string want(env);
        if (want == "scalar")
            return &kScalarTable;
#ifdef SYNTHLAB_KERNELS_HAVE_AVX2_TU
        if (want == "avx2" && avx2_available())
            return &kAvx2Table;
#endif
    }
#ifdef SYNTHLAB_KERNELS_HAVE_AVX2_TU
    if (avx2_available())
        return &kAvx2Table;
#endif
    return &kScalarTable;
}

const VTable*& active_table() {
    static const VTable* table = resolve_initial();
    return table;
}

} // namespace detail

Backend active_backend() { return detail::active_table()->backend; }

std::string backend_name() {
    return active_backend() == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
    switch (b) {
    case Backend::Scalar:
        detail::active_table() = &detail::kScalarTable;
        return;
    case Backend::Avx2:
#ifdef SYNTHLAB_KERNELS_HAVE_AVX2_TU
        if (detail::avx2_available()) {
            detail::active_table() = &detail::kAvx2Table;
            return;
        }
#endif
        throw std::runtime_error("kernels: avx2 backend unavailable on this machine");
    }
    throw std::runtime_error("kernels: unknown backend");
}

double sum(const double* a, std::size_t n) { return detail::active_table()->sum(a, n); }

double dot(const double* a, const double* b, std::size_t n) {
    return detail::active_table()->dot(a, b, n);
}

double sum_sq(const double* a, std::size_t n) { return detail::active_table()->dot(a, a, n); }

double min_sq_dist_torus(const double* p, int dim, const double* const* coords, std::size_t n) {
    return detail::active_table()->min_sq_dist_torus(p, dim, coords, n);
}

double min_sq_dist_euclid3(const double* p, const double* xs, const double* ys, const double* zs,
                           std::size_t n) {
    return detail::active_table()->min_sq_dist_euclid3(p, xs, ys, zs, n);
}

} // namespace synthlab::kernels
