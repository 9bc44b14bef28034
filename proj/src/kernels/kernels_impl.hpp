#pragma once

#include <cstddef>

// Internal backend entry points shared between the dispatcher and the
// architecture-specific translation units.
namespace synthlab::kernels::detail {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

double scalar_sum(const double* a, std::size_t n);
double scalar_dot(const double* a, const double* b, std::size_t n);
double scalar_min_sq_dist_torus(const double* p, int dim, const double* const* coords,
                                std::size_t n);
double scalar_min_sq_dist_euclid3(const double* p, const double* xs, const double* ys,
                                  const double* zs, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
#define SYNTHLAB_KERNELS_HAVE_AVX2_TU 1
double avx2_sum(const double* a, std::size_t n);
double avx2_dot(const double* a, const double* b, std::size_t n);
double avx2_min_sq_dist_torus(const double* p, int dim, const double* const* coords,
                              std::size_t n);
double avx2_min_sq_dist_euclid3(const double* p, const double* xs, const double* ys,
                                const double* zs, std::size_t n);
#endif

} // namespace synthlab::kernels::detail
