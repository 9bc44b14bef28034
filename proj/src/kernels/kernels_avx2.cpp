// AVX2 kernel variants. This file is compiled with -mavx2 only; callers reach
// it through the runtime dispatch table, never directly.

#include "kernels_impl.hpp"

#ifdef SYNTHLAB_KERNELS_HAVE_AVX2_TU

#include "synthlab/accum.hpp"

#include <algorithm>
#include <cmath>
#include <immintrin.h>
#include <limits>

namespace synthlab::kernels::detail {

namespace {

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));

inline __m256d abs_pd(__m256d x) { return _mm256_and_pd(x, kAbsMask); }

// 4-lane Neumaier update: s, c are running sum/compensation vectors.
inline void neumaier_step(__m256d& s, __m256d& c, __m256d x) {
    __m256d t = _mm256_add_pd(s, x);
    __m256d s_big = _mm256_cmp_pd(abs_pd(s), abs_pd(x), _CMP_GE_OQ);
    __m256d big = _mm256_blendv_pd(x, s, s_big);
    __m256d small = _mm256_blendv_pd(s, x, s_big);
    c = _mm256_add_pd(c, _mm256_add_pd(_mm256_sub_pd(big, t), small));
    s = t;
}

inline double reduce_neumaier(__m256d s, __m256d c, const double* tail_a, const double* tail_b,
                              std::size_t tail_n) {
    alignas(32) double sl[4], cl[4];
    _mm256_store_pd(sl, s);
    _mm256_store_pd(cl, c);
    NeumaierSum acc;
    for (int l = 0; l < 4; ++l) {
        acc.add(sl[l]);
        acc.add(cl[l]);
    }
    for (std::size_t i = 0; i < tail_n; ++i)
        acc.add(tail_b ? tail_a[i] * tail_b[i] : tail_a[i]);
    return acc.value();
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_min_pd(lo, hi);
    m = _mm_min_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

} // namespace

double avx2_sum(const double* a, std::size_t n) {
    __m256d s = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();
    std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4)
        neumaier_step(s, c, _mm256_loadu_pd(a + i));
    return reduce_neumaier(s, c, a + body, nullptr, n - body);
}

double avx2_dot(const double* a, const double* b, std::size_t n) {
    __m256d s = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();
    std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4)
        neumaier_step(s, c, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    return reduce_neumaier(s, c, a + body, b + body, n - body);
}

double avx2_min_sq_dist_torus(const double* p, int dim, const double* const* coords,
                              std::size_t n) {
    const __m256d two_pi = _mm256_set1_pd(kTwoPi);
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        __m256d d2 = _mm256_setzero_pd();
        for (int cdim = 0; cdim < dim; ++cdim) {
            __m256d q = _mm256_loadu_pd(coords[cdim] + i);
            __m256d dx = abs_pd(_mm256_sub_pd(_mm256_set1_pd(p[cdim]), q));
            dx = _mm256_min_pd(dx, _mm256_sub_pd(two_pi, dx));
            d2 = _mm256_add_pd(d2, _mm256_mul_pd(dx, dx));
        }
        best = _mm256_min_pd(best, d2);
    }
    double out = hmin(best);
    for (std::size_t i = body; i < n; ++i) {
        double d2 = 0.0;
        for (int cdim = 0; cdim < dim; ++cdim) {
            double dx = std::abs(p[cdim] - coords[cdim][i]);
            dx = std::min(dx, kTwoPi - dx);
            d2 += dx * dx;
        }
        out = std::min(out, d2);
    }
    return out;
}

double avx2_min_sq_dist_euclid3(const double* p, const double* xs, const double* ys,
                                const double* zs, std::size_t n) {
    const __m256d px = _mm256_set1_pd(p[0]);
    const __m256d py = _mm256_set1_pd(p[1]);
    const __m256d pz = _mm256_set1_pd(p[2]);
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t body = n & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        __m256d dx = _mm256_sub_pd(px, _mm256_loadu_pd(xs + i));
        __m256d dy = _mm256_sub_pd(py, _mm256_loadu_pd(ys + i));
        __m256d dz = _mm256_sub_pd(pz, _mm256_loadu_pd(zs + i));
        __m256d d2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                   _mm256_mul_pd(dz, dz));
        best = _mm256_min_pd(best, d2);
    }
    double out = hmin(best);
    for (std::size_t i = body; i < n; ++i) {
        double dx = p[0] - xs[i];
        double dy = p[1] - ys[i];
        double dz = p[2] - zs[i];
        out = std::min(out, dx * dx + dy * dy + dz * dz);
    }
    return out;
}

} // namespace synthlab::kernels::detail

#endif // SYNTHLAB_KERNELS_HAVE_AVX2_TU
