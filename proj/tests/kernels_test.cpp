#include "synthlab/kernels.hpp"

#include "synthlab/rng.hpp"
#include "synthlab/types.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace synthlab;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t stream, double scale = 1.0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = scale * (2.0 * rng::u01(42, stream, i) - 1.0);
    return v;
}

long double ref_dot(const std::vector<double>& a, const std::vector<double>& b) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += static_cast<long double>(a[i]) * b[i];
    return s;
}

} // namespace

TEST_CASE("compensated reductions match a long-double reference") {
    for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 5ul, 17ul, 1023ul, 4096ul}) {
        auto a = random_vec(n, n + 1);
        auto b = random_vec(n, n + 2);
        long double rs = 0.0L;
        for (double x : a)
            rs += x;
        double s = kernels::sum(a.data(), n);
        CHECK(std::abs(s - static_cast<double>(rs)) <=
              1e-14 * std::max(1.0, std::abs(static_cast<double>(rs))));
        double d = kernels::dot(a.data(), b.data(), n);
        double rd = static_cast<double>(ref_dot(a, b));
        CHECK(std::abs(d - rd) <= 1e-13 * std::max(1.0, std::abs(rd)));
    }
}

TEST_CASE("sum survives catastrophic cancellation") {
    std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    CHECK(kernels::sum(v.data(), v.size()) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("torus min distance agrees with a brute-force reference") {
    for (int dim : {1, 2, 3}) {
        std::size_t n = 733;
        std::array<std::vector<double>, 3> cloud;
        for (int c = 0; c < 3; ++c)
            cloud[c] = std::vector<double>(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < dim; ++c)
                cloud[c][i] = kTwoPi * rng::u01(7, 10 * dim + c, i);
        const double* cols[3] = {cloud[0].data(), cloud[1].data(), cloud[2].data()};
        for (int trial = 0; trial < 50; ++trial) {
            double p[3] = {0, 0, 0};
            for (int c = 0; c < dim; ++c)
                p[c] = kTwoPi * rng::u01(8, dim, 3 * trial + c);
            double got = kernels::min_sq_dist_torus(p, dim, cols, n);
            double want = 1e300;
            for (std::size_t i = 0; i < n; ++i) {
                double d2 = 0.0;
                for (int c = 0; c < dim; ++c) {
                    double dx = std::abs(p[c] - cloud[c][i]);
                    dx = std::min(dx, kTwoPi - dx);
                    d2 += dx * dx;
                }
                want = std::min(want, d2);
            }
            CHECK(got == want);
        }
    }
}

TEST_CASE("min-image wraps across the periodic seam") {
    std::vector<double> xs{6.28}, ys{0.0}, zs{0.0};
    const double* cols[3] = {xs.data(), ys.data(), zs.data()};
    double p[3] = {0.01, 0.0, 0.0};
    double d2 = kernels::min_sq_dist_torus(p, 1, cols, 1);
    double expect = 0.01 + (kTwoPi - 6.28);
    CHECK(std::sqrt(d2) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("scalar and SIMD backends agree") {
    auto initial = kernels::active_backend();
    bool have_avx2 = true;
    try {
        kernels::force_backend(kernels::Backend::Avx2);
    } catch (const std::exception&) {
        have_avx2 = false;
    }
    if (!have_avx2) {
        kernels::force_backend(kernels::Backend::Scalar);
        return;
    }

    std::size_t n = 10007;
    auto a = random_vec(n, 100, 3.0);
    auto b = random_vec(n, 101, 0.5);
    std::array<std::vector<double>, 3> cloud = {random_vec(n, 102), random_vec(n, 103),
                                                random_vec(n, 104)};
    for (auto& col : cloud)
        for (double& x : col)
            x = wrap_two_pi(x * 4.0);
    const double* cols[3] = {cloud[0].data(), cloud[1].data(), cloud[2].data()};

    kernels::force_backend(kernels::Backend::Avx2);
    double sum_v = kernels::sum(a.data(), n);
    double dot_v = kernels::dot(a.data(), b.data(), n);
    std::vector<double> min_t_v, min_e_v;
    for (int trial = 0; trial < 25; ++trial) {
        double p[3] = {rng::u01(9, 0, trial) * kTwoPi, rng::u01(9, 1, trial) * kTwoPi,
                       rng::u01(9, 2, trial) * kTwoPi};
        min_t_v.push_back(kernels::min_sq_dist_torus(p, 3, cols, n));
        min_e_v.push_back(kernels::min_sq_dist_euclid3(p, cols[0], cols[1], cols[2], n));
    }

    kernels::force_backend(kernels::Backend::Scalar);
    double sum_s = kernels::sum(a.data(), n);
    double dot_s = kernels::dot(a.data(), b.data(), n);
    CHECK(std::abs(sum_v - sum_s) <= 1e-13 * std::max(1.0, std::abs(sum_s)));
    CHECK(std::abs(dot_v - dot_s) <= 1e-13 * std::max(1.0, std::abs(dot_s)));
    for (int trial = 0; trial < 25; ++trial) {
        double p[3] = {rng::u01(9, 0, trial) * kTwoPi, rng::u01(9, 1, trial) * kTwoPi,
                       rng::u01(9, 2, trial) * kTwoPi};
        // min of identically computed squared distances: bit-exact across backends
        CHECK(kernels::min_sq_dist_torus(p, 3, cols, n) == min_t_v[trial]);
        CHECK(kernels::min_sq_dist_euclid3(p, cols[0], cols[1], cols[2], n) == min_e_v[trial]);
    }

    kernels::force_backend(initial);
}
