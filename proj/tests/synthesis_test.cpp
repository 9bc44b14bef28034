#include "synthlab/synthesis.hpp"

#include "synthlab/accum.hpp"
#include "synthlab/errors.hpp"
#include "synthlab/rng.hpp"
#include "synthlab/runner.hpp"

#include <doctest.h>

#include <cmath>

using namespace synthlab;

namespace {

CoefficientSet random_coeffs(SpectrumTablePtr table, std::uint64_t stream) {
    auto c = CoefficientSet::zeros(table);
    std::uint64_t ctr = 0;
    for (auto& line : c.lines)
        for (auto& v : line) {
            double re = 2.0 * rng::u01(55, stream, ctr++) - 1.0;
            double im = 2.0 * rng::u01(55, stream, ctr++) - 1.0;
            v = {re, im};
        }
    return c;
}

ThinMeasure subtorus_measure() {
    MeasureSpec s;
    s.manifold = Manifold::torus(2);
    s.kind = MeasureKind::Subtorus;
    s.subtorus_k = 1;
    return make_measure(s);
}

ThinMeasure segment_measure() {
    MeasureSpec s;
    s.manifold = Manifold::torus(2);
    s.kind = MeasureKind::Segment;
    s.segment_a = {0.0, 0.0, 0.0};
    s.segment_b = {kPi, 0.0, 0.0};
    return make_measure(s);
}

} // namespace

TEST_CASE("lowpass at enormous scale is the identity on a fixed band") {
    auto table = enumerate_spectrum(Manifold::torus(2), 50.0);
    auto f = random_coeffs(table, 1);
    auto out = lowpass_apply(f, 1e6, default_window());
    for (std::size_t li = 0; li < f.lines.size(); ++li)
        for (std::size_t bi = 0; bi < f.lines[li].size(); ++bi)
            CHECK(std::abs(out.coeffs.lines[li][bi] - f.lines[li][bi]) < 1e-8);
}

TEST_CASE("single line is scaled by psi(lambda/R)") {
    auto table = enumerate_spectrum(Manifold::torus(2), 10.0);
    auto f = CoefficientSet::zeros(table);
    auto idx = *table->index_of_key(25); // lambda = 5
    f.lines[idx][0] = {1.0, 0.0};
    const auto& win = default_window();
    auto out = lowpass_apply(f, 5.0, win);
    CHECK(out.coeffs.lines[idx][0].real() == doctest::Approx(win.eval(1.0)).epsilon(1e-14));
    CHECK(out.num_r == doctest::Approx(std::abs(win.eval(1.0))).epsilon(1e-13));
    CHECK(out.d_r == doctest::Approx(std::abs(win.eval(1.0))).epsilon(1e-13));
    CHECK_THROWS_AS(lowpass_apply(f, 0.5, win), ArgumentError);
}

TEST_CASE("Parseval identity for the multiplied set") {
    auto table = enumerate_spectrum(Manifold::torus(2), 12.0);
    auto f = random_coeffs(table, 2);
    const auto& win = default_window();
    auto out = lowpass_apply(f, 4.0, win);
    NeumaierSum sq;
    for (std::size_t li = 0; li < f.lines.size(); ++li) {
        double psi = win.eval(table->lines[li].lambda / 4.0);
        sq.add(psi * psi * f.line_norm_sq(li));
    }
    CHECK(out.d_r * out.d_r == doctest::Approx(sq.value()).epsilon(1e-12));
    CHECK(out.coeffs.l2_norm() == doctest::Approx(out.d_r).epsilon(1e-12));
}

TEST_CASE("multiplier diagonality: apply commutes with grid projection") {
    auto table = enumerate_spectrum(Manifold::torus(2), 8.0);
    auto f = random_coeffs(table, 3);
    const auto& win = default_window();
    auto low = lowpass_apply(f, 3.0, win);
    auto grid = make_eval_grid(Manifold::torus(2), 8.0);
    auto vals = synthesize_on_grid(low.coeffs, grid);
    auto back = analyze_on_grid(vals, grid, table);
    for (std::size_t li = 0; li < f.lines.size(); ++li)
        for (std::size_t bi = 0; bi < f.lines[li].size(); ++bi)
            CHECK(std::abs(back.lines[li][bi] - low.coeffs.lines[li][bi]) < 1e-9);
}

TEST_CASE("contractivity against the window sup") {
    auto table = enumerate_spectrum(Manifold::sphere2(), 12.0);
    auto f = random_coeffs(table, 4);
    for (double r : {1.0, 2.0, 7.0, 30.0}) {
        auto out = lowpass_apply(f, r, default_window());
        CHECK(out.d_r <= f.l2_norm() * (1.0 + 1e-12));
    }
}

TEST_CASE("pairing symmetry of the real even multiplier") {
    auto table = enumerate_spectrum(Manifold::torus(2), 9.0);
    auto u = random_coeffs(table, 5);
    auto chi = random_coeffs(table, 6);
    const auto& win = default_window();
    auto pu = lowpass_apply(u, 3.0, win);
    auto pchi = lowpass_apply(chi, 3.0, win);
    auto lhs = pu.coeffs.inner(chi);
    auto rhs = u.inner(pchi.coeffs);
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("grid evaluation: atom kernel peaks at the nearest grid point") {
    auto table = enumerate_spectrum(Manifold::torus(2), 12.0);
    MeasureSpec at;
    at.manifold = Manifold::torus(2);
    at.kind = MeasureKind::AtomSet;
    Point x0{1.0, 2.5, 0.0};
    at.atoms = {{x0, 1.0}};
    auto u = coefficients(make_measure(at), table);
    auto low = lowpass_apply(u, 10.0, default_window());
    auto grid = make_eval_grid(Manifold::torus(2), 12.0);
    auto ev = lowpass_eval_grid(low.coeffs, grid, nullptr, 0.0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < ev.values.size(); ++i)
        if (std::abs(ev.values[i]) > std::abs(ev.values[best]))
            best = i;
    auto p = grid.point(best);
    double half_cell = kPi / static_cast<double>(grid.n_per_axis);
    CHECK(std::abs(p[0] - x0[0]) <= half_cell + 1e-12);
    CHECK(std::abs(p[1] - x0[1]) <= half_cell + 1e-12);
}

TEST_CASE("constant-only measures leak exactly the outside volume fraction") {
    auto table = enumerate_spectrum(Manifold::torus(2), 16.0);
    auto f = CoefficientSet::zeros(table);
    f.lines[0][0] = {1.0, 0.0};
    auto u = subtorus_measure();
    auto cloud = build_support_cloud(u, 4096);
    auto grid = make_eval_grid(Manifold::torus(2), 16.0);
    double radius = 0.25;
    auto ev = lowpass_eval_grid(f, grid, &cloud, radius);
    double expect = 1.0 - kFourPi * radius / u.manifold().volume();
    // the mask boundary is resolved at grid precision
    CHECK(std::abs(ev.support_leakage - expect) < 0.02);
}

TEST_CASE("sub-torus low-pass mass concentrates in the 1/R thickening") {
    // Bound pinned from a reference run at doubled grid order
    // (leakage 5.4e-3 standard, 6.3e-3 doubled, R = 16, band 64).
    auto table = enumerate_spectrum(Manifold::torus(2), 64.0);
    auto u = subtorus_measure();
    auto coeffs = coefficients(u, table);
    auto low = lowpass_apply(coeffs, 16.0, default_window());
    auto grid = make_eval_grid(Manifold::torus(2), 64.0);
    auto cloud = build_support_cloud(u, 4096);
    auto ev = lowpass_eval_grid(low.coeffs, grid, &cloud, 1.0 / 16.0);
    CHECK(ev.support_leakage <= 0.05);
    CHECK(std::abs(ev.l2_grid - low.d_r) < 1e-8 * low.d_r);
}

TEST_CASE("grid too coarse for the band is refused") {
    auto table = enumerate_spectrum(Manifold::torus(2), 32.0);
    auto f = random_coeffs(table, 8);
    EvalGrid grid;
    grid.manifold = Manifold::torus(2);
    grid.n_per_axis = 80; // spacing 2pi/80 > 1/32
    CHECK_THROWS_AS(lowpass_eval_grid(f, grid, nullptr, 0.1), ResolutionError);
}

TEST_CASE("stability certificate on the segment measure") {
    auto table = enumerate_spectrum(Manifold::torus(2), 64.0);
    auto u_measure = segment_measure();
    auto u = coefficients(u_measure, table);
    const auto& win = default_window();
    auto grid = make_eval_grid(Manifold::torus(2), 64.0);
    std::vector<TestFunction> tests;
    tests.push_back(make_constant_test(table));
    tests.push_back(make_point_kernel_test(table, win, 8.0, Point{kPi / 4.0, 0.0, 0.0}, grid,
                                           "kernel_on_support"));
    auto volume = volume_of_measure(u_measure, nullptr);
    std::vector<double> r_grid{8.0, 16.0, 32.0};
    auto cert = stability_certificate(u, 1.0, 3.0, r_grid, tests, win, volume);

    CHECK(cert.exponent_l2_pred == doctest::Approx(1.0 / 3.0));
    CHECK(cert.exponent_pairing_pred == doctest::Approx(0.5 - 2.0 / 3.0));
    CHECK(cert.ratio_band <= 2.0);
    CHECK(cert.bound_slope <= cert.exponent_pairing_pred + 0.15);
    for (double s : cert.holder_slack)
        CHECK(s >= -1e-9);
    for (const auto& per_test : cert.pairing_slack)
        for (double s : per_test)
            CHECK(s >= -1e-9);

    CHECK_THROWS_AS(stability_certificate(u, 1.0, 2.0, r_grid, tests, win, volume),
                    ArgumentError);
    CHECK_THROWS_AS(stability_certificate(u, 1.0, 3.0, {40.0}, tests, win, volume),
                    ArgumentError);
}

TEST_CASE("zero-mean measures pair to nothing against constants") {
    auto table = enumerate_spectrum(Manifold::torus(2), 16.0);
    MeasureSpec at;
    at.manifold = Manifold::torus(2);
    at.kind = MeasureKind::AtomSet;
    at.atoms = {{Point{1.0, 2.0, 0.0}, 1.0}, {Point{4.0, 5.0, 0.0}, -1.0}};
    auto zero_mean = make_measure(at);
    CHECK(zero_mean.total_mass() == 0.0);
    auto u = coefficients(zero_mean, table);
    auto chi = make_constant_test(table);
    const auto& win = default_window();
    for (double r : {2.0, 4.0, 8.0}) {
        auto low = lowpass_apply(u, r, win);
        auto pairing = low.coeffs.inner(chi.coeffs);
        CHECK(std::abs(pairing) < 1e-13); // only the lambda = 0 term could survive
    }
}

TEST_CASE("endpoint diagnostics: single line occupies one dyadic window per R") {
    auto table = enumerate_spectrum(Manifold::torus(2), 40.0);
    auto f = CoefficientSet::zeros(table);
    f.lines[*table->index_of_key(64)][0] = {1.0, 0.0}; // lambda = 8
    auto diag = endpoint_dyadic(f, 1.0, 0.0, {2.0, 4.0}, default_window());
    for (std::size_t ri = 0; ri < diag.r_grid.size(); ++ri) {
        int nonzero = 0;
        for (std::size_t ji = 0; ji < diag.js.size(); ++ji)
            if (diag.b[ji][ri] > 0.0)
                ++nonzero;
        CHECK(nonzero == 1);
    }
}

TEST_CASE("endpoint diagnostics on the sub-torus") {
    auto table = enumerate_spectrum(Manifold::torus(2), 256.5);
    auto u_measure = subtorus_measure();
    auto u = coefficients(u_measure, table);
    std::vector<double> r_grid{8, 16, 32, 64, 128};
    auto diag = endpoint_dyadic(u, 1.0, u_measure.total_mass(), r_grid, default_window());
    CHECK(diag.p0 == doctest::Approx(4.0));
    CHECK(diag.a_tail_after_j6 <= 1e-8);
    // uniform bound pinned from the reference run (observed max 4.0)
    CHECK(diag.b_max <= 4.5);
    for (std::size_t ji = 0; ji < diag.js.size(); ++ji)
        for (std::size_t ri = 0; ri < r_grid.size(); ++ri)
            CHECK(diag.b[ji][ri] <= diag.b_holder_bound[ji][ri] + 1e-9);
    // a_j decays rapidly on the positive side
    for (std::size_t ji = 0; ji + 1 < diag.js.size(); ++ji)
        if (diag.js[ji] >= 2)
            CHECK(diag.a_j[ji + 1] < diag.a_j[ji]);
}

TEST_CASE("loglog fit recovers exact power laws") {
    std::vector<double> x{2, 4, 8, 16}, y;
    for (double v : x)
        y.push_back(3.0 * std::pow(v, -1.5));
    auto fit = loglog_fit(x, y);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);
}
