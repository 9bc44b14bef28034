#include "synthlab/runner.hpp"

#include "synthlab/errors.hpp"
#include "synthlab/measures.hpp"
#include "synthlab/ratio.hpp"
#include "synthlab/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace synthlab {

namespace {

std::string fd(double v) { return format_double(v); }

// Line-key column name: the integer |j|^2 on tori, the degree l on the sphere.
const char* key_column(const Manifold& m) { return m.is_sphere() ? "l" : "n"; }

// Relative slack tolerance for proof-step inequalities: a step passes when
// slack >= -tol * scale, so exact-equality cases survive rounding.
constexpr double kSlackTol = 1e-9;

bool slack_ok(double slack, double scale) { return slack >= -kSlackTol * std::max(1.0, scale); }

CoefficientSet band_limited_to(const CoefficientSet& f, double lambda_cap) {
    CoefficientSet g = f;
    for (std::size_t li = 0; li < g.lines.size(); ++li)
        if (g.table->lines[li].lambda > lambda_cap)
            std::fill(g.lines[li].begin(), g.lines[li].end(), std::complex<double>{0.0, 0.0});
    return g;
}

// Distance clouds track the band: at least 64 points per unit of lambda.
std::size_t cloud_points(const ExperimentConfig& cfg) {
    return std::max(cfg.support_points,
                    static_cast<std::size_t>(64.0 * std::ceil(cfg.lambda_max)));
}

NeighborhoodVolume resolve_volume(const ExperimentConfig& cfg, const ThinMeasure& measure) {
    if (measure.has_closed_form() && measure.kind() != MeasureKind::ProductCantor)
        return volume_of_measure(measure, nullptr);
    auto est = minkowski_volume(measure, cfg.delta_grid(), std::max<long long>(cfg.n_samples, 10000),
                                cfg.seed, cfg.threads, cloud_points(cfg));
    return volume_from_estimate(est);
}

void run_spectrum(const ExperimentConfig& cfg, Report& rep) {
    auto table = enumerate_spectrum(cfg.manifold, cfg.lambda_max);
    rep.set_csv_columns({"index", key_column(cfg.manifold), "lambda", "multiplicity",
                         "cumulative_count"});
    long long cum = 0;
    bool increasing = true;
    for (std::size_t i = 0; i < table->lines.size(); ++i) {
        const auto& line = table->lines[i];
        cum += static_cast<long long>(line.multiplicity());
        if (i > 0 && line.lambda <= table->lines[i - 1].lambda)
            increasing = false;
        rep.add_csv_row({std::to_string(i), std::to_string(line.key), fd(line.lambda),
                         std::to_string(line.multiplicity()), std::to_string(cum)});
    }
    auto wc = weyl_check(*table);
    rep.add_metric("n_lines", static_cast<double>(table->lines.size()));
    rep.add_metric("weyl_count", static_cast<double>(wc.count));
    rep.add_metric("weyl_predicted", wc.predicted);
    rep.add_metric("weyl_relative_deviation", wc.relative_deviation);
    rep.add_assertion("lines_strictly_increasing", increasing ? 1.0 : 0.0, 1.0, 0.0, increasing);
    if (cfg.lambda_max >= 20.0)
        rep.add_assertion("weyl_leading_term", std::abs(wc.relative_deviation), 0.1, 0.1,
                          std::abs(wc.relative_deviation) <= 0.1);
}

void run_profile(const ExperimentConfig& cfg, Report& rep) {
    auto table = enumerate_spectrum(cfg.manifold, cfg.lambda_max);
    auto measure = make_measure(cfg.measure);
    bool closed = measure.has_closed_form();
    CoefficientSet cc, cq;
    if (closed)
        cc = coefficients(measure, table);
    cq = coefficients_quadrature(measure, table, cfg.quad_nodes);

    rep.set_csv_columns(
        {key_column(cfg.manifold), "lambda", "norm2_closed_form", "norm2_quadrature", "abs_diff"});
    double max_diff = 0.0;
    for (std::size_t i = 0; i < table->lines.size(); ++i) {
        double nq = cq.line_norm_sq(i);
        std::string c_closed, c_diff;
        if (closed) {
            double ncf = cc.line_norm_sq(i);
            c_closed = fd(ncf);
            double diff = std::abs(ncf - nq);
            c_diff = fd(diff);
            max_diff = std::max(max_diff, diff);
        }
        rep.add_csv_row({std::to_string(table->lines[i].key), fd(table->lines[i].lambda), c_closed,
                         fd(nq), c_diff});
    }
    const CoefficientSet& best = closed ? cc : cq;
    double mass_pred = measure.total_mass() / std::sqrt(cfg.manifold.volume());
    double zero_coeff = best.lines.empty() ? 0.0 : best.lines[0][0].real();
    rep.add_metric("total_mass", measure.total_mass());
    rep.add_metric("lambda0_coefficient", zero_coeff);
    rep.add_assertion("lambda0_matches_mass", std::abs(zero_coeff - mass_pred), 1e-10, 1e-10,
                      std::abs(zero_coeff - mass_pred) <= 1e-10);
    if (closed)
        rep.add_assertion("closed_vs_quadrature_norm2", max_diff, 1e-10, 1e-10, max_diff <= 1e-10);
}

void run_fr(const ExperimentConfig& cfg, Report& rep) {
    auto table = enumerate_spectrum(cfg.manifold, cfg.lambda_max);
    auto measure = make_measure(cfg.measure);
    auto coeffs = coefficients(measure, table);
    auto global = fourier_ratio(coeffs);
    rep.set_csv_columns({"r", "num_r", "d_r", "fr_r"});
    const auto& win = default_window();
    for (double r : cfg.r_grid) {
        auto loc = local_fr(coeffs, r, win);
        rep.add_csv_row({fd(r), fd(loc.num_r), fd(loc.d_r), fd(loc.fr_r)});
    }
    rep.add_metric("l1_hat", global.l1_hat);
    rep.add_metric("l2", global.l2);
    rep.add_metric("fr", global.fr);
    rep.add_assertion("fr_at_least_one", global.fr, 1.0, 1e-12, global.fr >= 1.0 - 1e-12);
}

void run_approx(const ExperimentConfig& cfg, Report& rep) {
    auto table = enumerate_spectrum(cfg.manifold, cfg.lambda_max);
    auto measure = make_measure(cfg.measure);
    auto f = coefficients(measure, table);
    auto res = sparse_approx(f, cfg.k_terms, cfg.trials, cfg.seed, cfg.threads);
    rep.set_csv_columns({"trial", "err2"});
    for (std::size_t t = 0; t < res.err2.size(); ++t)
        rep.add_csv_row({std::to_string(t), fd(res.err2[t])});
    rep.add_metric("analytic_mean_err2", res.analytic_err2);
    rep.add_metric("direct_sum_err2", res.direct_sum_err2);
    rep.add_metric("mc_mean_err2", res.mean_err2);
    rep.add_metric("mc_stderr_err2", res.stderr_err2);
    rep.add_metric("best_err2", res.best_err2);
    double scale = std::max(1.0, std::abs(res.analytic_err2));
    double id_diff = std::abs(res.analytic_err2 - res.direct_sum_err2);
    rep.add_assertion("variance_identity_direct_sum", id_diff, 1e-12 * scale, 1e-12,
                      id_diff <= 1e-12 * scale);
    double mc_gap = std::abs(res.mean_err2 - res.analytic_err2);
    double mc_bound = 4.0 * res.stderr_err2;
    rep.add_assertion("mc_mean_within_4_stderr", mc_gap, mc_bound, 4.0, mc_gap <= mc_bound);
}

void run_stability(const ExperimentConfig& cfg, Report& rep) {
    auto table = enumerate_spectrum(cfg.manifold, cfg.lambda_max);
    auto measure = make_measure(cfg.measure);
    auto u = coefficients(measure, table);
    const auto& win = default_window();
    auto grid = make_eval_grid(cfg.manifold, cfg.lambda_max);
    auto volume = resolve_volume(cfg, measure);

    std::vector<TestFunction> tests;
    tests.push_back(make_constant_test(table));
    Point on = measure.is_curve() ? measure.curve_point(0.25 * measure.param_end())
                                  : measure.support_points(64).front();
    tests.push_back(make_point_kernel_test(table, win, std::max(4.0, cfg.r_grid.front()), on, grid,
                                           "kernel_on_support"));
    Point off = cfg.manifold.is_sphere() ? Point{0.2, 1.1, 0.0} : Point{2.0, 4.0, 2.0};
    tests.push_back(make_point_kernel_test(table, win, std::max(4.0, cfg.r_grid.front()), off, grid,
                                           "kernel_off_support"));

    auto cert = stability_certificate(u, measure.nominal_dim(), cfg.p, cfg.r_grid, tests, win,
                                      volume);

    std::vector<std::string> cols = {"r",      "pr_l2", "window_factor",
                                     "volume", "ratio", "bound"};
    for (const auto& name : cert.test_names)
        cols.push_back("pairing_abs_" + name);
    rep.set_csv_columns(cols);
    for (std::size_t ri = 0; ri < cfg.r_grid.size(); ++ri) {
        std::vector<std::string> row = {fd(cfg.r_grid[ri]),      fd(cert.pr_l2[ri]),
                                        fd(cert.window_factor[ri]), fd(cert.volume[ri]),
                                        fd(cert.ratio_l2[ri]),   fd(cert.bound[ri])};
        for (std::size_t ti = 0; ti < cert.pairings.size(); ++ti)
            row.push_back(fd(std::abs(cert.pairings[ti][ri])));
        rep.add_csv_row(row);
    }

    rep.add_metric("lp_hat_truncated", cert.lp_trunc);
    rep.add_metric("ratio_band", cert.ratio_band);
    rep.add_slope("pairing_bound_slope", cert.bound_slope, cert.bound_slope_residual,
                  cert.exponent_pairing_pred);
    for (std::size_t ti = 0; ti < cert.pairing_slopes.size(); ++ti)
        rep.add_slope("pairing_slope_" + cert.test_names[ti], cert.pairing_slopes[ti],
                      cert.pairing_slope_residuals[ti], cert.exponent_pairing_pred);

    double min_holder = *std::min_element(cert.holder_slack.begin(), cert.holder_slack.end());
    rep.add_assertion("holder_step_nonnegative_slack", min_holder, 0.0, kSlackTol,
                      slack_ok(min_holder, cert.lp_trunc));
    double min_pair = 0.0;
    bool first = true;
    for (const auto& per_test : cert.pairing_slack)
        for (double s : per_test) {
            min_pair = first ? s : std::min(min_pair, s);
            first = false;
        }
    rep.add_assertion("pairing_bound_nonnegative_slack", min_pair, 0.0, kSlackTol,
                      slack_ok(min_pair, cert.lp_trunc));
    double slope_limit = cert.exponent_pairing_pred + 0.15;
    rep.add_assertion("bound_slope_within_target", cert.bound_slope, slope_limit, 0.15,
                      cert.bound_slope <= slope_limit);
}

void run_endpoint(const ExperimentConfig& cfg, Report& rep) {
    auto table = enumerate_spectrum(cfg.manifold, cfg.lambda_max);
    auto measure = make_measure(cfg.measure);
    if (measure.nominal_dim() <= 0.0)
        throw ArgumentError("endpoint: the dyadic analysis needs a preset with k >= 1");
    auto u = coefficients(measure, table);
    const auto& win = default_window();
    auto diag = endpoint_dyadic(u, measure.nominal_dim(), measure.total_mass(), cfg.r_grid, win);

    rep.set_csv_columns({"kind", "j", "r", "value"});
    for (std::size_t ji = 0; ji < diag.js.size(); ++ji)
        rep.add_csv_row({"a", std::to_string(diag.js[ji]), "", fd(diag.a_j[ji])});
    for (std::size_t ji = 0; ji < diag.js.size(); ++ji)
        for (std::size_t ri = 0; ri < diag.r_grid.size(); ++ri)
            rep.add_csv_row({"b", std::to_string(diag.js[ji]), fd(diag.r_grid[ri]),
                             fd(diag.b[ji][ri])});
    for (std::size_t ri = 0; ri < diag.r_grid.size(); ++ri)
        rep.add_csv_row({"scaled_pr", "", fd(diag.r_grid[ri]), fd(diag.scaled_pr[ri])});
    for (std::size_t ri = 0; ri < diag.r_grid.size(); ++ri)
        rep.add_csv_row({"zero_term", "", fd(diag.r_grid[ri]), fd(diag.zero_term[ri])});

    rep.add_metric("p0", diag.p0);
    rep.add_metric("b_max", diag.b_max);
    rep.add_metric("a_tail_after_j6", diag.a_tail_after_j6);
    rep.add_assertion("a_partial_sums_cauchy_past_j6", diag.a_tail_after_j6, 1e-8, 1e-8,
                      diag.a_tail_after_j6 <= 1e-8);
    double min_slack = 0.0;
    bool first = true;
    for (std::size_t ji = 0; ji < diag.js.size(); ++ji)
        for (std::size_t ri = 0; ri < diag.r_grid.size(); ++ri) {
            double s = diag.b_holder_bound[ji][ri] - diag.b[ji][ri];
            min_slack = first ? s : std::min(min_slack, s);
            first = false;
        }
    rep.add_assertion("b_holder_nonnegative_slack", min_slack, 0.0, kSlackTol,
                      slack_ok(min_slack, diag.b_max));
}

void run_uncertainty(const ExperimentConfig& cfg, Report& rep) {
    auto table = enumerate_spectrum(cfg.manifold, cfg.lambda_max);
    auto measure = make_measure(cfg.measure);
    auto u = coefficients(measure, table);
    const auto& win = default_window();
    auto grid = make_eval_grid(cfg.manifold, cfg.lambda_max);
    auto growth = growth_table(table);
    auto volume = resolve_volume(cfg, measure);

    rep.set_csv_columns({"r", "num_r", "d_r", "fr_r", "sup_grid", "a_r", "c3", "c0", "volume",
                         "m_r", "eta", "min_chain_slack", "fr_upper_slack", "product_slack"});
    double min_all = std::numeric_limits<double>::infinity();
    for (double r : cfg.r_grid) {
        double cap = win.big_c_psi() * r;
        auto f = band_limited_to(u, cap);
        if (f.l2_norm() == 0.0)
            throw ArgumentError("uncertainty: no spectral mass below C_psi R for R = " +
                                std::to_string(r));
        double vol = volume(win.supp_radius() / r);
        auto cert = uncertainty_product(f, cfg.eta_target, r, win, vol, grid, growth);
        min_all = std::min(min_all, cert.lower.min_slack());
        for (const auto& s : cert.steps)
            min_all = std::min(min_all, s.slack);
        rep.add_csv_row({fd(r), fd(cert.lower.num_r), fd(cert.lower.d_r), fd(cert.lower.fr_r),
                         fd(cert.lower.sup_grid), fd(cert.lower.a_r), fd(cert.lower.c3),
                         fd(cert.lower.c0), fd(vol), fd(cert.m_r), fd(cert.eta),
                         fd(cert.lower.min_slack()), fd(cert.steps[0].slack),
                         fd(cert.steps[1].slack)});
    }
    rep.add_metric("min_slack_overall", min_all);
    rep.add_assertion("certificate_chain_nonnegative_slack", min_all, 0.0, kSlackTol,
                      slack_ok(min_all, 1.0));
}

void run_kuznecov(const ExperimentConfig& cfg, Report& rep) {
    auto table = enumerate_spectrum(cfg.manifold, cfg.lambda_max);
    auto measure = make_measure(cfg.measure);
    if (measure.kind() != MeasureKind::Equator && measure.kind() != MeasureKind::Latitude &&
        measure.kind() != MeasureKind::AtomSet)
        throw ArgumentError("kuznecov: needs a curve or point-set preset on the sphere");
    auto profile = spectral_profile(measure, table);
    auto fit = kuznecov_fit(profile);

    rep.set_csv_columns({key_column(cfg.manifold), "lambda", "norm2", "cumulative"});
    for (std::size_t i = 0; i < fit.lambdas.size(); ++i)
        rep.add_csv_row({std::to_string(table->lines[i].key), fd(fit.lambdas[i]),
                         fd(profile.norms[i] * profile.norms[i]), fd(fit.cumulative[i])});

    int d = cfg.manifold.dim();
    double target = d - measure.nominal_dim();
    rep.add_slope("kuznecov_exponent", fit.exponent, fit.residual, target);
    rep.add_metric("sup_line_norm", fit.sup_norm);
    rep.add_metric("sup_top_half", fit.sup_top_half);
    rep.add_metric("bounded_verdict", fit.bounded ? 1.0 : 0.0);
    rep.add_assertion("kuznecov_exponent_near_target", std::abs(fit.exponent - target), 0.25, 0.25,
                      std::abs(fit.exponent - target) <= 0.25);
    bool hypersurface = measure.nominal_dim() == d - 1;
    rep.add_assertion("boundedness_matches_hypersurface", fit.bounded == hypersurface ? 1.0 : 0.0,
                      1.0, 0.0, fit.bounded == hypersurface);
}

void run_volume(const ExperimentConfig& cfg, Report& rep) {
    auto measure = make_measure(cfg.measure);
    auto est = minkowski_volume(measure, cfg.delta_grid(), cfg.n_samples, cfg.seed, cfg.threads,
                                cloud_points(cfg));
    rep.set_csv_columns({"delta", "volume", "stderr", "count", "closed_form"});
    for (std::size_t i = 0; i < est.deltas.size(); ++i) {
        auto cf = closed_form_neighborhood_volume(measure, est.deltas[i]);
        rep.add_csv_row({fd(est.deltas[i]), fd(est.volumes[i]), fd(est.stderrs[i]),
                         std::to_string(est.counts[i]), cf ? fd(*cf) : ""});
    }
    int d = cfg.manifold.dim();
    double target = d - measure.nominal_dim();
    rep.add_metric("fitted_exponent", est.fitted_exponent);
    rep.add_metric("fitted_c", std::exp(est.fitted_log_c));
    rep.add_metric("exponent_halfwidth", est.exponent_halfwidth);
    rep.add_metric("slope_band_min", est.slope_min);
    rep.add_metric("slope_band_max", est.slope_max);
    rep.add_metric("support_spacing", est.support_spacing);
    if (measure.kind() != MeasureKind::ProductCantor) {
        double gap = std::abs(est.fitted_exponent - target);
        double bound = 3.0 * est.exponent_halfwidth;
        rep.add_assertion("exponent_within_3_halfwidths", gap, bound, 3.0, gap <= bound);
    }
}

} // namespace

const Window& default_window() {
    static const Window win = Window::bump();
    return win;
}

Report run_experiment(const ExperimentConfig& cfg) {
    Report rep(command_name(cfg.command), cfg.seed, cfg.canonical_text());
    switch (cfg.command) {
    case Command::Spectrum: run_spectrum(cfg, rep); break;
    case Command::Profile: run_profile(cfg, rep); break;
    case Command::Fr: run_fr(cfg, rep); break;
    case Command::Approx: run_approx(cfg, rep); break;
    case Command::Stability: run_stability(cfg, rep); break;
    case Command::Endpoint: run_endpoint(cfg, rep); break;
    case Command::Uncertainty: run_uncertainty(cfg, rep); break;
    case Command::Kuznecov: run_kuznecov(cfg, rep); break;
    case Command::Volume: run_volume(cfg, rep); break;
    }
    return rep;
}

int run_and_write(const ExperimentConfig& cfg) {
    Report rep = run_experiment(cfg);
    rep.write(cfg.out_dir, cfg.basename);
    return rep.all_assertions_pass() ? 0 : 2;
}

} // namespace synthlab
