#include "synthlab/synthesis.hpp"

#include "synthlab/accum.hpp"
#include "synthlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace synthlab {

NeighborhoodVolume volume_from_estimate(const VolumeEstimate& est) {
    double q = est.fitted_exponent;
    double logc = est.fitted_log_c;
    return [q, logc](double delta) { return std::exp(logc + q * std::log(delta)); };
}

NeighborhoodVolume volume_of_measure(const ThinMeasure& measure, const VolumeEstimate* fallback) {
    double cap = measure.manifold().volume();
    if (measure.has_closed_form() && measure.kind() != MeasureKind::ProductCantor) {
        ThinMeasure copy = measure;
        return [copy, cap](double delta) {
            auto v = closed_form_neighborhood_volume(copy, delta);
            if (v)
                return std::min(*v, cap);
            throw ResolutionError("neighborhood volume: no closed form at delta = " +
                                  std::to_string(delta));
        };
    }
    if (!fallback)
        throw ArgumentError("volume_of_measure: preset needs a Minkowski estimate");
    auto fitted = volume_from_estimate(*fallback);
    return [fitted, cap](double delta) { return std::min(fitted(delta), cap); };
}

LowpassResult lowpass_apply(const CoefficientSet& coeffs, double R, const Window& win) {
    if (R < 1.0)
        throw ArgumentError("lowpass_apply: R must be >= 1");
    LowpassResult out;
    out.coeffs = coeffs;
    NeumaierSum num, dsq;
    for (std::size_t li = 0; li < coeffs.lines.size(); ++li) {
        double psi = win.eval(coeffs.table->lines[li].lambda / R);
        for (auto& c : out.coeffs.lines[li])
            c *= psi;
        double norm = coeffs.line_norm(li);
        num.add(std::abs(psi) * norm);
        dsq.add(psi * psi * norm * norm);
    }
    out.num_r = num.value();
    out.d_r = std::sqrt(dsq.value());
    return out;
}

GridEvalResult lowpass_eval_grid(const CoefficientSet& lowpassed, const EvalGrid& grid,
                                 const SupportCloud* support, double radius) {
    double band = lowpassed.table->lambda_max;
    if (grid.max_spacing() >= 1.0 / std::max(band, 1.0))
        throw ResolutionError("lowpass_eval_grid: grid spacing " +
                              std::to_string(grid.max_spacing()) +
                              " is coarser than 1/lambda_max = " +
                              std::to_string(1.0 / std::max(band, 1.0)));
    GridEvalResult out;
    out.values = synthesize_on_grid(lowpassed, grid);
    out.sup = grid_sup_norm(out.values);
    out.l2_grid = grid_l2_norm(out.values, grid);
    if (support) {
        NeumaierSum outside;
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            if (support->distance(grid.point(i)) > radius)
                outside.add(grid.weight(i) * std::norm(out.values[i]));
        }
        out.outside_mass = outside.value();
        double total = out.l2_grid * out.l2_grid;
        out.support_leakage = total > 0.0 ? out.outside_mass / total : 0.0;
    }
    return out;
}

TestFunction make_constant_test(SpectrumTablePtr table) {
    TestFunction t;
    t.name = "constant";
    t.coeffs = CoefficientSet::zeros(table);
    // <1, e_0> = vol^{1/2} for the normalized constant eigenfunction.
    t.coeffs.lines[0][0] = std::sqrt(table->manifold.volume());
    t.sup_norm = 1.0;
    return t;
}

TestFunction make_point_kernel_test(SpectrumTablePtr table, const Window& win, double r0,
                                    const Point& x0, const EvalGrid& grid, std::string name) {
    TestFunction t;
    t.name = std::move(name);
    t.coeffs = CoefficientSet::zeros(table);
    const auto& tab = *table;
    for (std::size_t li = 0; li < tab.lines.size(); ++li) {
        double psi = win.eval(tab.lines[li].lambda / r0);
        for (std::size_t bi = 0; bi < tab.lines[li].basis.size(); ++bi)
            t.coeffs.lines[li][bi] =
                psi * std::conj(eval_basis(tab.manifold, tab.lines[li].basis[bi], x0));
    }
    t.sup_norm = grid_sup_norm(synthesize_on_grid(t.coeffs, grid));
    return t;
}

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ArgumentError("loglog_fit: need at least two points");
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0)
            throw ArgumentError("loglog_fit: needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    double n = static_cast<double>(x.size());
    double xb = sx / n, yb = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (lx[i] - xb) * (lx[i] - xb);
        sxy += (lx[i] - xb) * (ly[i] - yb);
    }
    LogLogFit f;
    f.slope = sxy / sxx;
    f.intercept = yb - f.slope * xb;
    for (std::size_t i = 0; i < x.size(); ++i)
        f.residual = std::max(f.residual, std::abs(ly[i] - (f.intercept + f.slope * lx[i])));
    return f;
}

StabilityCertificate stability_certificate(const CoefficientSet& u, double k_dim, double p,
                                           const std::vector<double>& r_grid,
                                           const std::vector<TestFunction>& tests,
                                           const Window& win,
                                           const NeighborhoodVolume& volume) {
    if (p <= 2.0)
        throw ArgumentError("stability_certificate: p must exceed 2 (got " + std::to_string(p) +
                            ")");
    if (r_grid.empty())
        throw ArgumentError("stability_certificate: empty R grid");
    const auto& table = *u.table;
    double lambda_max = table.lambda_max;
    for (double r : r_grid)
        if (r < 1.0 || r > lambda_max / 2.0)
            throw ArgumentError("stability_certificate: R grid must lie in [1, lambda_max/2]");

    int d = table.manifold.dim();
    StabilityCertificate cert;
    cert.p = p;
    cert.k_dim = k_dim;
    cert.r_grid = r_grid;
    cert.exponent_l2_pred = 0.5 * d - d / p;
    cert.exponent_pairing_pred = 0.5 * k_dim - d / p;

    auto norms = u.line_norms();
    NeumaierSum lp_acc;
    for (double nv : norms)
        lp_acc.add(std::pow(nv, p));
    cert.lp_trunc = std::pow(lp_acc.value(), 1.0 / p);

    double q_exp = 2.0 * p / (p - 2.0); // Hoelder dual exponent on |psi|^2
    cert.test_names.reserve(tests.size());
    for (const auto& t : tests) {
        cert.test_names.push_back(t.name);
        cert.test_sups.push_back(t.sup_norm);
    }
    cert.pairings.assign(tests.size(), {});
    cert.pairing_slack.assign(tests.size(), {});

    for (double R : r_grid) {
        NeumaierSum dsq, wq;
        std::vector<double> psis(table.lines.size());
        for (std::size_t li = 0; li < table.lines.size(); ++li) {
            double psi = win.eval(table.lines[li].lambda / R);
            psis[li] = psi;
            dsq.add(psi * psi * norms[li] * norms[li]);
            wq.add(std::pow(std::abs(psi), q_exp));
        }
        double pr_l2 = std::sqrt(dsq.value());
        double wfac = std::pow(wq.value(), 1.0 / q_exp);
        double vol = volume(win.supp_radius() / R);
        cert.pr_l2.push_back(pr_l2);
        cert.window_factor.push_back(wfac);
        cert.volume.push_back(vol);
        cert.ratio_l2.push_back(pr_l2 /
                                (std::pow(R, cert.exponent_l2_pred) * cert.lp_trunc));
        double bound = wfac * cert.lp_trunc * std::sqrt(vol);
        cert.bound.push_back(bound);
        cert.holder_slack.push_back(wfac * cert.lp_trunc - pr_l2);

        for (std::size_t ti = 0; ti < tests.size(); ++ti) {
            NeumaierSum pre, pim;
            for (std::size_t li = 0; li < table.lines.size(); ++li) {
                // <E_lambda u, E_lambda chi> per line
                std::complex<double> s{0.0, 0.0};
                for (std::size_t bi = 0; bi < u.lines[li].size(); ++bi)
                    s += u.lines[li][bi] * std::conj(tests[ti].coeffs.lines[li][bi]);
                pre.add(psis[li] * s.real());
                pim.add(psis[li] * s.imag());
            }
            std::complex<double> pairing{pre.value(), pim.value()};
            cert.pairings[ti].push_back(pairing);
            cert.pairing_slack[ti].push_back(bound * tests[ti].sup_norm - std::abs(pairing));
        }
    }

    double rmin = *std::min_element(cert.ratio_l2.begin(), cert.ratio_l2.end());
    double rmax = *std::max_element(cert.ratio_l2.begin(), cert.ratio_l2.end());
    cert.ratio_band = rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();

    if (r_grid.size() >= 2) {
        auto fit = loglog_fit(r_grid, cert.bound);
        cert.bound_slope = fit.slope;
        cert.bound_slope_residual = fit.residual;
        for (std::size_t ti = 0; ti < tests.size(); ++ti) {
            std::vector<double> mags;
            bool positive = true;
            for (const auto& z : cert.pairings[ti]) {
                double m = std::abs(z);
                if (m <= 0.0)
                    positive = false;
                mags.push_back(m);
            }
            if (positive) {
                auto pf = loglog_fit(r_grid, mags);
                cert.pairing_slopes.push_back(pf.slope);
                cert.pairing_slope_residuals.push_back(pf.residual);
            } else {
                cert.pairing_slopes.push_back(0.0);
                cert.pairing_slope_residuals.push_back(0.0);
            }
        }
    }
    return cert;
}

EndpointDiagnostic endpoint_dyadic(const CoefficientSet& u, double k_dim, double total_mass,
                                   const std::vector<double>& r_grid, const Window& win) {
    if (r_grid.empty())
        throw ArgumentError("endpoint_dyadic: empty R grid");
    if (k_dim <= 0.0)
        throw ArgumentError("endpoint_dyadic: the dyadic analysis needs k > 0 (p0 = 2d/k)");
    const auto& table = *u.table;
    int d = table.manifold.dim();

    EndpointDiagnostic diag;
    diag.k_dim = k_dim;
    diag.p0 = 2.0 * d / k_dim;
    diag.r_grid = r_grid;

    double r_min = *std::min_element(r_grid.begin(), r_grid.end());
    double r_max = *std::max_element(r_grid.begin(), r_grid.end());
    double lambda_min_pos = 0.0;
    for (const auto& line : table.lines)
        if (line.lambda > 0.0) {
            lambda_min_pos = line.lambda;
            break;
        }
    int j_lo = lambda_min_pos > 0.0
                   ? static_cast<int>(std::floor(std::log2(lambda_min_pos / r_max))) - 1
                   : -8;
    int j_hi = std::max(8, static_cast<int>(std::ceil(std::log2(
                               std::max(table.lambda_max, 1.0) / r_min))));

    auto norms = u.line_norms();

    for (int j = j_lo; j <= j_hi; ++j)
        diag.js.push_back(j);

    // a_j: sup over a dense scan of tau in (2^j, 2^{j+1}].
    NeumaierSum a_part;
    for (int j : diag.js) {
        double lo = std::pow(2.0, j), hi = 2.0 * lo;
        double sup = 0.0;
        const int scan = 128;
        for (int i = 1; i <= scan; ++i) {
            double tau = lo + (hi - lo) * static_cast<double>(i) / scan;
            double psi = std::abs(win.eval(tau));
            sup = std::max(sup, std::pow(2.0, j * (d - k_dim)) * psi * psi);
        }
        diag.a_j.push_back(sup);
        a_part.add(sup);
        diag.a_partial.push_back(a_part.value());
        if (j >= 7)
            diag.a_tail_after_j6 += sup;
    }

    for (double R : r_grid) {
        NeumaierSum prsq;
        for (std::size_t li = 0; li < table.lines.size(); ++li) {
            double psi = win.eval(table.lines[li].lambda / R);
            prsq.add(psi * psi * norms[li] * norms[li]);
        }
        diag.scaled_pr.push_back(std::pow(R, k_dim - d) * prsq.value());
        diag.zero_term.push_back(std::pow(R, k_dim - d) * win.eval(0.0) * win.eval(0.0) *
                                 total_mass * total_mass);
    }

    diag.b.assign(diag.js.size(), std::vector<double>(r_grid.size(), 0.0));
    diag.b_holder_bound.assign(diag.js.size(), std::vector<double>(r_grid.size(), 0.0));
    for (std::size_t ji = 0; ji < diag.js.size(); ++ji) {
        int j = diag.js[ji];
        for (std::size_t ri = 0; ri < r_grid.size(); ++ri) {
            double R = r_grid[ri];
            double lo = std::pow(2.0, j) * R, hi = 2.0 * std::pow(2.0, j) * R;
            NeumaierSum bsum, psum;
            long long count = 0;
            for (std::size_t li = 0; li < table.lines.size(); ++li) {
                double lam = table.lines[li].lambda;
                if (lam > lo && lam <= hi) {
                    bsum.add(norms[li] * norms[li]);
                    psum.add(std::pow(norms[li], diag.p0));
                    ++count;
                }
            }
            double scale = std::pow(lo, k_dim - d);
            double b = scale * bsum.value();
            diag.b[ji][ri] = b;
            diag.b_max = std::max(diag.b_max, b);
            // Hoelder over the in-window lines with the actual line count.
            diag.b_holder_bound[ji][ri] =
                scale * std::pow(static_cast<double>(count), 1.0 - 2.0 / diag.p0) *
                std::pow(psum.value(), 2.0 / diag.p0);
        }
    }
    return diag;
}

} // namespace synthlab
