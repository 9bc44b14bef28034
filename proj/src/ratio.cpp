#include "synthlab/ratio.hpp"

#include "synthlab/accum.hpp"
#include "synthlab/errors.hpp"
#include "synthlab/parallel.hpp"
#include "synthlab/rng.hpp"
#include "synthlab/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace synthlab {

RatioReport fourier_ratio(const CoefficientSet& coeffs) {
    RatioReport rep;
    rep.l1_hat = coeffs.l1_hat();
    rep.l2 = coeffs.l2_norm();
    rep.truncation_lines = coeffs.lines.size();
    rep.lambda_max = coeffs.table->lambda_max;
    if (rep.l2 == 0.0)
        throw ArgumentError("fourier_ratio: zero input has no defined ratio");
    rep.fr = rep.l1_hat / rep.l2;
    return rep;
}

RatioReport local_fr(const CoefficientSet& coeffs, double R, const Window& win) {
    RatioReport rep;
    rep.truncation_lines = coeffs.lines.size();
    rep.lambda_max = coeffs.table->lambda_max;
    rep.r = R;
    NeumaierSum num, dsq, l1, l2sq;
    for (std::size_t li = 0; li < coeffs.lines.size(); ++li) {
        double norm = coeffs.line_norm(li);
        double psi = win.eval(coeffs.table->lines[li].lambda / R);
        num.add(std::abs(psi) * norm);
        dsq.add(psi * psi * norm * norm);
        l1.add(norm);
        l2sq.add(norm * norm);
    }
    rep.l1_hat = l1.value();
    rep.l2 = std::sqrt(l2sq.value());
    rep.fr = rep.l2 > 0.0 ? rep.l1_hat / rep.l2 : 0.0;
    rep.num_r = num.value();
    rep.d_r = std::sqrt(dsq.value());
    if (rep.d_r == 0.0)
        throw ArgumentError("local_fr: all windowed mass is zero");
    rep.fr_r = rep.num_r / rep.d_r;
    return rep;
}

SparseApproxResult sparse_approx(const CoefficientSet& f, int k, int trials, std::uint64_t seed,
                                 int threads) {
    if (k < 1)
        throw ArgumentError("sparse_approx: k must be >= 1");
    if (trials < 1)
        throw ArgumentError("sparse_approx: trials must be >= 1");
    auto norms = f.line_norms();
    double l1 = f.l1_hat();
    double l2sq = f.l2_norm_sq();
    if (l1 == 0.0)
        throw ArgumentError("sparse_approx: zero input");

    // Sampling alphabet: lines with nonzero norm, with cumulative probabilities.
    std::vector<std::size_t> alphabet;
    std::vector<double> cum;
    double acc = 0.0;
    for (std::size_t li = 0; li < norms.size(); ++li) {
        if (norms[li] > 0.0) {
            alphabet.push_back(li);
            acc += norms[li] / l1;
            cum.push_back(acc);
        }
    }
    cum.back() = 1.0;

    SparseApproxResult res;
    res.k = k;
    res.trials = trials;
    res.err2.assign(static_cast<std::size_t>(trials), 0.0);
    std::vector<long long> draws_total(norms.size(), 0);

    auto draw_line = [&](std::uint64_t counter) {
        double u = rng::u01(seed, 11, counter);
        std::size_t pos = static_cast<std::size_t>(
            std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
        if (pos >= alphabet.size())
            pos = alphabet.size() - 1;
        return alphabet[pos];
    };

    const std::size_t block = 256;
    std::size_t n_blocks = (static_cast<std::size_t>(trials) + block - 1) / block;
    std::vector<std::vector<long long>> block_draws(n_blocks);
    parallel_for_blocks(n_blocks, threads, [&](std::size_t bi) {
        block_draws[bi].assign(norms.size(), 0);
        std::vector<std::pair<std::size_t, int>> multi;
        std::size_t lo = bi * block;
        std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(trials), lo + block);
        for (std::size_t t = lo; t < hi; ++t) {
            multi.clear();
            for (int i = 0; i < k; ++i) {
                std::size_t li = draw_line(static_cast<std::uint64_t>(t) * k + i);
                ++block_draws[bi][li];
                auto it = std::find_if(multi.begin(), multi.end(),
                                       [li](const auto& pr) { return pr.first == li; });
                if (it == multi.end())
                    multi.emplace_back(li, 1);
                else
                    ++it->second;
            }
            // ||P - f||^2 = ||f||^2 + sum over drawn lines ((s-1)^2 - 1) ||E_lambda f||^2
            double err = l2sq;
            for (const auto& [li, m] : multi) {
                double s = static_cast<double>(m) * l1 / (k * norms[li]);
                err += ((s - 1.0) * (s - 1.0) - 1.0) * norms[li] * norms[li];
            }
            res.err2[t] = err;
        }
    });
    for (const auto& bd : block_draws)
        for (std::size_t li = 0; li < norms.size(); ++li)
            draws_total[li] += bd[li];
    res.draw_counts = std::move(draws_total);

    // Best trial; rebuilt from its counters.
    std::size_t best_t = 0;
    for (std::size_t t = 1; t < res.err2.size(); ++t)
        if (res.err2[t] < res.err2[best_t])
            best_t = t;
    res.best_err2 = res.err2[best_t];
    res.best = CoefficientSet::zeros(f.table);
    for (int i = 0; i < k; ++i) {
        std::size_t li = draw_line(best_t * static_cast<std::size_t>(k) + i);
        double s = l1 / (k * norms[li]);
        for (std::size_t bi = 0; bi < f.lines[li].size(); ++bi)
            res.best.lines[li][bi] += s * f.lines[li][bi];
    }

    NeumaierSum mean_acc;
    for (double e : res.err2)
        mean_acc.add(e);
    res.mean_err2 = mean_acc.value() / trials;
    NeumaierSum var_acc;
    for (double e : res.err2)
        var_acc.add((e - res.mean_err2) * (e - res.mean_err2));
    res.stderr_err2 =
        trials > 1 ? std::sqrt(var_acc.value() / (trials - 1.0) / trials) : 0.0;

    double fr = l1 / std::sqrt(l2sq);
    res.analytic_err2 = l2sq * (fr * fr - 1.0) / k;

    // Literal expectation: sum over the sampling law of ||Z_lambda - f||^2 / k,
    // expanding every line of Z_lambda - f.
    NeumaierSum direct;
    for (std::size_t li = 0; li < norms.size(); ++li) {
        if (norms[li] == 0.0)
            continue;
        double p_li = norms[li] / l1;
        double scale = l1 / norms[li];
        NeumaierSum sq;
        for (std::size_t mu = 0; mu < norms.size(); ++mu) {
            double factor = (mu == li) ? (scale - 1.0) : -1.0;
            sq.add(factor * factor * norms[mu] * norms[mu]);
        }
        direct.add(p_li * sq.value());
    }
    res.direct_sum_err2 = direct.value() / k;
    return res;
}

ConverseCheck converse_check(const CoefficientSet& f, const CoefficientSet& approx) {
    if (f.table->lines.size() != approx.lines.size())
        throw ArgumentError("converse_check: mismatched tables");
    double f2 = f.l2_norm();
    if (f2 == 0.0)
        throw ArgumentError("converse_check: zero f");
    CoefficientSet diff = f;
    diff.axpy({-1.0, 0.0}, approx);
    ConverseCheck out;
    out.eta = diff.l2_norm() / f2;
    if (out.eta >= 1.0)
        throw HypothesisError("converse_check: eta = " + std::to_string(out.eta) +
                              " >= 1 violates the approximation hypothesis");
    for (const auto& line : approx.lines)
        for (const auto& c : line)
            if (std::abs(c) > 0.0)
                ++out.k_labels;
    out.n_lambda = f.table->weyl_count();
    out.fr = fourier_ratio(f).fr;
    out.bound = (1.0 + out.eta) * std::sqrt(static_cast<double>(out.k_labels)) +
                out.eta * std::sqrt(static_cast<double>(out.n_lambda));
    out.slack = out.bound - out.fr;
    return out;
}

GrowthTable growth_table(const SpectrumTablePtr& table) {
    GrowthTable g;
    g.table = table;
    g.lambdas.reserve(table->lines.size());
    g.a_sq.reserve(table->lines.size());
    double env = 0.0;
    for (const auto& line : table->lines) {
        double asq = line_kernel_diag(table->manifold, line);
        g.lambdas.push_back(line.lambda);
        g.a_sq.push_back(asq);
        env = std::max(env, std::sqrt(asq));
        g.a_envelope.push_back(env);
    }
    return g;
}

double growth_a_r(const GrowthTable& g, double lambda_cap) {
    double a = 0.0;
    for (std::size_t i = 0; i < g.lambdas.size(); ++i)
        if (g.lambdas[i] <= lambda_cap)
            a = std::max(a, std::sqrt(g.a_sq[i]));
    return a;
}

bool Certificate::all_pass(double tol) const {
    for (const auto& s : steps)
        if (s.slack < -tol)
            return false;
    return true;
}

double Certificate::min_slack() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : steps)
        m = std::min(m, s.slack);
    return m;
}

Certificate fr_lower_certificate(const CoefficientSet& f, double R, const Window& win,
                                 double neighborhood_volume, const EvalGrid& grid,
                                 const GrowthTable& growth) {
    const auto& table = *f.table;
    int d = table.manifold.dim();
    double cap = win.big_c_psi() * R;
    double f_l2 = f.l2_norm();
    if (f_l2 == 0.0)
        throw ArgumentError("fr_lower_certificate: zero input");
    for (std::size_t li = 0; li < table.lines.size(); ++li)
        if (table.lines[li].lambda > cap && f.line_norm(li) > 1e-12 * f_l2)
            throw HypothesisError(
                "fr_lower_certificate: spectral mass above C_psi R = " + std::to_string(cap) +
                " violates the band-limitation hypothesis");

    Certificate cert;
    cert.r = R;
    cert.volume = neighborhood_volume;
    cert.a_r = growth_a_r(growth, cap);

    NeumaierSum num, dsq, wsq;
    for (std::size_t li = 0; li < table.lines.size(); ++li) {
        double psi = win.eval(table.lines[li].lambda / R);
        double norm = f.line_norm(li);
        num.add(std::abs(psi) * norm);
        dsq.add(psi * psi * norm * norm);
        wsq.add(psi * psi);
    }
    cert.num_r = num.value();
    cert.d_r = std::sqrt(dsq.value());
    if (cert.d_r == 0.0)
        throw ArgumentError("fr_lower_certificate: windowed mass vanished");
    cert.fr_r = cert.num_r / cert.d_r;
    cert.c3 = std::sqrt(wsq.value()) / std::pow(R, 0.5 * d);
    cert.c0 = win.c_psi() / cert.c3;

    auto lowpassed = lowpass_apply(f, R, win);
    cert.sup_grid = grid_sup_norm(synthesize_on_grid(lowpassed.coeffs, grid));

    auto push_upper = [&](std::string name, double lhs, double rhs) {
        cert.steps.push_back({std::move(name), lhs, rhs, rhs - lhs});
    };
    // 1. pointwise: sup |P_R f| <= A_R Num_R
    push_upper("sup_by_growth", cert.sup_grid, cert.a_r * cert.num_r);
    // 2. window Cauchy-Schwarz: Num_R <= C3 R^{d/2} ||f||_2
    push_upper("num_window_cs", cert.num_r, cert.c3 * std::pow(R, 0.5 * d) * f_l2);
    // 3. band-limited floor: Num_R >= c_psi ||f||_2
    cert.steps.push_back({"num_floor", cert.num_r, win.c_psi() * f_l2,
                          cert.num_r - win.c_psi() * f_l2});
    // 4. support volume: ||P_R f||_2 <= sqrt(|E^{C0/R}|) sup |P_R f|
    push_upper("l2_by_volume", cert.d_r, std::sqrt(neighborhood_volume) * cert.sup_grid);
    // 5. localized ratio lower bound with c0 = c_psi / C3
    double rhs = cert.c0 / (cert.a_r * std::pow(R, 0.5 * d) * std::sqrt(neighborhood_volume));
    cert.steps.push_back({"fr_lower", cert.fr_r, rhs, cert.fr_r - rhs});
    return cert;
}

bool UncertaintyCertificate::all_pass(double tol) const {
    if (!lower.all_pass(tol))
        return false;
    for (const auto& s : steps)
        if (s.slack < -tol)
            return false;
    return true;
}

UncertaintyCertificate uncertainty_product(const CoefficientSet& f, double eta_target, double R,
                                           const Window& win, double neighborhood_volume,
                                           const EvalGrid& grid, const GrowthTable& growth) {
    if (eta_target < 0.0 || eta_target >= 1.0)
        throw HypothesisError("uncertainty_product: eta target must lie in [0, 1)");
    UncertaintyCertificate out;
    out.eta_target = eta_target;
    out.lower = fr_lower_certificate(f, R, win, neighborhood_volume, grid, growth);

    const auto& table = *f.table;
    struct Mass {
        double w;
        double lambda;
        long long key;
    };
    std::vector<Mass> masses;
    for (std::size_t li = 0; li < table.lines.size(); ++li) {
        double w = std::abs(win.eval(table.lines[li].lambda / R)) * f.line_norm(li);
        if (w > 0.0)
            masses.push_back({w, table.lines[li].lambda, table.lines[li].key});
    }
    std::sort(masses.begin(), masses.end(), [](const Mass& a, const Mass& b) {
        if (a.w != b.w)
            return a.w > b.w;
        return a.lambda < b.lambda; // ties toward smaller lambda
    });

    double target = (1.0 - eta_target) * out.lower.num_r;
    NeumaierSum captured;
    for (const auto& m : masses) {
        if (captured.value() >= target)
            break;
        captured.add(m.w);
        out.sigma_keys.push_back(m.key);
    }
    out.m_r = static_cast<double>(out.sigma_keys.size());
    out.eta = 1.0 - captured.value() / out.lower.num_r;
    if (out.eta < 0.0)
        out.eta = 0.0;
    if (out.eta >= 1.0)
        throw HypothesisError("uncertainty_product: selection left eta >= 1");

    // (i) FR_R <= sqrt(M_R) / (1 - eta)
    double upper = std::sqrt(out.m_r) / (1.0 - out.eta);
    out.steps.push_back({"fr_upper", out.lower.fr_r, upper, upper - out.lower.fr_r});
    // (ii) M_R |E^{C0/R}| >= c0^2 (1 - eta)^2 / (A_R^2 R^d)
    int d = table.manifold.dim();
    double lhs = out.m_r * neighborhood_volume;
    double rhs = out.lower.c0 * out.lower.c0 * (1.0 - out.eta) * (1.0 - out.eta) /
                 (out.lower.a_r * out.lower.a_r * std::pow(R, d));
    out.steps.push_back({"product_lower", lhs, rhs, lhs - rhs});
    return out;
}

KuznecovFit kuznecov_fit(const SpectralProfile& profile) {
    const auto& lines = profile.table->lines;
    KuznecovFit fit;
    NeumaierSum acc;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        acc.add(profile.norms[li] * profile.norms[li]);
        fit.lambdas.push_back(lines[li].lambda);
        fit.cumulative.push_back(acc.value());
        fit.sup_norm = std::max(fit.sup_norm, profile.norms[li]);
    }
    if (fit.lambdas.empty())
        return fit;
    double lam_max = fit.lambdas.back();
    // Fit the upper range; the first few lines are transient.
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < fit.lambdas.size(); ++i) {
        if (fit.lambdas[i] >= lam_max / 4.0 && fit.cumulative[i] > 0.0 && fit.lambdas[i] > 0.0) {
            fx.push_back(fit.lambdas[i]);
            fy.push_back(fit.cumulative[i]);
        }
    }
    if (fx.size() >= 2) {
        auto f = loglog_fit(fx, fy);
        fit.exponent = f.slope;
        fit.residual = f.residual;
    }
    for (std::size_t i = 0; i < fit.lambdas.size(); ++i) {
        if (fit.lambdas[i] > lam_max / 2.0)
            fit.sup_top_half = std::max(fit.sup_top_half, profile.norms[i]);
        else if (fit.lambdas[i] > lam_max / 4.0)
            fit.sup_prev_half = std::max(fit.sup_prev_half, profile.norms[i]);
    }
    fit.bounded = fit.sup_prev_half > 0.0 && fit.sup_top_half <= 1.15 * fit.sup_prev_half;
    return fit;
}

} // namespace synthlab
