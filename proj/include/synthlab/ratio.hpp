#pragma once

#include "synthlab/spectrum.hpp"
#include "synthlab/window.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace synthlab {

struct RatioReport {
    double l1_hat = 0.0;
    double l2 = 0.0;
    double fr = 0.0; // l1_hat / l2
    // localized variant, populated by local_fr
    double r = 0.0;
    double num_r = 0.0;
    double d_r = 0.0;
    double fr_r = 0.0;
    std::size_t truncation_lines = 0;
    double lambda_max = 0.0;
};

RatioReport fourier_ratio(const CoefficientSet& coeffs);
RatioReport local_fr(const CoefficientSet& coeffs, double R, const Window& win);

struct SparseApproxResult {
    int k = 0;
    int trials = 0;
    CoefficientSet best;
    double best_err2 = 0.0;
    double mean_err2 = 0.0;
    double stderr_err2 = 0.0;
    double analytic_err2 = 0.0;   // ||f||^2 (FR^2 - 1) / k
    double direct_sum_err2 = 0.0; // same quantity by literal summation over lines
    std::vector<double> err2;     // per trial
    std::vector<long long> draw_counts; // total draws per line across trials
};

// Monte Carlo sparse spectral approximation: k i.i.d. line draws with
// probability ||E_lambda f|| / ||f||_{l1-hat}, averaged with the inverse-mass
// scaling that makes each trial unbiased for f.
SparseApproxResult sparse_approx(const CoefficientSet& f, int k, int trials, std::uint64_t seed,
                                 int threads = 1);

struct ConverseCheck {
    double eta = 0.0;
    double fr = 0.0;
    double bound = 0.0; // (1+eta) sqrt(k) + eta sqrt(N(lambda_max))
    double slack = 0.0;
    std::size_t k_labels = 0;
    long long n_lambda = 0;
};

ConverseCheck converse_check(const CoefficientSet& f, const CoefficientSet& approx);

struct GrowthTable {
    SpectrumTablePtr table;
    std::vector<double> lambdas;
    std::vector<double> a_sq;       // A(lambda)^2 = sup_x Pi_lambda(x, x)
    std::vector<double> a_envelope; // nondecreasing envelope of A(lambda)
};

GrowthTable growth_table(const SpectrumTablePtr& table);

// A_R = max A(lambda) over lines with lambda <= lambda_cap.
double growth_a_r(const GrowthTable& g, double lambda_cap);

struct ChainStep {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs - lhs for upper bounds, lhs - rhs for lower bounds
};

struct Certificate {
    std::vector<ChainStep> steps;
    double r = 0.0;
    double num_r = 0.0;
    double d_r = 0.0;
    double fr_r = 0.0;
    double sup_grid = 0.0;
    double a_r = 0.0;
    double c3 = 0.0; // measured (sum psi^2)^{1/2} / R^{d/2}
    double c0 = 0.0; // c_psi / C3
    double volume = 0.0;

    bool all_pass(double tol) const;
    double min_slack() const;
};

// The localized lower-bound chain on concrete data: pointwise bound by
// A_R Num_R, the Cauchy-Schwarz window bound with measured C3, the
// band-limited lower bound c_psi ||f||, the support-volume step, and the
// final localized-ratio bound with c0 = c_psi / C3.
Certificate fr_lower_certificate(const CoefficientSet& f, double R, const Window& win,
                                 double neighborhood_volume, const EvalGrid& grid,
                                 const GrowthTable& growth);

struct UncertaintyCertificate {
    Certificate lower;
    std::vector<long long> sigma_keys; // selected spectral parameters
    double eta_target = 0.0;
    double eta = 0.0; // achieved concentration defect
    double m_r = 0.0; // active selected lines
    std::vector<ChainStep> steps;

    bool all_pass(double tol) const;
};

// Greedy selection by windowed line mass until the eta target is met, then
// the two-sided sandwich: FR_R <= sqrt(M_R)/(1-eta) and the product bound
// M_R |E^{C0/R}| >= c0^2 (1-eta)^2 / (A_R^2 R^d).
UncertaintyCertificate uncertainty_product(const CoefficientSet& f, double eta_target, double R,
                                           const Window& win, double neighborhood_volume,
                                           const EvalGrid& grid, const GrowthTable& growth);

struct KuznecovFit {
    std::vector<double> lambdas;
    std::vector<double> cumulative; // sum of ||E_lambda u||^2 up to lambda
    double exponent = 0.0;
    double residual = 0.0;
    double sup_norm = 0.0;      // sup of ||E_lambda u|| over the range
    double sup_top_half = 0.0;  // sup over the upper dyadic window
    double sup_prev_half = 0.0; // sup over the window below it
    bool bounded = false;       // hypersurface-style verdict
};

KuznecovFit kuznecov_fit(const SpectralProfile& profile);

} // namespace synthlab
