#pragma once

#include "synthlab/measures.hpp"
#include "synthlab/spectrum.hpp"
#include "synthlab/window.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace synthlab {

// delta |-> |E^delta|, however obtained (closed form or a Minkowski fit).
using NeighborhoodVolume = std::function<double(double)>;

NeighborhoodVolume volume_from_estimate(const VolumeEstimate& est);
NeighborhoodVolume volume_of_measure(const ThinMeasure& measure, const VolumeEstimate* fallback);

struct LowpassResult {
    CoefficientSet coeffs; // psi(lambda/R) E_lambda f per line
    double num_r = 0.0;    // sum |psi(lambda/R)| ||E_lambda f||
    double d_r = 0.0;      // (sum |psi|^2 ||E_lambda f||^2)^{1/2} = ||P_R f||_2
};

LowpassResult lowpass_apply(const CoefficientSet& coeffs, double R, const Window& win);

struct GridEvalResult {
    std::vector<std::complex<double>> values;
    double sup = 0.0;
    double l2_grid = 0.0;          // quadrature L2 norm of the samples
    double support_leakage = 0.0;  // mass fraction outside the C0/R thickening
    double outside_mass = 0.0;     // integral of |P_R u|^2 outside
};

// Synthesis of (already low-passed) coefficients on a grid, plus the fraction
// of L2 mass escaping the radius-thickened support.
GridEvalResult lowpass_eval_grid(const CoefficientSet& lowpassed, const EvalGrid& grid,
                                 const SupportCloud* support, double radius);

// A smooth test function with known band coefficients and sup norm.
struct TestFunction {
    std::string name;
    CoefficientSet coeffs;
    double sup_norm = 0.0;
};

TestFunction make_constant_test(SpectrumTablePtr table);
// Band-limited point kernel sum_lambda psi(lambda/R0) Pi_lambda(x0, .).
TestFunction make_point_kernel_test(SpectrumTablePtr table, const Window& win, double r0,
                                    const Point& x0, const EvalGrid& grid, std::string name);

struct StabilityCertificate {
    double p = 3.0;
    double k_dim = 1.0;
    double lp_trunc = 0.0; // ||u||_{l^p-hat} truncated at the table band
    double exponent_l2_pred = 0.0;      // d/2 - d/p
    double exponent_pairing_pred = 0.0; // k/2 - d/p

    std::vector<double> r_grid;
    std::vector<double> pr_l2;          // ||P_R u||_2
    std::vector<double> window_factor;  // (sum |psi|^{2p/(p-2)})^{(p-2)/(2p)}
    std::vector<double> volume;         // |E^{C0/R}|
    std::vector<double> ratio_l2;       // pr_l2 / (R^{d/2-d/p} lp_trunc)
    std::vector<double> bound;          // window_factor * lp_trunc * sqrt(volume)
    std::vector<double> holder_slack;   // window_factor * lp_trunc - pr_l2

    std::vector<std::string> test_names;
    std::vector<double> test_sups;
    // pairings[t][ri] = <P_R u, chi_t>
    std::vector<std::vector<std::complex<double>>> pairings;
    std::vector<std::vector<double>> pairing_slack; // bound * sup - |pairing|

    double ratio_band = 0.0;  // max/min of ratio_l2 over the grid
    double bound_slope = 0.0; // fitted log-log slope of bound(R)
    double bound_slope_residual = 0.0;
    std::vector<double> pairing_slopes; // per test, log-log slope of |pairing|
    std::vector<double> pairing_slope_residuals;
};

// Reifies the pairing-bound chain: Parseval, the Hoelder split against the
// truncated norm, the window Weyl factor, and the support-volume step,
// with measured slack per inequality.
StabilityCertificate stability_certificate(const CoefficientSet& u, double k_dim, double p,
                                           const std::vector<double>& r_grid,
                                           const std::vector<TestFunction>& tests,
                                           const Window& win,
                                           const NeighborhoodVolume& volume);

struct EndpointDiagnostic {
    double k_dim = 1.0;
    double p0 = 4.0; // 2d/k
    std::vector<int> js;
    std::vector<double> a_j;
    std::vector<double> a_partial; // partial sums of a_j
    std::vector<double> r_grid;
    // b[j index][r index]
    std::vector<std::vector<double>> b;
    // Hoelder majorant of b_j(R) via the in-window line count
    std::vector<std::vector<double>> b_holder_bound;
    std::vector<double> zero_term; // per R: R^{k-d} |psi(0)|^2 |int u|^2
    std::vector<double> scaled_pr; // per R: R^{k-d} ||P_R u||_2^2
    double a_tail_after_j6 = 0.0;  // sum of a_j for j >= 7: partial-sum movement past S_6
    double b_max = 0.0;
};

EndpointDiagnostic endpoint_dyadic(const CoefficientSet& u, double k_dim, double total_mass,
                                   const std::vector<double>& r_grid, const Window& win);

// Least-squares slope of log(y) against log(x); residual is the max absolute
// log deviation from the fit.
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

} // namespace synthlab
