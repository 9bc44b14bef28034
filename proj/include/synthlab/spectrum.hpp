#pragma once

#include "synthlab/sphere.hpp"
#include "synthlab/types.hpp"

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace synthlab {

// One distinct spectral parameter with its full eigenspace basis. Lines are
// keyed exactly: the integer |j|^2 on tori, the degree l on the sphere.
struct SpectralLine {
    double lambda = 0.0;
    long long key = 0;
    std::vector<BasisLabel> basis;

    std::size_t multiplicity() const { return basis.size(); }
};

struct SpectrumTable {
    Manifold manifold;
    double lambda_max = 0.0;
    std::vector<SpectralLine> lines; // strictly increasing lambda

    // Weyl counting function N(lambda_max): eigenvalues with multiplicity.
    long long weyl_count() const;
    std::optional<std::size_t> index_of_key(long long key) const;
};

using SpectrumTablePtr = std::shared_ptr<const SpectrumTable>;

SpectrumTablePtr enumerate_spectrum(const Manifold& manifold, double lambda_max);

struct WeylCheck {
    long long count = 0;
    double predicted = 0.0;          // leading term: |B_d| L^d on tori, L^2 on S^2
    double relative_deviation = 0.0; // (count - predicted) / max(predicted, 1)
};

WeylCheck weyl_check(const SpectrumTable& table);

// Eigenfunction of the given label at a point of the model.
std::complex<double> eval_basis(const Manifold& manifold, const BasisLabel& label, const Point& x);

// Diagonal of the spectral projection kernel, Pi_lambda(x, x). Constant in x
// for both models: r_d(|j|^2) / (2 pi)^d and (2l+1) / (4 pi).
double line_kernel_diag(const Manifold& manifold, const SpectralLine& line);

// Per-line complex coefficient vectors of a function or measure against one
// spectrum table; the computational form of the family {E_lambda u}.
struct CoefficientSet {
    SpectrumTablePtr table;
    std::vector<std::vector<std::complex<double>>> lines;

    static CoefficientSet zeros(SpectrumTablePtr table);

    double line_norm_sq(std::size_t i) const;
    double line_norm(std::size_t i) const;
    std::vector<double> line_norms() const;

    double l2_norm_sq() const; // sum of line norms squared
    double l2_norm() const;
    double l1_hat() const; // sum of line norms

    bool is_zero(double tol = 0.0) const;

    CoefficientSet& axpy(const std::complex<double>& alpha, const CoefficientSet& other);
    CoefficientSet& scale(const std::complex<double>& alpha);
    // Hermitian pairing <this, other> = sum of c conj(c').
    std::complex<double> inner(const CoefficientSet& other) const;
};

enum class Provenance { ClosedForm, Quadrature };

const char* provenance_name(Provenance p);

// (lambda, ||E_lambda u||) pairs aligned with the table lines.
struct SpectralProfile {
    SpectrumTablePtr table;
    std::vector<double> norms;
    Provenance provenance = Provenance::Quadrature;

    double norm_at(std::size_t i) const { return norms[i]; }
    double max_norm() const;
};

SpectralProfile profile_of(const CoefficientSet& coeffs, Provenance provenance);

// Truncated l^p norm over spectral lines with dyadic partial sums, the
// observable form of the divergence diagnostics.
struct LpHatResult {
    double p = 2.0;
    double value = 0.0;                 // (sum norms^p)^{1/p}
    std::vector<double> cutoffs;        // 1, 2, 4, ... , lambda_max
    std::vector<double> partial_sums;   // sum_{lambda <= cutoff} norm^p (raw p-th powers)
    std::vector<double> partial_values; // partial_sums^{1/p}
};

LpHatResult lp_hat_norm(const SpectralProfile& profile, double p);

// Uniform evaluation grid carrying quadrature weights; tori use an n-per-axis
// trigonometric rule, the sphere its product Gauss rule.
struct EvalGrid {
    Manifold manifold;
    std::size_t n_per_axis = 0;        // torus
    sphere::SphereQuadrature quad;     // sphere

    std::size_t size() const;
    Point point(std::size_t idx) const;
    double weight(std::size_t idx) const;
    double max_spacing() const;
};

// Grid resolving a band up to lambda_band (aliasing-free projections and
// sup-norm estimates at that band).
EvalGrid make_eval_grid(const Manifold& manifold, double lambda_band);

// Pointwise synthesis sum_j c_j e_j on the grid.
std::vector<std::complex<double>> synthesize_on_grid(const CoefficientSet& coeffs,
                                                     const EvalGrid& grid);

// Quadrature projection of grid samples onto every line of the table.
CoefficientSet analyze_on_grid(const std::vector<std::complex<double>>& values,
                               const EvalGrid& grid, SpectrumTablePtr table);

// L2 norm of grid samples via the grid's quadrature weights.
double grid_l2_norm(const std::vector<std::complex<double>>& values, const EvalGrid& grid);

double grid_sup_norm(const std::vector<std::complex<double>>& values);

} // namespace synthlab
