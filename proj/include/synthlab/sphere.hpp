#pragma once

#include "synthlab/quadrature.hpp"
#include "synthlab/types.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace synthlab::sphere {

// Spectral parameter of degree l: sqrt(l(l+1)).
double lambda_of_degree(int l);

// Largest degree l with lambda_of_degree(l) <= lambda_max (-1 if none).
int max_degree_within(double lambda_max);

// Legendre polynomial P_l(x) by the three-term recurrence; |x| <= 1.
double legendre_p(int l, double x);

// Fully normalized associated Legendre N_l^m(x), m >= 0, with Condon-Shortley
// phase, so that Y_l^m(theta, phi) = N_l^m(cos theta) e^{i m phi} is
// orthonormal on the area-4pi sphere. Stable for l up to several thousand.
double legendre_normalized(int l, int m, double x);

// All N_l^m(x) for 0 <= m <= l <= L in one sweep. Row (l, m) is flattened as
// offset(m) + (l - m) with offset(m) = m * (L + 1) - m * (m - 1) / 2.
std::vector<double> legendre_normalized_row(int L, double x);

inline std::size_t legendre_row_index(int L, int l, int m) {
    return static_cast<std::size_t>(m) * (L + 1) - static_cast<std::size_t>(m) * (m - 1) / 2 +
           static_cast<std::size_t>(l - m);
}

// Complex spherical harmonic, orthonormal convention. Y_l^{-m} = (-1)^m conj(Y_l^m).
std::complex<double> sph_harm(int l, int m, double theta, double phi);

// Product rule: Gauss-Legendre in cos(theta) x uniform longitudes. Integrates
// Y_l^m conj(Y_l'^m') exactly for l, l' <= exactness.
struct SphereQuadrature {
    int exactness = 0;
    std::vector<double> cos_nodes;     // x_i = cos(theta_i), ascending
    std::vector<double> theta_weights; // GL weights, sum 2
    std::size_t n_phi = 0;
    double phi_weight = 0.0; // 2 pi / n_phi

    std::size_t n_theta() const { return cos_nodes.size(); }
    std::size_t n_points() const { return n_theta() * n_phi; }
    double phi(std::size_t j) const { return kTwoPi * static_cast<double>(j) / n_phi; }
    double theta(std::size_t i) const;
    Point point(std::size_t i, std::size_t j) const;
    double weight(std::size_t i) const { return theta_weights[i] * phi_weight; }
};

SphereQuadrature sphere_quadrature(int exactness);

// Band coefficients c[l][m + l] for l <= L.
using BandCoefficients = std::vector<std::vector<std::complex<double>>>;

// Quadrature analysis of grid samples (indexed i * n_phi + j) into band
// coefficients up to degree L. Exact for band-limited inputs with
// L + band <= ... the rule's exactness covers products of degrees l, l' <= exactness.
BandCoefficients analyze(const SphereQuadrature& q,
                         const std::vector<std::complex<double>>& grid_values, int L);

// Pointwise synthesis of band coefficients on the rule's grid.
std::vector<std::complex<double>> synthesize(const SphereQuadrature& q,
                                             const BandCoefficients& coeffs);

// Great-circle distance between (theta, phi) points on the unit sphere.
double distance(const Point& a, const Point& b);

// Unit vector of a (theta, phi) point.
std::array<double, 3> to_xyz(const Point& p);

} // namespace synthlab::sphere
