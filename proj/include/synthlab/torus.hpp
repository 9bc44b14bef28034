#pragma once

#include "synthlab/types.hpp"

#include <complex>
#include <map>
#include <vector>

namespace synthlab::torus {

// All lattice vectors j in Z^d with |j|^2 <= floor(lambda_max^2), grouped by
// the integer |j|^2 in ascending order. Exact integer keys; no floating-point
// line clustering.
std::map<long long, std::vector<BasisLabel>> sum_of_squares_lines(int d, double lambda_max);

// Lattice vectors with |j|^2 exactly n.
std::vector<BasisLabel> lattice_vectors_for(int d, long long n);

// r_d(n): number of representations of n as a sum of d squares.
long long representation_count(int d, long long n);

// Orthonormal eigenfunction e_j(x) = (2 pi)^{-d/2} exp(i j.x). Inputs are
// wrapped mod 2 pi, so any real coordinates are accepted.
std::complex<double> eval_exponential(const BasisLabel& j, int d, const Point& x);

// (2 pi)^{-d/2}, the constant modulus of every eigenfunction.
double eigenfunction_modulus(int d);

// Flat distance between points of [0, 2 pi)^d with the min-image convention.
double distance(int d, const Point& x, const Point& y);

} // namespace synthlab::torus
