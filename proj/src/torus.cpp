#include "synthlab/torus.hpp"

#include "synthlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace synthlab::torus {

namespace {

void check_dim(int d) {
    if (d < 1 || d > 3)
        throw ArgumentError("torus: unsupported dimension " + std::to_string(d) +
                            " (expected 1, 2 or 3)");
}

} // namespace

std::map<long long, std::vector<BasisLabel>> sum_of_squares_lines(int d, double lambda_max) {
    check_dim(d);
    if (lambda_max < 0.0)
        throw ArgumentError("torus: lambda_max must be nonnegative");
    long long n_max = static_cast<long long>(lambda_max * lambda_max + 1e-9);
    long long jmax = static_cast<long long>(std::floor(std::sqrt(static_cast<double>(n_max))));
    std::map<long long, std::vector<BasisLabel>> lines;
    int j2_lo = d >= 2 ? -static_cast<int>(jmax) : 0;
    int j3_lo = d >= 3 ? -static_cast<int>(jmax) : 0;
    for (long long j1 = -jmax; j1 <= jmax; ++j1) {
        for (long long j2 = j2_lo; j2 <= (d >= 2 ? jmax : 0); ++j2) {
            for (long long j3 = j3_lo; j3 <= (d >= 3 ? jmax : 0); ++j3) {
                long long n = j1 * j1 + j2 * j2 + j3 * j3;
                if (n <= n_max)
                    lines[n].push_back(BasisLabel{static_cast<int>(j1), static_cast<int>(j2),
                                                  static_cast<int>(j3)});
            }
        }
    }
    return lines;
}

std::vector<BasisLabel> lattice_vectors_for(int d, long long n) {
    check_dim(d);
    if (n < 0)
        throw ArgumentError("torus: |j|^2 must be nonnegative");
    auto lines = sum_of_squares_lines(d, std::sqrt(static_cast<double>(n)) + 0.5);
    auto it = lines.find(n);
    if (it == lines.end())
        return {};
    return it->second;
}

long long representation_count(int d, long long n) {
    return static_cast<long long>(lattice_vectors_for(d, n).size());
}

double eigenfunction_modulus(int d) {
    check_dim(d);
    return std::pow(kTwoPi, -0.5 * d);
}

std::complex<double> eval_exponential(const BasisLabel& j, int d, const Point& x) {
    check_dim(d);
    double phase = j.a * wrap_two_pi(x[0]);
    if (d >= 2)
        phase += j.b * wrap_two_pi(x[1]);
    if (d >= 3)
        phase += j.c * wrap_two_pi(x[2]);
    return std::polar(eigenfunction_modulus(d), phase);
}

double distance(int d, const Point& x, const Point& y) {
    check_dim(d);
    double d2 = 0.0;
    for (int c = 0; c < d; ++c) {
        double dx = std::abs(wrap_two_pi(x[c]) - wrap_two_pi(y[c]));
        dx = std::min(dx, kTwoPi - dx);
        d2 += dx * dx;
    }
    return std::sqrt(d2);
}

} // namespace synthlab::torus
