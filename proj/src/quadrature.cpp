#include "synthlab/quadrature.hpp"

#include "synthlab/errors.hpp"

#include <cmath>

namespace synthlab {

// Newton iteration on P_n with the symmetric cosine initial guess. Stable and
// accurate to ~1e-15 for the node counts used here (n up to a few thousand).
GaussLegendre gauss_legendre(std::size_t n) {
    if (n == 0)
        throw ArgumentError("gauss_legendre: need at least one node");
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.141592653589793238462643383279;
    std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

} // namespace synthlab
