#pragma once

#include <cstddef>
#include <vector>

namespace synthlab {

// Gauss-Legendre rule on [-1, 1]: n nodes integrate polynomials up to degree
// 2n-1 exactly. Nodes are ascending.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

GaussLegendre gauss_legendre(std::size_t n);

} // namespace synthlab
