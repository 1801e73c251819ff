#pragma once

#include <vector>

namespace zetalab {

// Gauss-Legendre rule rescaled to [0, 1]; weights sum to 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rule for n points, 2 <= n <= 32. Nodes are Legendre roots found by
// Newton iteration from the Chebyshev initial guess, accurate to ~1 ulp.
const GaussRule& gauss_rule(int n);

} // namespace zetalab
