#pragma once

#include <vector>

#include "hpdet/errors.hpp"

namespace hpdet {

// Nodes strictly increasing inside (lo, hi); for Gauss-Legendre the weights
// sum to hi - lo.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double lo = 0.0;
    double hi = 0.0;
};

// n-point Gauss-Legendre rule on (lo, hi).
QuadratureGrid gauss_legendre(int n, double lo, double hi);

// n-point Gauss-Jacobi rule for the weight (1+x)^beta on (-1, 1), beta > -1.
// The returned weights absorb the weight function.
QuadratureGrid gauss_jacobi_beta(int n, double beta);

}  // namespace hpdet
