#pragma once

#include <vector>

namespace fracstep {

/// Nodes and weights of a Gauss rule on [0,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre on [0,1]; weights sum to 1.
QuadratureRule gauss_legendre(int n);

/// n-point Gauss rule on [0,1] for the weight (1-s)^a s^b, a, b > -1.
/// Golub-Welsch on the Jacobi recurrence.
QuadratureRule gauss_jacobi(int n, double a, double b);

}  // namespace fracstep
