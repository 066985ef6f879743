#include "fracstep/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "fracstep/error.hpp"
#include "fracstep/special.hpp"

namespace fracstep {

QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

QuadratureRule gauss_jacobi(int n, double a, double b) {
    if (n < 1 || !(a > -1.0) || !(b > -1.0)) {
        throw DomainError("gauss_jacobi: need n >= 1 and a, b > -1");
    }
    // Monic Jacobi recurrence on [-1,1] for (1-x)^a (1+x)^b.
    const double ab = a + b;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = k == 0 ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        const double beta =
            k == 1 ? 4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0))
                   : 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        sub(k - 1) = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

    // Total mass of the weight after mapping x = 2s - 1 to [0,1].
    const double mass_01 = std::exp(log_gamma_real(a + 1.0) + log_gamma_real(b + 1.0) -
                                    log_gamma_real(a + b + 2.0));

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        const double v0 = eig.eigenvectors()(0, k);
        rule.nodes[k] = 0.5 * (eig.eigenvalues()(k) + 1.0);
        rule.weights[k] = mass_01 * v0 * v0;
    }
    return rule;
}

}  // namespace fracstep
