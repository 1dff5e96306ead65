#include "bsrbm/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace bsrbm {

GaussHermite::GaussHermite(int n) {
    if (n < 1) throw ValidationError("GaussHermite: order must be >= 1");
    if (n == 1) {
        nodes_ = Vector::Zero(1);
        weights_ = Vector::Ones(1);
        return;
    }

    // Jacobi matrix of the (physicists') Hermite recurrence; eigenvalues are
    // the nodes, squared first eigenvector components the weights.
    Matrix jacobi = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(k / 2.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(jacobi);
    if (es.info() != Eigen::Success)
        throw NumericalError("GaussHermite: eigendecomposition failed");

    nodes_ = es.eigenvalues() * std::sqrt(2.0);  // z = sqrt(2) t maps to N(0,1)
    weights_ = es.eigenvectors().row(0).transpose().array().square();

    // Enforce the exact +- symmetry of the rule.
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        const double x = 0.5 * (nodes_[j] - nodes_[i]);
        nodes_[i] = -x;
        nodes_[j] = x;
        const double w = 0.5 * (weights_[i] + weights_[j]);
        weights_[i] = w;
        weights_[j] = w;
    }
    if (n % 2 == 1) nodes_[n / 2] = 0.0;
    weights_ /= weights_.sum();
}

}  // namespace bsrbm
