#pragma once

#include <Eigen/Core>

namespace cfda {

/// Clamped cubic B-spline basis on [a, b] with equally spaced interior knots.
/// Supplies the design matrix at arbitrary points and the derivative-penalty
/// Gram matrix used by the penalized smoother.
class BSplineBasis {
  public:
    /// n_basis >= 4 (cubic order). Interior knot count is n_basis - 4.
    BSplineBasis(double a, double b, Eigen::Index n_basis);

    Eigen::Index size() const { return n_basis_; }

    /// Values of all basis functions at x (clamped to [a, b]).
    Eigen::VectorXd evaluate(double x, int derivative = 0) const;

    /// Rows = evaluation points, columns = basis functions.
    Eigen::MatrixXd design_matrix(const Eigen::VectorXd& x) const;

    /// Gram matrix of the q-th derivatives: integral of B_i^(q) B_j^(q) dt,
    /// assembled span by span with Gauss-Legendre quadrature (exact for
    /// piecewise-polynomial integrands of cubic splines).
    Eigen::MatrixXd penalty_matrix(int derivative_order) const;

    const Eigen::VectorXd& knots() const { return knots_; }

  private:
    static constexpr int kOrder = 4;  // cubic

    double a_, b_;
    Eigen::Index n_basis_;
    Eigen::VectorXd knots_;  // clamped: kOrder copies of each boundary
};

}  // namespace cfda
