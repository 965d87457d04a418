#pragma once

#include <Eigen/Core>

#include "cfda/errors.hpp"

namespace cfda {

/// Shared discretization of the time interval. Points are calendar years in
/// the mortality application but any strictly increasing grid is accepted.
/// Weights implement the trapezoid rule, so weighted sums approximate
/// integrals over [points.front(), points.back()].
class TimeGrid {
  public:
    TimeGrid(Eigen::VectorXd points, Eigen::VectorXd weights);

    /// Grid with trapezoid weights derived from the points.
    explicit TimeGrid(Eigen::VectorXd points);

    /// T equally spaced points spanning [a, b].
    static TimeGrid uniform(double a, double b, Eigen::Index t_count);

    /// Yearly grid over [first_year, last_year], unit spacing.
    static TimeGrid years(int first_year, int last_year);

    const Eigen::VectorXd& points() const { return points_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    Eigen::Index size() const { return points_.size(); }
    double total_weight() const { return weights_.sum(); }

    /// Pointwise comparison within 1e-9. No resampling happens anywhere in
    /// the library; grids either match or operations refuse to combine them.
    bool approx_equal(const TimeGrid& other, double tol = 1e-9) const;

  private:
    Eigen::VectorXd points_;
    Eigen::VectorXd weights_;
};

/// Throws GridMismatch unless the grids compare equal.
void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where);

}  // namespace cfda
