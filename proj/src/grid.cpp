#include "cfda/grid.hpp"

#include <string>
#include <utility>

namespace cfda {

namespace {

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& points) {
    const Eigen::Index t = points.size();
    Eigen::VectorXd w(t);
    w(0) = (points(1) - points(0)) / 2.0;
    w(t - 1) = (points(t - 1) - points(t - 2)) / 2.0;
    for (Eigen::Index i = 1; i + 1 < t; ++i) {
        w(i) = (points(i + 1) - points(i - 1)) / 2.0;
    }
    return w;
}

void check_points(const Eigen::VectorXd& points) {
    if (points.size() < 2) {
        throw DimensionMismatch("TimeGrid needs at least 2 points, got " +
                                std::to_string(points.size()));
    }
    for (Eigen::Index i = 1; i < points.size(); ++i) {
        if (!(points(i) > points(i - 1))) {
            throw DataError("TimeGrid points must be strictly increasing (index " +
                            std::to_string(i) + ")");
        }
    }
}

}  // namespace

TimeGrid::TimeGrid(Eigen::VectorXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    check_points(points_);
    if (weights_.size() != points_.size()) {
        throw DimensionMismatch("TimeGrid weights length differs from points length");
    }
    if ((weights_.array() <= 0.0).any()) {
        throw DataError("TimeGrid weights must all be positive");
    }
}

TimeGrid::TimeGrid(Eigen::VectorXd points) : points_(std::move(points)) {
    check_points(points_);
    weights_ = trapezoid_weights(points_);
}

TimeGrid TimeGrid::uniform(double a, double b, Eigen::Index t_count) {
    return TimeGrid(Eigen::VectorXd::LinSpaced(t_count, a, b));
}

TimeGrid TimeGrid::years(int first_year, int last_year) {
    const Eigen::Index t = static_cast<Eigen::Index>(last_year - first_year) + 1;
    return TimeGrid(Eigen::VectorXd::LinSpaced(t, first_year, last_year));
}

bool TimeGrid::approx_equal(const TimeGrid& other, double tol) const {
    if (points_.size() != other.points_.size()) return false;
    return ((points_ - other.points_).array().abs() <= tol).all();
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where) {
    if (!a.approx_equal(b)) {
        throw GridMismatch(std::string(where) + ": inputs live on different grids");
    }
}

}  // namespace cfda
