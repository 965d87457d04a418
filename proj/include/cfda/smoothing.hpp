#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cfda/composition.hpp"

namespace cfda {

/// Penalized B-spline smoothing parameters. lambda == nullopt selects the
/// smoothing parameter by generalized cross-validation over a fixed
/// log-spaced grid (10^-6 .. 10^4, 21 points).
struct SmoothingConfig {
    Eigen::Index basis_dimension = 15;
    int penalty_order = 2;
    std::optional<double> lambda = std::nullopt;  // nullopt -> GCV

    void validate() const;
};

/// Per-curve flags marking unobserved grid points (true = missing).
struct MissingMask {
    std::string id;
    std::vector<bool> missing;

    Eigen::Index n_missing() const;
    bool any() const { return n_missing() > 0; }
    static MissingMask none(std::string id, Eigen::Index t_count);
};

/// Fraction of grid points that must be observed for completion to proceed.
inline constexpr double kObservedFractionGuard = 0.6;

/// Penalized least-squares spline fit of a scalar series: returns the fitted
/// values on eval_points. observed flags (optional) restrict the fit to a
/// subset of the grid. Exposed separately so the smoother can be validated
/// against scalar ground truth.
Eigen::VectorXd penalized_spline_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                     const SmoothingConfig& cfg,
                                     const Eigen::VectorXd& eval_points);

/// GCV score minimizer over the standard grid; returns the chosen lambda.
double gcv_select_lambda(const Eigen::MatrixXd& design, const Eigen::MatrixXd& penalty,
                         const Eigen::VectorXd& y);

/// Smooths each clr coordinate with a penalized B-spline, recenters the
/// smoothed clr matrix to zero column sums, and maps back to the simplex.
/// Grid points flagged in the mask are excluded from the fit and filled with
/// the spline's evaluation (imputation proper happens in impute_missing).
FunctionalComposition smooth_composition(const FunctionalComposition& raw,
                                         const SmoothingConfig& cfg,
                                         const MissingMask* mask = nullptr);

/// Completes partially observed curves in clr space with the ridge-
/// regularized best linear predictor given the observed years, estimated
/// from the complete curves. ridge scales the trace-mean of the observed
/// block (default 1e-3). Observed grid points pass through bit-identical.
std::vector<FunctionalComposition> impute_missing(
    const std::vector<FunctionalComposition>& sample,
    const std::vector<MissingMask>& masks, double ridge = 1e-3);

}  // namespace cfda
