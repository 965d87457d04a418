#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cfda/grid.hpp"

namespace cfda {

/// Tolerances and the zero-replacement policy used by the closure operator.
struct ClosureOptions {
    /// Value substituted for exact zeros before normalization. In the
    /// mortality pipeline this is half a death; set to 0 to forbid zeros.
    double pseudocount = 0.5;
    /// Post-closure floor keeping every part log-safe.
    double eps_floor = 1e-12;
};

inline constexpr double kUnitSumTol = 1e-12;
inline constexpr double kZeroSumTol = 1e-10;
/// clr_inv accepts column sums within this tolerance of zero and recenters.
inline constexpr double kClrInvCenterTol = 1e-8;
/// exp() range guard for clr_inv.
inline constexpr double kExpGuard = 700.0;

/// A D-part positive composition observed along a common time grid.
/// Invariants: every entry >= eps_floor, every column sums to 1 within 1e-12,
/// D >= 2. Columns are time points, rows are parts.
class FunctionalComposition {
  public:
    FunctionalComposition(TimeGrid grid, Eigen::MatrixXd parts,
                          std::vector<std::string> part_names = {},
                          std::string id = {});

    const TimeGrid& grid() const { return grid_; }
    const Eigen::MatrixXd& parts() const { return parts_; }
    const std::vector<std::string>& part_names() const { return part_names_; }
    const std::string& id() const { return id_; }

    Eigen::Index n_parts() const { return parts_.rows(); }
    Eigen::Index n_points() const { return parts_.cols(); }

    FunctionalComposition with_id(std::string id) const;

  private:
    TimeGrid grid_;
    Eigen::MatrixXd parts_;
    std::vector<std::string> part_names_;
    std::string id_;
};

/// The clr image of a composition: a D x T matrix whose columns sum to zero
/// (membership in the zero-sum subspace U) within 1e-10.
class ClrCurve {
  public:
    ClrCurve(TimeGrid grid, Eigen::MatrixXd coords,
             std::vector<std::string> part_names = {}, std::string id = {});

    const TimeGrid& grid() const { return grid_; }
    const Eigen::MatrixXd& coords() const { return coords_; }
    const std::vector<std::string>& part_names() const { return part_names_; }
    const std::string& id() const { return id_; }

    Eigen::Index n_parts() const { return coords_.rows(); }
    Eigen::Index n_points() const { return coords_.cols(); }

  private:
    TimeGrid grid_;
    Eigen::MatrixXd coords_;
    std::vector<std::string> part_names_;
    std::string id_;
};

/// Closure operator: normalizes each column of a nonnegative matrix to unit
/// sum, replacing exact zeros by opts.pseudocount beforehand.
/// Throws NegativeEntry / AllZeroColumn.
FunctionalComposition closure(const TimeGrid& grid, const Eigen::MatrixXd& raw,
                              const ClosureOptions& opts = {},
                              std::vector<std::string> part_names = {},
                              std::string id = {});

/// Single-column closure with the same zero-replacement and floor policy.
Eigen::VectorXd close_vector(const Eigen::VectorXd& raw, const ClosureOptions& opts = {});

/// Pointwise geometric mean of the parts, computed in log space.
Eigen::VectorXd geometric_mean_curve(const FunctionalComposition& f);

/// Centered log-ratio transform: coords(d, i) = log(f_d(t_i) / gmean(t_i)).
ClrCurve clr(const FunctionalComposition& f);

/// Inverse clr: closure of exp(u). Columns whose sums deviate from zero by
/// up to 1e-8 are recentered first; larger deviations throw NotCentered.
/// Entries beyond the exp range guard throw Overflow.
FunctionalComposition clr_inv(const ClrCurve& u);

/// Perturbation (simplex addition): closure of the componentwise product.
FunctionalComposition perturb(const FunctionalComposition& f,
                              const FunctionalComposition& g);

/// Powering (simplex scalar multiplication): closure of componentwise powers.
FunctionalComposition power(double alpha, const FunctionalComposition& f);

/// Quadrature approximation of the functional-simplex inner product,
/// equal to the weighted L2 inner product of the clr images.
double inner_product(const FunctionalComposition& f, const FunctionalComposition& g);
double inner_product(const ClrCurve& a, const ClrCurve& b);

double norm(const FunctionalComposition& f);
double norm(const ClrCurve& u);

/// Simplex distance: norm of f (+) (-1 (.) g).
double distance(const FunctionalComposition& f, const FunctionalComposition& g);

/// The neutral element: every part identically 1/D.
FunctionalComposition uniform_composition(const TimeGrid& grid, Eigen::Index n_parts,
                                          std::vector<std::string> part_names = {},
                                          std::string id = {});

}  // namespace cfda
