#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cfda/composition.hpp"

namespace cfda {

/// Sample mean on the functional simplex (clr_inv of the clr average).
struct MeanComposition {
    FunctionalComposition composition;
    Eigen::Index n = 0;
};

/// Empirical covariance kernel of centered clr curves, stored assembled as a
/// (D*T) x (D*T) matrix in part-major stacking: flat index = d * T + i.
/// Block (j, l) is the T x T kernel r_jl(s, t).
class CovKernelBlocks {
  public:
    CovKernelBlocks(TimeGrid grid, Eigen::Index n_parts, Eigen::MatrixXd assembled,
                    Eigen::Index n_sample, std::vector<std::string> part_names = {},
                    bool centered = true);

    const TimeGrid& grid() const { return grid_; }
    Eigen::Index n_parts() const { return n_parts_; }
    Eigen::Index n_points() const { return grid_.size(); }
    Eigen::Index n_sample() const { return n_sample_; }
    const Eigen::MatrixXd& assembled() const { return assembled_; }
    const std::vector<std::string>& part_names() const { return part_names_; }
    bool centered() const { return centered_; }

    Eigen::Block<const Eigen::MatrixXd> block(Eigen::Index j, Eigen::Index l) const {
        const Eigen::Index t = grid_.size();
        return assembled_.block(j * t, l * t, t, t);
    }

    /// Quadrature trace: sum_d integral of r_dd(t, t) dt.
    double quadrature_trace() const;

  private:
    TimeGrid grid_;
    Eigen::Index n_parts_;
    Eigen::MatrixXd assembled_;
    Eigen::Index n_sample_;
    std::vector<std::string> part_names_;
    bool centered_;
};

/// Eigenvalues and eigenfunctions of the quadrature-discretized covariance
/// operator. Eigenvalues descend; clr eigenfunctions are orthonormal under
/// the grid quadrature, with the largest-magnitude entry oriented positive.
struct EigenSystem {
    std::vector<double> eigenvalues;
    std::vector<ClrCurve> clr_eigenfunctions;
    std::vector<FunctionalComposition> simplex_eigenfunctions;
    /// lambda_k / total_variance; total_variance is the full trace, so the
    /// entries sum to 1 only when every positive component is retained.
    std::vector<double> fev;
    double total_variance = 0.0;
    Eigen::Index n = 0;
    Eigen::Index k_max = 0;

    Eigen::Index n_components() const {
        return static_cast<Eigen::Index>(eigenvalues.size());
    }
};

/// n x K matrix of projections onto the clr eigenfunctions.
struct ScoreMatrix {
    Eigen::MatrixXd values;  // row i = observation, column k = component
    std::vector<std::string> ids;
    std::vector<std::string> component_labels;

    Eigen::Index n() const { return values.rows(); }
    Eigen::Index k() const { return values.cols(); }
};

/// Simplex sample mean: clr_inv of the pointwise arithmetic mean of the clr
/// images (equivalently the closed per-part geometric mean across the sample).
MeanComposition mean(const std::vector<FunctionalComposition>& sample);

/// clr(f_i) - clr(mean) per curve.
std::vector<ClrCurve> center(const std::vector<FunctionalComposition>& sample,
                             const MeanComposition& mu);

/// Block kernel estimator with divisor n: r_jl(s,t) = (1/n) sum_i c_ij(s) c_il(t).
CovKernelBlocks covariance(const std::vector<ClrCurve>& centered);

/// Solves the quadrature-discretized eigenproblem via the symmetric weighting
/// W^{1/2} R W^{1/2}, keeping at most k_max components above the eigenvalue
/// floor 1e-12 * lambda_1.
EigenSystem eigendecompose(const CovKernelBlocks& cov, Eigen::Index k_max);

/// Quadrature inner products of each centered curve with the first k
/// eigenfunctions.
ScoreMatrix scores(const std::vector<ClrCurve>& centered, const EigenSystem& eig,
                   Eigen::Index k);

/// Truncated Karhunen-Loeve reconstruction:
/// clr_inv( clr(mean) + sum_{j<k} score_row[j] * phi*_j ).
FunctionalComposition reconstruct(const MeanComposition& mu, const EigenSystem& eig,
                                  const Eigen::VectorXd& score_row, Eigen::Index k);

/// Mean perturbed by +/- c * sqrt(lambda_k) * phi*_k (component index 0-based).
std::pair<FunctionalComposition, FunctionalComposition> component_envelope(
    const MeanComposition& mu, const EigenSystem& eig, Eigen::Index k, double c = 1.0);

}  // namespace cfda
