#include "cfda/cfpca.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace cfda {

namespace {

constexpr double kEigenvalueFloorRel = 1e-12;
constexpr double kNonPsdTolRel = 1e-8;

void require_common_shape(const std::vector<ClrCurve>& curves) {
    for (std::size_t i = 1; i < curves.size(); ++i) {
        require_same_grid(curves[0].grid(), curves[i].grid(), "covariance");
        if (curves[i].n_parts() != curves[0].n_parts()) {
            throw DimensionMismatch("covariance: curves have differing part counts");
        }
    }
}

// part-major stacking: flat index d * T + i
Eigen::VectorXd stack_matrix(const Eigen::MatrixXd& coords) {
    const Eigen::Index d = coords.rows(), t = coords.cols();
    Eigen::VectorXd v(d * t);
    for (Eigen::Index j = 0; j < d; ++j) {
        v.segment(j * t, t) = coords.row(j).transpose();
    }
    return v;
}

Eigen::MatrixXd unstack_matrix(const Eigen::VectorXd& v, Eigen::Index d, Eigen::Index t) {
    Eigen::MatrixXd m(d, t);
    for (Eigen::Index j = 0; j < d; ++j) {
        m.row(j) = v.segment(j * t, t).transpose();
    }
    return m;
}

/// Orient so that the entry of largest magnitude is positive. Entries within
/// a relative whisker of the max count as tied and the earliest one decides,
/// which keeps the orientation stable under roundoff.
void fix_sign(Eigen::MatrixXd& coords) {
    Eigen::VectorXd flat = stack_matrix(coords);
    const double max_abs = flat.cwiseAbs().maxCoeff();
    if (max_abs == 0.0) return;
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
        if (std::abs(flat(i)) >= max_abs * (1.0 - 1e-12)) {
            if (flat(i) < 0.0) coords = -coords;
            return;
        }
    }
}

}  // namespace

CovKernelBlocks::CovKernelBlocks(TimeGrid grid, Eigen::Index n_parts,
                                 Eigen::MatrixXd assembled, Eigen::Index n_sample,
                                 std::vector<std::string> part_names, bool centered)
    : grid_(std::move(grid)),
      n_parts_(n_parts),
      assembled_(std::move(assembled)),
      n_sample_(n_sample),
      part_names_(std::move(part_names)),
      centered_(centered) {
    const Eigen::Index dt = n_parts_ * grid_.size();
    if (assembled_.rows() != dt || assembled_.cols() != dt) {
        throw DimensionMismatch("CovKernelBlocks: assembled matrix must be (D*T)^2");
    }
    if ((assembled_ - assembled_.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw DataError("CovKernelBlocks: assembled matrix is not symmetric");
    }
}

double CovKernelBlocks::quadrature_trace() const {
    double tr = 0.0;
    for (Eigen::Index d = 0; d < n_parts_; ++d) {
        tr += block(d, d).diagonal().dot(grid_.weights());
    }
    return tr;
}

MeanComposition mean(const std::vector<FunctionalComposition>& sample) {
    if (sample.empty()) {
        throw EmptySample("mean: empty sample");
    }
    const auto& first = sample.front();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(first.n_parts(), first.n_points());
    for (const auto& f : sample) {
        require_same_grid(first.grid(), f.grid(), "mean");
        if (f.n_parts() != first.n_parts()) {
            throw DimensionMismatch("mean: part counts differ across sample");
        }
        acc += clr(f).coords();
    }
    acc /= static_cast<double>(sample.size());
    ClrCurve mean_clr(first.grid(), std::move(acc), first.part_names(), "mean");
    return MeanComposition{clr_inv(mean_clr), static_cast<Eigen::Index>(sample.size())};
}

std::vector<ClrCurve> center(const std::vector<FunctionalComposition>& sample,
                             const MeanComposition& mu) {
    const ClrCurve mean_clr = clr(mu.composition);
    std::vector<ClrCurve> out;
    out.reserve(sample.size());
    for (const auto& f : sample) {
        require_same_grid(mean_clr.grid(), f.grid(), "center");
        Eigen::MatrixXd diff = clr(f).coords() - mean_clr.coords();
        out.emplace_back(f.grid(), std::move(diff), f.part_names(), f.id());
    }
    return out;
}

CovKernelBlocks covariance(const std::vector<ClrCurve>& centered) {
    if (centered.empty()) {
        throw EmptySample("covariance: empty sample");
    }
    require_common_shape(centered);
    const Eigen::Index d = centered.front().n_parts();
    const Eigen::Index t = centered.front().n_points();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d * t, d * t);
    for (const auto& c : centered) {
        const Eigen::VectorXd v = stack_matrix(c.coords());
        acc.selfadjointView<Eigen::Lower>().rankUpdate(v, 1.0);
    }
    Eigen::MatrixXd full = acc.selfadjointView<Eigen::Lower>();
    full /= static_cast<double>(centered.size());
    return CovKernelBlocks(centered.front().grid(), d, std::move(full),
                           static_cast<Eigen::Index>(centered.size()),
                           centered.front().part_names(), true);
}

EigenSystem eigendecompose(const CovKernelBlocks& cov, Eigen::Index k_max) {
    const Eigen::Index d = cov.n_parts();
    const Eigen::Index t = cov.n_points();
    const Eigen::Index dt = d * t;
    if (k_max < 1) {
        throw DimensionMismatch("eigendecompose: k_max must be >= 1");
    }

    Eigen::VectorXd w(dt);
    for (Eigen::Index j = 0; j < d; ++j) {
        w.segment(j * t, t) = cov.grid().weights();
    }
    const Eigen::VectorXd sqrt_w = w.cwiseSqrt();

    Eigen::MatrixXd weighted =
        sqrt_w.asDiagonal() * cov.assembled() * sqrt_w.asDiagonal();
    weighted = 0.5 * (weighted + weighted.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(weighted);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("eigendecompose: symmetric eigen-solver failed");
    }

    // Solver returns ascending order.
    const Eigen::VectorXd all_vals = solver.eigenvalues().reverse();
    const double lambda1 = std::max(all_vals(0), 0.0);
    if (all_vals(all_vals.size() - 1) < -kNonPsdTolRel * lambda1) {
        throw NonPSD("eigendecompose: eigenvalue " +
                     std::to_string(all_vals(all_vals.size() - 1)) +
                     " below PSD tolerance");
    }

    EigenSystem sys;
    sys.n = cov.n_sample();
    sys.k_max = k_max;
    sys.total_variance = all_vals.sum();

    const double floor = kEigenvalueFloorRel * lambda1;
    for (Eigen::Index r = 0; r < all_vals.size(); ++r) {
        const double lambda = all_vals(r);
        if (lambda <= floor || lambda <= 0.0) break;
        if (sys.n_components() >= k_max) break;

        const Eigen::VectorXd v = solver.eigenvectors().col(all_vals.size() - 1 - r);
        Eigen::MatrixXd coords = unstack_matrix(v.cwiseQuotient(sqrt_w), d, t);

        // Project back onto the zero-column-sum subspace; eigen-solver drift
        // off U is removed before the quadrature renormalization.
        coords.rowwise() -= coords.colwise().mean().eval();

        Eigen::RowVectorXd per_point = coords.cwiseAbs2().colwise().sum();
        const double q_norm = std::sqrt(per_point * cov.grid().weights());
        if (q_norm <= 0.0) {
            throw NumericError("eigendecompose: eigenfunction has zero quadrature norm");
        }
        coords /= q_norm;
        fix_sign(coords);

        ClrCurve phi_star(cov.grid(), std::move(coords), cov.part_names(),
                          "pc" + std::to_string(sys.n_components() + 1));
        sys.simplex_eigenfunctions.push_back(clr_inv(phi_star));
        sys.clr_eigenfunctions.push_back(std::move(phi_star));
        sys.eigenvalues.push_back(lambda);
    }

    sys.fev.reserve(sys.eigenvalues.size());
    for (double lambda : sys.eigenvalues) {
        sys.fev.push_back(sys.total_variance > 0.0 ? lambda / sys.total_variance : 0.0);
    }
    return sys;
}

ScoreMatrix scores(const std::vector<ClrCurve>& centered, const EigenSystem& eig,
                   Eigen::Index k) {
    if (k > eig.n_components()) {
        throw DimensionMismatch("scores: requested " + std::to_string(k) +
                                " components, only " +
                                std::to_string(eig.n_components()) + " available");
    }
    ScoreMatrix sm;
    sm.values.resize(static_cast<Eigen::Index>(centered.size()), k);
    sm.ids.reserve(centered.size());
    for (std::size_t i = 0; i < centered.size(); ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            sm.values(static_cast<Eigen::Index>(i), j) =
                inner_product(centered[i], eig.clr_eigenfunctions[j]);
        }
        sm.ids.push_back(centered[i].id());
    }
    for (Eigen::Index j = 0; j < k; ++j) {
        sm.component_labels.push_back("PC" + std::to_string(j + 1));
    }
    return sm;
}

FunctionalComposition reconstruct(const MeanComposition& mu, const EigenSystem& eig,
                                  const Eigen::VectorXd& score_row, Eigen::Index k) {
    if (k > eig.n_components() || score_row.size() < k) {
        throw DimensionMismatch("reconstruct: not enough components or scores");
    }
    Eigen::MatrixXd acc = clr(mu.composition).coords();
    for (Eigen::Index j = 0; j < k; ++j) {
        acc += score_row(j) * eig.clr_eigenfunctions[j].coords();
    }
    ClrCurve combined(mu.composition.grid(), std::move(acc),
                      mu.composition.part_names(), mu.composition.id());
    return clr_inv(combined);
}

std::pair<FunctionalComposition, FunctionalComposition> component_envelope(
    const MeanComposition& mu, const EigenSystem& eig, Eigen::Index k, double c) {
    if (k >= eig.n_components()) {
        throw DimensionMismatch("component_envelope: component index out of range");
    }
    const double scale = c * std::sqrt(eig.eigenvalues[static_cast<std::size_t>(k)]);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(k + 1);
    row(k) = scale;
    FunctionalComposition plus = reconstruct(mu, eig, row, k + 1);
    row(k) = -scale;
    FunctionalComposition minus = reconstruct(mu, eig, row, k + 1);
    return {std::move(plus), std::move(minus)};
}

}  // namespace cfda
