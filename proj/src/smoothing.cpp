#include "cfda/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "cfda/bspline.hpp"

namespace cfda {

namespace {

std::vector<double> gcv_lambda_grid() {
    std::vector<double> grid;
    grid.reserve(21);
    for (int j = 0; j <= 20; ++j) {
        grid.push_back(std::pow(10.0, -6.0 + 0.5 * j));
    }
    return grid;
}

Eigen::VectorXd solve_coefficients(const Eigen::MatrixXd& design,
                                   const Eigen::MatrixXd& penalty,
                                   const Eigen::VectorXd& y, double lambda) {
    const Eigen::MatrixXd gram = design.transpose() * design;
    if (lambda == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < design.cols()) {
            throw SingularFit("penalized_spline_fit: design matrix is rank-deficient");
        }
        return qr.solve(y);
    }
    const Eigen::MatrixXd m = gram + lambda * penalty;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success) {
        throw SingularFit("penalized_spline_fit: normal equations not solvable");
    }
    Eigen::VectorXd coef = ldlt.solve(design.transpose() * y);
    if (!coef.allFinite()) {
        throw SingularFit("penalized_spline_fit: non-finite coefficients");
    }
    return coef;
}

}  // namespace

void SmoothingConfig::validate() const {
    if (basis_dimension < 4) {
        throw ConfigError("SmoothingConfig: basis_dimension must be >= 4");
    }
    if (penalty_order < 1 || penalty_order > 3) {
        throw ConfigError("SmoothingConfig: penalty_order must be 1, 2 or 3");
    }
    if (lambda && *lambda < 0.0) {
        throw ConfigError("SmoothingConfig: lambda must be >= 0");
    }
}

Eigen::Index MissingMask::n_missing() const {
    return static_cast<Eigen::Index>(std::count(missing.begin(), missing.end(), true));
}

MissingMask MissingMask::none(std::string id, Eigen::Index t_count) {
    return MissingMask{std::move(id), std::vector<bool>(t_count, false)};
}

double gcv_select_lambda(const Eigen::MatrixXd& design, const Eigen::MatrixXd& penalty,
                         const Eigen::VectorXd& y) {
    const double n = static_cast<double>(design.rows());
    const Eigen::MatrixXd gram = design.transpose() * design;
    double best_lambda = 0.0;
    double best_score = std::numeric_limits<double>::infinity();
    for (double lambda : gcv_lambda_grid()) {
        const Eigen::MatrixXd m = gram + lambda * penalty;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
        if (ldlt.info() != Eigen::Success) continue;
        const Eigen::VectorXd coef = ldlt.solve(design.transpose() * y);
        if (!coef.allFinite()) continue;
        const double rss = (y - design * coef).squaredNorm();
        const double edf = ldlt.solve(gram).trace();
        const double denom = 1.0 - edf / n;
        if (denom <= 1e-10) continue;  // effectively interpolating; GCV diverges
        const double score = (rss / n) / (denom * denom);
        if (score < best_score) {
            best_score = score;
            best_lambda = lambda;
        }
    }
    if (!std::isfinite(best_score)) {
        throw SingularFit("gcv_select_lambda: no lambda on the grid gave a valid fit");
    }
    return best_lambda;
}

Eigen::VectorXd penalized_spline_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                     const SmoothingConfig& cfg,
                                     const Eigen::VectorXd& eval_points) {
    cfg.validate();
    if (x.size() != y.size()) {
        throw DimensionMismatch("penalized_spline_fit: x/y size mismatch");
    }
    if (x.size() < 2) {
        throw DimensionMismatch("penalized_spline_fit: need at least 2 points");
    }
    const BSplineBasis basis(x.minCoeff(), x.maxCoeff(), cfg.basis_dimension);
    const Eigen::MatrixXd design = basis.design_matrix(x);
    const Eigen::MatrixXd penalty = basis.penalty_matrix(cfg.penalty_order);
    const double lambda = cfg.lambda ? *cfg.lambda : gcv_select_lambda(design, penalty, y);
    const Eigen::VectorXd coef = solve_coefficients(design, penalty, y, lambda);
    return basis.design_matrix(eval_points) * coef;
}

FunctionalComposition smooth_composition(const FunctionalComposition& raw,
                                         const SmoothingConfig& cfg,
                                         const MissingMask* mask) {
    cfg.validate();
    const Eigen::Index t = raw.n_points();
    if (mask && static_cast<Eigen::Index>(mask->missing.size()) != t) {
        throw DimensionMismatch("smooth_composition: mask length differs from grid");
    }

    std::vector<Eigen::Index> observed;
    observed.reserve(t);
    for (Eigen::Index i = 0; i < t; ++i) {
        if (!mask || !mask->missing[i]) observed.push_back(i);
    }
    if (static_cast<double>(observed.size()) <
        kObservedFractionGuard * static_cast<double>(t)) {
        throw GuardViolation("smooth_composition: fewer than 60% of grid points observed");
    }

    const ClrCurve u = clr(raw);
    Eigen::VectorXd x(observed.size());
    for (std::size_t j = 0; j < observed.size(); ++j) {
        x(static_cast<Eigen::Index>(j)) = raw.grid().points()(observed[j]);
    }

    Eigen::MatrixXd smoothed(raw.n_parts(), t);
    for (Eigen::Index d = 0; d < raw.n_parts(); ++d) {
        Eigen::VectorXd y(observed.size());
        for (std::size_t j = 0; j < observed.size(); ++j) {
            y(static_cast<Eigen::Index>(j)) = u.coords()(d, observed[j]);
        }
        smoothed.row(d) =
            penalized_spline_fit(x, y, cfg, raw.grid().points()).transpose();
    }
    smoothed.rowwise() -= smoothed.colwise().mean().eval();
    ClrCurve fitted(raw.grid(), std::move(smoothed), raw.part_names(), raw.id());
    return clr_inv(fitted);
}

std::vector<FunctionalComposition> impute_missing(
    const std::vector<FunctionalComposition>& sample,
    const std::vector<MissingMask>& masks, double ridge) {
    if (sample.size() != masks.size()) {
        throw DimensionMismatch("impute_missing: sample/mask count mismatch");
    }
    if (ridge < 0.0) {
        throw ConfigError("impute_missing: ridge must be >= 0");
    }
    if (sample.empty()) return {};

    const Eigen::Index t = sample.front().n_points();
    const Eigen::Index d = sample.front().n_parts();
    const Eigen::Index dt = d * t;

    std::vector<std::size_t> complete_idx, incomplete_idx;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        require_same_grid(sample.front().grid(), sample[i].grid(), "impute_missing");
        if (static_cast<Eigen::Index>(masks[i].missing.size()) != t) {
            throw DimensionMismatch("impute_missing: mask length differs from grid");
        }
        if (masks[i].any()) {
            const double observed =
                static_cast<double>(t - masks[i].n_missing()) / static_cast<double>(t);
            if (observed < kObservedFractionGuard) {
                throw GuardViolation("impute_missing: curve " + sample[i].id() +
                                     " has less than 60% of years observed");
            }
            incomplete_idx.push_back(i);
        } else {
            complete_idx.push_back(i);
        }
    }
    if (incomplete_idx.empty()) return sample;
    if (complete_idx.size() < 5) {
        throw InsufficientCompleteCurves(
            "impute_missing: need at least 5 complete curves, have " +
            std::to_string(complete_idx.size()));
    }

    // Stacked clr mean and covariance of the complete curves (part-major).
    const auto stack = [&](const FunctionalComposition& f) {
        const Eigen::MatrixXd coords = clr(f).coords();
        Eigen::VectorXd v(dt);
        for (Eigen::Index j = 0; j < d; ++j) {
            v.segment(j * t, t) = coords.row(j).transpose();
        }
        return v;
    };
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(dt);
    for (std::size_t i : complete_idx) mu += stack(sample[i]);
    mu /= static_cast<double>(complete_idx.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dt, dt);
    for (std::size_t i : complete_idx) {
        const Eigen::VectorXd c = stack(sample[i]) - mu;
        cov.selfadjointView<Eigen::Lower>().rankUpdate(c, 1.0);
    }
    Eigen::MatrixXd cov_full = cov.selfadjointView<Eigen::Lower>();
    cov_full /= static_cast<double>(complete_idx.size());

    std::vector<FunctionalComposition> out = sample;
    for (std::size_t i : incomplete_idx) {
        const auto& m = masks[i].missing;
        std::vector<Eigen::Index> obs_flat, mis_flat;
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index p = 0; p < t; ++p) {
                (m[p] ? mis_flat : obs_flat).push_back(j * t + p);
            }
        }
        const Eigen::Index no = static_cast<Eigen::Index>(obs_flat.size());
        const Eigen::Index nm = static_cast<Eigen::Index>(mis_flat.size());

        Eigen::MatrixXd cov_oo(no, no), cov_mo(nm, no);
        Eigen::VectorXd mu_o(no), mu_m(nm);
        for (Eigen::Index r = 0; r < no; ++r) {
            mu_o(r) = mu(obs_flat[r]);
            for (Eigen::Index c = 0; c < no; ++c) {
                cov_oo(r, c) = cov_full(obs_flat[r], obs_flat[c]);
            }
        }
        for (Eigen::Index r = 0; r < nm; ++r) {
            mu_m(r) = mu(mis_flat[r]);
            for (Eigen::Index c = 0; c < no; ++c) {
                cov_mo(r, c) = cov_full(mis_flat[r], obs_flat[c]);
            }
        }

        const Eigen::VectorXd x_full = stack(sample[i]);
        Eigen::VectorXd x_o(no);
        for (Eigen::Index r = 0; r < no; ++r) x_o(r) = x_full(obs_flat[r]);

        Eigen::VectorXd x_m;
        const double trace_mean = cov_oo.trace() / static_cast<double>(no);
        if (trace_mean <= 0.0) {
            // Degenerate sample (identical complete curves): predictor is the mean.
            x_m = mu_m;
        } else {
            Eigen::MatrixXd reg = cov_oo;
            reg.diagonal().array() += ridge * trace_mean;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(reg);
            if (ldlt.info() != Eigen::Success) {
                throw SingularFit("impute_missing: observed block not solvable");
            }
            x_m = mu_m + cov_mo * ldlt.solve(x_o - mu_o);
            if (!x_m.allFinite()) {
                throw SingularFit("impute_missing: non-finite imputation");
            }
        }

        // Rebuild the clr matrix; recenter only the imputed columns.
        Eigen::MatrixXd coords = clr(sample[i]).coords();
        for (Eigen::Index r = 0; r < nm; ++r) {
            coords(mis_flat[r] / t, mis_flat[r] % t) = x_m(r);
        }
        for (Eigen::Index p = 0; p < t; ++p) {
            if (m[p]) {
                coords.col(p).array() -= coords.col(p).mean();
            }
        }
        ClrCurve completed(sample[i].grid(), std::move(coords), sample[i].part_names(),
                           sample[i].id());
        FunctionalComposition mapped = clr_inv(completed);

        // Observed grid points pass through bit-identical.
        Eigen::MatrixXd parts = mapped.parts();
        for (Eigen::Index p = 0; p < t; ++p) {
            if (!m[p]) parts.col(p) = sample[i].parts().col(p);
        }
        out[i] = FunctionalComposition(sample[i].grid(), std::move(parts),
                                       sample[i].part_names(), sample[i].id());
    }
    return out;
}

}  // namespace cfda
