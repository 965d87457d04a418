#include "cfda/composition.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cfda {

namespace {

void check_part_names(const std::vector<std::string>& names, Eigen::Index d,
                      const char* what) {
    if (!names.empty() && static_cast<Eigen::Index>(names.size()) != d) {
        throw DimensionMismatch(std::string(what) + ": part_names length " +
                                std::to_string(names.size()) + " != D " +
                                std::to_string(d));
    }
}

}  // namespace

FunctionalComposition::FunctionalComposition(TimeGrid grid, Eigen::MatrixXd parts,
                                             std::vector<std::string> part_names,
                                             std::string id)
    : grid_(std::move(grid)),
      parts_(std::move(parts)),
      part_names_(std::move(part_names)),
      id_(std::move(id)) {
    if (parts_.rows() < 2) {
        throw DimensionMismatch("FunctionalComposition needs D >= 2 parts");
    }
    if (parts_.cols() != grid_.size()) {
        throw DimensionMismatch("FunctionalComposition: matrix has " +
                                std::to_string(parts_.cols()) + " columns, grid has " +
                                std::to_string(grid_.size()) + " points");
    }
    check_part_names(part_names_, parts_.rows(), "FunctionalComposition");
    if (!(parts_.array() > 0.0).all()) {
        throw NonPositiveEntry("FunctionalComposition: all entries must be > 0");
    }
    for (Eigen::Index i = 0; i < parts_.cols(); ++i) {
        if (std::abs(parts_.col(i).sum() - 1.0) > kUnitSumTol) {
            throw DataError("FunctionalComposition: column " + std::to_string(i) +
                            " sums to " + std::to_string(parts_.col(i).sum()));
        }
    }
}

FunctionalComposition FunctionalComposition::with_id(std::string id) const {
    FunctionalComposition copy = *this;
    copy.id_ = std::move(id);
    return copy;
}

ClrCurve::ClrCurve(TimeGrid grid, Eigen::MatrixXd coords,
                   std::vector<std::string> part_names, std::string id)
    : grid_(std::move(grid)),
      coords_(std::move(coords)),
      part_names_(std::move(part_names)),
      id_(std::move(id)) {
    if (coords_.rows() < 2) {
        throw DimensionMismatch("ClrCurve needs D >= 2 parts");
    }
    if (coords_.cols() != grid_.size()) {
        throw DimensionMismatch("ClrCurve: matrix/grid size mismatch");
    }
    check_part_names(part_names_, coords_.rows(), "ClrCurve");
    for (Eigen::Index i = 0; i < coords_.cols(); ++i) {
        if (std::abs(coords_.col(i).sum()) > kZeroSumTol) {
            throw DataError("ClrCurve: column " + std::to_string(i) + " sums to " +
                            std::to_string(coords_.col(i).sum()) + ", expected 0");
        }
    }
}

Eigen::VectorXd close_vector(const Eigen::VectorXd& raw, const ClosureOptions& opts) {
    if ((raw.array() < 0.0).any()) {
        throw NegativeEntry("closure: negative entry in input");
    }
    if (raw.sum() <= 0.0) {
        throw AllZeroColumn("closure: column has no positive entry");
    }
    Eigen::VectorXd v = raw;
    if (opts.pseudocount > 0.0) {
        v = (v.array() == 0.0).select(opts.pseudocount, v);
    }
    v /= v.sum();
    // Enforce the floor; the single renormalization keeps unit sums within
    // 1e-12 while floored entries stay at eps_floor exactly.
    if ((v.array() < opts.eps_floor).any()) {
        v = v.cwiseMax(opts.eps_floor);
        v /= v.sum();
        v = v.cwiseMax(opts.eps_floor);
    }
    return v;
}

FunctionalComposition closure(const TimeGrid& grid, const Eigen::MatrixXd& raw,
                              const ClosureOptions& opts,
                              std::vector<std::string> part_names, std::string id) {
    Eigen::MatrixXd m(raw.rows(), raw.cols());
    for (Eigen::Index i = 0; i < raw.cols(); ++i) {
        try {
            m.col(i) = close_vector(raw.col(i), opts);
        } catch (const AllZeroColumn&) {
            throw AllZeroColumn("closure: column " + std::to_string(i) +
                                " has no positive entry");
        }
    }
    return FunctionalComposition(grid, std::move(m), std::move(part_names), std::move(id));
}

Eigen::VectorXd geometric_mean_curve(const FunctionalComposition& f) {
    return (f.parts().array().log().colwise().mean()).exp().transpose();
}

ClrCurve clr(const FunctionalComposition& f) {
    Eigen::MatrixXd logs = f.parts().array().log();
    Eigen::RowVectorXd col_means = logs.colwise().mean();
    logs.rowwise() -= col_means;
    return ClrCurve(f.grid(), std::move(logs), f.part_names(), f.id());
}

FunctionalComposition clr_inv(const ClrCurve& u) {
    Eigen::MatrixXd coords = u.coords();
    for (Eigen::Index i = 0; i < coords.cols(); ++i) {
        const double s = coords.col(i).sum();
        if (std::abs(s) > kClrInvCenterTol) {
            throw NotCentered("clr_inv: column " + std::to_string(i) + " sums to " +
                              std::to_string(s));
        }
    }
    Eigen::RowVectorXd col_means = coords.colwise().mean();
    coords.rowwise() -= col_means;
    if ((coords.array().abs() > kExpGuard).any()) {
        throw Overflow("clr_inv: entry magnitude exceeds exp range guard");
    }
    Eigen::MatrixXd expd = coords.array().exp();
    ClosureOptions opts;
    opts.pseudocount = 0.0;  // exp is strictly positive
    return closure(u.grid(), expd, opts, u.part_names(), u.id());
}

FunctionalComposition perturb(const FunctionalComposition& f,
                              const FunctionalComposition& g) {
    require_same_grid(f.grid(), g.grid(), "perturb");
    if (f.n_parts() != g.n_parts()) {
        throw DimensionMismatch("perturb: part counts differ");
    }
    Eigen::MatrixXd prod = f.parts().cwiseProduct(g.parts());
    ClosureOptions opts;
    opts.pseudocount = 0.0;
    return closure(f.grid(), prod, opts, f.part_names(), f.id());
}

FunctionalComposition power(double alpha, const FunctionalComposition& f) {
    Eigen::MatrixXd powed = f.parts().array().pow(alpha);
    ClosureOptions opts;
    opts.pseudocount = 0.0;
    return closure(f.grid(), powed, opts, f.part_names(), f.id());
}

double inner_product(const ClrCurve& a, const ClrCurve& b) {
    require_same_grid(a.grid(), b.grid(), "inner_product");
    if (a.n_parts() != b.n_parts()) {
        throw DimensionMismatch("inner_product: part counts differ");
    }
    Eigen::RowVectorXd per_point = (a.coords().cwiseProduct(b.coords())).colwise().sum();
    return per_point * a.grid().weights();
}

double inner_product(const FunctionalComposition& f, const FunctionalComposition& g) {
    return inner_product(clr(f), clr(g));
}

double norm(const ClrCurve& u) {
    return std::sqrt(std::max(0.0, inner_product(u, u)));
}

double norm(const FunctionalComposition& f) {
    return norm(clr(f));
}

double distance(const FunctionalComposition& f, const FunctionalComposition& g) {
    return norm(perturb(f, power(-1.0, g)));
}

FunctionalComposition uniform_composition(const TimeGrid& grid, Eigen::Index n_parts,
                                          std::vector<std::string> part_names,
                                          std::string id) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n_parts, grid.size(),
                                                  1.0 / static_cast<double>(n_parts));
    return FunctionalComposition(grid, std::move(m), std::move(part_names), std::move(id));
}

}  // namespace cfda
