#include "cfda/bspline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cfda/errors.hpp"

namespace cfda {

namespace {

// 4-point Gauss-Legendre on [-1, 1]; exact through degree 7.
constexpr std::array<double, 4> kGaussNodes = {
    -0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
    0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {
    0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
    0.3478548451374538};

}  // namespace

BSplineBasis::BSplineBasis(double a, double b, Eigen::Index n_basis)
    : a_(a), b_(b), n_basis_(n_basis) {
    if (!(b > a)) {
        throw DataError("BSplineBasis: interval must have positive length");
    }
    if (n_basis < kOrder) {
        throw DimensionMismatch("BSplineBasis: basis dimension must be >= 4, got " +
                                std::to_string(n_basis));
    }
    const Eigen::Index n_interior = n_basis - kOrder;
    knots_.resize(n_basis + kOrder);
    for (int i = 0; i < kOrder; ++i) {
        knots_(i) = a;
        knots_(n_basis + kOrder - 1 - i) = b;
    }
    for (Eigen::Index j = 0; j < n_interior; ++j) {
        knots_(kOrder + j) =
            a + (b - a) * static_cast<double>(j + 1) / static_cast<double>(n_interior + 1);
    }
}

Eigen::VectorXd BSplineBasis::evaluate(double x, int derivative) const {
    x = std::clamp(x, a_, b_);
    const Eigen::Index n_knots = knots_.size();

    // Cox-de Boor value table: table[ord-1][i] = B_{i,ord}(x) for every
    // basis index i valid at that order.
    std::vector<Eigen::VectorXd> table(kOrder);
    table[0] = Eigen::VectorXd::Zero(n_knots - 1);
    for (Eigen::Index i = 0; i + 1 < n_knots; ++i) {
        const bool in_span = knots_(i) <= x && x < knots_(i + 1);
        const bool closes_right = x == b_ && knots_(i) < knots_(i + 1) && knots_(i + 1) == b_;
        table[0](i) = (in_span || closes_right) ? 1.0 : 0.0;
    }
    for (int ord = 2; ord <= kOrder; ++ord) {
        table[ord - 1] = Eigen::VectorXd::Zero(n_knots - ord);
        for (Eigen::Index i = 0; i + ord < n_knots; ++i) {
            const double d1 = knots_(i + ord - 1) - knots_(i);
            const double d2 = knots_(i + ord) - knots_(i + 1);
            double acc = 0.0;
            if (d1 > 0.0) acc += (x - knots_(i)) / d1 * table[ord - 2](i);
            if (d2 > 0.0) acc += (knots_(i + ord) - x) / d2 * table[ord - 2](i + 1);
            table[ord - 1](i) = acc;
        }
    }

    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_basis_);
    if (derivative == 0) {
        out = table[kOrder - 1].head(n_basis_);
        return out;
    }
    if (derivative >= kOrder) {
        return out;  // cubic splines vanish beyond the 3rd derivative
    }

    // d-th derivative of B_{i,kOrder} expands over order (kOrder - d) splines:
    // repeatedly apply B'_{i,k} = (k-1) [ B_{i,k-1}/(t_{i+k-1}-t_i)
    //                                   - B_{i+1,k-1}/(t_{i+k}-t_{i+1}) ].
    for (Eigen::Index idx = 0; idx < n_basis_; ++idx) {
        std::array<double, kOrder> coef{};
        coef[0] = 1.0;
        int width = 1;
        for (int d = 0; d < derivative; ++d) {
            const int k = kOrder - d;
            std::array<double, kOrder> next{};
            for (int c = 0; c < width; ++c) {
                const Eigen::Index i = idx + c;
                const double den_lo = knots_(i + k - 1) - knots_(i);
                const double den_hi = knots_(i + k) - knots_(i + 1);
                if (den_lo > 0.0) next[c] += coef[c] * (k - 1) / den_lo;
                if (den_hi > 0.0) next[c + 1] -= coef[c] * (k - 1) / den_hi;
            }
            coef = next;
            ++width;
        }
        const int k = kOrder - derivative;
        double total = 0.0;
        for (int c = 0; c < width; ++c) {
            total += coef[c] * table[k - 1](idx + c);
        }
        out(idx) = total;
    }
    return out;
}

Eigen::MatrixXd BSplineBasis::design_matrix(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd design(x.size(), n_basis_);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        design.row(i) = evaluate(x(i)).transpose();
    }
    return design;
}

Eigen::MatrixXd BSplineBasis::penalty_matrix(int derivative_order) const {
    if (derivative_order < 1 || derivative_order > 3) {
        throw DataError("BSplineBasis: penalty order must be in {1, 2, 3}");
    }
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n_basis_, n_basis_);
    for (Eigen::Index s = kOrder - 1; s + 1 <= knots_.size() - kOrder; ++s) {
        const double lo = knots_(s), hi = knots_(s + 1);
        if (hi <= lo) continue;
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            const double x = mid + half * kGaussNodes[q];
            const Eigen::VectorXd deriv = evaluate(x, derivative_order);
            // outer product first, scalar after: keeps omega exactly symmetric
            const Eigen::MatrixXd outer = deriv * deriv.transpose();
            omega.noalias() += (half * kGaussWeights[q]) * outer;
        }
    }
    return omega;
}

}  // namespace cfda
