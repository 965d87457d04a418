#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here is deliberately written from the definitions (not via the library
// code paths under test) so the comparisons stay meaningful.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cfda/composition.hpp"
#include "cfda/rng.hpp"

namespace cfda::testing {

inline constexpr double kLn2 = 0.69314718055994530941723212145818;

/// Random strictly positive composition via exp of gaussians + closure.
inline FunctionalComposition random_composition(Rng& rng, const TimeGrid& grid,
                                                Eigen::Index d, double spread = 1.0) {
    Eigen::MatrixXd raw(d, grid.size());
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < grid.size(); ++c) {
            raw(r, c) = std::exp(spread * rng.next_normal());
        }
    }
    ClosureOptions opts;
    opts.pseudocount = 0.0;
    return closure(grid, raw, opts);
}

/// Constant-in-time composition from one column of part values.
inline FunctionalComposition constant_composition(const TimeGrid& grid,
                                                  const std::vector<double>& parts) {
    Eigen::MatrixXd raw(static_cast<Eigen::Index>(parts.size()), grid.size());
    for (std::size_t r = 0; r < parts.size(); ++r) {
        raw.row(static_cast<Eigen::Index>(r)).setConstant(parts[r]);
    }
    return closure(grid, raw, ClosureOptions{0.0, 1e-12});
}

// ---------------------------------------------------------------------------
// Quadrature oracle: inner product recomputed on a 10x refined grid with
// piecewise-linear interpolation of the clr coordinates.
// ---------------------------------------------------------------------------

inline double refined_inner_product(const ClrCurve& a, const ClrCurve& b, int factor) {
    const Eigen::VectorXd& x = a.grid().points();
    const Eigen::Index t = x.size();
    std::vector<double> fine;
    for (Eigen::Index i = 0; i + 1 < t; ++i) {
        for (int s = 0; s < factor; ++s) {
            fine.push_back(x(i) + (x(i + 1) - x(i)) * s / factor);
        }
    }
    fine.push_back(x(t - 1));

    const auto interp = [&](const Eigen::MatrixXd& m, Eigen::Index row, double xx) {
        Eigen::Index lo = 0;
        while (lo + 2 < t && x(lo + 1) <= xx) ++lo;
        const double w = (xx - x(lo)) / (x(lo + 1) - x(lo));
        return (1.0 - w) * m(row, lo) + w * m(row, lo + 1);
    };

    // trapezoid on the refined grid
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < fine.size(); ++i) {
        const double h = fine[i + 1] - fine[i];
        double f_lo = 0.0, f_hi = 0.0;
        for (Eigen::Index rr = 0; rr < a.n_parts(); ++rr) {
            f_lo += interp(a.coords(), rr, fine[i]) * interp(b.coords(), rr, fine[i]);
            f_hi += interp(a.coords(), rr, fine[i + 1]) *
                    interp(b.coords(), rr, fine[i + 1]);
        }
        total += 0.5 * h * (f_lo + f_hi);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Independent symmetric eigen-solver: cyclic Jacobi rotations.
// ---------------------------------------------------------------------------

inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int sweeps = 100,
                                              double tol = 1e-14) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                off += a(p, q) * a(p, q);
            }
        }
        if (off < tol * tol) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double t_val =
                    sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t_val * t_val + 1.0);
                const double s = t_val * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> vals(n);
    for (Eigen::Index i = 0; i < n; ++i) vals[i] = a(i, i);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    return vals;
}

// ---------------------------------------------------------------------------
// Planted Karhunen-Loeve model: mean + two orthonormal clr directions with
// known score variances.
// ---------------------------------------------------------------------------

struct PlantedModel {
    TimeGrid grid;
    Eigen::MatrixXd mean_clr;          // D x T
    std::vector<Eigen::MatrixXd> phi;  // orthonormal under quadrature, zero col sums
    std::vector<double> variances;
};

/// Quadrature inner product of two D x T coefficient matrices.
inline double coeff_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          const TimeGrid& grid) {
    return (a.cwiseProduct(b)).colwise().sum() * grid.weights();
}

inline PlantedModel make_planted_model(const TimeGrid& grid, Eigen::Index d,
                                       std::vector<double> variances) {
    PlantedModel model{grid, Eigen::MatrixXd::Zero(d, grid.size()), {}, variances};
    const Eigen::VectorXd& x = grid.points();
    const double x0 = x(0), x1 = x(x.size() - 1);

    // Smooth seed patterns, zero column sums by construction.
    std::vector<Eigen::MatrixXd> seeds;
    for (std::size_t k = 0; k < variances.size(); ++k) {
        Eigen::MatrixXd seed = Eigen::MatrixXd::Zero(d, grid.size());
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            const double u = (x(i) - x0) / (x1 - x0);
            for (Eigen::Index r = 0; r < d; ++r) {
                const double phase =
                    static_cast<double>(r + 1) + 0.7 * static_cast<double>(k);
                seed(r, i) = std::sin((k + 1) * 3.14159265358979 * u + phase) +
                             0.3 * std::cos(phase * u);
            }
            seed.col(i).array() -= seed.col(i).mean();
        }
        seeds.push_back(std::move(seed));
    }
    // Gram-Schmidt under the quadrature inner product.
    for (auto& seed : seeds) {
        for (const auto& prev : model.phi) {
            seed -= coeff_inner(seed, prev, grid) * prev;
        }
        seed /= std::sqrt(coeff_inner(seed, seed, grid));
        model.phi.push_back(seed);
    }
    // A gentle mean keeps compositions away from the simplex boundary.
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double u = (x(i) - x0) / (x1 - x0);
        for (Eigen::Index r = 0; r < d; ++r) {
            model.mean_clr(r, i) = 0.4 * std::sin(u + r);
        }
        model.mean_clr.col(i).array() -= model.mean_clr.col(i).mean();
    }
    return model;
}

/// Draws n compositions with gaussian scores (variances as planted).
inline std::vector<FunctionalComposition> sample_planted(const PlantedModel& model,
                                                         Eigen::Index n, Rng& rng,
                                                         Eigen::MatrixXd* out_scores =
                                                             nullptr) {
    std::vector<FunctionalComposition> sample;
    Eigen::MatrixXd scores(n, static_cast<Eigen::Index>(model.phi.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::MatrixXd coords = model.mean_clr;
        for (std::size_t k = 0; k < model.phi.size(); ++k) {
            const double xi = std::sqrt(model.variances[k]) * rng.next_normal();
            scores(i, static_cast<Eigen::Index>(k)) = xi;
            coords += xi * model.phi[k];
        }
        ClrCurve curve(model.grid, std::move(coords), {},
                       "obs" + std::to_string(i + 1));
        sample.push_back(clr_inv(curve));
    }
    if (out_scores) *out_scores = scores;
    return sample;
}

// ---------------------------------------------------------------------------
// Clustering oracles: exhaustive partitions and a from-the-definition
// silhouette.
// ---------------------------------------------------------------------------

/// All partitions of n items into exactly g non-empty clusters, emitted as
/// canonical restricted-growth label vectors (1-based).
inline std::vector<std::vector<int>> enumerate_partitions(int n, int g) {
    std::vector<std::vector<int>> out;
    std::vector<int> labels(n, 0);
    const auto recurse = [&](auto&& self, int i, int used) -> void {
        if (i == n) {
            if (used == g) out.push_back(labels);
            return;
        }
        for (int c = 1; c <= std::min(used + 1, g); ++c) {
            labels[i] = c;
            self(self, i + 1, std::max(used, c));
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

/// Silhouette mean recomputed directly from the formula (squared distances).
inline double brute_silhouette_mean(const Eigen::MatrixXd& points,
                                    const std::vector<int>& labels) {
    const int n = static_cast<int>(points.rows());
    const int g = *std::max_element(labels.begin(), labels.end());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> sums(g, 0.0);
        std::vector<int> counts(g, 0);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[labels[j] - 1] += (points.row(i) - points.row(j)).squaredNorm();
            ++counts[labels[j] - 1];
        }
        const int own = labels[i] - 1;
        // counts[own] excludes i itself, so 0 means a singleton cluster
        if (counts[own] == 0) continue;  // singleton -> contributes 0
        const double a = sums[own] / counts[own];
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < g; ++c) {
            if (c == own || counts[c] == 0) continue;
            b = std::min(b, sums[c] / counts[c]);
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / n;
}

/// k-means objective of a partition: squared distances to cluster means.
inline double partition_objective(const Eigen::MatrixXd& rows,
                                  const std::vector<int>& labels) {
    const int g = *std::max_element(labels.begin(), labels.end());
    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(g, rows.cols());
    std::vector<int> counts(g, 0);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        means.row(labels[i] - 1) += rows.row(i);
        ++counts[labels[i] - 1];
    }
    for (int c = 0; c < g; ++c) {
        means.row(c) /= std::max(1, counts[c]);
    }
    double objective = 0.0;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        objective += (rows.row(i) - means.row(labels[i] - 1)).squaredNorm();
    }
    return objective;
}

}  // namespace cfda::testing
