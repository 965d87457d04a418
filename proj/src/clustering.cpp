#include "cfda/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "cfda/rng.hpp"

namespace cfda {

namespace {

std::vector<Eigen::VectorXd> cluster_means(const Eigen::MatrixXd& points,
                                           const std::vector<int>& labels, int g) {
    std::vector<Eigen::VectorXd> means(g, Eigen::VectorXd::Zero(points.cols()));
    std::vector<int> counts(g, 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        means[labels[i] - 1] += points.row(i).transpose();
        ++counts[labels[i] - 1];
    }
    for (int c = 0; c < g; ++c) {
        if (counts[c] == 0) {
            throw EmptyCluster("cluster " + std::to_string(c + 1) + " is empty");
        }
        means[c] /= static_cast<double>(counts[c]);
    }
    return means;
}

ClusterResult finalize_partition(const SimilarityGraph& graph, std::vector<int> labels,
                                 int g, const SilhouetteOptions& sil) {
    ClusterResult res;
    res.labels = std::move(labels);
    res.g = g;
    const auto means = cluster_means(graph.points, res.labels, g);
    res.centroids.resize(g, graph.points.cols());
    for (int c = 0; c < g; ++c) res.centroids.row(c) = means[c].transpose();
    if (g >= 2) {
        const SilhouetteResult s = silhouette(graph.points, res.labels, sil);
        res.silhouette_mean = s.mean;
        res.per_point_silhouette = s.per_point;
    } else {
        res.per_point_silhouette.assign(res.labels.size(), 0.0);
    }
    return res;
}

}  // namespace

std::vector<int> canonicalize_labels(const std::vector<int>& labels) {
    std::map<int, int> remap;
    std::vector<int> out(labels.size());
    int next = 1;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(labels[i], next);
        if (inserted) ++next;
        out[i] = it->second;
    }
    return out;
}

SimilarityGraph similarity(const ScoreMatrix& scores, double sigma) {
    if (sigma <= 0.0) {
        throw ConfigError("similarity: sigma must be positive");
    }
    const Eigen::Index n = scores.n();
    SimilarityGraph graph;
    graph.sigma = sigma;
    graph.points = scores.values;
    graph.ids = scores.ids;
    graph.similarity.resize(n, n);
    const double denom = 2.0 * sigma * sigma;
    for (Eigen::Index i = 0; i < n; ++i) {
        graph.similarity(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = (scores.values.row(i) - scores.values.row(j)).squaredNorm();
            const double s = std::exp(-d2 / denom);
            graph.similarity(i, j) = s;
            graph.similarity(j, i) = s;
        }
    }
    return graph;
}

namespace detail {

Eigen::MatrixXd spectral_embedding(const SimilarityGraph& graph, int g) {
    const Eigen::Index n = graph.n();
    const Eigen::VectorXd degrees = graph.similarity.rowwise().sum();
    const Eigen::VectorXd inv_sqrt_deg = degrees.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd lap = -(inv_sqrt_deg.asDiagonal() * graph.similarity *
                            inv_sqrt_deg.asDiagonal());
    lap.diagonal().array() += 1.0;
    lap = 0.5 * (lap + lap.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("spectral_embedding: Laplacian eigen-solver failed");
    }
    Eigen::MatrixXd embedding = solver.eigenvectors().leftCols(g);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double row_norm = embedding.row(i).norm();
        if (row_norm < 1e-12) {
            throw DegenerateEmbedding("spectral_embedding: row " + std::to_string(i) +
                                      " has near-zero norm");
        }
        embedding.row(i) /= row_norm;
    }
    return embedding;
}

namespace {

Eigen::MatrixXd kmeans_pp_init(const Eigen::MatrixXd& rows, int k, Rng& rng) {
    const Eigen::Index n = rows.rows();
    Eigen::MatrixXd centers(k, rows.cols());
    centers.row(0) = rows.row(static_cast<Eigen::Index>(rng.next_below(n)));
    Eigen::VectorXd d2(n);
    for (int c = 1; c < k; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < c; ++j) {
                best = std::min(best, (rows.row(i) - centers.row(j)).squaredNorm());
            }
            d2(i) = best;
        }
        const double total = d2.sum();
        if (total <= 0.0) {
            // All remaining points coincide with chosen centers.
            centers.row(c) = rows.row(static_cast<Eigen::Index>(rng.next_below(n)));
            continue;
        }
        double u = rng.next_double() * total;
        Eigen::Index pick = n - 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            u -= d2(i);
            if (u <= 0.0) {
                pick = i;
                break;
            }
        }
        centers.row(c) = rows.row(pick);
    }
    return centers;
}

}  // namespace

KMeansRun kmeans(const Eigen::MatrixXd& rows, int k, std::uint64_t seed, int max_iter,
                 double tol, int max_restarts) {
    const Eigen::Index n = rows.rows();
    if (k < 1 || k > n) {
        throw DimensionMismatch("kmeans: k out of range");
    }
    Rng rng(seed);
    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        Eigen::MatrixXd centers = kmeans_pp_init(rows, k, rng);
        KMeansRun run;
        run.assignments.assign(n, 0);
        bool empty_cluster = false;
        double prev_objective = std::numeric_limits<double>::infinity();

        for (int iter = 0; iter < max_iter; ++iter) {
            run.iterations = iter + 1;
            double objective = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::infinity();
                int arg = 0;
                for (int c = 0; c < k; ++c) {
                    const double d2 = (rows.row(i) - centers.row(c)).squaredNorm();
                    if (d2 < best) {
                        best = d2;
                        arg = c;
                    }
                }
                run.assignments[i] = arg;
                objective += best;
            }

            Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, rows.cols());
            std::vector<int> counts(k, 0);
            for (Eigen::Index i = 0; i < n; ++i) {
                next.row(run.assignments[i]) += rows.row(i);
                ++counts[run.assignments[i]];
            }
            empty_cluster = false;
            for (int c = 0; c < k; ++c) {
                if (counts[c] == 0) {
                    empty_cluster = true;
                    break;
                }
                next.row(c) /= static_cast<double>(counts[c]);
            }
            if (empty_cluster) break;

            const double shift = (next - centers).rowwise().norm().maxCoeff();
            centers = next;
            run.objective = objective;
            if (objective > prev_objective + 1e-12) {
                throw NumericError("kmeans: objective increased between iterations");
            }
            prev_objective = objective;
            if (shift < tol) break;
        }
        if (!empty_cluster) {
            run.centers = centers;
            return run;
        }
    }
    throw EmptyCluster("kmeans: empty cluster after " + std::to_string(max_restarts) +
                       " restarts");
}

}  // namespace detail

ClusterResult spectral_cluster(const SimilarityGraph& graph, int g, std::uint64_t seed,
                               const SilhouetteOptions& sil) {
    const Eigen::Index n = graph.n();
    if (g < 2 || g > n) {
        throw ConfigError("spectral_cluster: G must be in [2, n]");
    }
    if (g == n) {
        // Degenerate case: every point its own cluster.
        std::vector<int> labels(n);
        for (Eigen::Index i = 0; i < n; ++i) labels[i] = static_cast<int>(i) + 1;
        ClusterResult res = finalize_partition(graph, labels, g, sil);
        res.silhouette_mean = 0.0;
        res.per_point_silhouette.assign(n, 0.0);
        return res;
    }
    const Eigen::MatrixXd embedding = detail::spectral_embedding(graph, g);
    const detail::KMeansRun run = detail::kmeans(embedding, g, seed);
    std::vector<int> labels(run.assignments.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = run.assignments[i] + 1;
    return finalize_partition(graph, canonicalize_labels(labels), g, sil);
}

ClusterResult majority_vote(const SimilarityGraph& graph, int g, int b,
                            std::uint64_t master_seed, const SilhouetteOptions& sil) {
    if (b < 1) {
        throw ConfigError("majority_vote: B must be >= 1");
    }
    const Eigen::Index n = graph.n();
    if (g < 2 || g > n) {
        throw ConfigError("majority_vote: G must be in [2, n]");
    }

    std::map<std::vector<int>, int> tally;
    if (g == n) {
        std::vector<int> labels(n);
        for (Eigen::Index i = 0; i < n; ++i) labels[i] = static_cast<int>(i) + 1;
        tally[labels] = b;
    } else {
        const Eigen::MatrixXd embedding = detail::spectral_embedding(graph, g);
        std::uint64_t seed_state = master_seed;
        for (int rep = 0; rep < b; ++rep) {
            const std::uint64_t seed = splitmix64(seed_state);
            const detail::KMeansRun run = detail::kmeans(embedding, g, seed);
            std::vector<int> labels(run.assignments.size());
            for (std::size_t i = 0; i < labels.size(); ++i) {
                labels[i] = run.assignments[i] + 1;
            }
            ++tally[canonicalize_labels(labels)];
        }
    }

    // std::map iterates in lexicographic order, so the first maximal entry is
    // the tie-break winner.
    const std::vector<int>* winner = nullptr;
    int best_count = 0;
    for (const auto& [labels, count] : tally) {
        if (count > best_count) {
            best_count = count;
            winner = &labels;
        }
    }
    ClusterResult res = finalize_partition(graph, *winner, g, sil);
    if (g == static_cast<int>(n)) {
        res.silhouette_mean = 0.0;
        res.per_point_silhouette.assign(n, 0.0);
    }
    res.vote_share = static_cast<double>(best_count) / static_cast<double>(b);
    return res;
}

SilhouetteResult silhouette(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                            const SilhouetteOptions& opts) {
    const Eigen::Index n = points.rows();
    if (static_cast<Eigen::Index>(labels.size()) != n) {
        throw DimensionMismatch("silhouette: labels/points size mismatch");
    }
    const int g = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
    if (g <= 1) {
        throw SingleCluster("silhouette: undefined for a single cluster");
    }
    std::vector<int> counts(g, 0);
    for (int lab : labels) {
        if (lab < 1 || lab > g) {
            throw DataError("silhouette: label out of range");
        }
        ++counts[lab - 1];
    }
    for (int c = 0; c < g; ++c) {
        if (counts[c] == 0) {
            throw EmptyCluster("silhouette: cluster " + std::to_string(c + 1) +
                               " is empty");
        }
    }

    const auto dist = [&](Eigen::Index i, Eigen::Index j) {
        const double d2 = (points.row(i) - points.row(j)).squaredNorm();
        return opts.squared ? d2 : std::sqrt(d2);
    };

    std::vector<Eigen::VectorXd> means;
    if (opts.literal) {
        means = cluster_means(points, labels, g);
    }

    SilhouetteResult res;
    res.per_point.assign(n, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int own = labels[i] - 1;
        if (counts[own] == 1) {
            res.per_point[i] = 0.0;  // singleton convention
            continue;
        }
        double a_sum = 0.0;
        std::vector<double> b_sum(g, 0.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const int other = labels[j] - 1;
            if (other == own) {
                a_sum += dist(i, j);
            } else if (!opts.literal) {
                b_sum[other] += dist(i, j);
            }
        }
        const double a = a_sum / static_cast<double>(counts[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < g; ++c) {
            if (c == own) continue;
            double candidate;
            if (opts.literal) {
                const double d2 = (points.row(i).transpose() - means[c]).squaredNorm();
                candidate = opts.squared ? d2 : std::sqrt(d2);
            } else {
                candidate = b_sum[c] / static_cast<double>(counts[c]);
            }
            b = std::min(b, candidate);
        }
        const double denom = std::max(a, b);
        res.per_point[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    double total = 0.0;
    for (double s : res.per_point) total += s;
    res.mean = total / static_cast<double>(n);
    return res;
}

SelectionTable select_g(const ScoreMatrix& scores, int g_min, int g_max, int b,
                        std::uint64_t master_seed, double sigma,
                        const SilhouetteOptions& sil) {
    const Eigen::Index n = scores.n();
    if (g_min < 2 || g_max > n - 1 || g_min > g_max) {
        throw ConfigError("select_g: G range must lie within [2, n-1]");
    }
    const SimilarityGraph graph = similarity(scores, sigma);
    SelectionTable table;
    double best_sil = -std::numeric_limits<double>::infinity();
    for (int g = g_min; g <= g_max; ++g) {
        const ClusterResult res = majority_vote(graph, g, b, master_seed, sil);
        table.rows.push_back({g, res.silhouette_mean, res.vote_share});
        if (res.silhouette_mean > best_sil) {
            best_sil = res.silhouette_mean;
            table.best_g = g;
        }
    }
    return table;
}

}  // namespace cfda
