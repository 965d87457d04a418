#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cfda/cfpca.hpp"

namespace cfda {

/// Fully connected Gaussian-kernel similarity graph over score vectors.
/// Keeps the score rows that built it so downstream steps can map centroids
/// and silhouettes back to score space.
struct SimilarityGraph {
    Eigen::MatrixXd similarity;  // n x n, symmetric, diagonal 1
    Eigen::MatrixXd points;      // n x K original score vectors
    std::vector<std::string> ids;
    double sigma = 1.0;

    Eigen::Index n() const { return similarity.rows(); }
};

struct SilhouetteOptions {
    /// Squared Euclidean distances; unsquared is the textbook variant,
    /// exposed for sensitivity analysis.
    bool squared = true;
    /// Alternative b(i): mean squared distance to the candidate cluster's
    /// representative instead of to its members.
    bool literal = false;
};

struct ClusterResult {
    std::vector<int> labels;      // 1-based, canonicalized
    Eigen::MatrixXd centroids;    // G x K means of score vectors per cluster
    int g = 0;
    double silhouette_mean = 0.0;
    std::vector<double> per_point_silhouette;
    double vote_share = 1.0;      // fraction of runs agreeing with this partition
};

struct SelectionRow {
    int g = 0;
    double silhouette_mean = 0.0;
    double vote_share = 0.0;
};

struct SelectionTable {
    std::vector<SelectionRow> rows;
    int best_g = 0;
};

/// s_ij = exp(-||xi_i - xi_j||^2 / (2 sigma^2)), diagonal exactly 1.
SimilarityGraph similarity(const ScoreMatrix& scores, double sigma = 1.0);

/// Normalized-Laplacian spectral clustering with k-means (k-means++ init from
/// the seed) on the row-normalized G-dimensional embedding. G = n is the
/// degenerate every-point-its-own-cluster case.
ClusterResult spectral_cluster(const SimilarityGraph& graph, int g, std::uint64_t seed,
                               const SilhouetteOptions& sil = {});

/// Modal partition over B seeded runs; ties broken by the lexicographically
/// smallest canonical label vector.
ClusterResult majority_vote(const SimilarityGraph& graph, int g, int b,
                            std::uint64_t master_seed,
                            const SilhouetteOptions& sil = {});

struct SilhouetteResult {
    double mean = 0.0;
    std::vector<double> per_point;
};

/// Average silhouette of a labeled score set. Singleton clusters score 0.
SilhouetteResult silhouette(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                            const SilhouetteOptions& opts = {});

/// Majority-vote clustering for every G in [g_min, g_max]; returns the table
/// and the silhouette-maximizing G (ties -> smallest).
SelectionTable select_g(const ScoreMatrix& scores, int g_min, int g_max, int b,
                        std::uint64_t master_seed, double sigma = 1.0,
                        const SilhouetteOptions& sil = {});

/// Relabels so cluster 1 is the cluster of the lowest-index point, cluster 2
/// the cluster of the lowest-index point not in cluster 1, and so on.
std::vector<int> canonicalize_labels(const std::vector<int>& labels);

namespace detail {

struct KMeansRun {
    std::vector<int> assignments;  // 0-based
    Eigen::MatrixXd centers;
    double objective = 0.0;
    int iterations = 0;
};

/// Lloyd iterations with k-means++ seeding; retries on empty clusters.
KMeansRun kmeans(const Eigen::MatrixXd& rows, int k, std::uint64_t seed,
                 int max_iter = 100, double tol = 1e-9, int max_restarts = 20);

/// Row-normalized matrix of the G eigenvectors of the smallest eigenvalues of
/// the symmetric normalized Laplacian.
Eigen::MatrixXd spectral_embedding(const SimilarityGraph& graph, int g);

}  // namespace detail

}  // namespace cfda
