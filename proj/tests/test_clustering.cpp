#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "cfda/clustering.hpp"
#include "test_helpers.hpp"

using namespace cfda;
using namespace cfda::testing;

namespace {

ScoreMatrix make_scores(const Eigen::MatrixXd& values) {
    ScoreMatrix sm;
    sm.values = values;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        sm.ids.push_back("p" + std::to_string(i + 1));
    }
    for (Eigen::Index k = 0; k < values.cols(); ++k) {
        sm.component_labels.push_back("PC" + std::to_string(k + 1));
    }
    return sm;
}

/// Five copies of (0,0) and five of (10,10).
Eigen::MatrixXd two_blobs_identical() {
    Eigen::MatrixXd pts(10, 2);
    for (int i = 0; i < 5; ++i) pts.row(i) << 0.0, 0.0;
    for (int i = 5; i < 10; ++i) pts.row(i) << 10.0, 10.0;
    return pts;
}

// Centers 4 apart: clearly separated for the silhouette yet numerically
// connected under the sigma = 1 kernel (exp(-8) off-blob similarity), so the
// Laplacian null space stays one-dimensional.
Eigen::MatrixXd three_blobs() {
    Eigen::MatrixXd pts(9, 2);
    const double centers[3][2] = {{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}};
    Rng rng(31);
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 3; ++i) {
            pts.row(3 * c + i) << centers[c][0] + 0.3 * rng.next_normal(),
                centers[c][1] + 0.3 * rng.next_normal();
        }
    }
    return pts;
}

}  // namespace

TEST_CASE("similarity kernel closed forms") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 1, 1, 0, 0;
    const auto graph = similarity(make_scores(pts), 1.0);
    CHECK(graph.similarity(0, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(graph.similarity(0, 0) == 1.0);
    // ||xi_i - xi_j|| = sqrt(2) with sigma = 1 -> exp(-1)
    CHECK(graph.similarity(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK((graph.similarity - graph.similarity.transpose()).cwiseAbs().maxCoeff() <
          1e-15);

    // doubling sigma strictly increases every off-diagonal entry
    const auto wider = similarity(make_scores(pts), 2.0);
    CHECK(wider.similarity(0, 1) > graph.similarity(0, 1));

    CHECK_THROWS_AS(similarity(make_scores(pts), 0.0), ConfigError);
}

TEST_CASE("laplacian embedding invariants") {
    Eigen::MatrixXd pts = three_blobs();
    const auto graph = similarity(make_scores(pts), 1.0);

    // embedding rows are unit-norm
    const Eigen::MatrixXd embedding = detail::spectral_embedding(graph, 3);
    for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
        CHECK(embedding.row(i).norm() == doctest::Approx(1.0).epsilon(1e-10));
    }

    // smallest Laplacian eigenvalue is 0 with eigenvector prop. to D^{1/2} 1
    const Eigen::VectorXd deg = graph.similarity.rowwise().sum();
    const Eigen::VectorXd isd = deg.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd lap =
        -(isd.asDiagonal() * graph.similarity * isd.asDiagonal());
    lap.diagonal().array() += 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    CHECK(solver.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-10));
    Eigen::VectorXd expected = deg.cwiseSqrt();
    expected /= expected.norm();
    Eigen::VectorXd first = solver.eigenvectors().col(0);
    if (first.dot(expected) < 0) first = -first;
    CHECK((first - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("spectral clustering separates two identical-point groups") {
    const auto graph = similarity(make_scores(two_blobs_identical()), 1.0);
    const auto result = spectral_cluster(graph, 2, 7);
    for (int i = 0; i < 5; ++i) {
        CHECK(result.labels[i] == result.labels[0]);
        CHECK(result.labels[5 + i] == result.labels[5]);
    }
    CHECK(result.labels[0] != result.labels[5]);
    CHECK(result.labels[0] == 1);  // canonical: first point's cluster is 1
    CHECK(result.silhouette_mean == doctest::Approx(1.0).epsilon(1e-12));

    // brute force over the 2-partition space confirms this split is optimal
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_labels;
    for (const auto& labels : enumerate_partitions(10, 2)) {
        const double objective = partition_objective(two_blobs_identical(), labels);
        if (objective < best) {
            best = objective;
            best_labels = labels;
        }
    }
    CHECK(best_labels == result.labels);

    // centroids sit on the blob centers, in score space
    CHECK(result.centroids(0, 0) == doctest::Approx(0.0));
    CHECK(result.centroids(1, 0) == doctest::Approx(10.0));
}

TEST_CASE("G = n degenerate case: singletons with zero silhouette") {
    Eigen::MatrixXd pts(4, 2);
    pts << 0, 0, 1, 0, 2, 0, 3, 0;
    const auto graph = similarity(make_scores(pts), 1.0);
    const auto result = spectral_cluster(graph, 4, 5);
    CHECK(result.labels == std::vector<int>{1, 2, 3, 4});
    CHECK(result.silhouette_mean == 0.0);
    for (double s : result.per_point_silhouette) CHECK(s == 0.0);
}

TEST_CASE("permuting point order yields the same partition after canonicalization") {
    const Eigen::MatrixXd pts = three_blobs();
    const auto graph = similarity(make_scores(pts), 1.0);
    const auto base = majority_vote(graph, 3, 25, 99);

    std::vector<int> perm = {4, 7, 0, 2, 8, 1, 5, 3, 6};
    Eigen::MatrixXd shuffled(pts.rows(), pts.cols());
    for (int i = 0; i < 9; ++i) shuffled.row(i) = pts.row(perm[i]);
    const auto shuffled_result =
        majority_vote(similarity(make_scores(shuffled), 1.0), 3, 25, 99);

    // same grouping structure: points in one cluster stay together
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
            const bool together = base.labels[perm[i]] == base.labels[perm[j]];
            const bool together_shuffled =
                shuffled_result.labels[i] == shuffled_result.labels[j];
            CHECK(together == together_shuffled);
        }
    }
}

TEST_CASE("majority vote determinism and unanimity on separated data") {
    const auto graph = similarity(make_scores(two_blobs_identical()), 1.0);

    // B = 1 equals a single run with the first derived seed
    std::uint64_t state = 4321;
    const auto once = majority_vote(graph, 2, 1, 4321);
    const auto single = spectral_cluster(graph, 2, splitmix64(state));
    CHECK(once.labels == single.labels);

    const auto voted = majority_vote(graph, 2, 50, 4321);
    CHECK(voted.vote_share == doctest::Approx(1.0));

    const auto again = majority_vote(graph, 2, 50, 4321);
    CHECK(voted.labels == again.labels);
    CHECK(voted.silhouette_mean == again.silhouette_mean);
    CHECK((voted.centroids - again.centroids).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("silhouette hand example with squared distances") {
    Eigen::MatrixXd pts(4, 1);
    pts << 0.0, 0.1, 10.0, 10.1;
    const std::vector<int> labels = {1, 1, 2, 2};
    const auto res = silhouette(pts, labels);
    const double a = 0.01;
    const double b = (100.0 + 102.01) / 2.0;
    CHECK(res.per_point[0] == doctest::Approx((b - a) / b).epsilon(1e-12));
    CHECK(res.per_point[0] == doctest::Approx(0.99990).epsilon(1e-4));

    // two singleton clusters -> mean 0
    Eigen::MatrixXd two(2, 1);
    two << 0.0, 5.0;
    const auto singletons = silhouette(two, {1, 2});
    CHECK(singletons.mean == 0.0);

    // label permutation leaves values unchanged
    const auto swapped = silhouette(pts, {2, 2, 1, 1});
    CHECK(swapped.mean == doctest::Approx(res.mean).epsilon(1e-15));

    CHECK_THROWS_AS(silhouette(pts, {1, 1, 1, 1}), SingleCluster);
}

TEST_CASE("silhouette matches the brute-force definition on random labelings") {
    Rng rng(606);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 6 + static_cast<int>(rng.next_below(4));
        Eigen::MatrixXd pts(n, 2);
        for (int i = 0; i < n; ++i) {
            pts.row(i) << rng.next_normal(), rng.next_normal();
        }
        std::vector<int> labels(n);
        const int g = 2 + static_cast<int>(rng.next_below(2));
        for (int i = 0; i < n; ++i) {
            labels[i] = 1 + static_cast<int>(rng.next_below(g));
        }
        // ensure every cluster non-empty
        for (int c = 1; c <= g; ++c) labels[c - 1] = c;
        const auto res = silhouette(pts, canonicalize_labels(labels));
        const double oracle =
            brute_silhouette_mean(pts, canonicalize_labels(labels));
        CHECK(res.mean == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(res.mean >= -1.0);
        CHECK(res.mean <= 1.0);
    }
}

TEST_CASE("unsquared and literal silhouette variants") {
    Eigen::MatrixXd pts(4, 1);
    pts << 0.0, 0.1, 10.0, 10.1;
    const std::vector<int> labels = {1, 1, 2, 2};

    SilhouetteOptions unsquared;
    unsquared.squared = false;
    const auto res = silhouette(pts, labels, unsquared);
    const double a = 0.1;
    const double b = (10.0 + 10.1) / 2.0;
    CHECK(res.per_point[0] == doctest::Approx((b - a) / b).epsilon(1e-12));

    SilhouetteOptions literal;
    literal.literal = true;
    const auto lit = silhouette(pts, labels, literal);
    const double a_sq = 0.01;                 // squared within-cluster distance
    const double b_lit = std::pow(10.05, 2);  // squared distance to the centroid
    CHECK(lit.per_point[0] == doctest::Approx((b_lit - a_sq) / b_lit).epsilon(1e-9));
}

TEST_CASE("small-instance oracle: majority partition attains the k-means optimum") {
    Rng rng(808);
    for (int rep = 0; rep < 6; ++rep) {
        const int n = 8 + static_cast<int>(rng.next_below(3));  // 8..10
        Eigen::MatrixXd pts(n, 2);
        for (int i = 0; i < n; ++i) {
            pts.row(i) << rng.next_normal() + (i % 2 ? 4.0 : 0.0),
                rng.next_normal() + (i % 3 ? 0.0 : 3.0);
        }
        const auto graph = similarity(make_scores(pts), 1.0);
        for (int g = 2; g <= 3; ++g) {
            const auto result = majority_vote(graph, g, 60, 1000 + rep);
            const Eigen::MatrixXd embedding = detail::spectral_embedding(graph, g);
            double optimum = std::numeric_limits<double>::infinity();
            for (const auto& labels : enumerate_partitions(n, g)) {
                optimum = std::min(optimum, partition_objective(embedding, labels));
            }
            const double achieved = partition_objective(embedding, result.labels);
            CHECK(achieved <= optimum + 1e-9);
        }
    }
}

TEST_CASE("select_g picks three for three well-separated blobs") {
    const auto sm = make_scores(three_blobs());
    const auto table = select_g(sm, 2, 6, 30, 515);
    CHECK(table.best_g == 3);
    REQUIRE(table.rows.size() == 5);

    // brute-force over all partitions confirms G = 3 maximizes the silhouette
    double best_over_partitions = -2.0;
    int best_g = 0;
    for (int g = 2; g <= 6; ++g) {
        for (const auto& labels : enumerate_partitions(9, g)) {
            const double s = brute_silhouette_mean(three_blobs(), labels);
            if (s > best_over_partitions) {
                best_over_partitions = s;
                best_g = g;
            }
        }
    }
    CHECK(best_g == 3);

    // single-G range returns that row
    const auto only = select_g(sm, 2, 2, 10, 515);
    CHECK(only.rows.size() == 1);
    CHECK(only.best_g == 2);

    CHECK_THROWS_AS(select_g(sm, 1, 4, 10, 515), ConfigError);
    CHECK_THROWS_AS(select_g(sm, 2, 9, 10, 515), ConfigError);
}

TEST_CASE("selection table is invariant to a constant shift of the scores") {
    const Eigen::MatrixXd pts = three_blobs();
    const auto base = select_g(make_scores(pts), 2, 5, 20, 99);
    Eigen::MatrixXd shifted = pts;
    shifted.col(0).array() += 123.0;
    shifted.col(1).array() -= 45.0;
    const auto moved = select_g(make_scores(shifted), 2, 5, 20, 99);
    REQUIRE(base.rows.size() == moved.rows.size());
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
        CHECK(base.rows[i].silhouette_mean ==
              doctest::Approx(moved.rows[i].silhouette_mean).epsilon(1e-9));
        CHECK(base.rows[i].vote_share ==
              doctest::Approx(moved.rows[i].vote_share).epsilon(1e-12));
    }
    CHECK(base.best_g == moved.best_g);
}

TEST_CASE("canonicalization is idempotent and order-consistent") {
    const std::vector<int> raw = {3, 3, 1, 2, 1, 3};
    const auto canon = canonicalize_labels(raw);
    CHECK(canon == std::vector<int>{1, 1, 2, 3, 2, 1});
    CHECK(canonicalize_labels(canon) == canon);
}

TEST_CASE("kmeans objective is non-increasing and restarts handle empty clusters") {
    Rng rng(909);
    Eigen::MatrixXd rows(8, 2);
    for (int i = 0; i < 8; ++i) rows.row(i) << rng.next_normal(), rng.next_normal();
    const auto run = detail::kmeans(rows, 3, 12345);
    CHECK(run.centers.rows() == 3);
    CHECK(run.objective >= 0.0);
    // k = n works when all points are distinct
    const auto full = detail::kmeans(rows, 8, 5);
    std::vector<int> sorted = full.assignments;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 8; ++i) CHECK(sorted[i] == i);
}
