#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cfda/csv.hpp"
#include "cfda/pipeline.hpp"
#include "synthetic_data.hpp"
#include "test_helpers.hpp"

using namespace cfda;
using namespace cfda::testing;
namespace fs = std::filesystem;

namespace {

void write_synthetic_dataset(const fs::path& dir) {
    cfda::testing::write_synthetic_dataset(dir, fs::path(CFDA_DATA_DIR));
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> snapshot_outputs(const fs::path& out_dir) {
    std::map<std::string, std::string> contents;
    for (const auto& entry : fs::directory_iterator(out_dir)) {
        contents[entry.path().filename().string()] = slurp(entry.path());
    }
    return contents;
}

int run_cli(const std::string& args) {
    const char* cli = std::getenv("CFDA_CLI");
    REQUIRE(cli != nullptr);
    const std::string command = std::string(cli) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config file parsing and validation") {
    const fs::path dir = fs::path("pipeline_cfg_test");
    write_synthetic_dataset(dir);
    PipelineConfig cfg = PipelineConfig::load(dir / "config.toml");
    CHECK(cfg.year_start == 2000);
    CHECK(cfg.k_components == 3);
    CHECK(cfg.b_runs == 40);
    CHECK(cfg.countries.size() == 6);
    CHECK_FALSE(cfg.smoothing.lambda.has_value());
    cfg.validate_for("all");

    PipelineConfig bad = cfg;
    bad.k_components = 0;
    CHECK_THROWS_AS(bad.validate_for("pca"), ConfigError);
    PipelineConfig bad2 = cfg;
    bad2.input_csv = "nope.csv";
    CHECK_THROWS_AS(bad2.validate_for("ingest"), ConfigError);
    PipelineConfig bad3 = cfg;
    CHECK_THROWS_AS(bad3.apply_key("nonsense", "1"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("full pipeline is deterministic and stage-composable") {
    const fs::path dir = fs::path("pipeline_run_test");
    write_synthetic_dataset(dir);
    const PipelineConfig cfg = PipelineConfig::load(dir / "config.toml");

    const Manifest manifest = run_pipeline(cfg);
    CHECK(manifest.artifacts.size() > 20);
    for (const auto& path : manifest.artifacts) {
        CHECK(fs::exists(path));
    }
    const auto first = snapshot_outputs(cfg.output_dir);
    CHECK(first.count("manifest.json") == 1);
    CHECK(first.count("scores_men.csv") == 1);
    CHECK(first.count("clusters_women.csv") == 1);
    CHECK(first.count("spaghetti_men.svg") == 1);

    // re-run: byte-identical artifacts
    run_pipeline(cfg);
    const auto second = snapshot_outputs(cfg.output_dir);
    REQUIRE(first.size() == second.size());
    for (const auto& [name, content] : first) {
        CHECK(second.at(name) == content);
    }

    // staged run into a fresh directory: byte-identical to `all`
    PipelineConfig staged_cfg = cfg;
    staged_cfg.output_dir = dir / "staged";
    stage_ingest(staged_cfg);
    stage_smooth(staged_cfg);
    stage_pca(staged_cfg);
    stage_cluster(staged_cfg);
    stage_plot(staged_cfg);
    const auto staged = snapshot_outputs(staged_cfg.output_dir);
    for (const auto& [name, content] : first) {
        if (name == "manifest.json") continue;  // written by `all` only
        CHECK(staged.at(name) == content);
    }

    // the FFF mask row is present and the smoothed output is complete
    CHECK(first.at("masks_men.csv").find("FFF,2005") != std::string::npos);
    std::istringstream smoothed(first.at("smoothed_compositions_men.csv"));
    const auto curves = csv::read_compositions(smoothed);
    CHECK(curves.size() == 6);
    for (const auto& f : curves) {
        CHECK(f.n_points() == 15);
    }

    // conservation file balances every row
    CHECK(first.at("conservation.csv").find(",NO") == std::string::npos);

    fs::remove_all(dir);
}

TEST_CASE("upstream artifacts are required") {
    const fs::path dir = fs::path("pipeline_missing_test");
    fs::create_directories(dir);
    PipelineConfig cfg;
    cfg.output_dir = dir / "out";
    CHECK_THROWS_AS(stage_pca(cfg), MissingUpstreamArtifact);
    CHECK_THROWS_AS(stage_plot(cfg), MissingUpstreamArtifact);

    // a present-but-empty eigenfunction file is just as unusable
    fs::create_directories(cfg.output_dir);
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 5);
    const auto f = constant_composition(grid, {2, 1, 1}).with_id("f1");
    csv::write_compositions(cfg.output_dir / "smoothed_compositions_men.csv",
                            {f, power(2.0, f).with_id("f2")});
    csv::write_compositions(cfg.output_dir / "mean_men.csv", {f.with_id("mean")});
    {
        std::ofstream os(cfg.output_dir / "eigenvalues_men.csv");
        os << "component,eigenvalue,fev,cumulative_fev\n";
    }
    {
        std::ofstream os(cfg.output_dir / "eigenfunctions_clr_men.csv");
        os << "component,part,year,value\n";
    }
    cfg.sex = SexSelection::men;
    CHECK_THROWS_AS(stage_plot(cfg), MissingUpstreamArtifact);
    fs::remove_all(dir);
}

TEST_CASE("cli: staged subcommands, exit codes and the rank-1 closed form") {
    if (std::getenv("CFDA_CLI") == nullptr) {
        MESSAGE("CFDA_CLI not set; skipping CLI integration checks");
        return;
    }
    const fs::path dir = fs::path("cli_test");
    write_synthetic_dataset(dir);
    const std::string config = (dir / "config.toml").generic_string();

    SUBCASE("all runs clean") {
        CHECK(run_cli("all --config " + config) == 0);
        CHECK(fs::exists(dir / "out" / "manifest.json"));
    }

    SUBCASE("staged runs compose") {
        for (const char* stage : {"ingest", "smooth", "pca", "cluster", "plot"}) {
            CHECK(run_cli(std::string(stage) + " --config " + config) == 0);
        }
        CHECK(fs::exists(dir / "out" / "centroids_women.svg"));
    }

    SUBCASE("config errors exit 2") {
        CHECK(run_cli("all --config " + config + " -K 0") == 2);
        CHECK(run_cli("ingest --config " + config + " --input missing.csv") == 2);
    }

    SUBCASE("missing upstream artifacts exit 3") {
        CHECK(run_cli("plot --config " + config + " --output-dir " +
                      (dir / "empty").generic_string()) == 3);
    }

    SUBCASE("cluster on a two-blob score file finds two unanimous clusters") {
        const fs::path out = dir / "blobs";
        fs::create_directories(out);
        {
            std::ofstream os(out / "scores_men.csv");
            os << "id,component,score\n";
            for (int i = 0; i < 10; ++i) {
                const double v = i < 5 ? 0.0 : 10.0;
                os << 'p' << i << ",1," << v << "\n";
                os << 'p' << i << ",2," << v << "\n";
            }
        }
        CHECK(run_cli("cluster --output-dir " + out.generic_string() +
                      " --sex men --g-min 2 --g-max 3 -B 25 --seed 5") == 0);

        std::ifstream report(out / "clusters_men.csv");
        std::string line;
        std::getline(report, line);
        std::vector<int> labels;
        while (std::getline(report, line)) {
            if (line.empty()) continue;
            labels.push_back(std::stoi(csv::split_line(line)[1]));
        }
        REQUIRE(labels.size() == 10);
        CHECK(labels == std::vector<int>{1, 1, 1, 1, 1, 2, 2, 2, 2, 2});

        std::ifstream selection(out / "selection_men.csv");
        std::getline(selection, line);
        REQUIRE(std::getline(selection, line));  // G = 2 row
        const auto fields = csv::split_line(line);
        CHECK(fields[0] == "2");
        CHECK(std::stod(fields[2]) == doctest::Approx(1.0));  // vote share
    }

    SUBCASE("pca on a hand-written two-curve file reproduces the closed form") {
        // f1 = C[2,1,1], f2 = C[1,2,1] constant on a grid spanning [0,1]
        const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 21);
        const auto f1 = constant_composition(grid, {2, 1, 1}).with_id("f1");
        const auto f2 = constant_composition(grid, {1, 2, 1}).with_id("f2");
        const fs::path out = dir / "rank1";
        fs::create_directories(out);
        csv::write_compositions(out / "smoothed_compositions_men.csv", {f1, f2});

        CHECK(run_cli("pca --output-dir " + out.generic_string() +
                      " --sex men -K 1") == 0);

        std::ifstream values(out / "eigenvalues_men.csv");
        std::string line;
        std::getline(values, line);  // header
        REQUIRE(std::getline(values, line));
        const auto fields = csv::split_line(line);
        REQUIRE(fields.size() == 4);
        CHECK(std::stod(fields[1]) ==
              doctest::Approx(kLn2 * kLn2 / 2.0).epsilon(1e-10));
    }

    fs::remove_all(dir);
}
