#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cfda/ingest.hpp"
#include "cfda/smoothing.hpp"

namespace cfda {

enum class SexSelection { men, women, both };

/// Everything the pipeline stages need, loadable from a `key = value` config
/// file with CLI overrides applied on top.
struct PipelineConfig {
    std::filesystem::path input_csv;
    std::filesystem::path column_map;
    std::filesystem::path cause_map;
    std::filesystem::path adjustments;  // optional; empty = no adjustments
    std::filesystem::path output_dir = "out";

    int year_start = 1959;
    int year_end = 2015;
    SexSelection sex = SexSelection::both;

    SmoothingConfig smoothing;
    double ridge = 1e-3;
    double pseudocount = 0.5;

    Eigen::Index k_components = 4;
    double sigma = 1.0;
    int b_runs = 1000;
    int g_min = 2;
    int g_max = 8;
    std::uint64_t master_seed = 20150101;
    bool silhouette_literal = false;
    bool silhouette_squared = true;
    std::optional<int> g_override_men;
    std::optional<int> g_override_women;

    /// Country filter; defaults to the 22-country study set.
    std::vector<std::string> countries;

    PipelineConfig();

    static PipelineConfig load(const std::filesystem::path& path);
    void apply_key(const std::string& key, const std::string& value);

    /// Existence and range checks; throws ConfigError.
    void validate_for(const std::string& stage) const;

    std::vector<Sex> selected_sexes() const;
    TimeGrid grid() const;
};

std::string sex_suffix(Sex sex);  // "men" / "women"

/// Artifact paths produced by a run, in write order.
struct Manifest {
    std::vector<std::filesystem::path> artifacts;
};

Manifest stage_ingest(const PipelineConfig& cfg);
Manifest stage_smooth(const PipelineConfig& cfg);
Manifest stage_pca(const PipelineConfig& cfg);
Manifest stage_cluster(const PipelineConfig& cfg);
Manifest stage_plot(const PipelineConfig& cfg);

/// ingest -> smooth -> pca -> cluster -> plot, then manifest.json. Each stage
/// consumes the previous stage's CSV artifacts, so a full run is byte-identical
/// to running the stages one by one.
Manifest run_pipeline(const PipelineConfig& cfg);

}  // namespace cfda
