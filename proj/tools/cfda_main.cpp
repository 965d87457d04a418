#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cfda/errors.hpp"
#include "cfda/pipeline.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string input, column_map, cause_map, adjustments, output_dir;
    std::string sex, lambda, countries;
    int year_start = -1, year_end = -1;
    int basis_dimension = -1, penalty_order = -1;
    int k = -1, b = -1, g_min = -1, g_max = -1, g_men = -1, g_women = -1;
    double sigma = -1.0, ridge = -1.0, pseudocount = -1.0;
    long long master_seed = -1;
    bool silhouette_literal = false, silhouette_unsquared = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Pipeline config file (key = value)");
    cmd->add_option("--input", opts.input, "Input death-count CSV");
    cmd->add_option("--column-map", opts.column_map, "Column-mapping sidecar");
    cmd->add_option("--cause-map", opts.cause_map, "ICD cause-map CSV");
    cmd->add_option("--adjustments", opts.adjustments, "Reclassification rules CSV");
    cmd->add_option("--output-dir", opts.output_dir, "Artifact directory");
    cmd->add_option("--sex", opts.sex, "men | women | both");
    cmd->add_option("--year-start", opts.year_start, "First grid year");
    cmd->add_option("--year-end", opts.year_end, "Last grid year");
    cmd->add_option("--basis-dimension", opts.basis_dimension,
                    "B-spline basis dimension");
    cmd->add_option("--penalty-order", opts.penalty_order,
                    "Derivative order of the roughness penalty");
    cmd->add_option("--lambda", opts.lambda, "Smoothing parameter or 'gcv'");
    cmd->add_option("--ridge", opts.ridge, "Imputation ridge multiplier");
    cmd->add_option("--pseudocount", opts.pseudocount, "Zero-replacement pseudocount");
    cmd->add_option("-K,--components", opts.k, "Retained components");
    cmd->add_option("--sigma", opts.sigma, "Gaussian similarity width");
    cmd->add_option("-B,--runs", opts.b, "Clustering repetitions for majority vote");
    cmd->add_option("--g-min", opts.g_min, "Smallest cluster count to try");
    cmd->add_option("--g-max", opts.g_max, "Largest cluster count to try");
    cmd->add_option("--g-men", opts.g_men, "Override chosen G for men");
    cmd->add_option("--g-women", opts.g_women, "Override chosen G for women");
    cmd->add_option("--seed", opts.master_seed, "Master seed");
    cmd->add_option("--countries", opts.countries, "Comma-separated country filter");
    cmd->add_flag("--silhouette-literal", opts.silhouette_literal,
                  "Use the literal centroid-based b(i)");
    cmd->add_flag("--silhouette-unsquared", opts.silhouette_unsquared,
                  "Use plain Euclidean distances in the silhouette");
}

cfda::PipelineConfig make_config(const CliOptions& opts) {
    cfda::PipelineConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = cfda::PipelineConfig::load(opts.config_path);
    }
    const auto set = [&cfg](const std::string& key, const std::string& value) {
        cfg.apply_key(key, value);
    };
    if (!opts.input.empty()) set("input", opts.input);
    if (!opts.column_map.empty()) set("column_map", opts.column_map);
    if (!opts.cause_map.empty()) set("cause_map", opts.cause_map);
    if (!opts.adjustments.empty()) set("adjustments", opts.adjustments);
    if (!opts.output_dir.empty()) set("output_dir", opts.output_dir);
    if (!opts.sex.empty()) set("sex", opts.sex);
    if (opts.year_start >= 0) set("year_start", std::to_string(opts.year_start));
    if (opts.year_end >= 0) set("year_end", std::to_string(opts.year_end));
    if (opts.basis_dimension >= 0) {
        set("basis_dimension", std::to_string(opts.basis_dimension));
    }
    if (opts.penalty_order >= 0) set("penalty_order", std::to_string(opts.penalty_order));
    if (!opts.lambda.empty()) set("lambda", opts.lambda);
    if (opts.ridge >= 0.0) set("ridge", std::to_string(opts.ridge));
    if (opts.pseudocount >= 0.0) set("pseudocount", std::to_string(opts.pseudocount));
    if (opts.k >= 0) set("K", std::to_string(opts.k));
    if (opts.sigma >= 0.0) set("sigma", std::to_string(opts.sigma));
    if (opts.b >= 0) set("B", std::to_string(opts.b));
    if (opts.g_min >= 0) set("g_min", std::to_string(opts.g_min));
    if (opts.g_max >= 0) set("g_max", std::to_string(opts.g_max));
    if (opts.g_men >= 0) set("g_men", std::to_string(opts.g_men));
    if (opts.g_women >= 0) set("g_women", std::to_string(opts.g_women));
    if (opts.master_seed >= 0) set("master_seed", std::to_string(opts.master_seed));
    if (!opts.countries.empty()) set("countries", opts.countries);
    if (opts.silhouette_literal) set("silhouette_literal", "true");
    if (opts.silhouette_unsquared) set("silhouette_squared", "false");
    return cfg;
}

int run_stage(const std::string& stage, const cfda::PipelineConfig& cfg) {
    cfda::Manifest manifest;
    if (stage == "ingest") {
        manifest = cfda::stage_ingest(cfg);
    } else if (stage == "smooth") {
        manifest = cfda::stage_smooth(cfg);
    } else if (stage == "pca") {
        manifest = cfda::stage_pca(cfg);
    } else if (stage == "cluster") {
        manifest = cfda::stage_cluster(cfg);
    } else if (stage == "plot") {
        manifest = cfda::stage_plot(cfg);
    } else {
        manifest = cfda::run_pipeline(cfg);
    }
    for (const auto& path : manifest.artifacts) {
        std::cout << path.generic_string() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compositional functional data analysis of cause-specific mortality"};
    app.require_subcommand(1);

    CliOptions opts;
    std::string chosen;
    for (const char* stage : {"ingest", "smooth", "pca", "cluster", "plot", "all"}) {
        CLI::App* cmd = app.add_subcommand(stage, std::string("Run the ") + stage +
                                                      (std::string(stage) == "all"
                                                           ? " pipeline"
                                                           : " stage"));
        add_common_options(cmd, opts);
        cmd->callback([stage, &chosen] { chosen = stage; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run_stage(chosen, make_config(opts));
    } catch (const cfda::ConfigError& e) {
        std::cerr << "config error [" << chosen << "]: " << e.what() << '\n';
        return 2;
    } catch (const cfda::DataError& e) {
        std::cerr << "data error [" << chosen << "]: " << e.what() << '\n';
        return 3;
    } catch (const cfda::NumericError& e) {
        std::cerr << "numeric failure [" << chosen << "]: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure [" << chosen << "]: " << e.what() << '\n';
        return 4;
    }
}
