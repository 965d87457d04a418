#include "cfda/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cfda/cfpca.hpp"
#include "cfda/clustering.hpp"
#include "cfda/csv.hpp"
#include "cfda/svg.hpp"

namespace cfda {

namespace {

const std::vector<std::string> kStudyCountries = {
    "AUS", "AUT", "BEL", "CAN", "DNK", "FIN", "FRA", "GRE", "HUN", "ICE", "IRL",
    "ITA", "JPN", "NL",  "NZL", "NOR", "POL", "SPA", "SWE", "SWI", "UK",  "USA"};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse number for '" + key + "'");
    }
}

int to_int(const std::string& value, const std::string& key) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse integer for '" + key + "'");
    }
}

bool to_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config: cannot parse boolean for '" + key + "'");
}

void require_artifact(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw MissingUpstreamArtifact("expected upstream artifact '" + path.string() +
                                      "'; run the earlier stage first");
    }
}

std::ofstream open_artifact(const std::filesystem::path& path, Manifest& manifest) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    manifest.artifacts.push_back(path);
    return os;
}

SilhouetteOptions silhouette_options(const PipelineConfig& cfg) {
    SilhouetteOptions opts;
    opts.squared = cfg.silhouette_squared;
    opts.literal = cfg.silhouette_literal;
    return opts;
}

/// Mean curve and clr eigenfunctions reloaded from CSV artifacts.
struct PcaArtifacts {
    MeanComposition mu;
    EigenSystem eig;
};

PcaArtifacts read_pca_artifacts(const PipelineConfig& cfg, Sex sex) {
    const auto dir = cfg.output_dir;
    const auto suffix = sex_suffix(sex);
    const auto mean_path = dir / ("mean_" + suffix + ".csv");
    const auto values_path = dir / ("eigenvalues_" + suffix + ".csv");
    const auto functions_path = dir / ("eigenfunctions_clr_" + suffix + ".csv");
    require_artifact(mean_path);
    require_artifact(values_path);
    require_artifact(functions_path);

    auto means = csv::read_compositions(mean_path);
    if (means.size() != 1) {
        throw DataError("mean artifact '" + mean_path.string() +
                        "' must contain exactly one curve");
    }
    MeanComposition mu{std::move(means.front()), 0};

    EigenSystem eig;
    std::ifstream values_is(values_path);
    std::string line;
    std::getline(values_is, line);  // header
    while (std::getline(values_is, line)) {
        if (trim(line).empty()) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() < 2) {
            throw DataError("eigenvalues artifact: malformed row '" + line + "'");
        }
        eig.eigenvalues.push_back(to_double(fields[1], "eigenvalue"));
        if (fields.size() > 2) eig.fev.push_back(to_double(fields[2], "fev"));
    }
    std::ifstream functions_is(functions_path);
    const TimeGrid grid = mu.composition.grid();
    eig.clr_eigenfunctions = csv::read_eigenfunction_curves(functions_is, &grid);
    if (eig.clr_eigenfunctions.empty()) {
        throw MissingUpstreamArtifact("eigenfunctions artifact '" +
                                      functions_path.string() + "' is empty");
    }
    if (eig.clr_eigenfunctions.size() != eig.eigenvalues.size()) {
        throw DataError("eigenvalue/eigenfunction artifacts disagree on component count");
    }
    return PcaArtifacts{std::move(mu), std::move(eig)};
}

std::vector<FunctionalComposition> read_required_compositions(
    const std::filesystem::path& path) {
    require_artifact(path);
    auto curves = csv::read_compositions(path);
    if (curves.empty()) {
        throw MissingUpstreamArtifact("artifact '" + path.string() + "' is empty");
    }
    return curves;
}

int chosen_g(const PipelineConfig& cfg, Sex sex, int best_g) {
    const auto& override_g =
        sex == Sex::male ? cfg.g_override_men : cfg.g_override_women;
    return override_g ? *override_g : best_g;
}

}  // namespace

PipelineConfig::PipelineConfig() {
    countries = kStudyCountries;
}

std::string sex_suffix(Sex sex) {
    return sex == Sex::male ? "men" : "women";
}

void PipelineConfig::apply_key(const std::string& key, const std::string& value) {
    if (key == "input") {
        input_csv = value;
    } else if (key == "column_map") {
        column_map = value;
    } else if (key == "cause_map") {
        cause_map = value;
    } else if (key == "adjustments") {
        adjustments = value;
    } else if (key == "output_dir") {
        output_dir = value;
    } else if (key == "year_start") {
        year_start = to_int(value, key);
    } else if (key == "year_end") {
        year_end = to_int(value, key);
    } else if (key == "sex") {
        if (value == "men") {
            sex = SexSelection::men;
        } else if (value == "women") {
            sex = SexSelection::women;
        } else if (value == "both") {
            sex = SexSelection::both;
        } else {
            throw ConfigError("config: sex must be men, women or both");
        }
    } else if (key == "basis_dimension") {
        smoothing.basis_dimension = to_int(value, key);
    } else if (key == "penalty_order") {
        smoothing.penalty_order = to_int(value, key);
    } else if (key == "lambda") {
        if (value == "gcv") {
            smoothing.lambda = std::nullopt;
        } else {
            smoothing.lambda = to_double(value, key);
        }
    } else if (key == "ridge") {
        ridge = to_double(value, key);
    } else if (key == "pseudocount") {
        pseudocount = to_double(value, key);
    } else if (key == "K") {
        k_components = to_int(value, key);
    } else if (key == "sigma") {
        sigma = to_double(value, key);
    } else if (key == "B") {
        b_runs = to_int(value, key);
    } else if (key == "g_min") {
        g_min = to_int(value, key);
    } else if (key == "g_max") {
        g_max = to_int(value, key);
    } else if (key == "g_men") {
        g_override_men = to_int(value, key);
    } else if (key == "g_women") {
        g_override_women = to_int(value, key);
    } else if (key == "master_seed") {
        try {
            master_seed = std::stoull(value);
        } catch (const std::exception&) {
            throw ConfigError("config: cannot parse master_seed");
        }
    } else if (key == "silhouette_literal") {
        silhouette_literal = to_bool(value, key);
    } else if (key == "silhouette_squared") {
        silhouette_squared = to_bool(value, key);
    } else if (key == "countries") {
        countries.clear();
        std::stringstream ss(value);
        std::string token;
        while (std::getline(ss, token, ',')) {
            const std::string t = trim(token);
            if (!t.empty()) countries.push_back(t);
        }
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    PipelineConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        cfg.apply_key(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

void PipelineConfig::validate_for(const std::string& stage) const {
    if (year_end <= year_start) {
        throw ConfigError("config: year_end must be after year_start");
    }
    if (k_components < 1) {
        throw ConfigError("config: K must be >= 1");
    }
    if (b_runs < 1) {
        throw ConfigError("config: B must be >= 1");
    }
    if (sigma <= 0.0) {
        throw ConfigError("config: sigma must be positive");
    }
    if (g_min < 2 || g_max < g_min) {
        throw ConfigError("config: G range must satisfy 2 <= g_min <= g_max");
    }
    smoothing.validate();
    if (stage == "ingest" || stage == "all") {
        for (const auto& [name, path] :
             {std::pair<std::string, const std::filesystem::path&>{"input", input_csv},
              {"column_map", column_map},
              {"cause_map", cause_map}}) {
            if (path.empty()) {
                throw ConfigError("config: '" + name + "' path is required");
            }
            if (!std::filesystem::exists(path)) {
                throw ConfigError("config: " + name + " file '" + path.string() +
                                  "' does not exist");
            }
        }
        if (!adjustments.empty() && !std::filesystem::exists(adjustments)) {
            throw ConfigError("config: adjustments file '" + adjustments.string() +
                              "' does not exist");
        }
    }
}

std::vector<Sex> PipelineConfig::selected_sexes() const {
    switch (sex) {
        case SexSelection::men:
            return {Sex::male};
        case SexSelection::women:
            return {Sex::female};
        case SexSelection::both:
            return {Sex::male, Sex::female};
    }
    return {};
}

TimeGrid PipelineConfig::grid() const {
    return TimeGrid::years(year_start, year_end);
}

Manifest stage_ingest(const PipelineConfig& cfg) {
    cfg.validate_for("ingest");
    Manifest manifest;

    std::ifstream input(cfg.input_csv);
    if (!input) {
        throw DataError("cannot open input '" + cfg.input_csv.string() + "'");
    }
    const ColumnMap columns = ColumnMap::load(cfg.column_map);
    const CauseMap map = CauseMap::load(cfg.cause_map);
    const std::vector<AdjustmentRule> adjustments =
        cfg.adjustments.empty() ? std::vector<AdjustmentRule>{}
                                : load_adjustments(cfg.adjustments);

    const ParseResult parsed = parse_records(input, columns);
    BuildOptions opts;
    opts.pseudocount = cfg.pseudocount;
    opts.countries = cfg.countries;
    const IngestResult built =
        build_compositions(parsed.records, map, adjustments, cfg.grid(), opts);

    {
        auto os = open_artifact(cfg.output_dir / "rejects.csv", manifest);
        write_rejects(os, parsed.rejects);
    }
    {
        auto os = open_artifact(cfg.output_dir / "conservation.csv", manifest);
        write_conservation(os, built.conservation);
    }
    {
        auto os = open_artifact(cfg.output_dir / "ingest_log.txt", manifest);
        for (const auto& warning : built.warnings) os << warning << '\n';
    }
    for (Sex sex : cfg.selected_sexes()) {
        const auto suffix = sex_suffix(sex);
        const auto it = built.by_sex.find(sex);
        if (it == built.by_sex.end()) {
            throw DataError("ingest: no records for " + suffix +
                            " after filtering; check the countries/sex settings");
        }
        {
            auto os = open_artifact(
                cfg.output_dir / ("raw_compositions_" + suffix + ".csv"), manifest);
            csv::write_compositions(os, it->second.compositions);
        }
        {
            auto os =
                open_artifact(cfg.output_dir / ("masks_" + suffix + ".csv"), manifest);
            csv::write_masks(os, it->second.masks, cfg.grid());
        }
    }
    return manifest;
}

Manifest stage_smooth(const PipelineConfig& cfg) {
    cfg.validate_for("smooth");
    Manifest manifest;
    for (Sex sex : cfg.selected_sexes()) {
        const auto suffix = sex_suffix(sex);
        const auto raw_path = cfg.output_dir / ("raw_compositions_" + suffix + ".csv");
        const auto mask_path = cfg.output_dir / ("masks_" + suffix + ".csv");
        auto sample = read_required_compositions(raw_path);
        require_artifact(mask_path);

        std::vector<std::string> ids;
        ids.reserve(sample.size());
        for (const auto& f : sample) ids.push_back(f.id());
        std::ifstream mask_is(mask_path);
        const std::vector<MissingMask> masks =
            csv::read_masks(mask_is, ids, sample.front().grid());

        std::vector<FunctionalComposition> smoothed;
        smoothed.reserve(sample.size());
        for (std::size_t i = 0; i < sample.size(); ++i) {
            smoothed.push_back(
                smooth_composition(sample[i], cfg.smoothing, &masks[i]));
        }
        const std::vector<FunctionalComposition> completed =
            impute_missing(smoothed, masks, cfg.ridge);

        auto os = open_artifact(
            cfg.output_dir / ("smoothed_compositions_" + suffix + ".csv"), manifest);
        csv::write_compositions(os, completed);
    }
    return manifest;
}

Manifest stage_pca(const PipelineConfig& cfg) {
    cfg.validate_for("pca");
    Manifest manifest;
    for (Sex sex : cfg.selected_sexes()) {
        const auto suffix = sex_suffix(sex);
        const auto sample = read_required_compositions(
            cfg.output_dir / ("smoothed_compositions_" + suffix + ".csv"));

        const MeanComposition mu = mean(sample);
        const std::vector<ClrCurve> centered = center(sample, mu);
        const CovKernelBlocks cov = covariance(centered);
        const Eigen::Index k_max = std::max<Eigen::Index>(
            cfg.k_components, static_cast<Eigen::Index>(sample.size()) - 1);
        const EigenSystem eig = eigendecompose(cov, std::max<Eigen::Index>(k_max, 1));
        const Eigen::Index k_use = std::min(cfg.k_components, eig.n_components());
        if (k_use < cfg.k_components) {
            throw NumericError("pca: only " + std::to_string(eig.n_components()) +
                               " components available, K=" +
                               std::to_string(cfg.k_components) + " requested");
        }
        const ScoreMatrix sm = scores(centered, eig, k_use);

        {
            auto os = open_artifact(cfg.output_dir / ("mean_" + suffix + ".csv"),
                                    manifest);
            csv::write_compositions(os, {mu.composition.with_id("mean")});
        }
        {
            auto os = open_artifact(cfg.output_dir / ("eigenvalues_" + suffix + ".csv"),
                                    manifest);
            csv::write_eigenvalues(os, eig);
        }
        {
            auto os = open_artifact(
                cfg.output_dir / ("eigenfunctions_clr_" + suffix + ".csv"), manifest);
            csv::write_clr_eigenfunctions(os, eig);
        }
        {
            auto os = open_artifact(
                cfg.output_dir / ("eigenfunctions_simplex_" + suffix + ".csv"),
                manifest);
            csv::write_simplex_eigenfunctions(os, eig);
        }
        {
            auto os = open_artifact(cfg.output_dir / ("scores_" + suffix + ".csv"),
                                    manifest);
            csv::write_scores(os, sm);
        }
        {
            auto os = open_artifact(cfg.output_dir / ("envelopes_" + suffix + ".csv"),
                                    manifest);
            os << "component,kind,part,year,value\n";
            for (Eigen::Index k = 0; k < k_use; ++k) {
                const auto [plus, minus] = component_envelope(mu, eig, k);
                for (const auto& [kind, curve] :
                     {std::pair<const char*, const FunctionalComposition&>{"plus", plus},
                      {"minus", minus}}) {
                    for (Eigen::Index d = 0; d < curve.n_parts(); ++d) {
                        for (Eigen::Index i = 0; i < curve.n_points(); ++i) {
                            os << (k + 1) << ',' << kind << ','
                               << curve.part_names()[d] << ','
                               << csv::format_double(curve.grid().points()(i)) << ','
                               << csv::format_double(curve.parts()(d, i)) << '\n';
                        }
                    }
                }
            }
        }
    }
    return manifest;
}

Manifest stage_cluster(const PipelineConfig& cfg) {
    cfg.validate_for("cluster");
    Manifest manifest;
    const SilhouetteOptions sil = silhouette_options(cfg);
    for (Sex sex : cfg.selected_sexes()) {
        const auto suffix = sex_suffix(sex);
        const auto scores_path = cfg.output_dir / ("scores_" + suffix + ".csv");
        require_artifact(scores_path);
        const ScoreMatrix sm = csv::read_scores(scores_path);
        if (sm.n() < 3) {
            throw DataError("cluster: need at least 3 observations, have " +
                            std::to_string(sm.n()));
        }

        const int g_hi = std::min<int>(cfg.g_max, static_cast<int>(sm.n()) - 1);
        if (g_hi < cfg.g_min) {
            throw ConfigError("cluster: G range is empty for n = " +
                              std::to_string(sm.n()));
        }
        const SelectionTable table =
            select_g(sm, cfg.g_min, g_hi, cfg.b_runs, cfg.master_seed, cfg.sigma, sil);
        {
            auto os = open_artifact(cfg.output_dir / ("selection_" + suffix + ".csv"),
                                    manifest);
            csv::write_selection_table(os, table);
        }

        const int g = chosen_g(cfg, sex, table.best_g);
        if (g < 2 || g > static_cast<int>(sm.n())) {
            throw ConfigError("cluster: chosen G out of range");
        }
        const SimilarityGraph graph = similarity(sm, cfg.sigma);
        const ClusterResult result =
            majority_vote(graph, g, cfg.b_runs, cfg.master_seed, sil);
        {
            auto os = open_artifact(cfg.output_dir / ("clusters_" + suffix + ".csv"),
                                    manifest);
            csv::write_cluster_report(os, sm.ids, result);
        }

        // Reconstruct centroid curves from the spectral centroids. Clustering
        // scores that did not come out of the pca stage (no mean/eigenfunction
        // artifacts) still get their report; only this derived file is skipped.
        if (std::filesystem::exists(cfg.output_dir / ("mean_" + suffix + ".csv"))) {
            const PcaArtifacts pca = read_pca_artifacts(cfg, sex);
            std::vector<FunctionalComposition> centroid_curves;
            for (int c = 0; c < result.g; ++c) {
                const Eigen::VectorXd row = result.centroids.row(c).transpose();
                centroid_curves.push_back(
                    reconstruct(pca.mu, pca.eig, row,
                                std::min<Eigen::Index>(row.size(),
                                                       pca.eig.n_components()))
                        .with_id("cluster_" + std::to_string(c + 1)));
            }
            auto os = open_artifact(
                cfg.output_dir / ("centroid_curves_" + suffix + ".csv"), manifest);
            csv::write_compositions(os, centroid_curves);
        }
    }
    return manifest;
}

Manifest stage_plot(const PipelineConfig& cfg) {
    cfg.validate_for("plot");
    Manifest manifest;
    const auto& colors = svg::palette();

    for (Sex sex : cfg.selected_sexes()) {
        const auto suffix = sex_suffix(sex);
        const auto sample = read_required_compositions(
            cfg.output_dir / ("smoothed_compositions_" + suffix + ".csv"));
        const PcaArtifacts pca = read_pca_artifacts(cfg, sex);
        const auto& parts = sample.front().part_names();
        const Eigen::VectorXd years = sample.front().grid().points();

        // Spaghetti panels: all countries grey, mean highlighted.
        {
            std::vector<svg::Panel> panels;
            for (Eigen::Index d = 0; d < sample.front().n_parts(); ++d) {
                svg::Panel panel;
                panel.title = parts[d];
                for (const auto& f : sample) {
                    panel.series.push_back(
                        {years, f.parts().row(d).transpose(), "#c8c8c8", 0.8});
                }
                panel.series.push_back({years,
                                        pca.mu.composition.parts().row(d).transpose(),
                                        colors[d % colors.size()], 2.2});
                panels.push_back(std::move(panel));
            }
            auto os = open_artifact(cfg.output_dir / ("spaghetti_" + suffix + ".svg"),
                                    manifest);
            os << svg::panel_figure(panels, 4);
        }

        // Mean +/- component panels, one figure per retained component.
        const Eigen::Index k_use =
            std::min<Eigen::Index>(cfg.k_components, pca.eig.n_components());
        for (Eigen::Index k = 0; k < k_use; ++k) {
            const auto [plus, minus] = component_envelope(pca.mu, pca.eig, k);
            std::vector<svg::Panel> panels;
            for (Eigen::Index d = 0; d < plus.n_parts(); ++d) {
                svg::Panel panel;
                panel.title = parts[d];
                panel.series.push_back({years,
                                        pca.mu.composition.parts().row(d).transpose(),
                                        "#222222", 2.0});
                panel.series.push_back(
                    {years, plus.parts().row(d).transpose(), colors[d % colors.size()],
                     1.2});
                panel.series.push_back(
                    {years, minus.parts().row(d).transpose(), colors[d % colors.size()],
                     1.2});
                panels.push_back(std::move(panel));
            }
            auto os = open_artifact(
                cfg.output_dir /
                    ("component_" + std::to_string(k + 1) + "_" + suffix + ".svg"),
                manifest);
            os << svg::panel_figure(panels, 4);
        }

        // Cluster centroid curves.
        const auto centroid_path =
            cfg.output_dir / ("centroid_curves_" + suffix + ".csv");
        const auto centroids = read_required_compositions(centroid_path);
        {
            std::vector<svg::Panel> panels;
            for (Eigen::Index d = 0; d < centroids.front().n_parts(); ++d) {
                svg::Panel panel;
                panel.title = parts[d];
                for (std::size_t c = 0; c < centroids.size(); ++c) {
                    panel.series.push_back({years,
                                            centroids[c].parts().row(d).transpose(),
                                            colors[c % colors.size()], 1.6});
                }
                panels.push_back(std::move(panel));
            }
            auto os = open_artifact(cfg.output_dir / ("centroids_" + suffix + ".svg"),
                                    manifest);
            os << svg::panel_figure(panels, 4);
        }

        // Score scatter (first two components) colored by cluster.
        const auto clusters_path = cfg.output_dir / ("clusters_" + suffix + ".csv");
        require_artifact(clusters_path);
        const ScoreMatrix sm =
            csv::read_scores(cfg.output_dir / ("scores_" + suffix + ".csv"));
        std::map<std::string, int> label_of;
        {
            std::ifstream is(clusters_path);
            std::string line;
            std::getline(is, line);
            while (std::getline(is, line)) {
                if (trim(line).empty()) continue;
                const auto fields = csv::split_line(line);
                if (fields.size() < 2) continue;
                label_of[fields[0]] = to_int(fields[1], "label");
            }
        }
        if (sm.k() >= 2) {
            std::vector<svg::Marker> markers;
            for (Eigen::Index i = 0; i < sm.n(); ++i) {
                const int label = label_of.count(sm.ids[i]) ? label_of[sm.ids[i]] : 0;
                markers.push_back({sm.values(i, 0), sm.values(i, 1),
                                   colors[static_cast<std::size_t>(
                                       std::max(0, label - 1)) % colors.size()],
                                   sm.ids[i]});
            }
            auto os = open_artifact(cfg.output_dir / ("scores_" + suffix + ".svg"),
                                    manifest);
            os << svg::scatter_figure(markers, "PC1 score", "PC2 score");
        }
    }
    return manifest;
}

Manifest run_pipeline(const PipelineConfig& cfg) {
    cfg.validate_for("all");
    Manifest manifest;
    using StageFn = Manifest (*)(const PipelineConfig&);
    for (StageFn stage : {&stage_ingest, &stage_smooth, &stage_pca, &stage_cluster,
                          &stage_plot}) {
        const Manifest part = stage(cfg);
        manifest.artifacts.insert(manifest.artifacts.end(), part.artifacts.begin(),
                                  part.artifacts.end());
    }

    nlohmann::ordered_json doc;
    doc["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& path : manifest.artifacts) {
        doc["artifacts"].push_back(path.generic_string());
    }
    doc["parameters"] = {
        {"year_start", cfg.year_start},
        {"year_end", cfg.year_end},
        {"K", cfg.k_components},
        {"sigma", cfg.sigma},
        {"B", cfg.b_runs},
        {"g_min", cfg.g_min},
        {"g_max", cfg.g_max},
        {"master_seed", cfg.master_seed},
        {"basis_dimension", cfg.smoothing.basis_dimension},
        {"penalty_order", cfg.smoothing.penalty_order},
        {"lambda", cfg.smoothing.lambda ? nlohmann::ordered_json(*cfg.smoothing.lambda)
                                        : nlohmann::ordered_json("gcv")},
        {"ridge", cfg.ridge},
        {"pseudocount", cfg.pseudocount},
        {"silhouette_squared", cfg.silhouette_squared},
        {"silhouette_literal", cfg.silhouette_literal},
    };
    doc["palette"] = svg::palette();

    const auto manifest_path = cfg.output_dir / "manifest.json";
    auto os = open_artifact(manifest_path, manifest);
    os << doc.dump(2) << '\n';
    return manifest;
}

}  // namespace cfda
