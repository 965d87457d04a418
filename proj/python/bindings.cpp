#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cfda/cfpca.hpp"
#include "cfda/clustering.hpp"
#include "cfda/composition.hpp"
#include "cfda/pipeline.hpp"
#include "cfda/smoothing.hpp"

namespace py = pybind11;
using namespace cfda;

PYBIND11_MODULE(_cfda, m) {
    m.doc() = "Compositional functional data analysis: simplex geometry, "
              "compositional functional PCA and spectral clustering";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<Eigen::VectorXd>(), py::arg("points"))
        .def_static("uniform", &TimeGrid::uniform, py::arg("a"), py::arg("b"),
                    py::arg("t_count"))
        .def_static("years", &TimeGrid::years, py::arg("first_year"),
                    py::arg("last_year"))
        .def_property_readonly("points", &TimeGrid::points)
        .def_property_readonly("weights", &TimeGrid::weights)
        .def("__len__", &TimeGrid::size);

    py::class_<FunctionalComposition>(m, "FunctionalComposition")
        .def(py::init<TimeGrid, Eigen::MatrixXd, std::vector<std::string>,
                      std::string>(),
             py::arg("grid"), py::arg("parts"),
             py::arg("part_names") = std::vector<std::string>{},
             py::arg("id") = std::string{})
        .def_property_readonly("grid", &FunctionalComposition::grid)
        .def_property_readonly("parts", &FunctionalComposition::parts)
        .def_property_readonly("part_names", &FunctionalComposition::part_names)
        .def_property_readonly("id", &FunctionalComposition::id);

    py::class_<ClrCurve>(m, "ClrCurve")
        .def(py::init<TimeGrid, Eigen::MatrixXd, std::vector<std::string>,
                      std::string>(),
             py::arg("grid"), py::arg("coords"),
             py::arg("part_names") = std::vector<std::string>{},
             py::arg("id") = std::string{})
        .def_property_readonly("grid", &ClrCurve::grid)
        .def_property_readonly("coords", &ClrCurve::coords)
        .def_property_readonly("part_names", &ClrCurve::part_names)
        .def_property_readonly("id", &ClrCurve::id);

    m.def(
        "closure",
        [](const TimeGrid& grid, const Eigen::MatrixXd& raw, double pseudocount,
           std::vector<std::string> part_names, std::string id) {
            ClosureOptions opts;
            opts.pseudocount = pseudocount;
            return closure(grid, raw, opts, std::move(part_names), std::move(id));
        },
        py::arg("grid"), py::arg("raw"), py::arg("pseudocount") = 0.5,
        py::arg("part_names") = std::vector<std::string>{},
        py::arg("id") = std::string{});
    m.def("geometric_mean_curve", &geometric_mean_curve, py::arg("f"));
    m.def("clr", &clr, py::arg("f"));
    m.def("clr_inv", &clr_inv, py::arg("u"));
    m.def("perturb", &perturb, py::arg("f"), py::arg("g"));
    m.def("power", &power, py::arg("alpha"), py::arg("f"));
    m.def("inner_product",
          py::overload_cast<const FunctionalComposition&, const FunctionalComposition&>(
              &inner_product),
          py::arg("f"), py::arg("g"));
    m.def("clr_inner_product",
          py::overload_cast<const ClrCurve&, const ClrCurve&>(&inner_product),
          py::arg("a"), py::arg("b"));
    m.def("norm", py::overload_cast<const FunctionalComposition&>(&norm), py::arg("f"));
    m.def("distance", &distance, py::arg("f"), py::arg("g"));
    m.def("uniform_composition", &uniform_composition, py::arg("grid"),
          py::arg("n_parts"), py::arg("part_names") = std::vector<std::string>{},
          py::arg("id") = std::string{});

    py::class_<MeanComposition>(m, "MeanComposition")
        .def_readonly("composition", &MeanComposition::composition)
        .def_readonly("n", &MeanComposition::n);

    py::class_<CovKernelBlocks>(m, "CovKernelBlocks")
        .def_property_readonly("assembled", &CovKernelBlocks::assembled)
        .def_property_readonly("n_parts", &CovKernelBlocks::n_parts)
        .def("block",
             [](const CovKernelBlocks& cov, Eigen::Index j, Eigen::Index l) {
                 return Eigen::MatrixXd(cov.block(j, l));
             },
             py::arg("j"), py::arg("l"))
        .def("quadrature_trace", &CovKernelBlocks::quadrature_trace);

    py::class_<EigenSystem>(m, "EigenSystem")
        .def_readonly("eigenvalues", &EigenSystem::eigenvalues)
        .def_readonly("fev", &EigenSystem::fev)
        .def_readonly("total_variance", &EigenSystem::total_variance)
        .def_readonly("clr_eigenfunctions", &EigenSystem::clr_eigenfunctions)
        .def_readonly("simplex_eigenfunctions", &EigenSystem::simplex_eigenfunctions)
        .def_readonly("n", &EigenSystem::n)
        .def_property_readonly("n_components", &EigenSystem::n_components);

    py::class_<ScoreMatrix>(m, "ScoreMatrix")
        .def(py::init([](Eigen::MatrixXd values, std::vector<std::string> ids) {
                 ScoreMatrix sm;
                 sm.values = std::move(values);
                 sm.ids = std::move(ids);
                 for (Eigen::Index k = 0; k < sm.values.cols(); ++k) {
                     sm.component_labels.push_back("PC" + std::to_string(k + 1));
                 }
                 return sm;
             }),
             py::arg("values"), py::arg("ids") = std::vector<std::string>{})
        .def_readonly("values", &ScoreMatrix::values)
        .def_readonly("ids", &ScoreMatrix::ids)
        .def_readonly("component_labels", &ScoreMatrix::component_labels);

    m.def("mean", &mean, py::arg("sample"));
    m.def("center", &center, py::arg("sample"), py::arg("mean"));
    m.def("covariance", &covariance, py::arg("centered"));
    m.def("eigendecompose", &eigendecompose, py::arg("cov"), py::arg("k_max"));
    m.def("scores", &scores, py::arg("centered"), py::arg("eig"), py::arg("k"));
    m.def("reconstruct", &reconstruct, py::arg("mean"), py::arg("eig"),
          py::arg("score_row"), py::arg("k"));
    m.def("component_envelope", &component_envelope, py::arg("mean"), py::arg("eig"),
          py::arg("k"), py::arg("c") = 1.0);

    py::class_<SmoothingConfig>(m, "SmoothingConfig")
        .def(py::init([](Eigen::Index basis_dimension, int penalty_order,
                         std::optional<double> lambda) {
                 SmoothingConfig cfg;
                 cfg.basis_dimension = basis_dimension;
                 cfg.penalty_order = penalty_order;
                 cfg.lambda = lambda;
                 cfg.validate();
                 return cfg;
             }),
             py::arg("basis_dimension") = 15, py::arg("penalty_order") = 2,
             py::arg("lambda") = std::nullopt)
        .def_readwrite("basis_dimension", &SmoothingConfig::basis_dimension)
        .def_readwrite("penalty_order", &SmoothingConfig::penalty_order)
        .def_readwrite("lam", &SmoothingConfig::lambda);

    py::class_<MissingMask>(m, "MissingMask")
        .def(py::init([](std::string id, std::vector<bool> missing) {
                 return MissingMask{std::move(id), std::move(missing)};
             }),
             py::arg("id"), py::arg("missing"))
        .def_readwrite("id", &MissingMask::id)
        .def_readwrite("missing", &MissingMask::missing);

    m.def(
        "smooth_composition",
        [](const FunctionalComposition& raw, const SmoothingConfig& cfg,
           std::optional<MissingMask> mask) {
            return smooth_composition(raw, cfg, mask ? &*mask : nullptr);
        },
        py::arg("raw"), py::arg("config") = SmoothingConfig{},
        py::arg("mask") = std::nullopt);
    m.def("impute_missing", &impute_missing, py::arg("sample"), py::arg("masks"),
          py::arg("ridge") = 1e-3);
    m.def("penalized_spline_fit", &penalized_spline_fit, py::arg("x"), py::arg("y"),
          py::arg("config"), py::arg("eval_points"));

    py::class_<SilhouetteOptions>(m, "SilhouetteOptions")
        .def(py::init([](bool squared, bool literal) {
                 return SilhouetteOptions{squared, literal};
             }),
             py::arg("squared") = true, py::arg("literal") = false)
        .def_readwrite("squared", &SilhouetteOptions::squared)
        .def_readwrite("literal", &SilhouetteOptions::literal);

    py::class_<SimilarityGraph>(m, "SimilarityGraph")
        .def_readonly("similarity", &SimilarityGraph::similarity)
        .def_readonly("points", &SimilarityGraph::points)
        .def_readonly("ids", &SimilarityGraph::ids)
        .def_readonly("sigma", &SimilarityGraph::sigma);

    py::class_<ClusterResult>(m, "ClusterResult")
        .def_readonly("labels", &ClusterResult::labels)
        .def_readonly("centroids", &ClusterResult::centroids)
        .def_readonly("g", &ClusterResult::g)
        .def_readonly("silhouette_mean", &ClusterResult::silhouette_mean)
        .def_readonly("per_point_silhouette", &ClusterResult::per_point_silhouette)
        .def_readonly("vote_share", &ClusterResult::vote_share);

    py::class_<SelectionRow>(m, "SelectionRow")
        .def_readonly("g", &SelectionRow::g)
        .def_readonly("silhouette_mean", &SelectionRow::silhouette_mean)
        .def_readonly("vote_share", &SelectionRow::vote_share);

    py::class_<SelectionTable>(m, "SelectionTable")
        .def_readonly("rows", &SelectionTable::rows)
        .def_readonly("best_g", &SelectionTable::best_g);

    m.def("similarity", &similarity, py::arg("scores"), py::arg("sigma") = 1.0);
    m.def("spectral_cluster", &spectral_cluster, py::arg("graph"), py::arg("g"),
          py::arg("seed"), py::arg("silhouette_options") = SilhouetteOptions{});
    m.def("majority_vote", &majority_vote, py::arg("graph"), py::arg("g"), py::arg("b"),
          py::arg("master_seed"), py::arg("silhouette_options") = SilhouetteOptions{});
    m.def(
        "silhouette",
        [](const Eigen::MatrixXd& points, const std::vector<int>& labels,
           const SilhouetteOptions& opts) {
            const SilhouetteResult res = silhouette(points, labels, opts);
            return py::make_tuple(res.mean, res.per_point);
        },
        py::arg("points"), py::arg("labels"),
        py::arg("options") = SilhouetteOptions{});
    m.def("select_g", &select_g, py::arg("scores"), py::arg("g_min"), py::arg("g_max"),
          py::arg("b"), py::arg("master_seed"), py::arg("sigma") = 1.0,
          py::arg("silhouette_options") = SilhouetteOptions{});

    m.def(
        "run_pipeline",
        [](const std::filesystem::path& config_path) {
            const PipelineConfig cfg = PipelineConfig::load(config_path);
            const Manifest manifest = run_pipeline(cfg);
            std::vector<std::string> paths;
            paths.reserve(manifest.artifacts.size());
            for (const auto& p : manifest.artifacts) {
                paths.push_back(p.generic_string());
            }
            return paths;
        },
        py::arg("config_path"),
        "Run the full ingest/smooth/pca/cluster/plot pipeline from a config file; "
        "returns the artifact paths.");
}
