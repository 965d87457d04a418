#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace cfda::svg {

struct Series {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    std::string color = "#000000";
    double width = 1.0;
};

struct Panel {
    std::string title;
    std::vector<Series> series;
};

struct Marker {
    double x = 0.0;
    double y = 0.0;
    std::string color = "#000000";
    std::string label;
};

/// Deterministic multi-panel line figure (rows x cols layout). Axis labels
/// show the data range of each panel.
std::string panel_figure(const std::vector<Panel>& panels, int columns,
                         int panel_width = 300, int panel_height = 220);

/// Scatter plot with per-point colors and text labels.
std::string scatter_figure(const std::vector<Marker>& markers, const std::string& x_label,
                           const std::string& y_label, int width = 640, int height = 520);

/// Fixed palette used by the pipeline figures (8 line colors + grey).
const std::vector<std::string>& palette();

}  // namespace cfda::svg
