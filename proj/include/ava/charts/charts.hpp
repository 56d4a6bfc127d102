#pragma once

#include "ava/charts/canvas.hpp"
#include "ava/perception/stats.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ava {

using Point2 = std::array<double, 2>;

struct PointSet {
    std::vector<Point2> points;
    std::optional<std::vector<int>> labels;
};

// Throws InvalidParams for non-finite coordinates or a label/point length mismatch.
void validate(const PointSet& points);

struct CoverageBuffer {
    int width = 0;
    int height = 0;
    std::vector<double> coverage;  // accumulated alpha before quantization
    std::vector<int> count;        // points whose disc covers the pixel

    double coverage_at(int x, int y) const { return coverage[static_cast<std::size_t>(y) * width + x]; }
    int count_at(int x, int y) const { return count[static_cast<std::size_t>(y) * width + x]; }
};

struct DataBounds {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
};

DataBounds bounds_of(const std::vector<Point2>& points);

struct ScatterStyle {
    Rgb colour{31 / 255.0, 119 / 255.0, 180 / 255.0};
    bool colour_by_label = false;
    bool axes = true;
    std::optional<DataBounds> bounds;  // default: the points' bounding box
};

struct ScatterRender {
    Image image;
    CoverageBuffer coverage;
    DrawCounters counters;
};

// Filled discs composited with "over" at the given opacity. Throws EmptyPointSet,
// InvalidParams for opacity outside (0,1] or a non-positive radius.
ScatterRender render_scatter(const PointSet& points, double opacity, double radius = 3.0,
                             const CanvasConfig& canvas = {}, const ScatterStyle& style = {});

OverplotMetrics overplot_metrics(const CoverageBuffer& buffer, double saturation = 0.98);

struct ParallelStyle {
    Rgb colour{31 / 255.0, 119 / 255.0, 180 / 255.0};
    double opacity = 0.35;
    std::vector<std::string> axis_names;
};

struct ParallelRender {
    Image image;
    DrawCounters counters;
    std::vector<std::string> warnings;  // one per degenerate column
};

// d evenly spaced axes, each normalized to its column's min/max; a constant
// column collapses to the midline. Throws InvalidParams for d < 2 or ragged rows.
ParallelRender render_parallel_coords(const std::vector<std::vector<double>>& rows, const CanvasConfig& canvas = {},
                                      const ParallelStyle& style = {});

struct Graph {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;  // undirected

    std::vector<std::vector<int>> adjacency() const;
};

// Throws InvalidParams for out-of-range endpoints or self-loops.
void validate(const Graph& graph);

// Fruchterman-Reingold inside the unit square from a seeded start; the result's
// bounding box is centred on (0.5, 0.5).
std::vector<Point2> fr_layout(const Graph& graph, int iterations = 200, std::uint64_t seed = 0);

struct NodeLinkStyle {
    double node_radius = 9.0;
    int label_scale = 2;
    Rgb node_colour{0.65, 0.80, 0.93};
    Rgb edge_colour{0.25, 0.25, 0.25};
    Rgb label_colour{0.0, 0.0, 0.0};
};

struct NodeLinkRender {
    Image image;
    DrawCounters counters;
    std::vector<Point2> label_origins;  // top-left pixel of each node's label
};

// Positions are in the unit square. Nodes sharing a position get their labels
// stacked downwards in node order. Throws MissingPosition.
NodeLinkRender render_node_link(const Graph& graph, const std::vector<Point2>& positions,
                                const std::vector<std::string>& labels, const CanvasConfig& canvas = {},
                                const NodeLinkStyle& style = {});

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// RFC 4180-style: comma separated, optional double quotes, header row first.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

// Numeric matrix of the named columns (all columns when empty). Throws InvalidParams
// for unknown columns or non-numeric cells.
std::vector<std::vector<double>> csv_columns(const CsvTable& table, const std::vector<std::string>& columns = {});
PointSet csv_points(const CsvTable& table, const std::string& x, const std::string& y,
                    const std::string& label = "");

}  // namespace ava
