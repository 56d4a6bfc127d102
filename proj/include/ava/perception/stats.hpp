#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>

namespace ava {

// Per-structure visibility in one volume rendering.
struct StructureVisibility {
    double silhouette_coverage = 0.0;  // share of silhouette pixels where the structure contributes opacity
    double mean_share = 0.0;           // mean compositing share of the structure over its silhouette
    double occluder_share = 0.0;       // mean compositing share of everything else over its silhouette
    long silhouette_pixels = 0;

    friend bool operator==(const StructureVisibility&, const StructureVisibility&) = default;
};

using StructureStats = std::map<std::string, StructureVisibility>;

// Overplotting summary of one scatterplot rendering.
struct OverplotMetrics {
    double saturated_fraction = 0.0;  // covered pixels with accumulated coverage >= 0.98
    double faintness = 0.0;           // max coverage over pixels touched by exactly one point
    double covered_fraction = 0.0;

    friend bool operator==(const OverplotMetrics&, const OverplotMetrics&) = default;
};

nlohmann::json to_json(const StructureStats& stats);
StructureStats structure_stats_from_json(const nlohmann::json& j);

nlohmann::json to_json(const OverplotMetrics& m);
OverplotMetrics overplot_metrics_from_json(const nlohmann::json& j);

}  // namespace ava
