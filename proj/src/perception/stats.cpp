#include "ava/perception/stats.hpp"

namespace ava {

nlohmann::json to_json(const StructureStats& stats) {
    auto j = nlohmann::json::object();
    for (const auto& [id, v] : stats) {
        j[id] = {
            {"silhouette_coverage", v.silhouette_coverage},
            {"mean_share", v.mean_share},
            {"occluder_share", v.occluder_share},
            {"silhouette_pixels", v.silhouette_pixels},
        };
    }
    return j;
}

StructureStats structure_stats_from_json(const nlohmann::json& j) {
    StructureStats out;
    for (const auto& [id, v] : j.items()) {
        StructureVisibility s;
        s.silhouette_coverage = v.at("silhouette_coverage").get<double>();
        s.mean_share = v.at("mean_share").get<double>();
        s.occluder_share = v.at("occluder_share").get<double>();
        s.silhouette_pixels = v.value("silhouette_pixels", 0L);
        out.emplace(id, s);
    }
    return out;
}

nlohmann::json to_json(const OverplotMetrics& m) {
    return {
        {"saturated_fraction", m.saturated_fraction},
        {"faintness", m.faintness},
        {"covered_fraction", m.covered_fraction},
    };
}

OverplotMetrics overplot_metrics_from_json(const nlohmann::json& j) {
    return OverplotMetrics{j.at("saturated_fraction").get<double>(), j.at("faintness").get<double>(),
                           j.at("covered_fraction").get<double>()};
}

}  // namespace ava
