#pragma once

#include "ava/perception/assessment.hpp"
#include "ava/perception/perception.hpp"
#include "ava/perception/stats.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace ava {

struct VolumeThresholds {
    double t_clear = 0.7;
    double t_rec = 0.25;
    double c_min = 0.5;
};

struct ScatterThresholds {
    double t_faint = 0.1;
};

// Deterministic stand-in for "is the structure recognizable / clear".
Assessment oracle_assess_volume(const StructureStats& stats, const std::string& target,
                                const VolumeThresholds& thresholds = {});

// Which of two scatterplot renderings shows less overplotting; flags the first as
// too low when its isolated points fall below the faintness floor.
Assessment oracle_compare_scatter(const OverplotMetrics& first, const OverplotMetrics& second,
                                  const ScatterThresholds& thresholds = {});

// Perception that reads the tool's ground-truth side channel instead of the image.
//  mode "volume":  stats.structures + target -> NotRecognizable/Recognizable/Clear
//  mode "scatter": stats.overplot of current vs reference -> Comparison
//  mode "dr":      stats.separation of current vs best so far -> proposes the next value
//                  of one numeric parameter (stand-in for an LLM proposing hyperparameters)
class OraclePerception final : public Perception {
public:
    struct Options {
        std::string mode = "volume";
        std::string target;
        VolumeThresholds volume;
        ScatterThresholds scatter;
        std::string dr_param;          // empty: first numeric parameter of the space
        double dr_clear_separation = 0.9;
    };

    explicit OraclePerception(Options options) : options_(std::move(options)) {}

    // Reads mode/target/thresholds from perception_params; `default_mode` applies when absent.
    static Options options_from_json(const nlohmann::json& params, const std::string& default_mode);

    Perceived perceive(const PerceptionRequest& request) override;

private:
    Perceived perceive_volume(const PerceptionRequest& request) const;
    Perceived perceive_scatter(const PerceptionRequest& request) const;
    Perceived perceive_dr(const PerceptionRequest& request);

    Options options_;
    // dr search state
    std::optional<double> best_value_;
    double best_score_ = 0.0;
    double step_ = 0.0;
    double direction_ = 1.0;
};

}  // namespace ava
