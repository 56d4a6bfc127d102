#include "ava/perception/oracle.hpp"

#include "ava/errors.hpp"

#include <cmath>
#include <sstream>

namespace ava {

Assessment oracle_assess_volume(const StructureStats& stats, const std::string& target,
                                const VolumeThresholds& t) {
    auto it = stats.find(target);
    if (it == stats.end()) {
        throw UnknownStructure("structure '" + target + "' not present in stats");
    }
    const auto& s = it->second;
    if (s.silhouette_coverage >= t.c_min) {
        if (s.mean_share >= t.t_clear) return {Clear{}, std::nullopt};
        if (s.mean_share >= t.t_rec) return {Recognizable{}, std::nullopt};
    }
    return {NotRecognizable{}, std::nullopt};
}

namespace {

// Strict preference of a over b, both usable: less saturation, then less ink on
// isolated points, then less covered area.
bool prefer_usable(const OverplotMetrics& a, const OverplotMetrics& b) {
    if (a.saturated_fraction != b.saturated_fraction) return a.saturated_fraction < b.saturated_fraction;
    if (a.faintness != b.faintness) return a.faintness < b.faintness;
    return a.covered_fraction < b.covered_fraction;
}

// Strict preference of a over b, both too faint: the more visible one.
bool prefer_faint(const OverplotMetrics& a, const OverplotMetrics& b) {
    if (a.faintness != b.faintness) return a.faintness > b.faintness;
    if (a.saturated_fraction != b.saturated_fraction) return a.saturated_fraction < b.saturated_fraction;
    return a.covered_fraction < b.covered_fraction;
}

}  // namespace

Assessment oracle_compare_scatter(const OverplotMetrics& first, const OverplotMetrics& second,
                                  const ScatterThresholds& t) {
    Comparison c;
    c.too_low = first.faintness < t.t_faint;
    c.second_too_low = second.faintness < t.t_faint;
    if (c.too_low != c.second_too_low) {
        c.winner = c.too_low ? Winner::second : Winner::first;
    } else if (!c.too_low) {
        c.winner = prefer_usable(second, first) ? Winner::second : Winner::first;
    } else {
        c.winner = prefer_faint(second, first) ? Winner::second : Winner::first;
    }
    return {c, std::nullopt};
}

OraclePerception::Options OraclePerception::options_from_json(const nlohmann::json& p,
                                                              const std::string& default_mode) {
    Options o;
    o.mode = p.value("mode", default_mode);
    o.target = p.value("target", o.target);
    o.volume.t_clear = p.value("t_clear", o.volume.t_clear);
    o.volume.t_rec = p.value("t_rec", o.volume.t_rec);
    o.volume.c_min = p.value("c_min", o.volume.c_min);
    o.scatter.t_faint = p.value("t_faint", o.scatter.t_faint);
    o.dr_param = p.value("dr_param", o.dr_param);
    o.dr_clear_separation = p.value("dr_clear_separation", o.dr_clear_separation);
    if (o.mode != "volume" && o.mode != "scatter" && o.mode != "dr") {
        throw InvalidConfig("unknown oracle mode " + o.mode);
    }
    return o;
}

Perceived OraclePerception::perceive(const PerceptionRequest& request) {
    if (options_.mode == "volume") return perceive_volume(request);
    if (options_.mode == "scatter") return perceive_scatter(request);
    return perceive_dr(request);
}

Perceived OraclePerception::perceive_volume(const PerceptionRequest& request) const {
    const auto& stats = request.current.stats;
    if (!stats.is_object() || !stats.contains("structures")) {
        throw PerceptionError("volume oracle needs structure stats from the tool");
    }
    const auto structures = structure_stats_from_json(stats["structures"]);
    Perceived out;
    out.assessment = oracle_assess_volume(structures, options_.target, options_.volume);
    const auto& s = structures.at(options_.target);
    std::ostringstream why;
    why << options_.target << ": coverage " << s.silhouette_coverage << ", mean share " << s.mean_share
        << ", occluder share " << s.occluder_share;
    out.response.reasoning = why.str();
    out.response.assessment_label = label_of(out.assessment);
    return out;
}

Perceived OraclePerception::perceive_scatter(const PerceptionRequest& request) const {
    if (!request.reference) {
        throw PerceptionError("scatter oracle needs a reference frame to compare against");
    }
    auto metrics = [](const nlohmann::json& stats) {
        if (!stats.is_object() || !stats.contains("overplot")) {
            throw PerceptionError("scatter oracle needs overplot metrics from the tool");
        }
        return overplot_metrics_from_json(stats["overplot"]);
    };
    const auto first = metrics(request.current.stats);
    const auto second = metrics(request.reference->stats);
    Perceived out;
    out.assessment = oracle_compare_scatter(first, second, options_.scatter);
    std::ostringstream why;
    why << "first: saturated " << first.saturated_fraction << ", faintness " << first.faintness
        << "; second: saturated " << second.saturated_fraction << ", faintness " << second.faintness;
    out.response.reasoning = why.str();
    out.response.assessment_label = label_of(out.assessment);
    return out;
}

Perceived OraclePerception::perceive_dr(const PerceptionRequest& request) {
    const auto& stats = request.current.stats;
    if (!stats.is_object() || !stats.contains("separation")) {
        throw PerceptionError("dr oracle needs a separation score from the tool");
    }
    if (!request.space) {
        throw PerceptionError("dr oracle needs the tool's parameter space");
    }
    const ParamEntry* entry = nullptr;
    if (!options_.dr_param.empty()) {
        entry = request.space->find(options_.dr_param);
    } else {
        for (const auto& e : request.space->entries()) {
            if (e.kind != ParamKind::categorical) {
                entry = &e;
                break;
            }
        }
    }
    if (!entry) {
        throw PerceptionError("dr oracle found no numeric parameter to tune");
    }
    const double score = stats["separation"].get<double>();
    const double value = number_of(request.current.params, entry->name);

    Perceived out;
    std::ostringstream why;
    std::ostringstream plan;
    why << entry->name << "=" << value << " separation " << score;
    if (score >= options_.dr_clear_separation) {
        out.response.assessment_label = "clear";
        why << " meets the target";
        plan << "stop";
    } else {
        if (!best_value_) {
            best_value_ = value;
            best_score_ = score;
            step_ = (entry->upper - entry->lower) / 4.0;
            direction_ = value + step_ <= entry->upper ? 1.0 : -1.0;
            why << " (first frame)";
        } else if (score > best_score_) {
            best_value_ = value;
            best_score_ = score;
            why << " improves on the best so far";
        } else {
            direction_ = -direction_;
            step_ /= 2.0;
            why << " is no better than " << *best_value_;
        }
        const double proposal = *best_value_ + direction_ * step_;
        out.response.assessment_label = score > 0.5 ? "recognizable" : "not recognizable";
        out.response.proposed_params = request.current.params;
        (*out.response.proposed_params)[entry->name] = proposal;
        plan << "try " << entry->name << "=" << proposal;
    }
    out.response.reasoning = why.str();
    out.response.plan = plan.str();
    out.assessment = assessment_from_label(out.response.assessment_label);
    return out;
}

}  // namespace ava
