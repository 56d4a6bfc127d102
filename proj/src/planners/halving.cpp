#include "ava/planners/halving.hpp"

#include "ava/errors.hpp"

#include <sstream>

namespace ava {

HalvingState make_halving_state(double opacity, double floor, double threshold, bool quarter_step_on_loss) {
    if (!(opacity > 0.0 && opacity <= 1.0)) {
        throw InvalidConfig("initial opacity must lie in (0, 1]");
    }
    if (!(floor >= 0.0 && floor < opacity)) {
        throw InvalidConfig("floor opacity must lie in [0, opacity)");
    }
    if (!(threshold > 0.0)) {
        throw InvalidConfig("halving threshold must be positive");
    }
    return HalvingState{opacity, floor, threshold, quarter_step_on_loss};
}

namespace {

ParamVector with_value(ParamVector base, const std::string& param, double value) {
    base[param] = value;
    return base;
}

}  // namespace

std::pair<HalvingState, PlannerStep> halving_step(const HalvingState& state, const Assessment& comparison,
                                                  const std::string& param) {
    const auto* cmp = std::get_if<Comparison>(&comparison.verdict);
    if (!cmp) {
        throw WrongAssessmentKind("halving search expects a comparison, got '" + label_of(comparison) + "'");
    }
    HalvingState next = state;
    const double candidate = state.candidate();
    std::ostringstream note;
    if (cmp->too_low) {
        next.floor = candidate;
        note << "opacity " << candidate << " too low; raising floor";
    } else if (cmp->winner == Winner::first) {
        next.opacity = candidate;
        note << "opacity " << candidate << " preferred over " << state.opacity;
    } else if (state.quarter_step_on_loss) {
        next.floor = state.floor + state.width() / 4.0;
        note << "opacity " << state.opacity << " preferred; raising floor by a quarter bracket";
    } else {
        next.floor = candidate;
        note << "opacity " << state.opacity << " preferred over " << candidate << "; raising floor";
    }
    if (next.width() <= next.threshold) {
        note << "; bracket " << next.width() << " within threshold";
        return {next, PlannerStep{Done{with_value({}, param, next.opacity)}, note.str()}};
    }
    note << "; next candidate " << next.candidate();
    return {next, PlannerStep{Next{with_value({}, param, next.candidate())}, note.str()}};
}

ParamVector HalvingOpacityPlanner::initial(const ToolDescriptor& tool) {
    if (!tool.param_space.find(options_.param)) {
        throw InvalidConfig("tool " + tool.name + " has no parameter '" + options_.param + "'");
    }
    state_ = make_halving_state(options_.initial_opacity, options_.floor_opacity, options_.threshold,
                                options_.quarter_step_on_loss);
    base_ = clamp_to_space(tool.param_space, {}).values;
    baseline_pending_ = true;
    halvings_ = 0;
    return with_value(base_, options_.param, state_.opacity);
}

std::optional<ParamVector> HalvingOpacityPlanner::reference() const {
    if (baseline_pending_) {
        return std::nullopt;
    }
    return with_value(base_, options_.param, state_.opacity);
}

PlannerStep HalvingOpacityPlanner::step(const Perceived& perceived, const ParamVector&, const Session&) {
    if (baseline_pending_) {
        baseline_pending_ = false;
        std::ostringstream note;
        note << "baseline at opacity " << state_.opacity << "; next candidate " << state_.candidate();
        return PlannerStep{Next{with_value(base_, options_.param, state_.candidate())}, note.str()};
    }
    auto [next, step] = halving_step(state_, perceived.assessment, options_.param);
    state_ = next;
    ++halvings_;
    // Carry the fixed parameters through.
    if (auto* n = std::get_if<Next>(&step.action)) {
        n->params = with_value(base_, options_.param, number_of(n->params, options_.param));
    } else if (auto* d = std::get_if<Done>(&step.action)) {
        d->params = with_value(base_, options_.param, number_of(d->params, options_.param));
    }
    return step;
}

}  // namespace ava
