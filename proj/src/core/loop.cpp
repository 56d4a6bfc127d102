#include "ava/core/loop.hpp"

#include "ava/core/prompt.hpp"
#include "ava/errors.hpp"

#include <chrono>

namespace ava {

std::string derive_session_id(const AgentConfig& config, const std::string& goal, const ToolDescriptor& tool) {
    const std::string key = to_json(config).dump() + "\n" + goal + "\n" + to_json(tool).dump();
    const auto hash = content_hash(std::span(reinterpret_cast<const std::uint8_t*>(key.data()), key.size()));
    return "s-" + hash.substr(0, 16);
}

namespace {

Perceived perceive_with_retries(Perception& perception, const PerceptionRequest& request, int retries) {
    for (int attempt = 0;; ++attempt) {
        try {
            return perception.perceive(request);
        } catch (const PerceptionError&) {
            if (attempt >= retries) throw;
        } catch (const std::exception& e) {
            if (attempt >= retries) {
                throw PerceptionError(std::string("perception failed: ") + e.what());
            }
        }
    }
}

Observation observation_of(const IterationRecord& record, const ImageStore& images) {
    auto png = images.get(record.image_ref);
    if (!png) {
        throw PerceptionError("image " + record.image_ref + " missing from store");
    }
    return Observation{record.params, std::move(*png), record.image_ref, record.stats};
}

}  // namespace

Session run_loop(const AgentConfig& config, const std::string& goal, VisTool& tool, Perception& perception,
                 Planner& planner, const LoopOptions& options) {
    validate(config);
    if (!options.images) {
        throw InvalidConfig("run_loop needs an image store");
    }
    ImageStore& images = *options.images;
    const ToolDescriptor descriptor = tool.describe();

    Session session;
    session.id = options.session_id.empty() ? derive_session_id(config, goal, descriptor) : options.session_id;
    session.goal = goal;
    session.config = config;

    std::string role_prompt = render_role_prompt(config, {{"goal", goal}});
    auto initial = clamp_to_space(descriptor.param_space, planner.initial(descriptor));
    ParamVector params = std::move(initial.values);
    std::vector<std::string> pending_notes = std::move(initial.notes);

    using Clock = std::chrono::steady_clock;

    for (int step = 0; step < config.max_iterations; ++step) {
        if (options.control) {
            auto directive = options.control->checkpoint();
            if (directive.goal) {
                session.goal = *directive.goal;
                role_prompt = render_role_prompt(config, {{"goal", session.goal}});
            }
            if (directive.abort) {
                session.status = SessionStatus::failed;
                session.status_reason = "aborted";
                return session;
            }
            if (directive.override_params) {
                auto clamped = clamp_to_space(descriptor.param_space, *directive.override_params, params);
                params = std::move(clamped.values);
                pending_notes.assign({"operator override " + describe(params)});
                pending_notes.insert(pending_notes.end(), clamped.notes.begin(), clamped.notes.end());
            }
        }

        const auto started = Clock::now();
        RenderResult rendered = tool.render(params);
        const std::string image_ref = images.put(rendered.png);

        Perceived perceived;
        if (planner.wants_assessment()) {
            PerceptionRequest request;
            request.role_prompt = role_prompt;
            request.goal = session.goal;
            request.space = &descriptor.param_space;
            request.current = Observation{params, std::move(rendered.png), image_ref, rendered.stats};
            if (auto ref = planner.reference()) {
                auto it = std::find_if(session.records.rbegin(), session.records.rend(),
                                       [&](const IterationRecord& r) { return r.params == *ref; });
                if (it == session.records.rend()) {
                    throw PerceptionError("reference frame " + describe(*ref) + " was never rendered");
                }
                request.reference = observation_of(*it, images);
            }
            request.context = format_context(select_context(session, config.context_k));
            request.want_params = planner.expects_proposals();
            perceived = perceive_with_retries(perception, request, options.perception_retries);
            session.token_usage += perceived.usage;
        } else {
            perceived.response.assessment_label = "baseline";
            perceived.assessment = Assessment{Answer{"baseline"}, std::nullopt};
        }

        PlannerStep planned = planner.step(perceived, params, session);

        IterationRecord record;
        record.step = step;
        record.params = params;
        record.image_ref = image_ref;
        record.reasoning = perceived.response.reasoning;
        record.plan = perceived.response.plan.empty() ? planned.note : perceived.response.plan;
        record.assessment = perceived.assessment;
        record.stats = rendered.stats;
        if (options.record_timing) {
            record.wall_time_ms =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
        }

        if (auto* next = std::get_if<Next>(&planned.action)) {
            auto clamped = clamp_to_space(descriptor.param_space, next->params, params);
            pending_notes.insert(pending_notes.end(), clamped.notes.begin(), clamped.notes.end());
            params = std::move(clamped.values);
        }
        for (const auto& note : pending_notes) {
            record.plan += (record.plan.empty() ? "" : "; ") + note;
        }
        pending_notes.clear();

        session.records.push_back(std::move(record));
        if (options.on_record) {
            options.on_record(session, session.records.back());
        }

        if (auto* done = std::get_if<Done>(&planned.action)) {
            session.final_params = clamp_to_space(descriptor.param_space, done->params, params).values;
            session.status = SessionStatus::done_success;
            return session;
        }
        if (auto* failed = std::get_if<Failed>(&planned.action)) {
            session.status = SessionStatus::failed;
            session.status_reason = failed->reason;
            return session;
        }
    }
    session.status = SessionStatus::done_budget_exhausted;
    return session;
}

}  // namespace ava
