#include "ava/errors.hpp"
#include "ava/planners/halving.hpp"
#include "ava/planners/llm_plan.hpp"
#include "ava/planners/tf_search.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ava;

namespace {

const Assessment kNot{NotRecognizable{}, std::nullopt};
const Assessment kRec{Recognizable{}, std::nullopt};
const Assessment kClear{Clear{}, std::nullopt};

Assessment comparison(Winner w, bool too_low = false) { return {Comparison{w, too_low, false}, std::nullopt}; }

}  // namespace

TEST_CASE("tf search window arithmetic") {
    auto s = make_tf_search_state(0.0, 255.0, 10, 1.0, 0.5);
    CHECK(s.window_width() == doctest::Approx(25.5));
    CHECK(s.start_point == 0.0);
    CHECK(s.end_point == doctest::Approx(25.5));

    auto [a, step_a] = tf_search_step(s, kNot);
    CHECK(a.start_point == doctest::Approx(25.5));
    CHECK(a.end_point == doctest::Approx(51.0));
    CHECK(std::holds_alternative<Next>(step_a.action));

    auto [b, step_b] = tf_search_step(a, kRec);
    CHECK(b.start_point == doctest::Approx(25.5 + 12.75));
    CHECK(b.fine_tuning);
    CHECK(step_b.note.starts_with("fine-tuning"));

    auto [c, step_c] = tf_search_step(b, kClear);
    CHECK(c == b);
    CHECK(std::get<Done>(step_c.action).params == tf_window_params(b.start_point, b.end_point));

    CHECK_THROWS_AS(tf_search_step(s, comparison(Winner::first)), WrongAssessmentKind);
    CHECK_THROWS_AS(make_tf_search_state(1.0, 1.0), InvalidConfig);
    CHECK_THROWS_AS(make_tf_search_state(0.0, 1.0, 0), InvalidConfig);
    CHECK_THROWS_AS(make_tf_search_state(0.0, 1.0, 10, 1.0, 1.5), InvalidConfig);
}

TEST_CASE("tf search fails once the window would leave the range") {
    auto s = make_tf_search_state(0.0, 10.0, 10);
    int nexts = 0;
    for (;;) {
        auto [n, step] = tf_search_step(s, kNot);
        if (std::holds_alternative<Failed>(step.action)) break;
        ++nexts;
        s = n;
    }
    // Starts 0..9 are all visited; a tenth shift would start at the top.
    CHECK(nexts == 9);
    CHECK(s.start_point == doctest::Approx(9.0));
}

TEST_CASE("tf search invariants under arbitrary verdicts (property)") {
    std::mt19937_64 rng(17);
    const Assessment verdicts[] = {kNot, kRec};
    for (int trial = 0; trial < 200; ++trial) {
        auto s = make_tf_search_state(0.0, 255.0, 1 + static_cast<int>(rng() % 20), 0.25 + (rng() % 8) * 0.25,
                                      0.1 + (rng() % 9) * 0.1);
        const double width = s.window_width();
        for (int i = 0; i < 300; ++i) {
            auto [n, step] = tf_search_step(s, verdicts[rng() % 2]);
            if (std::holds_alternative<Failed>(step.action)) {
                CHECK(s.start_point < s.max_val);
                break;
            }
            CHECK(n.start_point > s.start_point);
            CHECK(n.start_point < n.max_val);
            CHECK(n.end_point - n.start_point == doctest::Approx(width));
            s = n;
        }
    }
}

TEST_CASE("halving takes exactly five halvings at threshold 0.05 for any comparison outcomes") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        auto s = make_halving_state(1.0, 0.0, 0.05);
        int halvings = 0;
        for (;;) {
            const double before = s.width();
            const Winner w = rng() % 2 ? Winner::first : Winner::second;
            auto [n, step] = halving_step(s, comparison(w, rng() % 5 == 0));
            ++halvings;
            CHECK(n.width() == before / 2.0);  // powers of two: exact
            s = n;
            if (std::holds_alternative<Done>(step.action)) {
                CHECK(testing::num(std::get<Done>(step.action).params, "opacity") == s.opacity);
                break;
            }
            CHECK(testing::num(std::get<Next>(step.action).params, "opacity") == s.candidate());
            REQUIRE(halvings < 20);
        }
        CHECK(halvings == static_cast<int>(std::ceil(std::log2(1.0 / 0.05))));
    }
}

TEST_CASE("halving bracket moves toward the preferred side") {
    auto s = make_halving_state();
    auto [won, _a] = halving_step(s, comparison(Winner::first));
    CHECK(won.opacity == 0.5);
    CHECK(won.floor == 0.0);
    auto [lost, _b] = halving_step(s, comparison(Winner::second));
    CHECK(lost.opacity == 1.0);
    CHECK(lost.floor == 0.5);
    auto [low, _c] = halving_step(s, comparison(Winner::first, true));
    CHECK(low.floor == 0.5);

    auto q = make_halving_state(1.0, 0.0, 0.05, true);
    auto [quarter, _d] = halving_step(q, comparison(Winner::second));
    CHECK(quarter.floor == 0.25);
    CHECK(quarter.opacity == 1.0);
    CHECK_THROWS_AS(halving_step(s, kClear), WrongAssessmentKind);
    CHECK_THROWS_AS(make_halving_state(0.0), InvalidConfig);
    CHECK_THROWS_AS(make_halving_state(0.5, 0.5), InvalidConfig);
}

TEST_CASE("halving planner renders a baseline before comparing") {
    HalvingOpacityPlanner p({});
    ToolDescriptor d;
    d.name = "scatter";
    d.param_space = ParamSpace({ParamEntry{"opacity", ParamKind::continuous, 0.001, 1.0, {}},
                                ParamEntry{"radius", ParamKind::continuous, 1.0, 5.0, {}}});
    const auto init = p.initial(d);
    CHECK(init == ParamVector{{"opacity", 1.0}, {"radius", 3.0}});
    CHECK_FALSE(p.wants_assessment());
    CHECK_FALSE(p.reference());

    Perceived baseline;
    const auto first = p.step(baseline, init, Session{});
    CHECK(std::get<Next>(first.action).params == ParamVector{{"opacity", 0.5}, {"radius", 3.0}});
    CHECK(p.wants_assessment());
    CHECK(p.reference() == ParamVector{{"opacity", 1.0}, {"radius", 3.0}});

    Perceived won;
    won.assessment = comparison(Winner::first);
    const auto second = p.step(won, {}, Session{});
    CHECK(std::get<Next>(second.action).params == ParamVector{{"opacity", 0.25}, {"radius", 3.0}});
    CHECK(p.reference() == ParamVector{{"opacity", 0.5}, {"radius", 3.0}});
    CHECK(p.halvings() == 1);

    ToolDescriptor bad;
    bad.param_space = ParamSpace({ParamEntry{"alpha", ParamKind::continuous, 0.0, 1.0, {}}});
    CHECK_THROWS_AS(p.initial(bad), InvalidConfig);
}

TEST_CASE("llm plan step follows the model within the space") {
    const ParamSpace space({ParamEntry{"perplexity", ParamKind::continuous, 2.0, 100.0, {}},
                            ParamEntry{"method", ParamKind::categorical, 0.0, 0.0, {"tsne"}}});
    const LlmPlanContext ctx{{{"perplexity", 50.0}, {"method", std::string("tsne")}}, "clear"};

    ParsedResponse stop;
    stop.assessment_label = "Clear.";
    CHECK(std::get<Done>(llm_plan_step(stop, space, ctx).action).params == ctx.last_params);

    ParsedResponse propose;
    propose.assessment_label = "recognizable";
    propose.proposed_params = ParamVector{{"perplexity", 250.0}};
    const auto step = llm_plan_step(propose, space, ctx);
    CHECK(std::get<Next>(step.action).params == ParamVector{{"perplexity", 100.0}, {"method", std::string("tsne")}});
    CHECK(step.note.find("clamped perplexity from 250 to 100") != std::string::npos);

    ParsedResponse silent;
    silent.assessment_label = "recognizable";
    CHECK(std::holds_alternative<Failed>(llm_plan_step(silent, space, ctx).action));
}

TEST_CASE("make_planner builds each kind") {
    AgentConfig c;
    c.planner_kind = PlannerKind::heuristic_tf;
    c.planner_params = {{"bins", 5}};
    CHECK(dynamic_cast<HeuristicTfPlanner*>(make_planner(c).get()));
    c.planner_kind = PlannerKind::halving_opacity;
    c.planner_params = {{"initial_opacity", 0.8}};
    c.stop_threshold = 0.1;
    CHECK(dynamic_cast<HalvingOpacityPlanner*>(make_planner(c).get()));
    c.planner_kind = PlannerKind::llm_centric;
    c.planner_params = {{"initial", {{"perplexity", 5}}}};
    auto p = make_planner(c);
    ToolDescriptor d;
    d.param_space = ParamSpace({ParamEntry{"perplexity", ParamKind::continuous, 2.0, 100.0, {}}});
    CHECK(p->initial(d) == ParamVector{{"perplexity", 5.0}});
    c.planner_params = {{"initial", {{"perplexity", true}}}};
    CHECK_THROWS_AS(make_planner(c), InvalidParams);
}
