#include "ava/bench/bench.hpp"
#include "ava/bench/phantom.hpp"
#include "ava/errors.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>

using namespace ava;

TEST_CASE("task names round trip and accept hyphens") {
    for (auto t : all_bench_tasks()) CHECK(bench_task_from_string(to_string(t)) == t);
    CHECK(bench_task_from_string("scatter-cluster-count") == BenchTask::scatter_cluster_count);
    CHECK_THROWS_AS(bench_task_from_string("pie_chart"), BadParams);
    CHECK(all_bench_tasks().size() == 13);
}

TEST_CASE("cases are reproducible from task and seed") {
    for (auto t : all_bench_tasks()) {
        const auto a = gen_case(t, 7);
        const auto b = gen_case(t, 7);
        CHECK(encode_png(a.image) == encode_png(b.image));
        CHECK(a.ground_truth == b.ground_truth);
        CHECK(a.params == b.params);
        CHECK_FALSE(a.prompt.empty());
        // Replaying with the resolved params gives the same case.
        CHECK(encode_png(gen_case(t, 7, a.params).image) == encode_png(a.image));
    }
    CHECK(encode_png(gen_case(BenchTask::scatter_cluster_count, 1).image) !=
          encode_png(gen_case(BenchTask::scatter_cluster_count, 2).image));
}

TEST_CASE("explicit generator params pin the truth") {
    for (int k = 2; k <= 7; ++k) {
        const auto c = gen_case(BenchTask::scatter_cluster_count, 3, {{"clusters", k}});
        CHECK(c.ground_truth == k);
    }
    CHECK(gen_case(BenchTask::graph_node_count, 3, {{"nodes", 12}}).ground_truth == 12);
    CHECK_THROWS_AS(gen_case(BenchTask::scatter_cluster_count, 3, {{"clusters", 50}}), BadParams);
    CHECK_THROWS_AS(gen_case(BenchTask::scatter_cluster_count, 3, {{"clusters", "three"}}), BadParams);
    CHECK_THROWS_AS(gen_case(BenchTask::scatter_cluster_count, 3, nlohmann::json::array()), BadParams);
}

TEST_CASE("first integer skips decimals and identifiers") {
    CHECK(first_integer("There are 4 clusters") == 4L);
    CHECK(first_integer("opacity 0.5, then 3 groups") == 3L);
    CHECK(first_integer("X2 and X3 show 7") == 7L);
    CHECK_FALSE(first_integer("none at all").has_value());
    CHECK(first_integer("12") == 12L);
}

TEST_CASE("scoring raw answers") {
    CHECK(score_answer(BenchTask::scatter_cluster_count, 3, {}, "I see 3 clusters."));
    CHECK_FALSE(score_answer(BenchTask::scatter_cluster_count, 3, {}, "I see 4 clusters."));
    CHECK_FALSE(score_answer(BenchTask::scatter_cluster_count, 3, {}, "several"));
    CHECK(score_answer(BenchTask::scatter_cluster, true, {}, "Yes, there is."));
    CHECK_FALSE(score_answer(BenchTask::scatter_cluster, true, {}, "No."));
    CHECK(score_answer(BenchTask::volume_recognizable, false, {}, "Not recognizable"));
    CHECK_FALSE(score_answer(BenchTask::volume_recognizable, true, {}, "Not recognizable"));
    CHECK(score_answer(BenchTask::pc_correlation, nlohmann::json{"X1", "X4"}, {}, "x4 and X1 correlate"));
    CHECK_FALSE(score_answer(BenchTask::pc_correlation, nlohmann::json{"X1", "X4"}, {}, "X1, X2 and X4"));
}

TEST_CASE("ground-truth responder scores every task perfectly") {
    GroundTruthResponder oracle;
    BenchOptions o;
    o.trials = 3;
    const auto report = run_benchmarks(all_bench_tasks(), oracle, o);
    REQUIRE(report.rows.size() == all_bench_tasks().size());
    for (const auto& row : report.rows) {
        CAPTURE(to_string(row.task));
        CHECK(row.trials == 3);
        CHECK(row.success_rate() == 1.0);
    }
    // Stored trials rescore to the same report.
    std::vector<BenchTrial> stored;
    for (const auto& t : report.trials) stored.push_back(bench_trial_from_json(to_json(t)));
    const auto again = rescore(stored);
    CHECK(bench_report_from_json(to_json(again)).rows.size() == report.rows.size());
    for (std::size_t i = 0; i < again.rows.size(); ++i) CHECK(again.rows[i].successes == report.rows[i].successes);

    ConstantResponder mute("no idea");
    const auto zero = run_benchmark(BenchTask::graph_node_count, mute, o);
    CHECK(zero.rows.at(0).success_rate() == 0.0);
}

TEST_CASE("report tables and image export") {
    testing::TempDir dir;
    GroundTruthResponder oracle;
    BenchOptions o;
    o.trials = 2;
    o.image_dir = dir.path().string();
    const auto r = run_benchmark(BenchTask::scatter_cluster_count, oracle, o);
    for (const auto& t : r.trials) CHECK(std::filesystem::exists(dir / (t.image_hash + ".png")));
    const auto text = format_report(r);
    CHECK(text.find("cluster count  100%") != std::string::npos);
    CHECK(text.find("volume recognizable") != std::string::npos);
    CHECK(text.find("node count") != std::string::npos);
    o.trials = 0;
    CHECK_THROWS_AS(run_benchmark(BenchTask::scatter_cluster, oracle, o), BadParams);
}

TEST_CASE("phantom voxels stay inside their bands (property)") {
    for (int k = 0; k < 10; ++k) {
        const auto spec = single_band_phantom(k, 10, {20, 20, 20});
        const auto v = gen_volume_phantom(spec);
        const auto& mask = v.masks.at("target");
        const auto& s = spec.structures[0];
        long inside = 0;
        for (std::size_t i = 0; i < v.voxels.size(); ++i) {
            if (mask[i]) {
                ++inside;
                CHECK(v.voxels[i] > s.band_lo);
                CHECK(v.voxels[i] < s.band_hi);
            } else {
                CHECK(v.voxels[i] == 0);
            }
        }
        CHECK(inside > 0);
    }
    CHECK_THROWS_AS(single_band_phantom(10, 10), InvalidParams);

    PhantomSpec clash = single_band_phantom(2);
    auto second = clash.structures[0];
    second.id = "other";
    second.band_lo += 5;
    second.band_hi += 5;
    clash.structures.push_back(second);
    CHECK_THROWS_AS(gen_volume_phantom(clash), OverlappingBands);
    CHECK(phantom_spec_from_json(to_json(single_band_phantom(3))).structures.size() == 1);
}
