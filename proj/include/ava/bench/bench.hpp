#pragma once

#include "ava/image.hpp"
#include "ava/perception/chat_client.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ava {

enum class BenchTask {
    scatter_cluster,
    scatter_cluster_count,
    scatter_outlier,
    scatter_outlier_count,
    scatter_correlation,
    pc_cluster_count,
    pc_outlier_count,
    pc_correlation,
    graph_node_count,
    graph_find_node,
    graph_connection,
    graph_neighbor,
    volume_recognizable,
};

const std::vector<BenchTask>& all_bench_tasks();
std::string to_string(BenchTask task);
BenchTask bench_task_from_string(const std::string& name);  // throws BadParams

struct BenchCase {
    BenchTask task{};
    std::uint64_t seed = 0;
    nlohmann::json params;        // the fully resolved generator parameters
    Image image;
    nlohmann::json ground_truth;  // int, bool, or a task-specific object (see gen_case)
    nlohmann::json context;       // what a scorer needs besides the truth (labels, coefficients)
    std::string prompt;
};

// Reproducible from (task, seed, params). Recognized params, all optional:
//   clusters, outliers, spread, points, coefficients [a,b], nodes, edge_probability,
//   peak_opacity, window_bin. Unset values are drawn from the seed.
// Throws BadParams outside the supported ranges.
BenchCase gen_case(BenchTask task, std::uint64_t seed, const nlohmann::json& params = nlohmann::json::object());

// First integer token in the text, if any.
std::optional<long> first_integer(const std::string& text);

// Pure scoring of a raw answer against the recorded truth.
bool score_answer(BenchTask task, const nlohmann::json& ground_truth, const nlohmann::json& context,
                  const std::string& answer);

class BenchResponder {
public:
    virtual ~BenchResponder() = default;
    virtual std::string answer(const BenchCase& c) = 0;
};

// Writes the correct answer by reading the case's ground truth.
class GroundTruthResponder final : public BenchResponder {
public:
    std::string answer(const BenchCase& c) override;
};

class ConstantResponder final : public BenchResponder {
public:
    explicit ConstantResponder(std::string text) : text_(std::move(text)) {}
    std::string answer(const BenchCase&) override { return text_; }

private:
    std::string text_;
};

// Sends the case prompt and image to a vision chat model.
class ChatResponder final : public BenchResponder {
public:
    explicit ChatResponder(ChatBackend& backend) : backend_(backend) {}
    std::string answer(const BenchCase& c) override;

private:
    ChatBackend& backend_;
};

struct BenchTrial {
    BenchTask task{};
    std::uint64_t seed = 0;
    std::string prompt;
    std::string image_hash;
    std::string answer;
    nlohmann::json ground_truth;
    nlohmann::json context;
    bool correct = false;
    std::string error;  // responder failure; counted as incorrect
};

struct BenchRow {
    BenchTask task{};
    int trials = 0;
    int successes = 0;
    double success_rate() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

struct BenchReport {
    std::vector<BenchRow> rows;  // in all_bench_tasks() order
    std::vector<BenchTrial> trials;
};

struct BenchOptions {
    int trials = 10;
    std::uint64_t base_seed = 1;  // trial i uses base_seed + i
    nlohmann::json params = nlohmann::json::object();
    std::string image_dir;  // when set, case images are written there as <hash>.png
};

BenchReport run_benchmark(BenchTask task, BenchResponder& responder, const BenchOptions& options = {});
BenchReport run_benchmarks(const std::vector<BenchTask>& tasks, BenchResponder& responder,
                           const BenchOptions& options = {});

// Rebuilds the report from stored trials by scoring each answer again.
BenchReport rescore(const std::vector<BenchTrial>& trials);

nlohmann::json to_json(const BenchTrial& t);
BenchTrial bench_trial_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BenchReport& report);
BenchReport bench_report_from_json(const nlohmann::json& j);

// Plain-text tables: scatter / parallel-coordinate tasks, graph tasks, then volume.
std::string format_report(const BenchReport& report);

}  // namespace ava
