#include "ava/bench/bench.hpp"
#include "ava/bench/phantom.hpp"
#include "ava/charts/charts.hpp"
#include "ava/core/agent.hpp"
#include "ava/core/config.hpp"
#include "ava/core/loop.hpp"
#include "ava/core/store.hpp"
#include "ava/errors.hpp"
#include "ava/service/service.hpp"
#include "ava/toolproto/http.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using nlohmann::json;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

void wait_for_signal() {
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

// "k=v" pairs; values that parse as JSON keep their type, anything else is a string.
json parse_assignments(const std::vector<std::string>& items) {
    json out = json::object();
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ava::InvalidParams("expected key=value, got " + item);
        const auto key = item.substr(0, eq);
        const auto text = item.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        out[key] = value.is_discarded() ? json(text) : value;
    }
    return out;
}

json parse_json_arg(const std::string& text, const std::string& what) {
    if (text.empty()) return json::object();
    // Either inline JSON or a path to a JSON file.
    json j = json::parse(text, nullptr, false);
    if (!j.is_discarded()) return j;
    std::ifstream in(text);
    if (!in) throw ava::InvalidConfig(what + " is neither JSON nor a readable file: " + text);
    j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ava::InvalidConfig(what + " file is not valid JSON: " + text);
    return j;
}

struct ToolArgs {
    std::string tool;
    std::string data;
    std::string tool_options;
    std::vector<std::string> tool_option_items;

    void add(CLI::App* app, bool tool_required) {
        auto* opt = app->add_option("--tool", tool, "builtin:volume, builtin:scatter, builtin:mock-dr[-5] or an http(s) endpoint");
        if (tool_required) opt->required();
        app->add_option("--data", data, "volume sidecar JSON or raw file, or a CSV for builtin:scatter");
        app->add_option("--tool-options", tool_options, "tool options as JSON or a JSON file");
        app->add_option("--tool-option", tool_option_items, "one tool option as key=value (repeatable)");
    }

    json options() const {
        json o = parse_json_arg(tool_options, "--tool-options");
        if (!data.empty()) {
            if (tool == "builtin:scatter") {
                o["csv"] = data;
            } else {
                o["data"] = data;
            }
        }
        o.update(parse_assignments(tool_option_items));
        return o;
    }
};

// Flags mirror the config file keys one to one and win over the file.
struct ConfigArgs {
    std::string config_path;
    std::optional<std::string> scenario, task, approach, goal_template, planner, perception;
    std::optional<int> max_iterations, context_k;
    std::optional<double> stop_threshold;
    std::vector<std::string> constraints, planner_params, perception_params;
    std::string target;

    void add(CLI::App* app) {
        app->add_option("--config", config_path, "agent config JSON");
        app->add_option("--scenario", scenario);
        app->add_option("--task", task);
        app->add_option("--approach", approach);
        app->add_option("--goal-template", goal_template);
        app->add_option("--constraint", constraints, "appended to the config's constraints (repeatable)");
        app->add_option("--planner", planner, "heuristic_tf, halving_opacity or llm_centric");
        app->add_option("--perception", perception, "oracle or llm");
        app->add_option("--max-iterations", max_iterations);
        app->add_option("--stop-threshold", stop_threshold);
        app->add_option("--context-k", context_k);
        app->add_option("--planner-param", planner_params, "key=value (repeatable)");
        app->add_option("--perception-param", perception_params, "key=value (repeatable)");
        app->add_option("--target", target, "oracle target structure");
    }

    ava::AgentConfig build() const {
        ava::AgentConfig c = config_path.empty() ? ava::AgentConfig{} : ava::load_agent_config(config_path);
        if (scenario) c.scenario = *scenario;
        if (task) c.task = *task;
        if (approach) c.approach = *approach;
        if (goal_template) c.goal_template = *goal_template;
        c.constraints.insert(c.constraints.end(), constraints.begin(), constraints.end());
        if (planner) c.planner_kind = ava::planner_kind_from_string(*planner);
        if (perception) c.perception_kind = ava::perception_kind_from_string(*perception);
        if (max_iterations) c.max_iterations = *max_iterations;
        if (stop_threshold) c.stop_threshold = *stop_threshold;
        if (context_k) c.context_k = *context_k;
        c.planner_params.update(parse_assignments(planner_params));
        c.perception_params.update(parse_assignments(perception_params));
        if (!target.empty()) c.perception_params["target"] = target;
        ava::validate(c);
        return c;
    }
};

int cmd_run(const ConfigArgs& cfg, const ToolArgs& tool_args, const std::string& goal, const std::string& store_dir,
            const std::string& out, int retries) {
    const auto config = cfg.build();
    auto tool = ava::open_tool(tool_args.tool, tool_args.options());
    auto agent = ava::make_agent(config);
    ava::SessionStore store(store_dir);
    ava::LoopOptions lo;
    lo.images = &store.images();
    lo.perception_retries = retries;
    const auto session = ava::run_loop(config, goal, *tool, *agent.perception, *agent.planner, lo);
    store.save(session);
    if (!out.empty()) ava::write_text_file(out, ava::serialize_session(session));

    json summary{{"id", session.id},
                 {"status", ava::to_string(session.status)},
                 {"iterations", session.records.size()},
                 {"session_file", store.path_for(session.id).string()}};
    if (!session.status_reason.empty()) summary["reason"] = session.status_reason;
    summary["final_params"] = session.final_params ? ava::to_json(*session.final_params) : json(nullptr);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_render(const ToolArgs& tool_args, const std::vector<std::string>& param_items, const std::string& chart,
               const std::string& input, const std::vector<std::string>& columns, double opacity,
               std::uint64_t seed, const std::string& out) {
    ava::Bytes png;
    json stats;
    if (!chart.empty()) {
        if (input.empty()) throw ava::InvalidParams("--chart needs --input");
        if (chart == "parallel") {
            const auto table = ava::read_csv(input);
            ava::ParallelStyle style;
            style.opacity = opacity;
            style.axis_names = columns.empty() ? table.header : columns;
            const auto r = ava::render_parallel_coords(ava::csv_columns(table, columns), {}, style);
            png = ava::encode_png(r.image);
            stats = {{"warnings", r.warnings}};
        } else if (chart == "graph") {
            // {"nodes": n, "edges": [[a, b], ...], "labels": [...]}
            const auto j = parse_json_arg(input, "--input");
            ava::Graph g;
            g.nodes = j.at("nodes").get<int>();
            for (const auto& e : j.value("edges", json::array())) g.edges.emplace_back(e.at(0), e.at(1));
            std::vector<std::string> labels = j.value("labels", std::vector<std::string>{});
            if (labels.empty()) {
                for (int i = 0; i < g.nodes; ++i) labels.push_back(std::to_string(i));
            }
            const auto r = ava::render_node_link(g, ava::fr_layout(g, 200, seed), labels);
            png = ava::encode_png(r.image);
        } else {
            throw ava::InvalidParams("--chart must be parallel or graph");
        }
    } else {
        if (tool_args.tool.empty()) throw ava::InvalidParams("render needs --tool or --chart");
        auto tool = ava::open_tool(tool_args.tool, tool_args.options());
        const auto space = tool->describe().param_space;
        // Unset parameters start at their lower bound (or first category).
        ava::ParamVector params;
        const auto given = parse_assignments(param_items);
        json full = given;
        for (const auto& e : space.entries()) {
            if (full.contains(e.name)) continue;
            if (e.kind == ava::ParamKind::categorical) {
                full[e.name] = e.choices.front();
            } else {
                full[e.name] = e.lower;
            }
        }
        params = ava::param_vector_from_json(full);
        auto r = tool->render(params);
        png = std::move(r.png);
        stats = std::move(r.stats);
    }
    ava::write_file(out, png);
    json summary{{"image", out}};
    if (!stats.is_null()) summary["stats"] = stats;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

std::unique_ptr<ava::BenchResponder> make_responder(const std::string& perception,
                                                    std::unique_ptr<ava::ChatClient>& client) {
    if (perception == "stub:exact" || perception == "oracle") return std::make_unique<ava::GroundTruthResponder>();
    if (perception.starts_with("stub:")) return std::make_unique<ava::ConstantResponder>(perception.substr(5));
    if (perception == "llm") {
        client = std::make_unique<ava::ChatClient>(ava::ChatClientConfig::from_env());
        return std::make_unique<ava::ChatResponder>(*client);
    }
    throw ava::InvalidParams("--perception must be stub:exact, stub:<constant answer> or llm");
}

int cmd_bench(const std::vector<std::string>& task_names, int trials, std::uint64_t seed,
              const std::string& perception, const std::vector<std::string>& param_items, const std::string& out,
              const std::string& image_dir) {
    std::vector<ava::BenchTask> tasks;
    for (const auto& name : task_names) {
        if (name == "all") {
            tasks = ava::all_bench_tasks();
            break;
        }
        tasks.push_back(ava::bench_task_from_string(name));
    }
    std::unique_ptr<ava::ChatClient> client;
    auto responder = make_responder(perception, client);
    ava::BenchOptions options;
    options.trials = trials;
    options.base_seed = seed;
    options.params = parse_assignments(param_items);
    options.image_dir = image_dir;
    const auto report = ava::run_benchmarks(tasks, *responder, options);
    if (!out.empty()) ava::write_text_file(out, ava::to_json(report).dump(2) + "\n");
    std::cout << ava::format_report(report);
    return 0;
}

int cmd_serve(const std::string& host, int port, const std::string& data_dir) {
    ava::SessionManager::Options options;
    options.data_dir = data_dir.empty() ? ava::data_dir_from_env() : std::filesystem::path(data_dir);
    ava::SessionManager manager(options);
    ava::SessionServer server(manager, host, port);
    std::cerr << "serving sessions on " << server.endpoint() << " (data in " << options.data_dir.string() << ")\n";
    wait_for_signal();
    server.stop();
    manager.shutdown();
    return 0;
}

int cmd_tool_serve(const ToolArgs& tool_args, const std::string& host, int port) {
    auto tool = ava::open_tool(tool_args.tool, tool_args.options());
    ava::ToolServer server(*tool, host, port);
    std::cerr << "serving " << tool_args.tool << " on " << server.endpoint() << "\n";
    wait_for_signal();
    server.stop();
    return 0;
}

int cmd_make_phantom(const std::string& out, int band_bin, int bins, const std::vector<int>& dims,
                     const std::string& spec_text) {
    ava::PhantomSpec spec;
    if (!spec_text.empty()) {
        spec = ava::phantom_spec_from_json(parse_json_arg(spec_text, "--spec"));
    } else {
        if (dims.size() != 3) throw ava::InvalidParams("--dims needs three values");
        spec = ava::single_band_phantom(band_bin, bins, {dims[0], dims[1], dims[2]});
    }
    const auto volume = ava::gen_volume_phantom(spec);
    ava::save_volume(volume, out);
    std::cout << json{{"raw", out + ".raw"}, {"sidecar", out + ".json"}, {"spec", ava::to_json(spec)}}.dump(2)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Autonomous visualization agent"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one agent session to completion");
    ConfigArgs run_cfg;
    ToolArgs run_tool;
    std::string goal, store_dir = "ava-runs", run_out;
    int retries = 0;
    run_cfg.add(run);
    run_tool.add(run, true);
    run->add_option("--goal", goal, "natural-language goal")->required();
    run->add_option("--store", store_dir, "session store directory")->capture_default_str();
    run->add_option("--out", run_out, "also write the session JSON here");
    run->add_option("--perception-retries", retries)->capture_default_str();

    auto* render = app.add_subcommand("render", "Render one image");
    ToolArgs render_tool;
    std::vector<std::string> render_params, render_columns;
    std::string chart, chart_input, render_out = "render.png";
    double chart_opacity = 0.35;
    std::uint64_t render_seed = 0;
    render_tool.add(render, false);
    render->add_option("--param", render_params, "tool parameter key=value (repeatable)");
    render->add_option("--chart", chart, "parallel (CSV input) or graph (JSON input) instead of a tool");
    render->add_option("--input", chart_input, "chart input file");
    render->add_option("--columns", render_columns, "CSV columns for parallel coordinates")->delimiter(',');
    render->add_option("--opacity", chart_opacity, "line opacity for parallel coordinates")->capture_default_str();
    render->add_option("--seed", render_seed, "graph layout seed")->capture_default_str();
    render->add_option("--out", render_out, "PNG output path")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "Run the perception benchmark");
    std::vector<std::string> bench_tasks{"all"}, bench_params;
    int trials = 10;
    std::uint64_t bench_seed = 1;
    std::string bench_perception = "stub:exact", bench_out, bench_images;
    bench->add_option("--task", bench_tasks, "task name or all (repeatable)")->capture_default_str();
    bench->add_option("--trials", trials)->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "base seed; trial i uses seed + i")->capture_default_str();
    bench->add_option("--perception", bench_perception, "stub:exact, stub:<constant answer> or llm")
        ->capture_default_str();
    bench->add_option("--param", bench_params, "case generator parameter key=value (repeatable)");
    bench->add_option("--out", bench_out, "report JSON path");
    bench->add_option("--image-dir", bench_images, "write case images here");

    auto* serve = app.add_subcommand("serve", "Serve the session API");
    std::string serve_host = "127.0.0.1", serve_data;
    int serve_port = 8080;
    serve->add_option("--host", serve_host)->capture_default_str();
    serve->add_option("--port", serve_port)->capture_default_str();
    serve->add_option("--data-dir", serve_data, "overrides AVA_DATA_DIR");

    auto* tool_serve = app.add_subcommand("tool-serve", "Expose a built-in tool on the wire protocol");
    ToolArgs ts_tool;
    std::string ts_host = "127.0.0.1";
    int ts_port = 8090;
    ts_tool.add(tool_serve, true);
    tool_serve->add_option("--host", ts_host)->capture_default_str();
    tool_serve->add_option("--port", ts_port)->capture_default_str();

    auto* make_phantom = app.add_subcommand("make-phantom", "Write a synthetic volume with a structure mask");
    std::string phantom_out, phantom_spec;
    int band_bin = 4, bins = 10;
    std::vector<int> dims{48, 48, 48};
    make_phantom->add_option("--out", phantom_out, "output stem (<stem>.raw, <stem>.json)")->required();
    make_phantom->add_option("--band-bin", band_bin, "histogram bin holding the target sphere")->capture_default_str();
    make_phantom->add_option("--bins", bins)->capture_default_str();
    make_phantom->add_option("--dims", dims)->delimiter(',')->expected(3);
    make_phantom->add_option("--spec", phantom_spec, "full phantom spec as JSON or a JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*run) return cmd_run(run_cfg, run_tool, goal, store_dir, run_out, retries);
        if (*render) {
            return cmd_render(render_tool, render_params, chart, chart_input, render_columns, chart_opacity,
                              render_seed, render_out);
        }
        if (*bench) return cmd_bench(bench_tasks, trials, bench_seed, bench_perception, bench_params, bench_out,
                                     bench_images);
        if (*serve) return cmd_serve(serve_host, serve_port, serve_data);
        if (*tool_serve) return cmd_tool_serve(ts_tool, ts_host, ts_port);
        if (*make_phantom) return cmd_make_phantom(phantom_out, band_bin, bins, dims, phantom_spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
