#include "ava/bench/bench.hpp"

#include "ava/bench/phantom.hpp"
#include "ava/charts/charts.hpp"
#include "ava/errors.hpp"
#include "ava/perception/oracle.hpp"
#include "ava/volren/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace ava {

namespace {

const std::vector<std::pair<BenchTask, const char*>>& task_names() {
    static const std::vector<std::pair<BenchTask, const char*>> kNames{
        {BenchTask::scatter_cluster, "scatter_cluster"},
        {BenchTask::scatter_cluster_count, "scatter_cluster_count"},
        {BenchTask::scatter_outlier, "scatter_outlier"},
        {BenchTask::scatter_outlier_count, "scatter_outlier_count"},
        {BenchTask::scatter_correlation, "scatter_correlation"},
        {BenchTask::pc_cluster_count, "pc_cluster_count"},
        {BenchTask::pc_outlier_count, "pc_outlier_count"},
        {BenchTask::pc_correlation, "pc_correlation"},
        {BenchTask::graph_node_count, "graph_node_count"},
        {BenchTask::graph_find_node, "graph_find_node"},
        {BenchTask::graph_connection, "graph_connection"},
        {BenchTask::graph_neighbor, "graph_neighbor"},
        {BenchTask::volume_recognizable, "volume_recognizable"},
    };
    return kNames;
}

constexpr const char* kScatterRole = "You are a scatter plot visualization expert. ";
constexpr const char* kParallelRole = "You are a parallel coordinate visualization expert. ";
constexpr const char* kGraphRole = "You are a graph visualization expert. ";
constexpr const char* kClusterQuestion =
    "Is there any cluster in this visualization? Can you tell me how many clusters are in this visualization?";
constexpr const char* kOutlierQuestion =
    "Is there any outlier in this visualization? Can you tell me how many outliers are in this visualization?";
constexpr const char* kVolumePrompt =
    "You are provided with several screenshots showing a volume rendering of the same CT data, for each image "
    "assess whether you can recognize the structure of interest, {structure}. Only assess for the structure of "
    "interest and not any other structures you can recognize in the screenshot. Use only one of these options "
    "for assessment: 'Not recognizable', and 'Recognizable'. 'Not recognizable' means that the structure of "
    "interest cannot be identified in the image, even if another structure is recognizable.  'Recognizable' "
    "implies that both the structure of interest and its shape can be discerned in the screenshot.";

const std::vector<std::string>& name_pool() {
    static const std::vector<std::string> kPool{
        "Ada", "Bob", "Cal", "Dee", "Eve", "Fay", "Gus", "Hal", "Ivy", "Jon", "Kim", "Lou", "Max",
        "Ned", "Oli", "Pam", "Quin", "Ray", "Sue", "Tom", "Uma", "Vic", "Wes", "Xan", "Yul", "Zed",
    };
    return kPool;
}

class Rng {
public:
    Rng(std::uint64_t seed, BenchTask task) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(task)};
        engine_.seed(seq);
    }
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
    double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(engine_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(engine_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(engine_); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

int checked_int(const nlohmann::json& params, const char* key, int lo, int hi, int fallback) {
    if (!params.contains(key)) return fallback;
    const auto& v = params[key];
    if (!v.is_number_integer()) throw BadParams(std::string(key) + " must be an integer");
    const int x = v.get<int>();
    if (x < lo || x > hi) {
        throw BadParams(std::string(key) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return x;
}

// Always draws, so supplying a value leaves the rest of the case unchanged.
int int_param(const nlohmann::json& params, const char* key, int lo, int hi, Rng& rng) {
    return checked_int(params, key, lo, hi, rng.integer(lo, hi));
}

double real_param(const nlohmann::json& params, const char* key, double lo, double hi, double fallback) {
    if (!params.contains(key)) return fallback;
    const auto& v = params[key];
    if (!v.is_number()) throw BadParams(std::string(key) + " must be a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi)) {
        throw BadParams(std::string(key) + " out of range");
    }
    return x;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Rejection-sampled centres in [lo,hi]^d, pairwise at least `sep` apart.
std::vector<std::vector<double>> spaced_centres(int count, int d, double lo, double hi, double sep, Rng& rng) {
    for (int restart = 0; restart < 1000; ++restart) {
        std::vector<std::vector<double>> out;
        int attempts = 0;
        while (static_cast<int>(out.size()) < count && attempts < 2000) {
            ++attempts;
            std::vector<double> c(static_cast<std::size_t>(d));
            for (auto& x : c) x = rng.uniform(lo, hi);
            bool ok = true;
            for (const auto& o : out) ok = ok && dist(c, o) >= sep;
            if (ok) out.push_back(std::move(c));
        }
        if (static_cast<int>(out.size()) == count) return out;
    }
    throw BadParams("cannot place that many separated centres");
}

std::vector<int> split_points(int total, int parts) {
    std::vector<int> sizes(static_cast<std::size_t>(parts), total / parts);
    for (int i = 0; i < total % parts; ++i) ++sizes[static_cast<std::size_t>(i)];
    return sizes;
}

constexpr int kPoints = 500;
constexpr double kBlobSigma = 0.025;

PointSet cluster_points(int k, double spread, Rng& rng) {
    const auto centres = spaced_centres(k, 2, 0.1, 0.9, 5.0 * kBlobSigma, rng);
    PointSet ps;
    const auto sizes = split_points(kPoints, k);
    for (int c = 0; c < k; ++c) {
        for (int i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i) {
            ps.points.push_back({std::clamp(rng.normal(centres[c][0], kBlobSigma * spread), 0.0, 1.0),
                                 std::clamp(rng.normal(centres[c][1], kBlobSigma * spread), 0.0, 1.0)});
        }
    }
    return ps;
}

PointSet outlier_points(int m, Rng& rng) {
    PointSet ps;
    const double sigma = 0.07;
    while (static_cast<int>(ps.points.size()) < kPoints - m) {
        const double x = rng.normal(0.0, sigma);
        const double y = rng.normal(0.0, sigma);
        if (std::hypot(x, y) <= 3.5 * sigma) ps.points.push_back({0.5 + x, 0.5 + y});
    }
    std::vector<Point2> outliers;
    while (static_cast<int>(outliers.size()) < m) {
        const Point2 p{rng.uniform(0.03, 0.97), rng.uniform(0.03, 0.97)};
        if (std::hypot(p[0] - 0.5, p[1] - 0.5) < 0.38) continue;
        bool ok = true;
        for (const auto& o : outliers) ok = ok && std::hypot(p[0] - o[0], p[1] - o[1]) >= 0.08;
        if (ok) outliers.push_back(p);
    }
    ps.points.insert(ps.points.end(), outliers.begin(), outliers.end());
    return ps;
}

Image scatter_image(const PointSet& ps, const nlohmann::json& params, bool fixed_bounds, CanvasConfig canvas = {}) {
    ScatterStyle style;
    if (fixed_bounds) style.bounds = DataBounds{0.0, 1.0, 0.0, 1.0};
    const double opacity = real_param(params, "opacity", 1e-3, 1.0, 1.0);
    return render_scatter(ps, opacity, 3.0, canvas, style).image;
}

std::vector<std::string> axis_names(int d) {
    std::vector<std::string> names;
    for (int j = 1; j <= d; ++j) names.push_back("X" + std::to_string(j));
    return names;
}

Image parallel_image(const std::vector<std::vector<double>>& rows) {
    ParallelStyle style;
    style.axis_names = axis_names(static_cast<int>(rows.front().size()));
    return render_parallel_coords(rows, {}, style).image;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> words(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::optional<bool> first_yes_no(const std::string& text) {
    for (const auto& w : words(text)) {
        if (w == "yes" || w == "true") return true;
        if (w == "no" || w == "false") return false;
    }
    return std::nullopt;
}

struct GraphCase {
    Graph graph;
    std::vector<std::string> labels;
};

GraphCase random_graph(int nodes, double p, Rng& rng) {
    GraphCase g;
    g.graph.nodes = nodes;
    for (int a = 0; a < nodes; ++a) {
        for (int b = a + 1; b < nodes; ++b) {
            if (rng.chance(p)) g.graph.edges.emplace_back(a, b);
        }
    }
    auto pool = name_pool();
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    g.labels.assign(pool.begin(), pool.begin() + nodes);
    return g;
}

bool connected(const Graph& g, int from, int to) {
    const auto adj = g.adjacency();
    std::vector<char> seen(static_cast<std::size_t>(g.nodes), 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        if (u == to) return true;
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
        }
    }
    return false;
}

std::string replace_first(std::string text, const std::string& what, const std::string& with) {
    const auto at = text.find(what);
    if (at != std::string::npos) text.replace(at, what.size(), with);
    return text;
}

void gen_scatter(BenchCase& c, Rng& rng) {
    const auto& p = c.params;
    switch (c.task) {
        case BenchTask::scatter_cluster:
        case BenchTask::scatter_cluster_count: {
            const int k = int_param(p, "clusters", 2, 10, rng);
            const double spread = real_param(p, "spread", 0.1, 10.0, 1.0);
            c.params["clusters"] = k;
            c.params["spread"] = spread;
            c.image = scatter_image(cluster_points(k, spread, rng), p, true);
            c.ground_truth = c.task == BenchTask::scatter_cluster ? nlohmann::json(true) : nlohmann::json(k);
            c.prompt = std::string(kScatterRole) + kClusterQuestion;
            break;
        }
        case BenchTask::scatter_outlier:
        case BenchTask::scatter_outlier_count: {
            const int m = int_param(p, "outliers", 1, 5, rng);
            c.params["outliers"] = m;
            c.image = scatter_image(outlier_points(m, rng), p, true);
            c.ground_truth = c.task == BenchTask::scatter_outlier ? nlohmann::json(true) : nlohmann::json(m);
            c.prompt = std::string(kScatterRole) + kOutlierQuestion;
            break;
        }
        default: {
            const int a = rng.integer(1, 10);
            int b = rng.integer(1, 9);
            if (b >= a) ++b;
            double r[2] = {a / 10.0, b / 10.0};
            if (p.contains("coefficients")) {
                if (!p["coefficients"].is_array() || p["coefficients"].size() != 2) {
                    throw BadParams("coefficients must be a pair");
                }
                for (int i = 0; i < 2; ++i) {
                    if (!p["coefficients"][i].is_number()) throw BadParams("coefficients must be numbers");
                    r[i] = p["coefficients"][i].get<double>();
                    if (!(r[i] >= 0.1 - 1e-12 && r[i] <= 1.0 + 1e-12)) throw BadParams("coefficients must lie in [0.1, 1]");
                }
                if (r[0] == r[1]) throw BadParams("coefficients must differ");
            }
            c.params["coefficients"] = {r[0], r[1]};
            Image panels[2];
            CanvasConfig canvas;
            canvas.width = 400;
            canvas.height = 400;
            for (int i = 0; i < 2; ++i) {
                PointSet ps;
                const double rest = std::sqrt(std::max(0.0, 1.0 - r[i] * r[i]));
                for (int n = 0; n < kPoints; ++n) {
                    const double x = rng.normal(0.0, 1.0);
                    ps.points.push_back({x, r[i] * x + rest * rng.normal(0.0, 1.0)});
                }
                panels[i] = scatter_image(ps, p, false, canvas);
            }
            c.image = side_by_side(panels[0], panels[1], 20);
            c.ground_truth = r[0] > r[1] ? "first" : "second";
            c.context = {{"coefficients", {r[0], r[1]}}};
            c.prompt = std::string(kScatterRole) + "which images have a high correlation?";
        }
    }
}

void gen_parallel(BenchCase& c, Rng& rng) {
    const auto& p = c.params;
    constexpr int d = 5;
    std::vector<std::vector<double>> rows;
    switch (c.task) {
        case BenchTask::pc_cluster_count: {
            const int k = int_param(p, "clusters", 1, 10, rng);
            const double spread = real_param(p, "spread", 0.1, 10.0, 1.0);
            c.params["clusters"] = k;
            c.params["spread"] = spread;
            const auto centres = spaced_centres(k, d, 0.05, 0.95, 0.3, rng);
            const auto sizes = split_points(kPoints, k);
            for (int g = 0; g < k; ++g) {
                for (int i = 0; i < sizes[static_cast<std::size_t>(g)]; ++i) {
                    std::vector<double> row(d);
                    for (int j = 0; j < d; ++j) row[j] = rng.normal(centres[g][j], 0.02 * spread);
                    rows.push_back(std::move(row));
                }
            }
            c.ground_truth = k;
            c.prompt = std::string(kParallelRole) + kClusterQuestion;
            break;
        }
        case BenchTask::pc_outlier_count: {
            const int m = int_param(p, "outliers", 1, 5, rng);
            c.params["outliers"] = m;
            for (int i = 0; i < kPoints - m; ++i) {
                std::vector<double> row(d);
                for (auto& x : row) x = std::clamp(rng.normal(0.5, 0.06), 0.3, 0.7);
                rows.push_back(std::move(row));
            }
            std::vector<std::vector<double>> outliers;
            while (static_cast<int>(outliers.size()) < m) {
                std::vector<double> row(d);
                for (auto& x : row) x = rng.chance(0.5) ? rng.uniform(0.0, 0.15) : rng.uniform(0.85, 1.0);
                bool ok = true;
                for (const auto& o : outliers) ok = ok && dist(row, o) >= 0.3;
                if (ok) outliers.push_back(std::move(row));
            }
            rows.insert(rows.end(), outliers.begin(), outliers.end());
            c.ground_truth = m;
            c.prompt = std::string(kParallelRole) + kOutlierQuestion;
            break;
        }
        default: {
            const int j = int_param(p, "pair", 0, d - 2, rng);
            c.params["pair"] = j;
            const double r = 0.95;
            for (int i = 0; i < kPoints; ++i) {
                std::vector<double> row(d);
                for (auto& x : row) x = rng.normal(0.0, 1.0);
                row[j + 1] = r * row[j] + std::sqrt(1.0 - r * r) * row[j + 1];
                rows.push_back(std::move(row));
            }
            const auto names = axis_names(d);
            c.ground_truth = {names[j], names[j + 1]};
            c.context = {{"axes", names}};
            c.prompt = std::string(kParallelRole) + "Is there any correlation between these variables?";
        }
    }
    c.image = parallel_image(rows);
}

void gen_graph(BenchCase& c, Rng& rng) {
    const auto& p = c.params;
    const int n = int_param(p, "nodes", 2, static_cast<int>(name_pool().size()), rng);
    const double prob = real_param(p, "edge_probability", 0.0, 1.0, 0.2);
    c.params["edge_probability"] = prob;
    const auto g = random_graph(n, prob, rng);
    const auto positions = fr_layout(g.graph, 200, c.seed);
    c.image = render_node_link(g.graph, positions, g.labels).image;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : g.graph.edges) edges.push_back({g.labels[a], g.labels[b]});
    c.context = {{"labels", g.labels}, {"edges", edges}};

    switch (c.task) {
        case BenchTask::graph_node_count:
            c.ground_truth = n;
            c.prompt = std::string(kGraphRole) + "How many nodes are in this visualization?";
            break;
        case BenchTask::graph_find_node: {
            std::vector<std::string> absent;
            for (const auto& name : name_pool()) {
                if (std::find(g.labels.begin(), g.labels.end(), name) == g.labels.end()) absent.push_back(name);
            }
            const bool present = absent.empty() || rng.chance(0.5);
            const std::string query = present ? g.labels[rng.integer(0, n - 1)]
                                              : absent[rng.integer(0, static_cast<int>(absent.size()) - 1)];
            c.ground_truth = present;
            c.context["query"] = query;
            c.prompt = std::string(kGraphRole) + "Is there a node named " + query + " in this visualization?";
            break;
        }
        case BenchTask::graph_connection: {
            const int a = rng.integer(0, n - 1);
            int b = rng.integer(0, n - 2);
            if (b >= a) ++b;
            c.ground_truth = connected(g.graph, a, b);
            c.context["query"] = {g.labels[a], g.labels[b]};
            c.prompt = std::string(kGraphRole) + "Is there a path from node " + g.labels[a] + " to node " +
                       g.labels[b] + "?";
            break;
        }
        default: {
            const int a = rng.integer(0, n - 1);
            std::vector<std::string> neighbours;
            const auto adj = g.graph.adjacency();
            for (int v : adj[a]) neighbours.push_back(g.labels[v]);
            std::sort(neighbours.begin(), neighbours.end());
            c.ground_truth = neighbours;
            c.context["query"] = g.labels[a];
            c.prompt = std::string(kGraphRole) + "What is the neighbor node of node " + g.labels[a] + "?";
        }
    }
}

void gen_volume(BenchCase& c, Rng& rng) {
    const auto& p = c.params;
    constexpr int kBins = 10;
    constexpr int kTargetBin = 4;
    const bool off_target = rng.chance(0.5);
    const int drawn_bin = rng.integer(0, kBins - 1);
    const int bin = checked_int(p, "window_bin", 0, kBins - 1, off_target ? drawn_bin : kTargetBin);
    const double peak = real_param(p, "peak_opacity", 1e-9, 1.0, rng.integer(1, 10) / 10.0);
    c.params["window_bin"] = bin;
    c.params["peak_opacity"] = peak;

    const double width = 255.0 / kBins;
    PhantomSpec spec;
    spec.dims = {48, 48, 48};
    PhantomStructure shell;
    shell.id = "shell";
    shell.shape = PhantomShape::shell;
    shell.radius = 0.45;
    shell.inner_radius = 0.36;
    shell.band_lo = 2 * width;
    shell.band_hi = 3 * width;
    PhantomStructure target;
    target.id = "target";
    target.radius = 0.25;
    target.band_lo = kTargetBin * width;
    target.band_hi = (kTargetBin + 1) * width;
    spec.structures = {shell, target};
    const auto volume = gen_volume_phantom(spec);
    const auto tf = make_tf(bin * width, (bin + 1) * width, peak);
    const auto render = render_volume(volume, tf, default_camera(volume, 256, 256), RenderOptions{.threads = 1});
    const auto verdict = oracle_assess_volume(*render.stats, "target");
    c.image = render.image;
    c.ground_truth = volume_rank(verdict) >= 1;
    c.context = {{"oracle", label_of(verdict)}};
    c.prompt = replace_first(kVolumePrompt, "{structure}", "a sphere");
}

}  // namespace

const std::vector<BenchTask>& all_bench_tasks() {
    static const std::vector<BenchTask> kAll = [] {
        std::vector<BenchTask> v;
        for (const auto& [t, _] : task_names()) v.push_back(t);
        return v;
    }();
    return kAll;
}

std::string to_string(BenchTask task) {
    for (const auto& [t, name] : task_names()) {
        if (t == task) return name;
    }
    return "unknown";
}

BenchTask bench_task_from_string(const std::string& name) {
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    for (const auto& [t, n] : task_names()) {
        if (key == n) return t;
    }
    throw BadParams("unknown benchmark task " + name);
}

BenchCase gen_case(BenchTask task, std::uint64_t seed, const nlohmann::json& params) {
    if (!params.is_object()) throw BadParams("benchmark params must be an object");
    BenchCase c;
    c.task = task;
    c.seed = seed;
    c.params = params;
    c.context = nlohmann::json::object();
    Rng rng(seed, task);
    switch (task) {
        case BenchTask::scatter_cluster:
        case BenchTask::scatter_cluster_count:
        case BenchTask::scatter_outlier:
        case BenchTask::scatter_outlier_count:
        case BenchTask::scatter_correlation:
            gen_scatter(c, rng);
            break;
        case BenchTask::pc_cluster_count:
        case BenchTask::pc_outlier_count:
        case BenchTask::pc_correlation:
            gen_parallel(c, rng);
            break;
        case BenchTask::graph_node_count:
        case BenchTask::graph_find_node:
        case BenchTask::graph_connection:
        case BenchTask::graph_neighbor:
            if (!c.params.contains("nodes")) c.params["nodes"] = 10;
            gen_graph(c, rng);
            break;
        case BenchTask::volume_recognizable:
            gen_volume(c, rng);
            break;
    }
    return c;
}

std::optional<long> first_integer(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) continue;
        // Skip digits that belong to a decimal like 0.5 or a word like X2.
        if (i > 0 && (std::isalpha(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '.')) {
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
            i = j + 1;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            continue;
        }
        try {
            return std::stol(text.substr(i, j - i));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

bool score_answer(BenchTask task, const nlohmann::json& truth, const nlohmann::json& context,
                  const std::string& answer) {
    switch (task) {
        case BenchTask::scatter_cluster_count:
        case BenchTask::scatter_outlier_count:
        case BenchTask::pc_cluster_count:
        case BenchTask::pc_outlier_count:
        case BenchTask::graph_node_count: {
            const auto n = first_integer(answer);
            return n && *n == truth.get<long>();
        }
        case BenchTask::scatter_cluster:
        case BenchTask::scatter_outlier:
        case BenchTask::graph_find_node:
        case BenchTask::graph_connection: {
            const auto yes = first_yes_no(answer);
            return yes && *yes == truth.get<bool>();
        }
        case BenchTask::scatter_correlation: {
            const auto w = words(answer);
            auto has = [&](const char* s) { return std::find(w.begin(), w.end(), s) != w.end(); };
            const auto& r = context.at("coefficients");
            if (r.at(0).get<double>() <= 0.2 + 1e-12 && r.at(1).get<double>() <= 0.2 + 1e-12 && has("both") &&
                (has("low") || has("weak"))) {
                return true;
            }
            for (const auto& token : w) {
                if (token == "first" || token == "left") return truth == "first";
                if (token == "second" || token == "right") return truth == "second";
            }
            return false;
        }
        case BenchTask::pc_correlation: {
            std::set<std::string> named;
            for (const auto& token : words(answer)) {
                if (token.size() >= 2 && token[0] == 'x' &&
                    std::all_of(token.begin() + 1, token.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
                    named.insert("X" + token.substr(1));
                }
            }
            std::set<std::string> expected;
            for (const auto& a : truth) expected.insert(a.get<std::string>());
            return named == expected;
        }
        case BenchTask::graph_neighbor: {
            std::map<std::string, std::string> vocabulary;
            for (const auto& l : context.at("labels")) vocabulary[lower(l.get<std::string>())] = l.get<std::string>();
            const std::string query = lower(context.at("query").get<std::string>());
            std::set<std::string> named;
            for (const auto& token : words(answer)) {
                const auto it = vocabulary.find(token);
                if (it != vocabulary.end() && token != query) named.insert(it->second);
            }
            std::set<std::string> expected;
            for (const auto& a : truth) expected.insert(a.get<std::string>());
            return named == expected;
        }
        case BenchTask::volume_recognizable: {
            const std::string text = lower(answer);
            std::optional<bool> said;
            if (text.find("not recognizable") != std::string::npos || text.find("not recognisable") != std::string::npos) {
                said = false;
            } else if (text.find("recognizable") != std::string::npos || text.find("recognisable") != std::string::npos) {
                said = true;
            }
            return said && *said == truth.get<bool>();
        }
    }
    return false;
}

std::string GroundTruthResponder::answer(const BenchCase& c) {
    const auto& t = c.ground_truth;
    switch (c.task) {
        case BenchTask::scatter_cluster_count:
        case BenchTask::pc_cluster_count:
            return "Yes. There are " + std::to_string(t.get<long>()) + " clusters.";
        case BenchTask::scatter_outlier_count:
        case BenchTask::pc_outlier_count:
            return "Yes. There are " + std::to_string(t.get<long>()) + " outliers.";
        case BenchTask::graph_node_count:
            return "There are " + std::to_string(t.get<long>()) + " nodes.";
        case BenchTask::scatter_cluster:
        case BenchTask::scatter_outlier:
        case BenchTask::graph_find_node:
        case BenchTask::graph_connection:
            return t.get<bool>() ? "Yes." : "No.";
        case BenchTask::scatter_correlation:
            return "The " + t.get<std::string>() + " image has the higher correlation.";
        case BenchTask::pc_correlation:
            return "Yes, " + t.at(0).get<std::string>() + " and " + t.at(1).get<std::string>() + " are correlated.";
        case BenchTask::graph_neighbor: {
            if (t.empty()) return "It has no neighbors.";
            std::string s;
            for (const auto& n : t) s += (s.empty() ? "" : ", ") + n.get<std::string>();
            return s;
        }
        case BenchTask::volume_recognizable:
            return t.get<bool>() ? "Recognizable" : "Not recognizable";
    }
    return "";
}

std::string ChatResponder::answer(const BenchCase& c) {
    ChatRequest request;
    request.messages.push_back(ChatMessage{"user", c.prompt, {encode_png(c.image)}});
    return backend_.complete(request).text;
}

BenchReport run_benchmark(BenchTask task, BenchResponder& responder, const BenchOptions& options) {
    if (options.trials < 1) throw BadParams("trials must be at least 1");
    std::vector<BenchTrial> trials;
    for (int i = 0; i < options.trials; ++i) {
        const auto c = gen_case(task, options.base_seed + static_cast<std::uint64_t>(i), options.params);
        BenchTrial t;
        t.task = task;
        t.seed = c.seed;
        t.prompt = c.prompt;
        const auto png = encode_png(c.image);
        t.image_hash = content_hash(png);
        if (!options.image_dir.empty()) {
            std::filesystem::create_directories(options.image_dir);
            write_file((std::filesystem::path(options.image_dir) / (t.image_hash + ".png")).string(), png);
        }
        t.ground_truth = c.ground_truth;
        t.context = c.context;
        try {
            t.answer = responder.answer(c);
            t.correct = score_answer(task, t.ground_truth, t.context, t.answer);
        } catch (const std::exception& e) {
            t.error = e.what();
            t.correct = false;
        }
        trials.push_back(std::move(t));
    }
    return rescore(trials);
}

BenchReport run_benchmarks(const std::vector<BenchTask>& tasks, BenchResponder& responder,
                           const BenchOptions& options) {
    std::vector<BenchTrial> all;
    for (auto task : tasks) {
        auto r = run_benchmark(task, responder, options);
        all.insert(all.end(), std::make_move_iterator(r.trials.begin()), std::make_move_iterator(r.trials.end()));
    }
    return rescore(all);
}

BenchReport rescore(const std::vector<BenchTrial>& trials) {
    BenchReport report;
    report.trials = trials;
    std::map<BenchTask, BenchRow> rows;
    for (auto& t : report.trials) {
        t.correct = t.error.empty() && score_answer(t.task, t.ground_truth, t.context, t.answer);
        auto& row = rows[t.task];
        row.task = t.task;
        ++row.trials;
        if (t.correct) ++row.successes;
    }
    for (auto task : all_bench_tasks()) {
        const auto it = rows.find(task);
        if (it != rows.end()) report.rows.push_back(it->second);
    }
    return report;
}

nlohmann::json to_json(const BenchTrial& t) {
    nlohmann::json j{{"task", to_string(t.task)}, {"seed", t.seed},           {"prompt", t.prompt},
                     {"image_hash", t.image_hash}, {"answer", t.answer},     {"ground_truth", t.ground_truth},
                     {"context", t.context},       {"correct", t.correct}};
    if (!t.error.empty()) j["error"] = t.error;
    return j;
}

BenchTrial bench_trial_from_json(const nlohmann::json& j) {
    BenchTrial t;
    t.task = bench_task_from_string(j.at("task").get<std::string>());
    t.seed = j.at("seed").get<std::uint64_t>();
    t.prompt = j.value("prompt", "");
    t.image_hash = j.value("image_hash", "");
    t.answer = j.value("answer", "");
    t.ground_truth = j.at("ground_truth");
    t.context = j.value("context", nlohmann::json::object());
    t.correct = j.value("correct", false);
    t.error = j.value("error", "");
    return t;
}

nlohmann::json to_json(const BenchReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"task", to_string(r.task)},
                        {"trials", r.trials},
                        {"successes", r.successes},
                        {"success_rate", r.success_rate()}});
    }
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : report.trials) trials.push_back(to_json(t));
    return {{"tasks", std::move(rows)}, {"trials", std::move(trials)}};
}

BenchReport bench_report_from_json(const nlohmann::json& j) {
    BenchReport r;
    for (const auto& row : j.at("tasks")) {
        r.rows.push_back(BenchRow{bench_task_from_string(row.at("task").get<std::string>()), row.at("trials").get<int>(),
                                  row.at("successes").get<int>()});
    }
    for (const auto& t : j.value("trials", nlohmann::json::array())) r.trials.push_back(bench_trial_from_json(t));
    return r;
}

std::string format_report(const BenchReport& report) {
    std::map<BenchTask, const BenchRow*> by_task;
    for (const auto& r : report.rows) by_task[r.task] = &r;
    auto cell = [&](std::optional<BenchTask> task) -> std::string {
        if (!task) return "-";
        const auto it = by_task.find(*task);
        if (it == by_task.end()) return "-";
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.0f%%", 100.0 * it->second->success_rate());
        return buf;
    };
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(s.size(), w), ' ');
        return s;
    };

    std::ostringstream out;
    struct Line {
        const char* name;
        std::optional<BenchTask> scatter;
        std::optional<BenchTask> parallel;
    };
    const Line lines[] = {
        {"cluster", BenchTask::scatter_cluster, std::nullopt},
        {"cluster count", BenchTask::scatter_cluster_count, BenchTask::pc_cluster_count},
        {"outlier", BenchTask::scatter_outlier, std::nullopt},
        {"outlier count", BenchTask::scatter_outlier_count, BenchTask::pc_outlier_count},
        {"correlation", BenchTask::scatter_correlation, BenchTask::pc_correlation},
    };
    out << pad("Tasks", 15) << pad("scatter plot(success rate)", 28) << "parallel coordinates\n";
    for (const auto& l : lines) {
        out << pad(l.name, 15) << pad(cell(l.scatter), 28) << cell(l.parallel) << "\n";
    }
    out << "\n";
    out << pad("Tasks", 12) << pad("node count", 12) << pad("find node", 12) << pad("connection", 12) << "neighbor\n";
    out << pad("success %", 12) << pad(cell(BenchTask::graph_node_count), 12) << pad(cell(BenchTask::graph_find_node), 12)
        << pad(cell(BenchTask::graph_connection), 12) << cell(BenchTask::graph_neighbor) << "\n";
    out << "\n";
    out << pad("Tasks", 12) << "volume recognizable\n";
    out << pad("success %", 12) << cell(BenchTask::volume_recognizable) << "\n";
    return out.str();
}

}  // namespace ava
