#include "ava/toolproto/builtin.hpp"

#include "ava/bench/phantom.hpp"
#include "ava/errors.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

namespace ava {

VolumeTool::VolumeTool(VolumeDataset volume, Options options) : volume_(std::move(volume)), options_(options) {
    validate(volume_);
    const auto [lo, hi] = volume_.value_range;
    descriptor_.name = "volume";
    descriptor_.param_space = ParamSpace({
        ParamEntry{"start", ParamKind::continuous, lo, hi, {}},
        ParamEntry{"end", ParamKind::continuous, lo, hi, {}},
    });
    descriptor_.metadata.value_range = volume_.value_range;
    descriptor_.metadata.histogram = compute_histogram(volume_, options_.histogram_bins).counts;
    descriptor_.metadata.modality = options_.modality;
}

RenderResult VolumeTool::render(const ParamVector& params) {
    require_conforming(descriptor_.param_space, params);
    // Built directly so that an empty window (start >= end) renders fully transparent.
    const TriangularTF tf{number_of(params, "start"), number_of(params, "end"), options_.peak_opacity};
    const auto r = render_volume(volume_, tf, default_camera(volume_, options_.width, options_.height),
                                 options_.render);
    RenderResult out;
    out.png = encode_png(r.image);
    if (r.stats) {
        out.stats = {{"structures", to_json(*r.stats)}};
    }
    return out;
}

ScatterTool::ScatterTool(PointSet points, Options options) : points_(std::move(points)), options_(std::move(options)) {
    if (points_.points.empty()) throw EmptyPointSet("scatter tool needs at least one point");
    validate(points_);
    descriptor_.name = "scatter";
    descriptor_.param_space = ParamSpace({ParamEntry{"opacity", ParamKind::continuous, 0.001, 1.0, {}}});
}

RenderResult ScatterTool::render(const ParamVector& params) {
    require_conforming(descriptor_.param_space, params);
    const auto r = render_scatter(points_, number_of(params, "opacity"), options_.radius, options_.canvas,
                                  options_.style);
    RenderResult out;
    out.png = encode_png(r.image);
    out.stats = {{"overplot", to_json(overplot_metrics(r.coverage))}};
    return out;
}

MockDrTool::MockDrTool(Options options) : options_(std::move(options)) {
    if (options_.method != "tsne" && options_.method != "umap") {
        throw InvalidConfig("mock-dr method must be tsne or umap");
    }
    if (options_.clusters < 1 || options_.points_per_cluster < 1) {
        throw InvalidConfig("mock-dr needs clusters and points");
    }
    auto add = [&](std::string name, ParamKind kind, double lo, double hi, double optimum, double width) {
        params_.push_back(MockDrParam{ParamEntry{std::move(name), kind, lo, hi, {}}, optimum, width * (hi - lo)});
    };
    if (options_.method == "tsne") {
        add("perplexity", ParamKind::continuous, 2.0, 100.0, 30.0, options_.five_params ? 0.05 : 0.2);
        if (options_.five_params) {
            add("early_exaggeration", ParamKind::continuous, 1.0, 50.0, 12.0, 0.05);
            add("learning_rate", ParamKind::continuous, 10.0, 1000.0, 200.0, 0.05);
            add("n_iter", ParamKind::integer, 250.0, 5000.0, 1000.0, 0.05);
            add("angle", ParamKind::continuous, 0.1, 0.9, 0.5, 0.05);
        }
    } else {
        add("n_neighbors", ParamKind::integer, 2.0, 200.0, 15.0, options_.five_params ? 0.05 : 0.2);
        if (options_.five_params) {
            add("min_dist", ParamKind::continuous, 0.0, 1.0, 0.1, 0.05);
            add("spread", ParamKind::continuous, 0.5, 3.0, 1.0, 0.05);
            add("learning_rate", ParamKind::continuous, 0.1, 10.0, 1.0, 0.05);
            add("negative_sample_rate", ParamKind::integer, 1.0, 20.0, 5.0, 0.05);
        }
    }

    std::vector<ParamEntry> entries{ParamEntry{"method", ParamKind::categorical, 0.0, 0.0, {options_.method}}};
    for (const auto& p : params_) entries.push_back(p.entry);
    descriptor_.name = options_.five_params ? "mock-dr-5" : "mock-dr";
    descriptor_.param_space = ParamSpace(std::move(entries));

    std::mt19937_64 rng(options_.seed);
    std::normal_distribution<double> normal(0.0, options_.noise);
    for (int c = 0; c < options_.clusters; ++c) {
        for (int i = 0; i < options_.points_per_cluster; ++i) {
            offsets_.push_back({normal(rng), normal(rng)});
            labels_.push_back(c);
        }
    }
}

double MockDrTool::separation(const ParamVector& params) const {
    double s = options_.s_max;
    for (const auto& p : params_) {
        const double d = number_of(params, p.entry.name) - p.optimum;
        s *= std::exp(-(d * d) / (p.sigma * p.sigma));
    }
    return s;
}

RenderResult MockDrTool::render(const ParamVector& params) {
    require_conforming(descriptor_.param_space, params);
    const double s = separation(params);
    PointSet ps;
    nlohmann::json coords = nlohmann::json::array();
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
        const double angle = 2.0 * std::numbers::pi * labels_[i] / options_.clusters;
        const Point2 p{s * std::cos(angle) + offsets_[i][0], s * std::sin(angle) + offsets_[i][1]};
        ps.points.push_back(p);
        coords.push_back({p[0], p[1]});
    }
    ScatterStyle style;
    style.bounds = DataBounds{-1.6, 1.6, -1.6, 1.6};
    style.axes = false;
    const auto r = render_scatter(ps, 0.6, 3.0, options_.canvas, style);
    RenderResult out;
    out.png = encode_png(r.image);
    out.stats = {{"separation", s}, {"points", std::move(coords)}};
    return out;
}

std::unique_ptr<VisTool> make_builtin_tool(const std::string& name, const nlohmann::json& options) {
    const auto opt = options.is_object() ? options : nlohmann::json::object();
    try {
        if (name == "builtin:volume") {
            VolumeTool::Options o;
            o.width = opt.value("width", o.width);
            o.height = opt.value("height", o.height);
            o.modality = opt.value("modality", o.modality);
            if (opt.contains("phantom")) {
                return std::make_unique<VolumeTool>(gen_volume_phantom(phantom_spec_from_json(opt["phantom"])), o);
            }
            if (!opt.contains("data")) throw InvalidConfig("builtin:volume needs a data path or a phantom spec");
            const auto path = opt["data"].get<std::string>();
            if (path.size() > 5 && path.ends_with(".json")) {
                return std::make_unique<VolumeTool>(load_volume(path), o);
            }
            if (!opt.contains("dims")) {
                // A raw file written by save_volume has its sidecar next to it.
                const auto sidecar = std::filesystem::path(path).replace_extension(".json");
                if (std::filesystem::exists(sidecar)) {
                    return std::make_unique<VolumeTool>(load_volume(sidecar.string()), o);
                }
                throw InvalidConfig("raw volume data needs dims or a sidecar " + sidecar.string());
            }
            auto volume = load_raw(path, opt["dims"].get<std::array<int, 3>>(),
                                   voxel_type_from_string(opt.value("voxel_type", std::string("u8"))),
                                   opt.value("spacing", std::array<double, 3>{1.0, 1.0, 1.0}));
            return std::make_unique<VolumeTool>(std::move(volume), o);
        }
        if (name == "builtin:scatter") {
            PointSet ps;
            if (opt.contains("points")) {
                for (const auto& p : opt["points"]) ps.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            } else if (opt.contains("csv")) {
                ps = csv_points(read_csv(opt["csv"].get<std::string>()), opt.value("x", std::string("x")),
                                opt.value("y", std::string("y")));
            } else {
                throw InvalidConfig("builtin:scatter needs points or a csv path");
            }
            ScatterTool::Options o;
            o.radius = opt.value("radius", o.radius);
            return std::make_unique<ScatterTool>(std::move(ps), o);
        }
        if (name == "builtin:mock-dr" || name == "builtin:mock-dr-5") {
            MockDrTool::Options o;
            o.method = opt.value("method", o.method);
            o.five_params = name == "builtin:mock-dr-5" || opt.value("five_params", false);
            o.seed = opt.value("seed", o.seed);
            return std::make_unique<MockDrTool>(o);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig("bad options for " + name + ": " + e.what());
    }
    throw InvalidConfig("unknown built-in tool " + name);
}

}  // namespace ava
