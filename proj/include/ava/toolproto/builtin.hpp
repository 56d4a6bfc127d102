#pragma once

#include "ava/charts/charts.hpp"
#include "ava/toolproto/tool.hpp"
#include "ava/volren/render.hpp"
#include "ava/volren/volume.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace ava {

// Params start/end within the value range; the TF peak is fixed. A window with
// start >= end is fully transparent. Stats: {"structures": StructureStats} when masked.
class VolumeTool final : public VisTool {
public:
    struct Options {
        int width = 256;
        int height = 256;
        int histogram_bins = 32;
        double peak_opacity = 1.0;
        std::string modality = "CT";
        RenderOptions render;
    };

    explicit VolumeTool(VolumeDataset volume) : VolumeTool(std::move(volume), Options{}) {}
    VolumeTool(VolumeDataset volume, Options options);

    ToolDescriptor describe() override { return descriptor_; }
    RenderResult render(const ParamVector& params) override;

    const VolumeDataset& volume() const noexcept { return volume_; }

private:
    VolumeDataset volume_;
    Options options_;
    ToolDescriptor descriptor_;
};

// Param opacity in [0.001, 1]. Stats: {"overplot": OverplotMetrics}.
class ScatterTool final : public VisTool {
public:
    struct Options {
        double radius = 3.0;
        CanvasConfig canvas;
        ScatterStyle style;
    };

    explicit ScatterTool(PointSet points) : ScatterTool(std::move(points), Options{}) {}
    ScatterTool(PointSet points, Options options);

    ToolDescriptor describe() override { return descriptor_; }
    RenderResult render(const ParamVector& params) override;

private:
    PointSet points_;
    Options options_;
    ToolDescriptor descriptor_;
};

struct MockDrParam {
    ParamEntry entry;
    double optimum = 0.0;
    double sigma = 0.0;  // width of the separation response
};

// Stand-in for a dimensionality-reduction tool: k Gaussian clusters on a circle whose
// spread from the centre is s(h) = s_max * prod exp(-(h_i - h_i*)^2 / sigma_i^2).
// Stats: {"separation": s, "points": [[x, y], ...]}.
class MockDrTool final : public VisTool {
public:
    struct Options {
        std::string method = "tsne";       // "tsne" or "umap"
        bool five_params = false;          // the harder multi-hyperparameter variant
        int clusters = 6;
        int points_per_cluster = 50;
        double s_max = 1.0;
        double noise = 0.12;
        std::uint64_t seed = 7;
        CanvasConfig canvas{480, 480, 30, {255, 255, 255, 255}};
    };

    MockDrTool() : MockDrTool(Options{}) {}
    explicit MockDrTool(Options options);

    ToolDescriptor describe() override { return descriptor_; }
    RenderResult render(const ParamVector& params) override;

    double separation(const ParamVector& params) const;
    const std::vector<MockDrParam>& hyperparameters() const noexcept { return params_; }

private:
    Options options_;
    std::vector<MockDrParam> params_;
    std::vector<Point2> offsets_;
    std::vector<int> labels_;
    ToolDescriptor descriptor_;
};

// Built-in tool by name: "builtin:volume" (options: data = sidecar JSON or raw path
// with dims/voxel_type, or phantom = PhantomSpec JSON), "builtin:scatter" (csv, x, y,
// or points = [[x,y],...]), "builtin:mock-dr" (method, five_params).
// Throws InvalidConfig for unknown names or missing options.
std::unique_ptr<VisTool> make_builtin_tool(const std::string& name, const nlohmann::json& options = {});

}  // namespace ava
