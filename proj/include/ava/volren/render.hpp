#pragma once

#include "ava/image.hpp"
#include "ava/perception/stats.hpp"
#include "ava/volren/volume.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ava {

struct TriangularTF {
    double start = 0.0;
    double end = 1.0;
    double peak_opacity = 1.0;
};

// Throws InvalidParams unless start < end and peak in (0,1].
TriangularTF make_tf(double start, double end, double peak_opacity = 1.0);
double eval_tf(const TriangularTF& tf, double value);

using Vec3 = std::array<double, 3>;

struct Camera {
    Vec3 eye{0.0, 0.0, -1.0};
    Vec3 look_at{0.0, 0.0, 0.0};
    Vec3 up{0.0, 1.0, 0.0};
    double fov_y_deg = 30.0;
    int width = 256;
    int height = 256;
};

void validate(const Camera& camera);

// Looks down +z at the volume centre from far enough that the whole box is in view.
Camera default_camera(const VolumeDataset& volume, int width = 256, int height = 256);

// Viridis, sampled at t in [0,1] (clamped). Components in [0,1].
std::array<double, 3> viridis(double t);

struct RenderOptions {
    double step_factor = 0.5;         // sampling step as a fraction of the minimum spacing
    double early_termination = 0.99;  // accumulated alpha at which a ray stops
    Rgba background{0, 0, 0, 255};
    bool compute_stats = true;        // only when the volume has masks
    int threads = 0;                  // 0: hardware concurrency
};

struct VolumeRender {
    Image image;
    std::optional<StructureStats> stats;
    std::vector<double> alpha;                // accumulated alpha per pixel, row-major
    std::vector<std::string> structures;      // order of the share planes
    std::vector<std::vector<double>> shares;  // per structure, per pixel
    std::vector<std::vector<std::uint8_t>> silhouettes;
};

// Front-to-back emission-absorption ray casting with nearest-voxel sampling.
// A ray that reaches early_termination is treated as opaque: the terminating
// sample takes the remaining transmittance, so its alpha becomes exactly 1.
VolumeRender render_volume(const VolumeDataset& volume, const TriangularTF& tf, const Camera& camera,
                           const RenderOptions& options = {});

}  // namespace ava
