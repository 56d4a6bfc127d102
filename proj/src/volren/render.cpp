#include "ava/volren/render.hpp"

#include "ava/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <thread>

namespace ava {

TriangularTF make_tf(double start, double end, double peak_opacity) {
    if (!(start < end)) {
        throw InvalidParams("transfer function needs start < end");
    }
    if (!(peak_opacity > 0.0 && peak_opacity <= 1.0)) {
        throw InvalidParams("peak opacity must lie in (0,1]");
    }
    return TriangularTF{start, end, peak_opacity};
}

double eval_tf(const TriangularTF& tf, double value) {
    if (value <= tf.start || value >= tf.end) return 0.0;
    const double mid = 0.5 * (tf.start + tf.end);
    const double half = 0.5 * (tf.end - tf.start);
    const double ramp = value <= mid ? (value - tf.start) / half : (tf.end - value) / half;
    return std::clamp(ramp, 0.0, 1.0) * tf.peak_opacity;
}

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 normalized(const Vec3& a) { return scale(a, 1.0 / norm(a)); }

std::uint8_t quantize(double c) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
}

}  // namespace

void validate(const Camera& c) {
    const Vec3 view = sub(c.look_at, c.eye);
    if (norm(view) == 0.0) throw InvalidParams("camera eye coincides with look_at");
    if (norm(cross(view, c.up)) <= 1e-12 * norm(view) * std::max(norm(c.up), 1e-300)) {
        throw InvalidParams("camera up is parallel to the view direction");
    }
    if (!(c.fov_y_deg > 0.0 && c.fov_y_deg < 180.0)) throw InvalidParams("camera fov must lie in (0,180)");
    if (c.width <= 0 || c.height <= 0) throw InvalidParams("image size must be positive");
}

Camera default_camera(const VolumeDataset& v, int width, int height) {
    Camera c;
    c.width = width;
    c.height = height;
    const Vec3 extent{v.dims[0] * v.spacing[0], v.dims[1] * v.spacing[1], v.dims[2] * v.spacing[2]};
    const Vec3 centre = scale(extent, 0.5);
    const double radius = 0.5 * norm(extent);
    const double half_fov = 0.5 * c.fov_y_deg * std::numbers::pi / 180.0;
    const double distance = 1.05 * radius / std::sin(half_fov);
    c.look_at = centre;
    c.eye = {centre[0], centre[1], centre[2] - distance};
    c.up = {0.0, 1.0, 0.0};
    return c;
}

std::array<double, 3> viridis(double t) {
    static constexpr std::array<std::array<double, 3>, 9> kStops{{
        {68, 1, 84}, {71, 44, 122}, {59, 81, 139}, {44, 113, 142}, {33, 144, 141},
        {39, 173, 129}, {92, 200, 99}, {170, 220, 50}, {253, 231, 37},
    }};
    t = std::clamp(t, 0.0, 1.0) * (kStops.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), kStops.size() - 2);
    const double f = t - static_cast<double>(i);
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
        out[k] = ((1.0 - f) * kStops[i][k] + f * kStops[i + 1][k]) / 255.0;
    }
    return out;
}

VolumeRender render_volume(const VolumeDataset& v, const TriangularTF& tf, const Camera& cam,
                           const RenderOptions& opt) {
    validate(cam);
    validate(v);
    const int w = cam.width;
    const int h = cam.height;
    const std::size_t pixels = static_cast<std::size_t>(w) * h;

    VolumeRender out;
    out.image = Image(w, h, opt.background);
    out.alpha.assign(pixels, 0.0);

    const bool stats = opt.compute_stats && !v.masks.empty();
    std::vector<std::uint8_t> label;  // 0: no structure, k+1: structure k
    if (stats) {
        label.assign(v.voxel_count(), 0);
        std::uint8_t k = 0;
        for (const auto& [id, mask] : v.masks) {
            out.structures.push_back(id);
            ++k;
            for (std::size_t i = 0; i < mask.size(); ++i) {
                if (mask[i] && label[i] == 0) label[i] = k;
            }
        }
        out.shares.assign(out.structures.size(), std::vector<double>(pixels, 0.0));
        out.silhouettes.assign(out.structures.size(), std::vector<std::uint8_t>(pixels, 0));
    }

    const double lo = v.value_range.first;
    const double span = v.value_range.second - v.value_range.first;
    auto colour_of = [&](double value) { return viridis(span > 0.0 ? (value - lo) / span : 0.5); };

    const Vec3 forward = normalized(sub(cam.look_at, cam.eye));
    const Vec3 right = normalized(cross(forward, cam.up));
    const Vec3 up = cross(right, forward);
    const double tan_half = std::tan(0.5 * cam.fov_y_deg * std::numbers::pi / 180.0);
    const double aspect = static_cast<double>(w) / h;
    const Vec3 box_max{v.dims[0] * v.spacing[0], v.dims[1] * v.spacing[1], v.dims[2] * v.spacing[2]};
    const double step = opt.step_factor * std::min({v.spacing[0], v.spacing[1], v.spacing[2]});
    const std::array<double, 3> bg{opt.background.r / 255.0, opt.background.g / 255.0, opt.background.b / 255.0};

    auto trace = [&](int px, int py) {
        const double sx = (2.0 * (px + 0.5) / w - 1.0) * tan_half * aspect;
        const double sy = (1.0 - 2.0 * (py + 0.5) / h) * tan_half;
        const Vec3 dir = normalized(add(forward, add(scale(right, sx), scale(up, sy))));
        double t0 = 0.0;
        double t1 = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 3; ++a) {
            if (dir[a] == 0.0) {
                if (cam.eye[a] < 0.0 || cam.eye[a] > box_max[a]) return;
                continue;
            }
            double ta = (0.0 - cam.eye[a]) / dir[a];
            double tb = (box_max[a] - cam.eye[a]) / dir[a];
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
        }
        if (!(t0 < t1)) return;

        const std::size_t pixel = static_cast<std::size_t>(py) * w + px;
        std::array<double, 3> colour{0.0, 0.0, 0.0};
        double alpha = 0.0;
        bool terminated = false;
        for (long n = 0;; ++n) {
            const double t = t0 + (static_cast<double>(n) + 0.5) * step;
            if (t >= t1) break;
            const Vec3 p = add(cam.eye, scale(dir, t));
            int idx[3];
            for (int a = 0; a < 3; ++a) {
                idx[a] = std::clamp(static_cast<int>(std::floor(p[a] / v.spacing[a])), 0, v.dims[a] - 1);
            }
            const std::size_t voxel = v.index(idx[0], idx[1], idx[2]);
            const int structure = stats ? label[voxel] : 0;
            if (structure > 0) out.silhouettes[structure - 1][pixel] = 1;
            if (terminated) continue;

            const double value = v.voxels[voxel];
            const double a = eval_tf(tf, value);
            if (a > 0.0) {
                double weight = (1.0 - alpha) * a;
                if (alpha + weight >= opt.early_termination) {
                    weight = 1.0 - alpha;
                    terminated = true;
                }
                const auto c = colour_of(value);
                for (int k = 0; k < 3; ++k) colour[k] += weight * c[k];
                alpha += weight;
                if (structure > 0) out.shares[structure - 1][pixel] += weight;
                if (terminated) {
                    alpha = 1.0;
                    if (!stats) break;
                }
            }
        }
        out.alpha[pixel] = alpha;
        out.image.set(px, py,
                      Rgba{quantize(colour[0] + (1.0 - alpha) * bg[0]), quantize(colour[1] + (1.0 - alpha) * bg[1]),
                           quantize(colour[2] + (1.0 - alpha) * bg[2]), 255});
    };

    int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, h);
    auto rows = [&](int first) {
        for (int y = first; y < h; y += threads) {
            for (int x = 0; x < w; ++x) trace(x, y);
        }
    };
    if (threads == 1) {
        rows(0);
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(rows, i);
    }

    if (stats) {
        StructureStats result;
        for (std::size_t s = 0; s < out.structures.size(); ++s) {
            StructureVisibility vis;
            long covered = 0;
            double share = 0.0;
            double others = 0.0;
            for (std::size_t p = 0; p < pixels; ++p) {
                if (!out.silhouettes[s][p]) continue;
                ++vis.silhouette_pixels;
                const double own = out.shares[s][p];
                if (own > 0.0) ++covered;
                share += own;
                others += out.alpha[p] - own;
            }
            if (vis.silhouette_pixels > 0) {
                const double n = static_cast<double>(vis.silhouette_pixels);
                vis.silhouette_coverage = covered / n;
                vis.mean_share = share / n;
                vis.occluder_share = std::max(0.0, others / n);
            }
            result.emplace(out.structures[s], vis);
        }
        out.stats = std::move(result);
    }
    return out;
}

}  // namespace ava
