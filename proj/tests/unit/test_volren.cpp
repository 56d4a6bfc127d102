#include "ava/bench/phantom.hpp"
#include "ava/errors.hpp"
#include "ava/volren/render.hpp"
#include "ava/volren/volume.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

using namespace ava;

namespace {

// 5x5x4 volume of zeros with the z = 2 layer set to `value`. Seen from straight
// down the axis, a ray crosses that layer with exactly two samples (z = 2.25, 2.75).
VolumeDataset slab(std::uint16_t value = 100) {
    VolumeDataset v;
    v.dims = {5, 5, 4};
    v.voxels.assign(v.voxel_count(), 0);
    v.value_range = {0.0, 255.0};
    std::vector<std::uint8_t> mask(v.voxel_count(), 0);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 5; ++x) {
            v.voxels[v.index(x, y, 2)] = value;
            mask[v.index(x, y, 2)] = 1;
        }
    }
    v.masks["slab"] = mask;
    return v;
}

Camera axis_camera(int size = 1) {
    Camera c;
    c.eye = {2.5, 2.5, -10.0};
    c.look_at = {2.5, 2.5, 2.0};
    c.fov_y_deg = 1.0;  // every ray stays within the slab's footprint
    c.width = size;
    c.height = size;
    return c;
}

VolumeDataset small_phantom(int n = 24) {
    PhantomSpec spec;
    spec.dims = {n, n, n};
    PhantomStructure shell;
    shell.id = "shell";
    shell.shape = PhantomShape::shell;
    shell.radius = 0.45;
    shell.inner_radius = 0.35;
    shell.band_lo = 51;
    shell.band_hi = 102;
    PhantomStructure core;
    core.id = "core";
    core.radius = 0.2;
    core.band_lo = 153;
    core.band_hi = 204;
    spec.structures = {shell, core};
    return gen_volume_phantom(spec);
}

}  // namespace

TEST_CASE("triangular transfer function") {
    const auto tf = make_tf(100, 200, 0.8);
    CHECK(eval_tf(tf, 150) == doctest::Approx(0.8));
    CHECK(eval_tf(tf, 125) == doctest::Approx(0.4));
    CHECK(eval_tf(tf, 175) == doctest::Approx(0.4));
    CHECK(eval_tf(tf, 100) == 0.0);
    CHECK(eval_tf(tf, 200) == 0.0);
    CHECK(eval_tf(tf, 99) == 0.0);
    CHECK_THROWS_AS(make_tf(5, 5), InvalidParams);
    CHECK_THROWS_AS(make_tf(0, 1, 0.0), InvalidParams);
    CHECK_THROWS_AS(make_tf(0, 1, 1.5), InvalidParams);
}

TEST_CASE("viridis endpoints") {
    const auto lo = viridis(0.0), hi = viridis(1.0), clamped = viridis(7.0);
    CHECK(lo[0] * 255 == doctest::Approx(68));
    CHECK(lo[2] * 255 == doctest::Approx(84));
    CHECK(hi[0] * 255 == doctest::Approx(253));
    CHECK(hi[1] * 255 == doctest::Approx(231));
    CHECK(clamped == hi);
}

TEST_CASE("two-sample slab composites front to back") {
    const auto v = slab();
    // value 100 sits at the peak of [0, 200]; per-sample alpha is the peak.
    const auto half = render_volume(v, make_tf(0, 200, 0.5), axis_camera());
    CHECK(half.alpha[0] == doctest::Approx(0.75).epsilon(1e-12));
    REQUIRE(half.stats);
    const auto& s = half.stats->at("slab");
    CHECK(s.silhouette_pixels == 1);
    CHECK(s.silhouette_coverage == 1.0);
    CHECK(s.mean_share == doctest::Approx(0.75));
    CHECK(s.occluder_share == doctest::Approx(0.0));

    // 0.95 then 0.0475 crosses 0.99: the ray becomes opaque.
    const auto opaque = render_volume(v, make_tf(0, 200, 0.95), axis_camera());
    CHECK(opaque.alpha[0] == 1.0);
    const auto c = viridis(100.0 / 255.0);
    const auto px = opaque.image.at(0, 0);
    CHECK(px.r == std::lround(c[0] * 255));
    CHECK(px.g == std::lround(c[1] * 255));
    CHECK(px.b == std::lround(c[2] * 255));

    // Window excluding the slab value: nothing but background.
    const auto empty = render_volume(v, make_tf(150, 250), axis_camera());
    CHECK(empty.alpha[0] == 0.0);
    CHECK(empty.image.at(0, 0) == Rgba{0, 0, 0, 255});
    CHECK(empty.stats->at("slab").silhouette_pixels == 1);
    CHECK(empty.stats->at("slab").silhouette_coverage == 0.0);
}

TEST_CASE("occluders are charged to the structure behind them") {
    auto v = slab();
    std::vector<std::uint8_t> back(v.voxel_count(), 0);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 5; ++x) {
            v.voxels[v.index(x, y, 3)] = 100;
            back[v.index(x, y, 3)] = 1;
        }
    }
    v.masks["zback"] = back;
    const auto r = render_volume(v, make_tf(0, 200, 0.5), axis_camera());
    // 4 samples at 0.5: front gets 0.5 + 0.25, back 0.125 + 0.0625.
    const auto& front = r.stats->at("slab");
    const auto& rear = r.stats->at("zback");
    CHECK(front.mean_share == doctest::Approx(0.75));
    CHECK(rear.mean_share == doctest::Approx(0.1875));
    CHECK(rear.occluder_share == doctest::Approx(0.75));
    CHECK(r.alpha[0] == doctest::Approx(0.9375));
}

TEST_CASE("thread count does not change the result") {
    const auto v = small_phantom();
    const auto cam = default_camera(v, 48, 40);
    RenderOptions one;
    one.threads = 1;
    RenderOptions many;
    many.threads = 5;
    const auto a = render_volume(v, make_tf(40, 120, 0.6), cam, one);
    const auto b = render_volume(v, make_tf(40, 120, 0.6), cam, many);
    CHECK(a.image == b.image);
    CHECK(a.alpha == b.alpha);
    CHECK(*a.stats == *b.stats);
}

TEST_CASE("shares never exceed accumulated alpha (property)") {
    const auto v = small_phantom();
    const auto cam = default_camera(v, 32, 32);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    for (int i = 0; i < 20; ++i) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        if (b - a < 1.0) b = a + 1.0;
        const auto r = render_volume(v, make_tf(a, b, 0.05 + 0.95 * u(rng) / 255.0), cam);
        for (std::size_t p = 0; p < r.alpha.size(); ++p) {
            double sum = 0.0;
            for (const auto& plane : r.shares) sum += plane[p];
            CHECK(sum <= r.alpha[p] + 1e-12);
            CHECK(r.alpha[p] <= 1.0);
        }
    }
}

TEST_CASE("accumulated alpha grows with peak opacity (property)") {
    const auto v = small_phantom(16);
    const auto cam = default_camera(v, 24, 24);
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 15; ++i) {
        const double a = 255.0 * u(rng) * 0.8;
        const double b = a + 10.0 + (255.0 - a) * u(rng);
        double p = 0.01 + 0.98 * u(rng), q = 0.01 + 0.98 * u(rng);
        if (p > q) std::swap(p, q);
        const auto lo = render_volume(v, make_tf(a, b, p), cam);
        const auto hi = render_volume(v, make_tf(a, b, q), cam);
        for (std::size_t k = 0; k < lo.alpha.size(); ++k) CHECK(lo.alpha[k] <= hi.alpha[k] + 1e-12);
    }
}

TEST_CASE("default camera frames the whole volume") {
    auto v = small_phantom(16);
    v.masks["all"] = std::vector<std::uint8_t>(v.voxel_count(), 1);
    const auto r = render_volume(v, make_tf(0, 1), default_camera(v, 40, 40));
    const auto all = std::find(r.structures.begin(), r.structures.end(), "all") - r.structures.begin();
    const auto& sil = r.silhouettes[static_cast<std::size_t>(all)];
    long inside = 0;
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 40; ++x) {
            const bool hit = sil[static_cast<std::size_t>(y) * 40 + x];
            inside += hit;
            if (x == 0 || y == 0 || x == 39 || y == 39) CHECK_FALSE(hit);
        }
    }
    CHECK(inside > 200);
    Camera bad;
    bad.up = {0, 0, 1};
    CHECK_THROWS_AS(validate(bad), InvalidParams);
}

TEST_CASE("volume IO round trips with masks") {
    testing::TempDir dir;
    auto v = small_phantom(12);
    save_volume(v, dir / "ph");
    const auto back = load_volume(dir / "ph.json");
    CHECK(back.dims == v.dims);
    CHECK(back.voxels == v.voxels);
    CHECK(back.masks == v.masks);
    CHECK(back.value_range == v.value_range);

    VolumeDataset w;
    w.dims = {2, 1, 1};
    w.voxel_type = VoxelType::u16;
    w.voxels = {0x0102, 0xA0B0};
    w.value_range = {0, 65535};
    save_raw(w, dir / "w.raw");
    const auto bytes = read_file(dir / "w.raw");
    CHECK(bytes == Bytes{0x02, 0x01, 0xB0, 0xA0});  // little endian
    const auto raw = load_raw(dir / "w.raw", {2, 1, 1}, VoxelType::u16);
    CHECK(raw.voxels == w.voxels);
    CHECK(raw.value_range == std::pair<double, double>{0x0102, 0xA0B0});
    CHECK_THROWS_AS(load_raw(dir / "w.raw", {3, 1, 1}, VoxelType::u16), SizeMismatch);
    CHECK_THROWS_AS(load_volume(dir / "missing.json"), IoError);
}

TEST_CASE("histogram bins are equal width with the top edge in the last bin") {
    VolumeDataset v;
    v.dims = {6, 1, 1};
    v.voxels = {0, 9, 10, 19, 99, 100};
    v.value_range = {0, 100};
    const auto h = compute_histogram(v, 10);
    CHECK(h.counts == std::vector<std::uint64_t>{2, 2, 0, 0, 0, 0, 0, 0, 0, 2});
    CHECK_THROWS_AS(compute_histogram(v, 0), InvalidParams);
    v.voxels[0] = 120;
    CHECK_THROWS_AS(validate(v), InvalidParams);
}
