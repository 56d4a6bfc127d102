#include "ava/bench/phantom.hpp"

#include "ava/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ava {

namespace {

// 1 at the core of the structure, 0 on its boundary, negative outside.
double depth(const PhantomStructure& s, const std::array<double, 3>& p, const std::array<double, 3>& extent,
             double scale) {
    std::array<double, 3> d{};
    for (int a = 0; a < 3; ++a) d[a] = (p[a] - s.center[a]) * extent[a];
    switch (s.shape) {
        case PhantomShape::sphere: {
            const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            return 1.0 - r / (s.radius * scale);
        }
        case PhantomShape::shell: {
            const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            const double outer = s.radius * scale;
            const double inner = s.inner_radius * scale;
            const double mid = 0.5 * (outer + inner);
            const double half = 0.5 * (outer - inner);
            return 1.0 - std::abs(r - mid) / half;
        }
        case PhantomShape::box: {
            double m = 1.0;
            for (int a = 0; a < 3; ++a) {
                m = std::min(m, 1.0 - std::abs(d[a]) / (s.half_extent[a] * extent[a]));
            }
            return m;
        }
    }
    return -1.0;
}

std::string shape_name(PhantomShape s) {
    switch (s) {
        case PhantomShape::sphere: return "sphere";
        case PhantomShape::shell: return "shell";
        case PhantomShape::box: return "box";
    }
    return "sphere";
}

PhantomShape shape_from_name(const std::string& s) {
    if (s == "sphere") return PhantomShape::sphere;
    if (s == "shell") return PhantomShape::shell;
    if (s == "box") return PhantomShape::box;
    throw InvalidParams("unknown phantom shape " + s);
}

}  // namespace

VolumeDataset gen_volume_phantom(const PhantomSpec& spec) {
    const double top = spec.voxel_type == VoxelType::u8 ? 255.0 : 65535.0;
    if (spec.value_range.first < 0.0 || spec.value_range.second > top ||
        !(spec.value_range.first < spec.value_range.second)) {
        throw InvalidParams("phantom value_range must be increasing and representable");
    }
    for (std::size_t i = 0; i < spec.structures.size(); ++i) {
        const auto& s = spec.structures[i];
        if (s.id.empty()) throw InvalidParams("phantom structure needs an id");
        if (!(s.band_lo < s.band_hi)) throw InvalidParams("band of '" + s.id + "' is empty");
        if (s.band_lo < spec.value_range.first || s.band_hi > spec.value_range.second) {
            throw InvalidParams("band of '" + s.id + "' leaves value_range");
        }
        if (s.shape == PhantomShape::shell && !(s.inner_radius < s.radius)) {
            throw InvalidParams("shell '" + s.id + "' needs inner_radius < radius");
        }
        for (std::size_t j = 0; j < i; ++j) {
            const auto& o = spec.structures[j];
            if (s.id == o.id) throw InvalidParams("duplicate structure id " + s.id);
            if (s.band_lo < o.band_hi && o.band_lo < s.band_hi) {
                throw OverlappingBands("bands of '" + o.id + "' and '" + s.id + "' overlap");
            }
        }
    }

    VolumeDataset v;
    v.dims = spec.dims;
    v.voxel_type = spec.voxel_type;
    for (int d : v.dims) {
        if (d <= 0) throw InvalidParams("phantom dims must be positive");
    }
    v.voxels.assign(v.voxel_count(), 0);
    v.value_range = spec.value_range;
    v.value_range.first = std::min(v.value_range.first, 0.0);

    const std::array<double, 3> extent{double(v.dims[0]), double(v.dims[1]), double(v.dims[2])};
    const double scale = std::min({extent[0], extent[1], extent[2]});
    std::vector<int> owner(v.voxel_count(), -1);
    for (int z = 0; z < v.dims[2]; ++z) {
        for (int y = 0; y < v.dims[1]; ++y) {
            for (int x = 0; x < v.dims[0]; ++x) {
                const std::array<double, 3> p{(x + 0.5) / extent[0], (y + 0.5) / extent[1], (z + 0.5) / extent[2]};
                const std::size_t i = v.index(x, y, z);
                for (std::size_t k = 0; k < spec.structures.size(); ++k) {
                    const auto& s = spec.structures[k];
                    const double d = depth(s, p, extent, scale);
                    if (d < 0.0) continue;
                    const double w = s.band_hi - s.band_lo;
                    double value = std::round(s.band_lo + w * (0.25 + 0.25 * std::min(d, 1.0)));
                    value = std::clamp(value, std::ceil(s.band_lo + 1e-9), std::floor(s.band_hi - 1e-9));
                    v.voxels[i] = static_cast<std::uint16_t>(value);
                    owner[i] = static_cast<int>(k);
                }
            }
        }
    }
    for (std::size_t k = 0; k < spec.structures.size(); ++k) {
        std::vector<std::uint8_t> mask(v.voxel_count(), 0);
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = owner[i] == static_cast<int>(k) ? 1 : 0;
        v.masks.emplace(spec.structures[k].id, std::move(mask));
    }
    validate(v);
    return v;
}

PhantomSpec single_band_phantom(int k, int bins, std::array<int, 3> dims) {
    if (bins < 1 || k < 0 || k >= bins) throw InvalidParams("bin index out of range");
    PhantomSpec spec;
    spec.dims = dims;
    const double width = 255.0 / bins;
    PhantomStructure s;
    s.id = "target";
    s.shape = PhantomShape::sphere;
    s.radius = 0.3;
    s.band_lo = k * width;
    s.band_hi = (k + 1) * width;
    spec.structures.push_back(s);
    return spec;
}

PhantomSpec phantom_spec_from_json(const nlohmann::json& j) {
    try {
        PhantomSpec spec;
        spec.dims = j.value("dims", spec.dims);
        spec.voxel_type = voxel_type_from_string(j.value("voxel_type", std::string("u8")));
        if (j.contains("value_range")) {
            spec.value_range = {j["value_range"].at(0).get<double>(), j["value_range"].at(1).get<double>()};
        }
        for (const auto& e : j.at("structures")) {
            PhantomStructure s;
            s.id = e.at("id").get<std::string>();
            s.shape = shape_from_name(e.value("shape", std::string("sphere")));
            s.center = e.value("center", s.center);
            s.radius = e.value("radius", s.radius);
            s.inner_radius = e.value("inner_radius", s.inner_radius);
            s.half_extent = e.value("half_extent", s.half_extent);
            s.band_lo = e.at("band").at(0).get<double>();
            s.band_hi = e.at("band").at(1).get<double>();
            spec.structures.push_back(s);
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParams(std::string("bad phantom spec: ") + e.what());
    }
}

nlohmann::json to_json(const PhantomSpec& spec) {
    nlohmann::json structures = nlohmann::json::array();
    for (const auto& s : spec.structures) {
        nlohmann::json e{{"id", s.id}, {"shape", shape_name(s.shape)}, {"center", s.center},
                         {"band", {s.band_lo, s.band_hi}}};
        if (s.shape == PhantomShape::box) {
            e["half_extent"] = s.half_extent;
        } else {
            e["radius"] = s.radius;
        }
        if (s.shape == PhantomShape::shell) e["inner_radius"] = s.inner_radius;
        structures.push_back(std::move(e));
    }
    return {{"dims", spec.dims},
            {"voxel_type", to_string(spec.voxel_type)},
            {"value_range", {spec.value_range.first, spec.value_range.second}},
            {"structures", std::move(structures)}};
}

}  // namespace ava
