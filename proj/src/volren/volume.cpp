#include "ava/volren/volume.hpp"

#include "ava/errors.hpp"
#include "ava/image.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace ava {

namespace fs = std::filesystem;

void validate(const VolumeDataset& v) {
    for (int i = 0; i < 3; ++i) {
        if (v.dims[i] <= 0) throw InvalidParams("volume dims must be positive");
        if (!(v.spacing[i] > 0.0)) throw InvalidParams("volume spacing must be positive");
    }
    if (v.voxels.size() != v.voxel_count()) {
        throw SizeMismatch("voxel count does not match dims");
    }
    if (v.value_range.first > v.value_range.second) {
        throw InvalidParams("value_range is inverted");
    }
    for (auto x : v.voxels) {
        if (x < v.value_range.first || x > v.value_range.second) {
            throw InvalidParams("voxel value outside value_range");
        }
    }
    for (const auto& [id, mask] : v.masks) {
        if (mask.size() != v.voxel_count()) {
            throw SizeMismatch("mask '" + id + "' does not match dims");
        }
    }
}

std::pair<double, double> data_range(const std::vector<std::uint16_t>& voxels) {
    if (voxels.empty()) return {0.0, 0.0};
    const auto [lo, hi] = std::minmax_element(voxels.begin(), voxels.end());
    return {static_cast<double>(*lo), static_cast<double>(*hi)};
}

VolumeDataset load_raw(const std::string& path, std::array<int, 3> dims, VoxelType type,
                       std::array<double, 3> spacing) {
    VolumeDataset v;
    v.dims = dims;
    v.voxel_type = type;
    v.spacing = spacing;
    for (int d : dims) {
        if (d <= 0) throw InvalidParams("volume dims must be positive");
    }
    const auto bytes = read_file(path);
    const std::size_t width = type == VoxelType::u8 ? 1 : 2;
    const std::size_t expected = v.voxel_count() * width;
    if (bytes.size() != expected) {
        throw SizeMismatch(path + ": expected " + std::to_string(expected) + " bytes, found " +
                           std::to_string(bytes.size()));
    }
    v.voxels.resize(v.voxel_count());
    for (std::size_t i = 0; i < v.voxels.size(); ++i) {
        v.voxels[i] = width == 1 ? bytes[i]
                                 : static_cast<std::uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
    }
    v.value_range = data_range(v.voxels);
    return v;
}

void save_raw(const VolumeDataset& v, const std::string& path) {
    const std::size_t width = v.voxel_type == VoxelType::u8 ? 1 : 2;
    Bytes bytes(v.voxels.size() * width);
    for (std::size_t i = 0; i < v.voxels.size(); ++i) {
        if (width == 1) {
            bytes[i] = static_cast<std::uint8_t>(v.voxels[i]);
        } else {
            bytes[2 * i] = static_cast<std::uint8_t>(v.voxels[i] & 0xFF);
            bytes[2 * i + 1] = static_cast<std::uint8_t>(v.voxels[i] >> 8);
        }
    }
    write_file(path, bytes);
}

VolumeDataset load_volume(const std::string& sidecar_path) {
    const auto text = read_file(sidecar_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception& e) {
        throw IoError(sidecar_path + ": " + e.what());
    }
    const fs::path base = fs::path(sidecar_path).parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };
    try {
        const auto dims = j.at("dims").get<std::array<int, 3>>();
        const auto type = voxel_type_from_string(j.value("voxel_type", "u8"));
        const auto spacing = j.value("spacing", std::array<double, 3>{1.0, 1.0, 1.0});
        auto v = load_raw(resolve(j.at("raw").get<std::string>()), dims, type, spacing);
        if (j.contains("value_range")) {
            v.value_range = {j["value_range"].at(0).get<double>(), j["value_range"].at(1).get<double>()};
        }
        if (j.contains("masks")) {
            for (const auto& [id, path] : j["masks"].items()) {
                auto mask = read_file(resolve(path.get<std::string>()));
                if (mask.size() != v.voxel_count()) {
                    throw SizeMismatch("mask '" + id + "' does not match dims");
                }
                for (auto& m : mask) m = m ? 1 : 0;
                v.masks.emplace(id, std::move(mask));
            }
        }
        validate(v);
        return v;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(sidecar_path + ": " + e.what());
    }
}

void save_volume(const VolumeDataset& v, const std::string& stem) {
    const fs::path stem_path(stem);
    const std::string name = stem_path.filename().string();
    save_raw(v, stem + ".raw");
    nlohmann::json j{
        {"raw", name + ".raw"},
        {"dims", v.dims},
        {"voxel_type", to_string(v.voxel_type)},
        {"spacing", v.spacing},
        {"value_range", {v.value_range.first, v.value_range.second}},
    };
    if (!v.masks.empty()) {
        auto masks = nlohmann::json::object();
        for (const auto& [id, mask] : v.masks) {
            const std::string file = name + "." + id + ".mask.raw";
            write_file((stem_path.parent_path() / file).string(), mask);
            masks[id] = file;
        }
        j["masks"] = std::move(masks);
    }
    write_text_file(stem + ".json", j.dump(2) + "\n");
}

Histogram compute_histogram(const VolumeDataset& v, int bins) {
    if (bins < 1) {
        throw InvalidParams("histogram needs at least one bin");
    }
    Histogram h;
    h.lower = v.value_range.first;
    h.upper = v.value_range.second;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    const double span = h.upper - h.lower;
    for (auto x : v.voxels) {
        std::size_t bin = 0;
        if (span > 0.0) {
            const double pos = (x - h.lower) / span * bins;
            bin = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(bins - 1)));
        }
        ++h.counts[bin];
    }
    return h;
}

std::string to_string(VoxelType type) {
    return type == VoxelType::u8 ? "u8" : "u16";
}

VoxelType voxel_type_from_string(const std::string& text) {
    if (text == "u8" || text == "uint8") return VoxelType::u8;
    if (text == "u16" || text == "uint16") return VoxelType::u16;
    throw InvalidParams("unknown voxel type " + text);
}

}  // namespace ava
