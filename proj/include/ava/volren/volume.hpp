#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ava {

enum class VoxelType { u8, u16 };

struct VolumeDataset {
    std::array<int, 3> dims{1, 1, 1};
    VoxelType voxel_type = VoxelType::u8;
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::vector<std::uint16_t> voxels;  // x fastest, then y, then z
    std::pair<double, double> value_range{0.0, 0.0};
    std::map<std::string, std::vector<std::uint8_t>> masks;  // structure id -> 0/1 per voxel

    std::size_t voxel_count() const noexcept {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    std::size_t index(int x, int y, int z) const noexcept {
        return (static_cast<std::size_t>(z) * dims[1] + y) * dims[0] + x;
    }
};

// Throws SizeMismatch / InvalidParams when an invariant does not hold.
void validate(const VolumeDataset& volume);

std::pair<double, double> data_range(const std::vector<std::uint16_t>& voxels);

// Headerless little-endian volume. value_range is computed from the data.
VolumeDataset load_raw(const std::string& path, std::array<int, 3> dims, VoxelType type,
                       std::array<double, 3> spacing = {1.0, 1.0, 1.0});
void save_raw(const VolumeDataset& volume, const std::string& path);

// JSON sidecar: {"raw", "dims", "voxel_type", "spacing", "value_range"?, "masks"?: {id: raw path}}.
// Relative paths resolve against the sidecar's directory.
VolumeDataset load_volume(const std::string& sidecar_path);
// Writes <stem>.raw, <stem>.json and one <stem>.<id>.mask.raw per structure.
void save_volume(const VolumeDataset& volume, const std::string& stem);

struct Histogram {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<std::uint64_t> counts;
};

// Equal-width bins over value_range; the top edge belongs to the last bin.
Histogram compute_histogram(const VolumeDataset& volume, int bins);

std::string to_string(VoxelType type);
VoxelType voxel_type_from_string(const std::string& text);

}  // namespace ava
