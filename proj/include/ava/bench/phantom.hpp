#pragma once

#include "ava/volren/volume.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace ava {

enum class PhantomShape { sphere, shell, box };

// Geometry is in fractions of the volume extent along each axis; radii are
// fractions of the smallest extent.
struct PhantomStructure {
    std::string id;
    PhantomShape shape = PhantomShape::sphere;
    std::array<double, 3> center{0.5, 0.5, 0.5};
    double radius = 0.25;
    double inner_radius = 0.0;                      // shell only
    std::array<double, 3> half_extent{0.5, 0.5, 0.5};  // box only
    double band_lo = 0.0;
    double band_hi = 0.0;
};

struct PhantomSpec {
    std::array<int, 3> dims{64, 64, 64};
    VoxelType voxel_type = VoxelType::u8;
    std::pair<double, double> value_range{0.0, 255.0};
    std::vector<PhantomStructure> structures;  // later structures overwrite earlier ones
};

// Background voxels are 0. Inside a structure the value rises from a quarter of the
// band at its boundary to the band midpoint at its core, so every structure voxel
// lies strictly inside its band. Throws OverlappingBands, InvalidParams.
VolumeDataset gen_volume_phantom(const PhantomSpec& spec);

// One sphere whose band is bin `k` of `bins` equal bins over value_range.
PhantomSpec single_band_phantom(int k, int bins = 10, std::array<int, 3> dims = {48, 48, 48});

PhantomSpec phantom_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PhantomSpec& spec);

}  // namespace ava
