#pragma once

#include <limits>

#include <Eigen/Dense>

#include "eifsim/types.hpp"

namespace eifsim {

// Egocentric frame: per-pixel ground-range depth plus ground-truth category
// and instance ids (the segmentation stand-in). depth(y, x) is the horizontal
// distance from the camera to the hit surface along the pixel column's ray;
// kDepthInf marks pixels with no hit inside the camera range.
struct Observation {
    static constexpr float kDepthInf = std::numeric_limits<float>::infinity();

    int width = 0;
    int height = 0;
    Eigen::ArrayXXf depth;      // height x width
    Eigen::ArrayXXi category;   // 0 = background
    Eigen::ArrayXXi instance;   // 0 = background, 1 = wall

    Cell camera_cell;
    Heading camera_heading = Heading::North;
    float camera_z = 1.0f;

    bool contains_instance(ObjectId id) const {
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                if (instance(y, x) == id) return true;
        return false;
    }
};

}  // namespace eifsim
