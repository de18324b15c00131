#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "stereosafe/disparity.hpp"
#include "stereosafe/geometry.hpp"
#include "stereosafe/image.hpp"

namespace stereosafe {

/// Surface appearance. All textures are functions of the 3D hit point alone,
/// so the three cameras observe photo-consistent intensities; flat textures
/// deliberately starve the matcher of signal.
struct TextureSpec {
    enum class Kind { Checker, ValueNoise, Flat };

    Kind kind{Kind::Flat};
    double period_m{0.05};     // checker cell size
    double scale_m{0.05};      // value-noise lattice spacing
    std::uint32_t seed{0};     // value-noise lattice seed
    double contrast{0.5};      // in [0, 1]
    double base_intensity{128.0};

    static TextureSpec checker(double period, double contrast, double base = 128.0);
    static TextureSpec value_noise(double scale, std::uint32_t seed, double contrast, double base = 128.0);
    static TextureSpec flat(double intensity);
};

struct Sphere {
    Point3 center;
    double radius{0.1};
    TextureSpec texture;
};

struct PlaneObstacle {
    Point3 point;
    Point3 normal;  // unit length
    TextureSpec texture;
};

using Obstacle = std::variant<Sphere, PlaneObstacle>;

struct Scene {
    std::vector<Obstacle> obstacles;
    double background_depth{20.0};  // forward range assigned to rays that miss everything

    void validate() const;  // throws std::invalid_argument on a malformed scene
};

/// Per-pixel ground truth for the reference (left) camera, plus the
/// center-camera quantities needed to form the map triple.
///
/// depth is the true forward range of each I1 pixel. d12 and d23 are
/// round-to-nearest half-baseline disparities of cameras 1 and 2; d13 is
/// defined through the column-shifted sum of d12 and d23 (clamped to d_max)
/// so the three maps are exactly consistent wherever the chain stays in
/// bounds. occlusion_mask marks I1 pixels whose scene point is not cleanly
/// visible in both other cameras (or whose composition chain leaves the
/// image).
struct GroundTruth {
    DisparityMap d12;
    DisparityMap d23;
    DisparityMap d13;
    std::vector<double> depth;         // W*H, forward range of I1 pixels
    std::vector<std::uint8_t> occlusion_mask;  // W*H, 1 = occluded

    bool occluded(int u, int v, int width) const {
        return occlusion_mask[static_cast<std::size_t>(v) * width + u] != 0;
    }
};

struct RenderResult {
    ImageTriple triple;
    GroundTruth truth;
};

/// Ray-casts the three cameras at the given pose. Deterministic: identical
/// (scene, pose, rig) inputs produce bit-identical output.
RenderResult render_triple(const Scene& scene, const RobotPose& pose, const CameraRig& rig);

/// Scripted disparity corruption: subtracts `bias` inside the region
/// (lowering disparity overstates distance), clamping results to [0, d_max].
/// Invalid pixels stay invalid. The seed is carried for config parity; the
/// uniform-bias path does not consume randomness.
struct CorruptionSpec {
    int u0{0}, v0{0};  // inclusive
    int u1{0}, v1{0};  // exclusive
    int bias{0};
    std::uint32_t seed{0};
};

DisparityMap corrupt_disparity(const DisparityMap& d, const CorruptionSpec& spec);

}  // namespace stereosafe
