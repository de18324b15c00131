#include "stereosafe/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace stereosafe {

namespace {

constexpr double kRayMin = 1e-6;
constexpr double kBackgroundIntensity = 64.0;
// A rounded column lookup lands up to half a pixel away from the exact
// projection, so the visibility comparison needs slack for surface slope.
constexpr double kOcclusionRelTol = 0.005;

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double lattice_value(std::int64_t ix, std::int64_t iy, std::int64_t iz, std::uint32_t seed) {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(ix) * 0x8DA6B343ULL ^
                            static_cast<std::uint64_t>(iy) * 0xD8163841ULL ^
                            static_cast<std::uint64_t>(iz) * 0xCB1AB31FULL ^
                            (static_cast<std::uint64_t>(seed) << 32));
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);  // [0, 1)
}

double smooth_noise(const Point3& p, double scale, std::uint32_t seed) {
    const double fx = p.x / scale, fy = p.y / scale, fz = p.z / scale;
    const double bx = std::floor(fx), by = std::floor(fy), bz = std::floor(fz);
    const auto ix = static_cast<std::int64_t>(bx);
    const auto iy = static_cast<std::int64_t>(by);
    const auto iz = static_cast<std::int64_t>(bz);
    const double tx = fx - bx, ty = fy - by, tz = fz - bz;

    double c[2][2][2];
    for (int dx = 0; dx < 2; ++dx)
        for (int dy = 0; dy < 2; ++dy)
            for (int dz = 0; dz < 2; ++dz) c[dx][dy][dz] = lattice_value(ix + dx, iy + dy, iz + dz, seed);

    auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
    const double x00 = lerp(c[0][0][0], c[1][0][0], tx);
    const double x10 = lerp(c[0][1][0], c[1][1][0], tx);
    const double x01 = lerp(c[0][0][1], c[1][0][1], tx);
    const double x11 = lerp(c[0][1][1], c[1][1][1], tx);
    const double y0 = lerp(x00, x10, ty);
    const double y1 = lerp(x01, x11, ty);
    return lerp(y0, y1, tz);
}

double evaluate_texture(const TextureSpec& tex, const Point3& p) {
    switch (tex.kind) {
        case TextureSpec::Kind::Checker: {
            const auto cell = static_cast<std::int64_t>(std::floor(p.x / tex.period_m)) +
                              static_cast<std::int64_t>(std::floor(p.y / tex.period_m)) +
                              static_cast<std::int64_t>(std::floor(p.z / tex.period_m));
            const double sign = (cell & 1) ? -1.0 : 1.0;
            return tex.base_intensity * (1.0 + tex.contrast * sign);
        }
        case TextureSpec::Kind::ValueNoise: {
            // Two octaves so the surface carries signal both near and far.
            const double n = 0.7 * smooth_noise(p, tex.scale_m, tex.seed) +
                             0.3 * smooth_noise(p, 4.0 * tex.scale_m, tex.seed ^ 0xA5A5A5A5u);
            return tex.base_intensity * (1.0 + tex.contrast * (2.0 * n - 1.0));
        }
        case TextureSpec::Kind::Flat:
            return tex.base_intensity;
    }
    return tex.base_intensity;
}

std::uint8_t quantize_intensity(double value) {
    const double clamped = std::clamp(value, 0.0, 255.0);
    return static_cast<std::uint8_t>(std::nearbyint(clamped));
}

struct Hit {
    double t = std::numeric_limits<double>::infinity();  // forward range
    const Obstacle* obstacle = nullptr;
};

double intersect(const Obstacle& obstacle, const Point3& origin, const Point3& dir) {
    if (const auto* sphere = std::get_if<Sphere>(&obstacle)) {
        const Point3 oc = origin - sphere->center;
        const double a = dir.x * dir.x + dir.y * dir.y + dir.z * dir.z;
        const double b = 2.0 * (oc.x * dir.x + oc.y * dir.y + oc.z * dir.z);
        const double c = oc.x * oc.x + oc.y * oc.y + oc.z * oc.z - sphere->radius * sphere->radius;
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) return std::numeric_limits<double>::infinity();
        const double sq = std::sqrt(disc);
        const double t0 = (-b - sq) / (2.0 * a);
        if (t0 > kRayMin) return t0;
        const double t1 = (-b + sq) / (2.0 * a);
        if (t1 > kRayMin) return t1;
        return std::numeric_limits<double>::infinity();
    }
    const auto& plane = std::get<PlaneObstacle>(obstacle);
    const double denom = plane.normal.x * dir.x + plane.normal.y * dir.y + plane.normal.z * dir.z;
    if (std::abs(denom) < 1e-12) return std::numeric_limits<double>::infinity();
    const Point3 diff = plane.point - origin;
    const double t = (plane.normal.x * diff.x + plane.normal.y * diff.y + plane.normal.z * diff.z) / denom;
    return t > kRayMin ? t : std::numeric_limits<double>::infinity();
}

struct CameraFrame {
    Point3 origin;       // world position of the camera center
    double cos_t, sin_t; // heading
};

/// Casts the ray through pixel (u, v). The direction is expressed so that the
/// parameter t equals the camera-frame forward range of the point hit.
void render_camera(const Scene& scene, const CameraFrame& cam, const CameraRig& rig, Image& img,
                   std::vector<double>& depth) {
    for (int v = 0; v < rig.height; ++v) {
        for (int u = 0; u < rig.width; ++u) {
            const double dy_cam = -(static_cast<double>(u) - rig.cu) / rig.focal_length_px;
            const double dz_cam = -(static_cast<double>(v) - rig.cv) / rig.focal_length_px;
            const Point3 dir{cam.cos_t - cam.sin_t * dy_cam, cam.sin_t + cam.cos_t * dy_cam, dz_cam};

            Hit best;
            for (const auto& obstacle : scene.obstacles) {
                const double t = intersect(obstacle, cam.origin, dir);
                if (t < best.t) {
                    best.t = t;
                    best.obstacle = &obstacle;
                }
            }

            const std::size_t idx = static_cast<std::size_t>(v) * rig.width + u;
            if (best.obstacle != nullptr && best.t < scene.background_depth) {
                const Point3 hit{cam.origin.x + best.t * dir.x, cam.origin.y + best.t * dir.y,
                                 cam.origin.z + best.t * dir.z};
                const TextureSpec& tex = std::visit([](const auto& o) -> const TextureSpec& { return o.texture; },
                                                    *best.obstacle);
                img.pixels[idx] = quantize_intensity(evaluate_texture(tex, hit));
                depth[idx] = best.t;
            } else {
                img.pixels[idx] = quantize_intensity(kBackgroundIntensity);
                depth[idx] = scene.background_depth;
            }
        }
    }
}

std::int16_t quantize_disparity(double focal_baseline, double depth, int d_max) {
    const double d = std::nearbyint(focal_baseline / depth);  // ties to even
    return static_cast<std::int16_t>(std::clamp(d, 0.0, static_cast<double>(d_max)));
}

}  // namespace

TextureSpec TextureSpec::checker(double period, double contrast, double base) {
    TextureSpec t;
    t.kind = Kind::Checker;
    t.period_m = period;
    t.contrast = contrast;
    t.base_intensity = base;
    return t;
}

TextureSpec TextureSpec::value_noise(double scale, std::uint32_t seed, double contrast, double base) {
    TextureSpec t;
    t.kind = Kind::ValueNoise;
    t.scale_m = scale;
    t.seed = seed;
    t.contrast = contrast;
    t.base_intensity = base;
    return t;
}

TextureSpec TextureSpec::flat(double intensity) {
    TextureSpec t;
    t.kind = Kind::Flat;
    t.base_intensity = intensity;
    return t;
}

void Scene::validate() const {
    if (obstacles.empty()) throw std::invalid_argument("Scene: at least one obstacle required");
    if (!(background_depth > 0.0)) throw std::invalid_argument("Scene: background depth must be positive");
    for (const auto& obstacle : obstacles) {
        if (const auto* sphere = std::get_if<Sphere>(&obstacle)) {
            if (!(sphere->radius > 0.0)) throw std::invalid_argument("Scene: sphere radius must be positive");
        } else {
            const auto& plane = std::get<PlaneObstacle>(obstacle);
            if (std::abs(norm(plane.normal) - 1.0) > 1e-9)
                throw std::invalid_argument("Scene: plane normal must be unit length");
        }
        const auto& tex = std::visit([](const auto& o) -> const TextureSpec& { return o.texture; }, obstacle);
        if (!(tex.contrast >= 0.0 && tex.contrast <= 1.0))
            throw std::invalid_argument("Scene: texture contrast must be in [0, 1]");
        if (!(tex.base_intensity >= 0.0 && tex.base_intensity <= 255.0))
            throw std::invalid_argument("Scene: texture base intensity must be in [0, 255]");
    }
}

RenderResult render_triple(const Scene& scene, const RobotPose& pose, const CameraRig& rig) {
    scene.validate();

    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    // Reference camera at the robot origin; center and right cameras sit to
    // its right (negative lateral offsets) at b/2 spacing.
    const double offsets[3] = {0.0, -0.5 * rig.baseline_m, -rig.baseline_m};

    RenderResult out;
    Image* images[3] = {&out.triple.i1, &out.triple.i2, &out.triple.i3};
    std::vector<double> depths[3];
    for (int k = 0; k < 3; ++k) {
        *images[k] = Image(rig.width, rig.height);
        depths[k].assign(static_cast<std::size_t>(rig.width) * rig.height, 0.0);
        const CameraFrame cam{{pose.x - s * offsets[k], pose.y + c * offsets[k], 0.0}, c, s};
        render_camera(scene, cam, rig, *images[k], depths[k]);
    }

    const double half_fb = rig.focal_length_px * 0.5 * rig.baseline_m;
    GroundTruth& gt = out.truth;
    gt.depth = depths[0];
    gt.occlusion_mask.assign(gt.depth.size(), 0);
    gt.d12 = DisparityMap(rig.width, rig.height, rig.d_max);
    gt.d23 = DisparityMap(rig.width, rig.height, rig.d_max);
    gt.d13 = DisparityMap(rig.width, rig.height, rig.d_max);

    for (int v = 0; v < rig.height; ++v) {
        for (int u = 0; u < rig.width; ++u) {
            gt.d12.at(u, v) = quantize_disparity(half_fb, depths[0][static_cast<std::size_t>(v) * rig.width + u],
                                                 rig.d_max);
            gt.d23.at(u, v) = quantize_disparity(half_fb, depths[1][static_cast<std::size_t>(v) * rig.width + u],
                                                 rig.d_max);
        }
    }

    for (int v = 0; v < rig.height; ++v) {
        for (int u = 0; u < rig.width; ++u) {
            const std::size_t idx = static_cast<std::size_t>(v) * rig.width + u;
            const double z = depths[0][idx];
            bool occluded = false;

            // Visibility of this pixel's scene point in the center and right
            // cameras, checked against their depth buffers at the projected
            // (rounded) column. Rows are shared: the rig is rectified.
            const double shifts[2] = {half_fb / z, 2.0 * half_fb / z};
            for (int k = 0; k < 2; ++k) {
                const double uj = static_cast<double>(u) - shifts[k];
                const int uji = static_cast<int>(std::nearbyint(uj));
                if (uji < 0 || uji >= rig.width) {
                    occluded = true;
                    break;
                }
                const double zj = depths[k + 1][static_cast<std::size_t>(v) * rig.width + uji];
                if (zj < z * (1.0 - kOcclusionRelTol) - 1e-9) {
                    occluded = true;
                    break;
                }
            }

            // Wide-baseline truth through the half-baseline pair, so the map
            // triple composes exactly. Pixels whose chain exits the image get
            // the direct quantization and count as occluded.
            const int a = gt.d12.at(u, v);
            const int u_mid = u - a;
            if (u_mid >= 0) {
                gt.d13.at(u, v) = static_cast<std::int16_t>(
                    std::min(a + static_cast<int>(gt.d23.at(u_mid, v)), rig.d_max));
            } else {
                gt.d13.at(u, v) = quantize_disparity(2.0 * half_fb, z, rig.d_max);
                occluded = true;
            }

            gt.occlusion_mask[idx] = occluded ? 1 : 0;
        }
    }

    return out;
}

DisparityMap corrupt_disparity(const DisparityMap& d, const CorruptionSpec& spec) {
    DisparityMap out = d;
    const int u0 = std::max(0, spec.u0);
    const int v0 = std::max(0, spec.v0);
    const int u1 = std::min(d.width, spec.u1);
    const int v1 = std::min(d.height, spec.v1);
    for (int v = v0; v < v1; ++v) {
        for (int u = u0; u < u1; ++u) {
            const auto value = out.at(u, v);
            if (value == DisparityMap::kInvalid) continue;
            const int biased = std::clamp(static_cast<int>(value) - spec.bias, 0, d.d_max);
            out.at(u, v) = static_cast<std::int16_t>(biased);
        }
    }
    return out;
}

}  // namespace stereosafe
