#pragma once

#include <cmath>
#include <string>

#include "stereosafe/errors.hpp"

namespace stereosafe {

inline constexpr double kPi = 3.14159265358979323846;

/// 3D point. In the camera/robot frame the components are
/// x = forward range, y = left, z = up; after a world transform they are
/// plain world coordinates. The forward range being the first component is
/// what lets [1 0 0]^T * r(p, d) extract the range of a reprojected pixel.
struct Point3 {
    double x{0.0};
    double y{0.0};
    double z{0.0};
};

inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }

inline double norm(const Point3& p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }

struct PixelCoord {
    int u{0};
    int v{0};
};

/// Planar robot pose; theta is kept normalized to (-pi, pi].
struct RobotPose {
    double x{0.0};
    double y{0.0};
    double theta{0.0};
};

inline double normalize_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

/// Rectified multibaseline rig. The three cameras share intrinsics and face
/// the robot heading; the reference (left) camera sits at the robot planar
/// origin, the center camera b/2 to its right, the right camera b to its
/// right (lateral offsets 0, -b/2, -b in the robot "left" axis).
struct CameraRig {
    double focal_length_px;
    double baseline_m;  // left <-> right camera spacing
    double cu;
    double cv;
    int width;
    int height;
    int d_max;

    CameraRig(double focal, double baseline, double cu_, double cv_, int w, int h, int d_max_)
        : focal_length_px(focal), baseline_m(baseline), cu(cu_), cv(cv_), width(w), height(h), d_max(d_max_) {
        if (!(focal_length_px > 0.0)) throw std::invalid_argument("CameraRig: focal length must be positive");
        if (!(baseline_m > 0.0)) throw std::invalid_argument("CameraRig: baseline must be positive");
        if (width <= 0 || height <= 0) throw std::invalid_argument("CameraRig: image dimensions must be positive");
        if (!(cu >= 0.0 && cu < width)) throw std::invalid_argument("CameraRig: principal point cu out of image");
        if (!(cv >= 0.0 && cv < height)) throw std::invalid_argument("CameraRig: principal point cv out of image");
        if (d_max < 1 || d_max >= width) throw std::invalid_argument("CameraRig: d_max must be in [1, width)");
    }

    /// Rig with the principal point at the image center.
    static CameraRig centered(double focal, double baseline, int w, int h, int d_max_) {
        return CameraRig(focal, baseline, 0.5 * (w - 1), 0.5 * (h - 1), w, h, d_max_);
    }

    bool contains(PixelCoord p) const { return p.u >= 0 && p.u < width && p.v >= 0 && p.v < height; }
};

/// Stereo reprojection of a reference-camera pixel with integer disparity d
/// (taken over the full baseline) into the camera frame.
/// d = 0 corresponds to infinite depth and is rejected.
inline Point3 reproject(const CameraRig& rig, PixelCoord p, int d) {
    if (d == 0) {
        throw ZeroDisparityError("reproject: disparity 0 is a point at infinity (pixel " +
                                 std::to_string(p.u) + "," + std::to_string(p.v) + ")");
    }
    if (d < 0) throw std::invalid_argument("reproject: negative disparity");
    const double forward = rig.focal_length_px * rig.baseline_m / static_cast<double>(d);
    const double left = -(static_cast<double>(p.u) - rig.cu) * forward / rig.focal_length_px;
    const double up = -(static_cast<double>(p.v) - rig.cv) * forward / rig.focal_length_px;
    return {forward, left, up};
}

/// Planar rigid transform of a camera-frame point into the world frame.
inline Point3 transform(const RobotPose& pose, const Point3& q) {
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    return {pose.x + c * q.x - s * q.y, pose.y + s * q.x + c * q.y, q.z};
}

/// World position of the scene point behind pixel p at disparity d.
inline Point3 pixel_position(const RobotPose& pose, const CameraRig& rig, PixelCoord p, int d) {
    return transform(pose, reproject(rig, p, d));
}

}  // namespace stereosafe
