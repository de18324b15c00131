#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "stereosafe/error_model.hpp"
#include "stereosafe/geometry.hpp"
#include "stereosafe/qp.hpp"

namespace stereosafe {

/// Lipschitz constants of the barrier terms with respect to a point-position
/// perturbation; they convert a position error bound into a constraint
/// tightening.
struct LipschitzConstants {
    double l_fh{0.0};
    double l_gamma_hns{0.0};
    double l_gh{0.0};
};

struct BarrierConfig {
    double c{0.33};             // safe radius
    double alpha{1.0};          // gamma(r) = alpha * r
    double delta{0.0};          // index-set slack
    int max_constraints{4000};
    double sigma{0.99};         // uncertainty robustness level
    double u_max{1.0};          // input-norm cap used to linearize the robust term
    LipschitzConstants lipschitz;

    double gamma(double r) const { return alpha * r; }
};

/// One usable pixel measurement: world position of the reprojected point and
/// its camera-frame forward range (positive for every retained pixel).
struct MeasuredPixel {
    PixelCoord pixel;
    int d_hat{0};
    Point3 rho_hat;
    double forward_range{0.0};
};

struct UncertainPixel {
    MeasuredPixel measured;
    UncertaintySet set;
    double epsilon{0.0};
};

struct FilterResult {
    std::array<double, 2> u{0.0, 0.0};  // (v, omega)
    bool feasible{true};
    std::vector<int> active_pixels;     // indices retained in the enforced index set
    double h_ns_measured{0.0};
    double binding_bound{0.0};          // tightest velocity cap among retained constraints
    double kkt_residual{0.0};
};

/// Ball barrier: half the squared planar clearance beyond the safe radius.
double barrier(const RobotPose& pose, const Point3& rho, double c);

/// Minimum barrier value across the tracked points (the nonsmooth composition
/// of the per-pixel barriers). Throws EmptyPixelSetError on an empty list.
double min_barrier(const RobotPose& pose, std::span<const Point3> points, double c);
double min_barrier(std::span<const double> h_values);

/// Indices with barrier value within delta of the minimum, truncated to the
/// max_constraints smallest entries.
std::vector<int> index_set(std::span<const double> h_values, double delta, int max_constraints);

/// Uncertainty-aware index set: a pixel is kept when its best-case barrier
/// value does not exceed the smallest worst-case barrier value (plus delta).
/// Inner extrema are taken by exact enumeration of the member positions.
/// Always a superset of the measured-position index set.
std::vector<int> robust_index_set(const RobotPose& pose, std::span<const UncertainPixel> pixels,
                                  const BarrierConfig& cfg);

/// Projects the desired input onto the constraint polytope. On an infeasible
/// constraint set the result is flagged and the fallback (v = 0, desired
/// turn rate) is returned.
FilterResult cbf_qp(const std::array<double, 2>& u_des, std::span<const HalfPlane> constraints);

/// Measurement-robust barrier constraint for one pixel: the nominal barrier
/// inequality tightened by (l_fh + l_gamma_hns + l_gh * u_max) * epsilon.
/// The input-norm factor is upper-bounded by u_max to keep the constraint
/// linear; with epsilon = 0 the nominal constraint is recovered.
HalfPlane robust_cbf_constraint(const RobotPose& pose, const Point3& rho_hat, double epsilon,
                                const BarrierConfig& cfg, double h_ns_value);

/// Unrobustified filter: enforces the barrier inequality at the measured
/// positions of the near-minimal pixels.
FilterResult naive_controller(const std::array<double, 2>& u_des, const RobotPose& pose,
                              std::span<const MeasuredPixel> pixels, const BarrierConfig& cfg);

/// Robust filter: every pixel in the uncertainty-aware index set contributes
/// a velocity cap computed at its worst-case (closest consistent) position.
FilterResult robust_controller(const std::array<double, 2>& u_des, const RobotPose& pose,
                               std::span<const UncertainPixel> pixels, const BarrierConfig& cfg);

/// Sampling domain for the finite-difference Lipschitz estimates.
struct LipschitzDomain {
    double pose_extent{2.0};   // |x|, |y| of sampled poses
    double range_min{0.2};     // distance of sampled points from the robot
    double range_max{15.0};
    int set_size{8};           // points per sampled barrier composition
};

/// Finite-difference estimates of the constants consumed by the robust
/// constraint, maximized over sampled (pose, point-set) instances and
/// inflated by a 1.5 safety factor. Deterministic for a fixed seed.
LipschitzConstants estimate_lipschitz(const LipschitzDomain& domain, const BarrierConfig& cfg, int samples,
                                      std::uint32_t seed);

/// Checks one instance of the robustness implication: if the input satisfies
/// every robust constraint over the uncertainty-aware index set, the true
/// positions must satisfy the nonsmooth barrier condition. True positions
/// must be members of their pixel's uncertainty set. Used as a randomized
/// verifier; understated Lipschitz constants are expected to break it.
bool check_robust_implication(const RobotPose& pose, std::span<const Point3> true_positions,
                              std::span<const UncertainPixel> pixels, const std::array<double, 2>& u,
                              const BarrierConfig& cfg);

}  // namespace stereosafe
