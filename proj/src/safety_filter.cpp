#include "stereosafe/safety_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "stereosafe/errors.hpp"
#include "stereosafe/rng.hpp"

namespace stereosafe {

namespace {

/// Coefficient of v in the barrier derivative: the projection of the
/// robot-to-point offset onto the heading, negated. The turn rate never
/// enters (the barrier is radial).
double lgh_v(const RobotPose& pose, const Point3& rho) {
    return (pose.x - rho.x) * std::cos(pose.theta) + (pose.y - rho.y) * std::sin(pose.theta);
}

struct MemberExtrema {
    double h_min;
    double h_max;
};

MemberExtrema barrier_extrema(const RobotPose& pose, const UncertaintySet& set, double c) {
    MemberExtrema e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& member : set.members) {
        const double h = barrier(pose, member, c);
        e.h_min = std::min(e.h_min, h);
        e.h_max = std::max(e.h_max, h);
    }
    return e;
}

std::vector<int> truncate_smallest(std::vector<int> indices, std::span<const double> keys, int max_count) {
    if (static_cast<int>(indices.size()) <= max_count) return indices;
    std::stable_sort(indices.begin(), indices.end(), [&keys](int a, int b) { return keys[a] < keys[b]; });
    indices.resize(static_cast<std::size_t>(max_count));
    std::sort(indices.begin(), indices.end());
    return indices;
}

}  // namespace

double barrier(const RobotPose& pose, const Point3& rho, double c) {
    const double dx = pose.x - rho.x;
    const double dy = pose.y - rho.y;
    return 0.5 * (dx * dx + dy * dy - c * c);
}

double min_barrier(std::span<const double> h_values) {
    if (h_values.empty()) throw EmptyPixelSetError("min_barrier: empty pixel set");
    return *std::min_element(h_values.begin(), h_values.end());
}

double min_barrier(const RobotPose& pose, std::span<const Point3> points, double c) {
    if (points.empty()) throw EmptyPixelSetError("min_barrier: empty pixel set");
    double h = std::numeric_limits<double>::infinity();
    for (const auto& p : points) h = std::min(h, barrier(pose, p, c));
    return h;
}

std::vector<int> index_set(std::span<const double> h_values, double delta, int max_constraints) {
    const double h_min = min_barrier(h_values);
    std::vector<int> indices;
    for (int i = 0; i < static_cast<int>(h_values.size()); ++i)
        if (h_values[i] <= h_min + delta) indices.push_back(i);
    return truncate_smallest(std::move(indices), h_values, max_constraints);
}

std::vector<int> robust_index_set(const RobotPose& pose, std::span<const UncertainPixel> pixels,
                                  const BarrierConfig& cfg) {
    if (pixels.empty()) throw EmptyPixelSetError("robust_index_set: empty pixel set");

    std::vector<double> h_min(pixels.size());
    double smallest_worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const MemberExtrema e = barrier_extrema(pose, pixels[i].set, cfg.c);
        h_min[i] = e.h_min;
        smallest_worst = std::min(smallest_worst, e.h_max);
    }

    std::vector<int> indices;
    for (int i = 0; i < static_cast<int>(pixels.size()); ++i)
        if (h_min[i] <= smallest_worst + cfg.delta) indices.push_back(i);
    return truncate_smallest(std::move(indices), h_min, cfg.max_constraints);
}

FilterResult cbf_qp(const std::array<double, 2>& u_des, std::span<const HalfPlane> constraints) {
    const QpSolution qp = solve_projection_qp(u_des, constraints);
    FilterResult result;
    result.feasible = qp.feasible;
    result.kkt_residual = qp.kkt_residual;
    result.u = qp.feasible ? qp.u : std::array<double, 2>{0.0, u_des[1]};
    return result;
}

HalfPlane robust_cbf_constraint(const RobotPose& pose, const Point3& rho_hat, double epsilon,
                                const BarrierConfig& cfg, double h_ns_value) {
    const double tightening =
        (cfg.lipschitz.l_fh + cfg.lipschitz.l_gamma_hns + cfg.lipschitz.l_gh * cfg.u_max) * epsilon;
    return {{lgh_v(pose, rho_hat), 0.0}, -cfg.gamma(h_ns_value) + tightening};
}

FilterResult naive_controller(const std::array<double, 2>& u_des, const RobotPose& pose,
                              std::span<const MeasuredPixel> pixels, const BarrierConfig& cfg) {
    if (pixels.empty()) throw EmptyPixelSetError("naive_controller: empty pixel set");

    std::vector<double> h(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) h[i] = barrier(pose, pixels[i].rho_hat, cfg.c);
    const double h_ns = min_barrier(h);
    const std::vector<int> retained = index_set(h, cfg.delta, cfg.max_constraints);

    std::vector<HalfPlane> constraints;
    constraints.reserve(retained.size());
    double bound = std::numeric_limits<double>::infinity();
    for (int i : retained) {
        const double z = pixels[i].forward_range;
        constraints.push_back({{-z, 0.0}, -cfg.gamma(h_ns)});
        bound = std::min(bound, cfg.gamma(h_ns) / z);
    }

    FilterResult result = cbf_qp(u_des, constraints);
    result.active_pixels = retained;
    result.h_ns_measured = h_ns;
    result.binding_bound = bound;
    return result;
}

FilterResult robust_controller(const std::array<double, 2>& u_des, const RobotPose& pose,
                               std::span<const UncertainPixel> pixels, const BarrierConfig& cfg) {
    if (pixels.empty()) throw EmptyPixelSetError("robust_controller: empty pixel set");

    // Worst-case barrier values over all pixels give the conservative analogue
    // of the measured minimum.
    std::vector<double> h_star(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const WorstCase wc = worst_case_disparity(pixels[i].set);
        h_star[i] = barrier(pose, wc.rho_star, cfg.c);
    }
    const double h_ns_star = min_barrier(h_star);

    const std::vector<int> retained = robust_index_set(pose, pixels, cfg);

    std::vector<HalfPlane> constraints;
    constraints.reserve(retained.size());
    double bound = std::numeric_limits<double>::infinity();
    const double cos_t = std::cos(pose.theta);
    const double sin_t = std::sin(pose.theta);
    for (int i : retained) {
        const WorstCase wc = worst_case_disparity(pixels[i].set);
        const double z_star =
            (wc.rho_star.x - pose.x) * cos_t + (wc.rho_star.y - pose.y) * sin_t;  // forward range at d*
        const double cap = cfg.gamma(h_ns_star) / z_star;
        constraints.push_back({{-1.0, 0.0}, -cap});
        bound = std::min(bound, cap);
    }

    FilterResult result = cbf_qp(u_des, constraints);
    result.active_pixels = retained;
    result.h_ns_measured = h_ns_star;
    result.binding_bound = bound;
    return result;
}

LipschitzConstants estimate_lipschitz(const LipschitzDomain& domain, const BarrierConfig& cfg, int samples,
                                      std::uint32_t seed) {
    if (samples < 2) throw std::invalid_argument("estimate_lipschitz: need at least two samples");

    std::mt19937 rng(seed);
    LipschitzConstants est{0.0, 0.0, 0.0};
    constexpr double kStep = 1e-4;

    for (int s = 0; s < samples; ++s) {
        RobotPose pose{uniform_double(rng, -domain.pose_extent, domain.pose_extent),
                       uniform_double(rng, -domain.pose_extent, domain.pose_extent), uniform_double(rng, -kPi, kPi)};

        std::vector<Point3> points(static_cast<std::size_t>(domain.set_size));
        for (auto& p : points) {
            const double range = uniform_double(rng, domain.range_min, domain.range_max);
            const double bearing = uniform_double(rng, -kPi, kPi);
            p = {pose.x + range * std::cos(bearing), pose.y + range * std::sin(bearing), uniform_double(rng, -0.5, 0.5)};
        }

        const std::size_t k = static_cast<std::size_t>(rng() % points.size());
        Point3 delta{uniform_double(rng, -1.0, 1.0), uniform_double(rng, -1.0, 1.0), uniform_double(rng, -1.0, 1.0)};
        const double len = norm(delta);
        if (len < 1e-12) continue;
        delta = {delta.x / len * kStep, delta.y / len * kStep, delta.z / len * kStep};

        std::vector<Point3> moved = points;
        moved[k] = moved[k] + delta;

        // Drift term of the velocity-input model is identically zero; its
        // quotient is evaluated anyway so the estimate stays honest if the
        // dynamics change.
        const double lf_a = 0.0, lf_b = 0.0;
        est.l_fh = std::max(est.l_fh, std::abs(lf_a - lf_b) / kStep);

        const double g_a = lgh_v(pose, points[k]);
        const double g_b = lgh_v(pose, moved[k]);
        est.l_gh = std::max(est.l_gh, std::abs(g_a - g_b) / kStep);

        const double hns_a = cfg.gamma(min_barrier(pose, points, cfg.c));
        const double hns_b = cfg.gamma(min_barrier(pose, moved, cfg.c));
        est.l_gamma_hns = std::max(est.l_gamma_hns, std::abs(hns_a - hns_b) / kStep);
    }

    est.l_fh *= 1.5;
    est.l_gh *= 1.5;
    est.l_gamma_hns *= 1.5;
    return est;
}

bool check_robust_implication(const RobotPose& pose, std::span<const Point3> true_positions,
                              std::span<const UncertainPixel> pixels, const std::array<double, 2>& u,
                              const BarrierConfig& cfg) {
    if (true_positions.size() != pixels.size())
        throw InvalidInstanceError("check_robust_implication: position/pixel count mismatch");
    if (pixels.empty()) throw EmptyPixelSetError("check_robust_implication: empty pixel set");

    for (std::size_t i = 0; i < pixels.size(); ++i) {
        bool member = false;
        for (const auto& m : pixels[i].set.members) {
            if (distance(m, true_positions[i]) <= 1e-9) {
                member = true;
                break;
            }
        }
        if (!member)
            throw InvalidInstanceError("check_robust_implication: true position not in the uncertainty set");
    }

    std::vector<double> h_true(true_positions.size());
    for (std::size_t i = 0; i < true_positions.size(); ++i) h_true[i] = barrier(pose, true_positions[i], cfg.c);
    const double h_ns_true = min_barrier(h_true);
    const double gamma_h = cfg.gamma(h_ns_true);

    const double u_norm = std::hypot(u[0], u[1]);
    const double tighten_rate = cfg.lipschitz.l_fh + cfg.lipschitz.l_gamma_hns + cfg.lipschitz.l_gh * u_norm;

    // Premise: the robust inequality holds at the measured position of every
    // pixel in the uncertainty-aware index set (exact input norm, no
    // linearization).
    const std::vector<int> lambda_hat = robust_index_set(pose, pixels, cfg);
    bool premise = true;
    for (int i : lambda_hat) {
        const double lhs = lgh_v(pose, pixels[i].measured.rho_hat) * u[0] - tighten_rate * pixels[i].epsilon;
        if (lhs < -gamma_h - 1e-12) {
            premise = false;
            break;
        }
    }
    if (!premise) return true;  // vacuous

    // Conclusion: the true-position barrier condition over the near-minimal
    // true pixels. Small slack absorbs floating-point roundoff only.
    const std::vector<int> lambda = index_set(h_true, cfg.delta, cfg.max_constraints);
    const double tol = 1e-9 * (1.0 + std::abs(gamma_h));
    for (int i : lambda) {
        const double lhs = lgh_v(pose, true_positions[i]) * u[0];
        if (lhs < -gamma_h - tol) return false;
    }
    return true;
}

}  // namespace stereosafe
