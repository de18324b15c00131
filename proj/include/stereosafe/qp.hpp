#pragma once

#include <array>
#include <span>
#include <vector>

namespace stereosafe {

/// Half-plane constraint a . u >= b on the two-dimensional input u = (v, w).
struct HalfPlane {
    std::array<double, 2> a{0.0, 0.0};
    double b{0.0};

    double slack(const std::array<double, 2>& u) const { return a[0] * u[0] + a[1] * u[1] - b; }
};

struct QpSolution {
    std::array<double, 2> u{0.0, 0.0};
    bool feasible{true};
    std::vector<int> active;            // constraint indices active at the optimum
    std::vector<double> multipliers;    // one per active entry
    double kkt_residual{0.0};           // max of stationarity / feasibility / slackness residuals
};

/// Exact minimizer of 1/2 ||u - u_des||^2 over the intersection of the half
/// planes. Incremental over constraints: violating a constraint pins the
/// optimum to its boundary line, where the restricted problem is a clamped
/// one-dimensional projection against the constraints already processed. An
/// empty boundary interval certifies infeasibility. When feasible, the
/// solution is returned with multipliers and its KKT residual.
QpSolution solve_projection_qp(const std::array<double, 2>& u_des, std::span<const HalfPlane> constraints);

/// Worst KKT residual of a candidate solution: stationarity against the given
/// active multipliers, primal feasibility over all constraints, dual
/// feasibility, and complementary slackness.
double kkt_residual(const std::array<double, 2>& u_des, std::span<const HalfPlane> constraints,
                    const QpSolution& sol);

}  // namespace stereosafe
