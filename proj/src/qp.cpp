#include "stereosafe/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace stereosafe {

namespace {

constexpr double kDegenerate = 1e-14;
constexpr double kFeasTol = 1e-11;

struct LineSolve {
    std::array<double, 2> u;
    int bound_index = -1;  // constraint that clamped the 1-D solution, if any
    bool feasible = true;
};

/// Minimizes ||u - u_des|| on the boundary line of constraint `i`, subject to
/// the constraints with indices order[0..upto). The line is parameterized as
/// p + t * dir with p the unconstrained foot point, so the objective is
/// minimized at t = 0 and each other constraint clips an interval of t.
LineSolve solve_on_line(const std::array<double, 2>& u_des, std::span<const HalfPlane> cons,
                        const std::vector<int>& order, std::size_t upto, int i) {
    const auto& ci = cons[i];
    const double nn = ci.a[0] * ci.a[0] + ci.a[1] * ci.a[1];
    LineSolve out;
    if (nn < kDegenerate) {  // null normal: constraint is vacuous or absurd
        out.feasible = ci.b <= kFeasTol;
        out.u = u_des;
        return out;
    }
    const double shift = (ci.b - (ci.a[0] * u_des[0] + ci.a[1] * u_des[1])) / nn;
    const std::array<double, 2> p = {u_des[0] + ci.a[0] * shift, u_des[1] + ci.a[1] * shift};
    const double inv_len = 1.0 / std::sqrt(nn);
    const std::array<double, 2> dir = {-ci.a[1] * inv_len, ci.a[0] * inv_len};

    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    int lo_idx = -1, hi_idx = -1;

    for (std::size_t k = 0; k < upto; ++k) {
        const int j = order[k];
        const auto& cj = cons[j];
        const double along = cj.a[0] * dir[0] + cj.a[1] * dir[1];
        const double at_p = cj.b - (cj.a[0] * p[0] + cj.a[1] * p[1]);
        if (std::abs(along) < kDegenerate) {
            if (at_p > kFeasTol) {  // line i never enters half-plane j
                out.feasible = false;
                return out;
            }
            continue;
        }
        const double t = at_p / along;
        if (along > 0.0) {
            if (t > lo) { lo = t; lo_idx = j; }
        } else {
            if (t < hi) { hi = t; hi_idx = j; }
        }
    }

    if (lo > hi + kFeasTol) {
        out.feasible = false;
        return out;
    }

    double t = 0.0;
    if (t < lo) { t = lo; out.bound_index = lo_idx; }
    if (t > hi) { t = hi; out.bound_index = hi_idx; }
    out.u = {p[0] + t * dir[0], p[1] + t * dir[1]};
    return out;
}

std::vector<double> active_multipliers(const std::array<double, 2>& u_des, std::span<const HalfPlane> cons,
                                       const std::array<double, 2>& u, std::vector<int>& active) {
    const std::array<double, 2> g = {u[0] - u_des[0], u[1] - u_des[1]};
    if (active.empty()) return {};
    if (active.size() == 1) {
        const auto& a = cons[active[0]].a;
        const double nn = a[0] * a[0] + a[1] * a[1];
        if (nn < kDegenerate) {
            active.clear();
            return {};
        }
        return {(a[0] * g[0] + a[1] * g[1]) / nn};
    }
    // Two active constraints: stationarity g = l0*a0 + l1*a1 is a 2x2 system.
    const auto& a0 = cons[active[0]].a;
    const auto& a1 = cons[active[1]].a;
    const double det = a0[0] * a1[1] - a0[1] * a1[0];
    if (std::abs(det) < kDegenerate) {
        active.resize(1);
        return active_multipliers(u_des, cons, u, active);
    }
    const double l0 = (g[0] * a1[1] - g[1] * a1[0]) / det;
    const double l1 = (a0[0] * g[1] - a0[1] * g[0]) / det;
    return {l0, l1};
}

}  // namespace

double kkt_residual(const std::array<double, 2>& u_des, std::span<const HalfPlane> constraints,
                    const QpSolution& sol) {
    double res = 0.0;

    std::array<double, 2> stationarity = {sol.u[0] - u_des[0], sol.u[1] - u_des[1]};
    for (std::size_t k = 0; k < sol.active.size(); ++k) {
        const auto& a = constraints[sol.active[k]].a;
        stationarity[0] -= sol.multipliers[k] * a[0];
        stationarity[1] -= sol.multipliers[k] * a[1];
    }
    res = std::max(res, std::hypot(stationarity[0], stationarity[1]));

    for (const auto& c : constraints) res = std::max(res, -std::min(0.0, c.slack(sol.u)));
    for (std::size_t k = 0; k < sol.active.size(); ++k) {
        res = std::max(res, -std::min(0.0, sol.multipliers[k]));
        res = std::max(res, std::abs(sol.multipliers[k] * constraints[sol.active[k]].slack(sol.u)));
    }
    return res;
}

QpSolution solve_projection_qp(const std::array<double, 2>& u_des, std::span<const HalfPlane> constraints) {
    QpSolution sol;
    sol.u = u_des;

    const int m = static_cast<int>(constraints.size());
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    // Fixed-seed shuffle keeps the expected work linear on adversarial
    // orderings while staying bit-deterministic for identical inputs.
    std::mt19937 rng(0x5A17u);
    std::shuffle(order.begin(), order.end(), rng);

    int active_line = -1;
    int active_bound = -1;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const int i = order[k];
        if (constraints[i].slack(sol.u) >= -kFeasTol) continue;
        const LineSolve line = solve_on_line(u_des, constraints, order, k, i);
        if (!line.feasible) {
            sol.feasible = false;
            sol.active.clear();
            sol.multipliers.clear();
            sol.kkt_residual = std::numeric_limits<double>::infinity();
            return sol;
        }
        sol.u = line.u;
        active_line = i;
        active_bound = line.bound_index;
    }

    if (active_line >= 0) {
        sol.active.push_back(active_line);
        if (active_bound >= 0) sol.active.push_back(active_bound);
    }
    sol.multipliers = active_multipliers(u_des, constraints, sol.u, sol.active);
    sol.kkt_residual = kkt_residual(u_des, constraints, sol);
    return sol;
}

}  // namespace stereosafe
