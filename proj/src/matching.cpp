#include "stereosafe/matching.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "stereosafe/errors.hpp"

namespace stereosafe {

namespace {

void require_same_size(int wa, int ha, int wb, int hb, const char* who) {
    if (wa != wb || ha != hb) {
        throw DimensionMismatchError(std::string(who) + ": " + std::to_string(wa) + "x" + std::to_string(ha) +
                                     " vs " + std::to_string(wb) + "x" + std::to_string(hb));
    }
}

}  // namespace

DisparityMap match(const Image& left, const Image& right, const MatchConfig& cfg) {
    require_same_size(left.width, left.height, right.width, right.height, "match");
    if (cfg.window_radius < 1) throw std::invalid_argument("match: window_radius must be >= 1");
    if (cfg.d_max < 1 || cfg.d_max >= left.width) throw std::invalid_argument("match: d_max must be in [1, width)");
    if (!(cfg.uniqueness_ratio >= 1.0)) throw std::invalid_argument("match: uniqueness_ratio must be >= 1");

    const int w = left.width;
    const int h = left.height;
    const int r = cfg.window_radius;
    const int nd = cfg.d_max + 1;
    constexpr int kNoCost = std::numeric_limits<int>::max();

    DisparityMap out(w, h, cfg.d_max);
    if (w < 2 * r + 1 || h < 2 * r + 1) return out;  // no window fits anywhere

    // Window SAD per candidate shift via two box-filter passes over the
    // absolute-difference image; per pixel the full cost profile over d is
    // then available for the winner-take-all scan and the uniqueness gate.
    std::vector<int> cost(static_cast<std::size_t>(nd) * w * h, kNoCost);
    std::vector<int> row_sum(static_cast<std::size_t>(w) * h, 0);
    std::vector<int> diff(static_cast<std::size_t>(w) * h, 0);

    for (int d = 0; d < nd; ++d) {
        for (int v = 0; v < h; ++v) {
            const std::size_t base = static_cast<std::size_t>(v) * w;
            for (int u = d; u < w; ++u)
                diff[base + u] = std::abs(static_cast<int>(left.pixels[base + u]) -
                                          static_cast<int>(right.pixels[base + u - d]));
        }
        // Horizontal window sums, defined where the right window stays inside
        // the image: u in [d + r, w - r).
        for (int v = 0; v < h; ++v) {
            const std::size_t base = static_cast<std::size_t>(v) * w;
            int acc = 0;
            const int first = d + r;
            if (first >= w - r) continue;
            for (int u = first - r; u <= first + r; ++u) acc += diff[base + u];
            row_sum[base + first] = acc;
            for (int u = first + 1; u < w - r; ++u) {
                acc += diff[base + u + r] - diff[base + u - r - 1];
                row_sum[base + u] = acc;
            }
        }
        // Vertical accumulation over rows [v - r, v + r].
        for (int u = d + r; u < w - r; ++u) {
            int acc = 0;
            for (int v = 0; v <= 2 * r; ++v) acc += row_sum[static_cast<std::size_t>(v) * w + u];
            cost[(static_cast<std::size_t>(d) * h + r) * w + u] = acc;
            for (int v = r + 1; v < h - r; ++v) {
                acc += row_sum[static_cast<std::size_t>(v + r) * w + u] -
                       row_sum[static_cast<std::size_t>(v - r - 1) * w + u];
                cost[(static_cast<std::size_t>(d) * h + v) * w + u] = acc;
            }
        }
    }

    for (int v = r; v < h - r; ++v) {
        for (int u = r; u < w - r; ++u) {
            int best_cost = kNoCost;
            int best_d = -1;
            const int d_limit = std::min(cfg.d_max, u - r);
            for (int d = 0; d <= d_limit; ++d) {
                const int c = cost[(static_cast<std::size_t>(d) * h + v) * w + u];
                if (c < best_cost) {
                    best_cost = c;
                    best_d = d;
                }
            }
            if (best_d < 0) continue;

            int second = kNoCost;
            for (int d = 0; d <= d_limit; ++d) {
                if (std::abs(d - best_d) <= 1) continue;
                second = std::min(second, cost[(static_cast<std::size_t>(d) * h + v) * w + u]);
            }
            if (second != kNoCost &&
                static_cast<double>(second) < cfg.uniqueness_ratio * static_cast<double>(best_cost))
                continue;  // ambiguous match

            out.at(u, v) = static_cast<std::int16_t>(best_d);
        }
    }
    return out;
}

DisparityMap reconstruct(const DisparityMap& d12, const DisparityMap& d23) {
    require_same_size(d12.width, d12.height, d23.width, d23.height, "reconstruct");
    if (d12.d_max != d23.d_max)
        throw DimensionMismatchError("reconstruct: disparity ranges differ (" + std::to_string(d12.d_max) + " vs " +
                                     std::to_string(d23.d_max) + ")");

    DisparityMap out(d12.width, d12.height, d12.d_max);
    for (int v = 0; v < d12.height; ++v) {
        for (int u = 0; u < d12.width; ++u) {
            const auto a = d12.at(u, v);
            if (a == DisparityMap::kInvalid) continue;
            const int u_mid = u - a;
            if (u_mid < 0) continue;
            const auto b = d23.at(u_mid, v);
            if (b == DisparityMap::kInvalid) continue;
            out.at(u, v) = static_cast<std::int16_t>(std::min(static_cast<int>(a) + b, d12.d_max));
        }
    }
    return out;
}

DisparityMap reconstruction_error(const DisparityMap& d13_hat, const DisparityMap& d13_bar) {
    require_same_size(d13_hat.width, d13_hat.height, d13_bar.width, d13_bar.height, "reconstruction_error");

    DisparityMap out(d13_hat.width, d13_hat.height, d13_hat.d_max);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const auto a = d13_hat.values[i];
        const auto b = d13_bar.values[i];
        if (a == DisparityMap::kInvalid || b == DisparityMap::kInvalid) continue;
        out.values[i] = static_cast<std::int16_t>(std::abs(a - b));
    }
    return out;
}

}  // namespace stereosafe
