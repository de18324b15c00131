#pragma once

#include "stereosafe/disparity.hpp"
#include "stereosafe/image.hpp"

namespace stereosafe {

/// Parameters of the SAD winner-take-all block matcher.
///
/// uniqueness_ratio gates ambiguous pixels: a disparity is kept only when the
/// best window cost times the ratio does not exceed the runner-up cost
/// (candidates adjacent to the winner are not counted as runners-up). A ratio
/// of exactly 1.0 disables the gate.
struct MatchConfig {
    int window_radius{2};
    int d_max{48};
    double uniqueness_ratio{1.1};
};

/// Integer disparity of the pair (left image, right image) by exhaustive SAD
/// over shifts 0..d_max. Output is indexed by left-image coordinates; border
/// pixels, pixels whose every candidate window leaves the image, and pixels
/// failing the uniqueness gate are invalid.
DisparityMap match(const Image& left, const Image& right, const MatchConfig& cfg);

/// Composes the two half-baseline maps into the wide-baseline map: the match
/// for left-image pixel (u, v) sits at column u - d12(u, v) of the center
/// image, and disparities add along the chain (sum clamped to d_max).
/// Invalid inputs and chains leaving the image produce invalid output.
DisparityMap reconstruct(const DisparityMap& d12, const DisparityMap& d23);

/// Per-pixel |measured - composed| magnitude; invalid wherever either input
/// is invalid (those pixels carry no supervision signal).
DisparityMap reconstruction_error(const DisparityMap& d13_hat, const DisparityMap& d13_bar);

}  // namespace stereosafe
