#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stereosafe/disparity.hpp"
#include "stereosafe/geometry.hpp"
#include "stereosafe/image.hpp"
#include "stereosafe/matching.hpp"

namespace stereosafe {

inline constexpr int kFeatureCount = 6;
inline constexpr int kDefaultClassCount = 5;  // |error| in {0, 1, 2, 3, >=4}

/// Per-pixel appearance features, in order:
///   0 horizontal gradient magnitude of the left image
///   1 local intensity spread (sqrt of the 5x5 window variance)
///   2 census bit density (fraction of 5x5 neighbours brighter than center)
///   3 left-right intensity discrepancy at the matched shift
///   4 distance to the nearest image border
///   5 constant bias (always 1)
/// Raw values are divided by the fixed scales below; no running statistics
/// are kept, so online updates see a stationary featurization.
using FeatureVector = std::array<double, kFeatureCount>;

inline constexpr FeatureVector kFeatureScales = {4.0, 4.0, 0.25, 4.0, 0.5, 1.0};

FeatureVector extract_features(const Image& i1, const Image& i3, const DisparityMap& d13_hat, PixelCoord p);

/// Linear softmax head over the appearance features: weights is a
/// feature-major (F x C) matrix of logit coefficients.
struct ErrorModelParams {
    int feature_count{kFeatureCount};
    int class_count{kDefaultClassCount};
    std::vector<double> weights;

    ErrorModelParams() : weights(static_cast<std::size_t>(kFeatureCount) * kDefaultClassCount, 0.0) {}
    ErrorModelParams(int features, int classes)
        : feature_count(features), class_count(classes),
          weights(static_cast<std::size_t>(features) * classes, 0.0) {}

    double weight(int f, int c) const { return weights[static_cast<std::size_t>(f) * class_count + c]; }
    double& weight(int f, int c) { return weights[static_cast<std::size_t>(f) * class_count + c]; }
};

/// Categorical distribution over error-magnitude classes for one pixel.
/// Softmax of the logits, stabilized by max-logit subtraction.
std::vector<double> predict(const ErrorModelParams& params, const FeatureVector& features);

/// Feature/label pairs harvested from one frame; the training unit shared by
/// the online step and the pretraining epochs.
struct LabeledPixels {
    std::vector<FeatureVector> features;
    std::vector<int> labels;  // class index, already clamped into [0, C-1]

    bool empty() const { return labels.empty(); }
};

/// Collects every pixel with a valid reconstruction error. Labels are
/// |measured - composed| clamped into the top class.
LabeledPixels harvest_labeled_pixels(const Image& i1, const Image& i3, const DisparityMap& d13_hat,
                                     const DisparityMap& d13_bar, int class_count);

/// Mean cross entropy over the labelled pixels. Throws NoValidPixelsError on
/// an empty harvest.
double loss(const ErrorModelParams& params, const LabeledPixels& pixels);
double loss(const ErrorModelParams& params, const Image& i1, const Image& i3, const DisparityMap& d13_hat,
            const DisparityMap& d13_bar);

/// One gradient step on the cross entropy (analytic softmax-minus-onehot
/// gradient, averaged over labelled pixels).
ErrorModelParams sgd_step(const ErrorModelParams& params, const LabeledPixels& pixels, double eta);
ErrorModelParams sgd_step(const ErrorModelParams& params, const Image& i1, const Image& i3,
                          const DisparityMap& d13_hat, const DisparityMap& d13_bar, double eta);

struct AdaptResult {
    ErrorModelParams params;
    std::optional<double> loss;  // pre-step loss; absent when no pixel carried a label
    DisparityMap d13_hat;        // measured wide-baseline map, reused by the caller
};

/// One pass of the self-supervised adaptation loop: match the three pairs,
/// compose the half-baseline maps, grade the wide map against the
/// composition, and take one step on the resulting labels. Ground truth is
/// never consulted. Frames without a single labelled pixel leave the
/// parameters untouched.
AdaptResult adapt_online(const ErrorModelParams& params, const ImageTriple& triple, const MatchConfig& matcher,
                         double eta);

/// Smallest k with P(|error| <= k) >= sigma. Needing the open-ended top
/// class saturates conservatively to d_max.
int quantile(const std::vector<double>& distribution, double sigma, int d_max);

/// Disparity interval [d_hat - q, d_hat + q], clamped into [1, d_max], with
/// the world-frame position of every member.
struct UncertaintySet {
    PixelCoord pixel;
    int d_hat{0};
    int lo{0};
    int hi{0};
    Point3 rho_hat;
    std::vector<Point3> members;  // indexed lo..hi

    int size() const { return hi - lo + 1; }
};

UncertaintySet uncertainty_set(const CameraRig& rig, const RobotPose& pose, PixelCoord p, int d_hat, int q);

/// Radius bound: exact maximum member distance from the measured position.
double epsilon_bound(const UncertaintySet& set);

struct WorstCase {
    int d_star{0};
    Point3 rho_star;
};

/// Largest member disparity (the closest consistent position).
WorstCase worst_case_disparity(const UncertaintySet& set);

// Versioned binary model file: magic "SSEM", u32 version, u32 F, u32 C,
// then F*C little-endian doubles in feature-major order.
void save_model(const ErrorModelParams& params, const std::string& path);
ErrorModelParams load_model(const std::string& path);

}  // namespace stereosafe
