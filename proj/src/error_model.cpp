#include "stereosafe/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "stereosafe/errors.hpp"

namespace stereosafe {

namespace {

constexpr int kWindowRadius = 2;  // 5x5 neighbourhood for variance and census
constexpr double kProbFloor = 1e-300;

void check_dimensions(const ErrorModelParams& params) {
    if (params.feature_count != kFeatureCount)
        throw std::invalid_argument("ErrorModelParams: unexpected feature count");
    if (params.class_count < 2) throw std::invalid_argument("ErrorModelParams: need at least two classes");
    if (params.weights.size() != static_cast<std::size_t>(params.feature_count) * params.class_count)
        throw std::invalid_argument("ErrorModelParams: weight matrix size mismatch");
}

struct LossGrad {
    double loss{0.0};
    std::vector<double> grad;  // F x C, feature-major
};

LossGrad loss_and_gradient(const ErrorModelParams& params, const LabeledPixels& pixels, bool want_grad) {
    check_dimensions(params);
    if (pixels.empty()) throw NoValidPixelsError("loss: no pixel carries a valid reconstruction error");

    const int C = params.class_count;
    LossGrad out;
    if (want_grad) out.grad.assign(params.weights.size(), 0.0);

    for (std::size_t i = 0; i < pixels.labels.size(); ++i) {
        const FeatureVector& x = pixels.features[i];
        const int label = pixels.labels[i];
        const std::vector<double> p = predict(params, x);
        out.loss -= std::log(std::max(p[label], kProbFloor));
        if (want_grad) {
            for (int f = 0; f < kFeatureCount; ++f) {
                const double xf = x[f];
                double* row = out.grad.data() + static_cast<std::size_t>(f) * C;
                for (int c = 0; c < C; ++c) row[c] += xf * (p[c] - (c == label ? 1.0 : 0.0));
            }
        }
    }

    const double inv_n = 1.0 / static_cast<double>(pixels.labels.size());
    out.loss *= inv_n;
    if (want_grad)
        for (auto& g : out.grad) g *= inv_n;
    return out;
}

}  // namespace

FeatureVector extract_features(const Image& i1, const Image& i3, const DisparityMap& d13_hat, PixelCoord p) {
    const int u = p.u;
    const int v = p.v;

    const double grad =
        0.5 * std::abs(static_cast<int>(i1.at_clamped(u + 1, v)) - static_cast<int>(i1.at_clamped(u - 1, v)));

    double sum = 0.0, sum_sq = 0.0;
    int brighter = 0;
    const int center = i1.at(u, v);
    for (int dv = -kWindowRadius; dv <= kWindowRadius; ++dv) {
        for (int du = -kWindowRadius; du <= kWindowRadius; ++du) {
            const double value = i1.at_clamped(u + du, v + dv);
            sum += value;
            sum_sq += value * value;
            if ((du != 0 || dv != 0) && value > center) ++brighter;
        }
    }
    constexpr double n = (2 * kWindowRadius + 1) * (2 * kWindowRadius + 1);
    const double mean = sum / n;
    const double variance = std::max(0.0, sum_sq / n - mean * mean);
    const double census = static_cast<double>(brighter) / (n - 1.0);

    double discrepancy = 0.0;
    const auto d = d13_hat.at(u, v);
    if (d != DisparityMap::kInvalid && u - d >= 0)
        discrepancy = std::abs(static_cast<int>(i1.at(u, v)) - static_cast<int>(i3.at(u - d, v)));

    const double border = static_cast<double>(std::min({u, v, i1.width - 1 - u, i1.height - 1 - v})) /
                          (0.5 * std::min(i1.width, i1.height));

    return {grad / kFeatureScales[0],       std::sqrt(variance) / kFeatureScales[1],
            census / kFeatureScales[2],     discrepancy / kFeatureScales[3],
            border / kFeatureScales[4],     1.0};
}

std::vector<double> predict(const ErrorModelParams& params, const FeatureVector& features) {
    check_dimensions(params);
    const int C = params.class_count;

    std::vector<double> logits(C, 0.0);
    for (int f = 0; f < kFeatureCount; ++f) {
        const double xf = features[f];
        const double* row = params.weights.data() + static_cast<std::size_t>(f) * C;
        for (int c = 0; c < C; ++c) logits[c] += xf * row[c];
    }

    const double top = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (auto& z : logits) {
        z = std::exp(z - top);
        denom += z;
    }
    for (auto& z : logits) z /= denom;
    return logits;
}

LabeledPixels harvest_labeled_pixels(const Image& i1, const Image& i3, const DisparityMap& d13_hat,
                                     const DisparityMap& d13_bar, int class_count) {
    const DisparityMap re = reconstruction_error(d13_hat, d13_bar);
    LabeledPixels out;
    for (int v = 0; v < re.height; ++v) {
        for (int u = 0; u < re.width; ++u) {
            const auto e = re.at(u, v);
            if (e == DisparityMap::kInvalid) continue;
            out.features.push_back(extract_features(i1, i3, d13_hat, {u, v}));
            out.labels.push_back(std::min(static_cast<int>(e), class_count - 1));
        }
    }
    return out;
}

double loss(const ErrorModelParams& params, const LabeledPixels& pixels) {
    return loss_and_gradient(params, pixels, false).loss;
}

double loss(const ErrorModelParams& params, const Image& i1, const Image& i3, const DisparityMap& d13_hat,
            const DisparityMap& d13_bar) {
    return loss(params, harvest_labeled_pixels(i1, i3, d13_hat, d13_bar, params.class_count));
}

ErrorModelParams sgd_step(const ErrorModelParams& params, const LabeledPixels& pixels, double eta) {
    if (!(eta >= 0.0)) throw std::invalid_argument("sgd_step: learning rate must be nonnegative");
    const LossGrad lg = loss_and_gradient(params, pixels, true);
    ErrorModelParams next = params;
    for (std::size_t i = 0; i < next.weights.size(); ++i) next.weights[i] -= eta * lg.grad[i];
    return next;
}

ErrorModelParams sgd_step(const ErrorModelParams& params, const Image& i1, const Image& i3,
                          const DisparityMap& d13_hat, const DisparityMap& d13_bar, double eta) {
    return sgd_step(params, harvest_labeled_pixels(i1, i3, d13_hat, d13_bar, params.class_count), eta);
}

AdaptResult adapt_online(const ErrorModelParams& params, const ImageTriple& triple, const MatchConfig& matcher,
                         double eta) {
    const DisparityMap d12 = match(triple.i1, triple.i2, matcher);
    const DisparityMap d23 = match(triple.i2, triple.i3, matcher);
    DisparityMap d13 = match(triple.i1, triple.i3, matcher);
    const DisparityMap d13_bar = reconstruct(d12, d23);

    const LabeledPixels pixels = harvest_labeled_pixels(triple.i1, triple.i3, d13, d13_bar, params.class_count);
    if (pixels.empty()) return {params, std::nullopt, std::move(d13)};

    const LossGrad lg = loss_and_gradient(params, pixels, true);
    ErrorModelParams next = params;
    for (std::size_t i = 0; i < next.weights.size(); ++i) next.weights[i] -= eta * lg.grad[i];
    return {std::move(next), lg.loss, std::move(d13)};
}

int quantile(const std::vector<double>& distribution, double sigma, int d_max) {
    if (distribution.empty()) throw std::invalid_argument("quantile: empty distribution");
    if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("quantile: sigma must be in (0, 1]");

    const int C = static_cast<int>(distribution.size());
    double cumulative = 0.0;
    for (int k = 0; k < C; ++k) {
        cumulative += distribution[k];
        if (cumulative >= sigma - 1e-12) return k == C - 1 ? d_max : k;
    }
    return d_max;  // mass never reached sigma: saturate
}

UncertaintySet uncertainty_set(const CameraRig& rig, const RobotPose& pose, PixelCoord p, int d_hat, int q) {
    if (q < 0) throw std::invalid_argument("uncertainty_set: negative quantile");
    if (d_hat < 1 || d_hat > rig.d_max)
        throw EmptyUncertaintySetError("uncertainty_set: pixel unusable, measured disparity " +
                                       std::to_string(d_hat) + " outside [1, d_max]");

    UncertaintySet set;
    set.pixel = p;
    set.d_hat = d_hat;
    set.lo = std::max(1, d_hat - q);
    set.hi = std::min(rig.d_max, d_hat + q);
    set.rho_hat = pixel_position(pose, rig, p, d_hat);
    set.members.reserve(static_cast<std::size_t>(set.hi - set.lo + 1));
    for (int xi = set.lo; xi <= set.hi; ++xi) set.members.push_back(pixel_position(pose, rig, p, xi));
    return set;
}

double epsilon_bound(const UncertaintySet& set) {
    if (set.members.empty()) throw EmptyUncertaintySetError("epsilon_bound: empty uncertainty set");
    double eps = 0.0;
    for (const auto& member : set.members) eps = std::max(eps, distance(member, set.rho_hat));
    return eps;
}

WorstCase worst_case_disparity(const UncertaintySet& set) {
    if (set.members.empty()) throw EmptyUncertaintySetError("worst_case_disparity: empty uncertainty set");
    return {set.hi, set.members.back()};
}

namespace {
constexpr char kModelMagic[4] = {'S', 'S', 'E', 'M'};
constexpr std::uint32_t kModelVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF), static_cast<unsigned char>((v >> 8) & 0xFF),
                                static_cast<unsigned char>((v >> 16) & 0xFF),
                                static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
    unsigned char b[4] = {0, 0, 0, 0};
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
}  // namespace

void save_model(const ErrorModelParams& params, const std::string& path) {
    check_dimensions(params);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_model: cannot open " + path);
    out.write(kModelMagic, 4);
    put_u32(out, kModelVersion);
    put_u32(out, static_cast<std::uint32_t>(params.feature_count));
    put_u32(out, static_cast<std::uint32_t>(params.class_count));
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(params.weights.data()),
              static_cast<std::streamsize>(params.weights.size() * sizeof(double)));
    if (!out) throw IoError("save_model: write failed: " + path);
}

ErrorModelParams load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_model: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kModelMagic, 4) != 0) throw IoError("load_model: bad magic in " + path);
    const auto version = get_u32(in);
    if (version != kModelVersion) throw IoError("load_model: unsupported version in " + path);
    const auto features = get_u32(in);
    const auto classes = get_u32(in);
    if (features != kFeatureCount || classes < 2) throw IoError("load_model: bad dimensions in " + path);

    ErrorModelParams params(static_cast<int>(features), static_cast<int>(classes));
    in.read(reinterpret_cast<char*>(params.weights.data()),
            static_cast<std::streamsize>(params.weights.size() * sizeof(double)));
    if (!in) throw IoError("load_model: truncated weights in " + path);
    return params;
}

}  // namespace stereosafe
