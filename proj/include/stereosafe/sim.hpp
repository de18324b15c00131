#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stereosafe/config.hpp"
#include "stereosafe/error_model.hpp"
#include "stereosafe/geometry.hpp"
#include "stereosafe/matching.hpp"
#include "stereosafe/safety_filter.hpp"
#include "stereosafe/scene.hpp"

namespace stereosafe {

enum class SimMode { Naive, RobustPretrained, RobustOnline };

const char* mode_name(SimMode mode);
SimMode parse_mode(const std::string& name);  // throws std::invalid_argument

struct SimConfig {
    double dt_dynamics{0.005};
    double control_rate_hz{10.0};
    double duration_s{60.0};
    double v_des{0.2};
    double omega_des{0.0};
    double start_distance{1.3};
    SimMode mode{SimMode::Naive};
    double eta{0.001};
    std::uint32_t seed{1};
    bool oracle_uncertainty{false};  // derive quantiles from true depth instead of the model
    int constraint_stride{2};        // pixel subsampling for constraint building
    BarrierConfig barrier;
    CameraRig rig{CameraRig::centered(120.0, 0.1, 160, 120, 48)};
    MatchConfig matcher;
    Scene scene;
    std::optional<CorruptionSpec> corruption;
    std::string model_path;

    void validate(const std::string& label) const;  // throws ConfigError
};

/// Reads a run configuration. Obstacles come from `obstacle.N.*` key groups;
/// when none are present a default textured sphere is placed straight ahead
/// at start_distance.
SimConfig load_sim_config(const std::string& path);
SimConfig sim_config_from_map(const ConfigMap& cfg);

struct TrajectoryRecord {
    double t{0.0};
    RobotPose pose;
    std::array<double, 2> u_des{0.0, 0.0};
    std::array<double, 2> u{0.0, 0.0};
    double h_ns_true{0.0};
    double h_ns_meas{0.0};
    double eps_min{0.0}, eps_mean{0.0}, eps_max{0.0};
    std::optional<double> loss;
    int n_active{0};
};

struct TrajectoryLog {
    std::vector<TrajectoryRecord> records;
};

struct ExperimentReport {
    double min_h_ns_true{0.0};
    double final_standoff{0.0};
    bool safety_violated{false};
    double steady_state_velocity{0.0};
};

struct ExperimentResult {
    TrajectoryLog log;
    ExperimentReport report;
    ErrorModelParams final_model;  // adapted parameters in the online mode
};

/// Unicycle integration: classical RK4 with the input held constant over dt.
RobotPose step_unicycle(const RobotPose& pose, const std::array<double, 2>& u, double dt);

/// Closed-loop run: render, match, (optionally corrupt and adapt), build
/// constraints, filter, hold the input over the dynamics substeps.
/// Deterministic for identical configurations.
ExperimentResult run_experiment(const SimConfig& cfg);

struct PretrainResult {
    ErrorModelParams params;
    double final_loss{0.0};
    int epochs_run{0};
};

/// Runs the adaptation loop over a directory of recorded PGM frame triples
/// (frame_NNNNN_1/2/3.pgm) for up to `epochs` passes, stopping early once the
/// mean epoch loss plateaus (change below 1e-4). With epochs = 0 the zero
/// model is returned and its uniform loss reported.
PretrainResult pretrain(const std::string& frames_dir, double eta, int epochs, const MatchConfig& matcher,
                        int class_count = kDefaultClassCount);

enum class FrameFamily { Noise, Checker, Mixed };

/// Writes `count` randomized frame triples (PGM) into out_dir for use as a
/// pretraining corpus. Scenes draw textures from the requested family.
void generate_frames(const std::string& out_dir, int count, std::uint32_t seed, FrameFamily family,
                     const CameraRig& rig);

/// Writes trajectory_<mode>.csv, report_<mode>.txt and velocity_<mode>.ppm
/// into out_dir, then refreshes velocity_overlay.ppm across any mode CSVs
/// already present.
void emit_outputs(const TrajectoryLog& log, const ExperimentReport& report, const std::string& out_dir,
                  SimMode mode);

}  // namespace stereosafe
