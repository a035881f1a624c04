/*
 Copyright 2026 The pchdkit authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef PCHD_EVAL_HPP
#define PCHD_EVAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pchd/dynamics.hpp"
#include "pchd/simulate.hpp"
#include "pchd/trajectory.hpp"

namespace pchd {

struct PredictionConfig {
    /// Integration substep; 0 means one RK4 step per reference interval.
    double dt = 0.0;
    /// State components entering the error metrics (0-based). The default
    /// tracks the first component only, the directly measured output of the
    /// golf experiment.
    std::vector<int> components = {0};
};

/// Open-loop comparison of a model against a recorded reference: the model
/// is simulated from the reference initial state, driven by the recorded
/// inputs (zero-order hold), and scored with the running sum of squared
/// output deviations e(t_k) plus an RMS error.
struct PredictionReport {
    Eigen::VectorXd t;
    Eigen::MatrixXd measured;         ///< reference states, n x M
    Eigen::MatrixXd predicted;        ///< simulated states, n x M
    Eigen::VectorXd cumulative_error; ///< e(t_k), non-decreasing
    double final_cumulative_error = 0.0;
    double rms_error = 0.0;
    std::vector<int> components;
    bool diverged = false;            ///< partial results past valid_samples
    Eigen::Index valid_samples = 0;
};

PredictionReport predict_open_loop(const OdeSystem& model, const Trajectory& reference,
                                   const PredictionConfig& config = {});
PredictionReport predict_open_loop(const PchdModel& model, const Trajectory& reference,
                                   const PredictionConfig& config = {});

struct PassivityTolerance {
    double absolute = 1e-6;
    double relative = 1e-6; ///< scales with |integral of u^T y|
};

/// Check of the integral passivity inequality
///   V(x(t_k)) - V(x(t_0)) <= integral of u^T y
/// along a trajectory of the model, with trapezoidal quadrature for the
/// supplied energy. Also reports the worst finite-difference residual of the
/// dissipation identity dV/dt = u^T y - grad^T D grad.
struct PassivityReport {
    double max_violation = 0.0;     ///< max_k [V_k - V_0 - supplied_k]
    double supplied_energy = 0.0;   ///< integral of u^T y over the trajectory
    double dissipation_identity_residual = 0.0;
    double tolerance = 0.0;         ///< absolute + relative * |supplied|
    bool passive = false;           ///< max_violation <= tolerance
};

PassivityReport verify_passivity(const PchdModel& model, const Trajectory& trajectory,
                                 const PassivityTolerance& tol = {});

/// One energy-prior perturbation: shift a named pendulum parameter
/// (m, l, g or d) by the given relative amount before building the energy
/// model used in identification.
struct ShiftSpec {
    std::string parameter;
    double relative_shift = 0.0;
};

PendulumParams apply_shift(PendulumParams params, const ShiftSpec& shift);

/// +/-10 % sweep over all four pendulum parameters.
std::vector<ShiftSpec> default_shift_sweep(double magnitude = 0.1);

/// Sensitivity experiment: training data is generated once from the nominal
/// system; for every shift the energy prior is rebuilt with the shifted
/// parameter, the model is re-learned on the same data, and its autonomous
/// free swing from a fixed initial state is compared to the true system.
struct SensitivityProtocol {
    PendulumParams nominal;
    std::uint64_t seed = 1;
    Eigen::Vector2d free_swing_ic{0.0, 0.0}; ///< set by make_default
    double free_swing_duration = 5.0;
    double free_swing_dt = 0.01;
    std::vector<int> components = {0};

    static SensitivityProtocol make_default(std::uint64_t seed);
};

struct ShiftReport {
    ShiftSpec shift;
    double rms = 0.0; ///< free-swing RMS versus the true system
    double min_unprojected_eigenvalue = 0.0;
    bool projection_changed_dissipation = false;
    Trajectory true_swing;
    Trajectory model_swing;
};

std::vector<ShiftReport> sensitivity_study(const SensitivityProtocol& protocol,
                                           const std::vector<ShiftSpec>& shifts);

} // namespace pchd

#endif // PCHD_EVAL_HPP
