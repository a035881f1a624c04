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

#ifndef PCHD_SIMULATE_HPP
#define PCHD_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "pchd/dynamics.hpp"
#include "pchd/signals.hpp"
#include "pchd/trajectory.hpp"

namespace pchd {

/// Classic fixed-step 4th-order Runge-Kutta. The input is sampled at the
/// start of each step and held constant across the internal stages
/// (zero-order hold). Samples are taken at t_k = k*dt for k = 0..M with
/// M = round(duration/dt), endpoint included; the recorded derivative is
/// rhs(x_k, u_k). Throws NumericalError naming the failing time if the
/// state leaves the finite range.
Trajectory rk4_simulate(const OdeSystem& system, const Eigen::VectorXd& x0,
                        const Signal& signal, double dt, double duration);

/// Batch generation of training trajectories with per-trajectory random
/// initial conditions (uniform in [ic_low, ic_high]) and per-trajectory
/// signal seeds, all derived from one master seed.
struct BatchConfig {
    int count = 10;
    double dt = 0.01;
    double duration = 1.0;
    SignalSpec signal; ///< seed field is overridden per trajectory
    std::uint64_t seed = 1;
    Eigen::VectorXd ic_low;
    Eigen::VectorXd ic_high;
    /// When set, the sample at t = duration is dropped so each trajectory
    /// carries exactly round(duration/dt) columns taken at step starts,
    /// the layout the training-data protocol expects.
    bool drop_endpoint = false;
};

std::vector<Trajectory> simulate_batch(const OdeSystem& system, const BatchConfig& config);

/// Training protocol for the pendulum experiment: ten 1 s trajectories at
/// dt = 0.01 s, piecewise-constant torque in [-1, 1] held for 0.1 s, initial
/// conditions uniform in [-pi/2, pi/2] x [-2, 2].
BatchConfig pendulum_training_protocol(std::uint64_t seed);

/// Simulated surrogate for the golf-robot bench measurements: chirp, sine
/// and step excitations from rest, sampled at 1 kHz for 2 s each.
std::vector<Trajectory> golf_surrogate_training(const GolfRobotParams& params,
                                                std::uint64_t seed);

} // namespace pchd

#endif // PCHD_SIMULATE_HPP
