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

#include "pchd/simulate.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "pchd/errors.hpp"
#include "pchd/random.hpp"

namespace pchd {

namespace {

Eigen::VectorXd rk4_step(const OdeSystem& system, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double dt) {
    const Eigen::VectorXd k1 = system.rhs(x, u);
    const Eigen::VectorXd k2 = system.rhs(x + 0.5 * dt * k1, u);
    const Eigen::VectorXd k3 = system.rhs(x + 0.5 * dt * k2, u);
    const Eigen::VectorXd k4 = system.rhs(x + dt * k3, u);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

[[noreturn]] void throw_divergence(double t) {
    std::ostringstream msg;
    msg << "simulation diverged: non-finite state at t=" << t;
    throw NumericalError(msg.str());
}

} // namespace

Trajectory rk4_simulate(const OdeSystem& system, const Eigen::VectorXd& x0,
                        const Signal& signal, double dt, double duration) {
    if (!(dt > 0.0)) throw InvalidInputError("rk4_simulate: dt must be > 0");
    if (!(duration >= dt)) throw InvalidInputError("rk4_simulate: duration must be >= dt");
    if (x0.size() != system.state_dim) {
        throw DimensionError("rk4_simulate: x0 does not match the system state dimension");
    }
    if (signal.channels() != system.input_dim) {
        throw DimensionError("rk4_simulate: signal channels do not match the input dimension");
    }
    if (!x0.allFinite()) throw InvalidInputError("rk4_simulate: x0 must be finite");

    const auto steps = static_cast<Eigen::Index>(std::llround(duration / dt));
    const Eigen::Index n = system.state_dim;

    Trajectory traj;
    traj.t.resize(steps + 1);
    traj.states.resize(n, steps + 1);
    traj.inputs.resize(system.input_dim, steps + 1);
    traj.derivatives = Eigen::MatrixXd(n, steps + 1);

    Eigen::VectorXd x = x0;
    for (Eigen::Index k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Eigen::VectorXd u = signal(t);
        const Eigen::VectorXd xdot = system.rhs(x, u);
        if (xdot.size() != n) {
            throw DimensionError("rk4_simulate: rhs returned a vector of wrong length");
        }
        if (!x.allFinite() || !xdot.allFinite()) throw_divergence(t);

        traj.t[k] = t;
        traj.states.col(k) = x;
        traj.inputs.col(k) = u;
        traj.derivatives->col(k) = xdot;

        if (k < steps) {
            x = rk4_step(system, x, u, dt);
        }
    }
    return traj;
}

std::vector<Trajectory> simulate_batch(const OdeSystem& system, const BatchConfig& config) {
    if (config.count < 1) throw InvalidInputError("simulate_batch: count must be >= 1");
    if (config.ic_low.size() != system.state_dim ||
        config.ic_high.size() != system.state_dim) {
        throw DimensionError("simulate_batch: IC box does not match the state dimension");
    }

    std::vector<Trajectory> out;
    out.reserve(static_cast<size_t>(config.count));
    for (int i = 0; i < config.count; ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        std::mt19937_64 ic_rng(derive_seed(config.seed, 2 * idx));
        Eigen::VectorXd x0(system.state_dim);
        for (Eigen::Index j = 0; j < x0.size(); ++j) {
            x0[j] = uniform_in(ic_rng, config.ic_low[j], config.ic_high[j]);
        }
        SignalSpec spec = config.signal;
        spec.channels = static_cast<int>(system.input_dim);
        spec.seed = derive_seed(config.seed, 2 * idx + 1);

        Trajectory traj = rk4_simulate(system, x0, Signal(spec), config.dt, config.duration);
        if (config.drop_endpoint && traj.samples() > 1) {
            const Eigen::Index m = traj.samples() - 1;
            traj.t.conservativeResize(m);
            traj.states.conservativeResize(Eigen::NoChange, m);
            traj.inputs.conservativeResize(Eigen::NoChange, m);
            traj.derivatives->conservativeResize(Eigen::NoChange, m);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

BatchConfig pendulum_training_protocol(std::uint64_t seed) {
    BatchConfig config;
    config.count = 10;
    config.dt = 0.01;
    config.duration = 1.0;
    config.seed = seed;
    config.signal.kind = SignalSpec::Kind::PiecewiseConstantRandom;
    config.signal.low = -1.0;
    config.signal.high = 1.0;
    config.signal.hold = 0.1;
    config.ic_low = Eigen::Vector2d(-std::numbers::pi / 2.0, -2.0);
    config.ic_high = Eigen::Vector2d(std::numbers::pi / 2.0, 2.0);
    config.drop_endpoint = true;
    return config;
}

std::vector<Trajectory> golf_surrogate_training(const GolfRobotParams& params,
                                                std::uint64_t seed) {
    const OdeSystem golf = make_golf_robot(params);
    const double dt = 0.001; // 1 kHz sampling
    const double duration = 2.0;
    const Eigen::Vector2d rest = Eigen::Vector2d::Zero();

    std::vector<SignalSpec> specs;
    {
        SignalSpec chirp;
        chirp.kind = SignalSpec::Kind::Chirp;
        chirp.amplitude = 0.5;
        chirp.freq_start = 0.2;
        chirp.freq_end = 2.0;
        chirp.sweep_duration = duration;
        specs.push_back(chirp);

        SignalSpec sine;
        sine.kind = SignalSpec::Kind::Sine;
        sine.amplitude = 0.5;
        sine.frequency = 0.5;
        specs.push_back(sine);

        SignalSpec sine2 = sine;
        sine2.amplitude = 0.3;
        sine2.frequency = 1.2;
        specs.push_back(sine2);

        SignalSpec step;
        step.kind = SignalSpec::Kind::Step;
        step.amplitude = 0.3;
        step.step_time = 0.1;
        specs.push_back(step);

        SignalSpec step2 = step;
        step2.amplitude = -0.4;
        step2.step_time = 0.5;
        specs.push_back(step2);

        SignalSpec chirp2 = chirp;
        chirp2.amplitude = 0.35;
        chirp2.freq_start = 1.0;
        chirp2.freq_end = 0.3;
        specs.push_back(chirp2);
    }

    std::vector<Trajectory> out;
    out.reserve(specs.size());
    for (size_t i = 0; i < specs.size(); ++i) {
        specs[i].seed = derive_seed(seed, static_cast<std::uint64_t>(i));
        Trajectory traj = rk4_simulate(golf, rest, Signal(specs[i]), dt, duration);
        // step-start layout, matching the batch protocol
        const Eigen::Index m = traj.samples() - 1;
        traj.t.conservativeResize(m);
        traj.states.conservativeResize(Eigen::NoChange, m);
        traj.inputs.conservativeResize(Eigen::NoChange, m);
        traj.derivatives->conservativeResize(Eigen::NoChange, m);
        out.push_back(std::move(traj));
    }
    return out;
}

} // namespace pchd
