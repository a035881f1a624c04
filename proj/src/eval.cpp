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

#include "pchd/eval.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pchd/errors.hpp"
#include "pchd/ident.hpp"

namespace pchd {

namespace {

Eigen::VectorXd rk4_step_held(const OdeSystem& system, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u, double dt) {
    const Eigen::VectorXd k1 = system.rhs(x, u);
    const Eigen::VectorXd k2 = system.rhs(x + 0.5 * dt * k1, u);
    const Eigen::VectorXd k3 = system.rhs(x + 0.5 * dt * k2, u);
    const Eigen::VectorXd k4 = system.rhs(x + dt * k3, u);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_components(const std::vector<int>& components, Eigen::Index n) {
    if (components.empty()) {
        throw InvalidInputError("prediction: component set must not be empty");
    }
    for (int c : components) {
        if (c < 0 || c >= n) {
            throw InvalidInputError("prediction: component index " + std::to_string(c + 1) +
                                    " out of range");
        }
    }
}

} // namespace

PredictionReport predict_open_loop(const OdeSystem& model, const Trajectory& reference,
                                   const PredictionConfig& config) {
    reference.validate();
    if (reference.samples() < 2) {
        throw InvalidInputError("predict_open_loop: reference needs at least 2 samples");
    }
    if (model.state_dim != reference.state_dim()) {
        throw DimensionError("predict_open_loop: model and reference state dimensions differ");
    }
    if (model.input_dim != reference.input_dim()) {
        throw DimensionError("predict_open_loop: model and reference input dimensions differ");
    }
    check_components(config.components, reference.state_dim());

    const Eigen::Index m = reference.samples();
    PredictionReport report;
    report.t = reference.t;
    report.measured = reference.states;
    report.predicted.setConstant(reference.state_dim(), m,
                                 std::numeric_limits<double>::quiet_NaN());
    report.cumulative_error.resize(m);
    report.components = config.components;

    Eigen::VectorXd x = reference.states.col(0);
    double error_sum = 0.0;
    Eigen::Index valid = 0;
    for (Eigen::Index k = 0; k < m; ++k) {
        if (!x.allFinite()) {
            report.diverged = true;
            // freeze e at its last value so the series stays non-decreasing
            for (Eigen::Index j = k; j < m; ++j) report.cumulative_error[j] = error_sum;
            break;
        }
        report.predicted.col(k) = x;
        for (int c : config.components) {
            const double diff = reference.states(c, k) - x[c];
            error_sum += diff * diff;
        }
        report.cumulative_error[k] = error_sum;
        valid = k + 1;

        if (k + 1 < m) {
            const double interval = reference.t[k + 1] - reference.t[k];
            Eigen::Index substeps = 1;
            if (config.dt > 0.0 && config.dt < interval) {
                substeps = static_cast<Eigen::Index>(std::ceil(interval / config.dt - 1e-12));
            }
            const double h = interval / static_cast<double>(substeps);
            const Eigen::VectorXd u = reference.inputs.col(k); // zero-order hold
            for (Eigen::Index s = 0; s < substeps && x.allFinite(); ++s) {
                x = rk4_step_held(model, x, u, h);
            }
        }
    }

    report.valid_samples = valid;
    report.final_cumulative_error = report.cumulative_error[m - 1];
    report.rms_error = valid > 0 ? std::sqrt(report.cumulative_error[valid - 1] /
                                             static_cast<double>(valid))
                                 : std::numeric_limits<double>::quiet_NaN();
    return report;
}

PredictionReport predict_open_loop(const PchdModel& model, const Trajectory& reference,
                                   const PredictionConfig& config) {
    return predict_open_loop(model.as_ode(), reference, config);
}

PassivityReport verify_passivity(const PchdModel& model, const Trajectory& trajectory,
                                 const PassivityTolerance& tol) {
    trajectory.validate();
    if (trajectory.samples() < 2) {
        throw InvalidInputError("verify_passivity: trajectory needs at least 2 samples");
    }
    if (trajectory.state_dim() != model.state_dim() ||
        trajectory.input_dim() != model.input_dim()) {
        throw DimensionError("verify_passivity: trajectory does not match the model");
    }

    const Eigen::Index m = trajectory.samples();
    Eigen::VectorXd stored(m); // V(x_k)
    Eigen::MatrixXd outputs(model.input_dim(), m);
    for (Eigen::Index k = 0; k < m; ++k) {
        stored[k] = model.energy.value(trajectory.states.col(k));
        outputs.col(k) = pchd_output(model, trajectory.states.col(k));
    }

    PassivityReport report;
    // Trapezoidal quadrature of u^T y, honoring the zero-order hold of the
    // data protocol: over [t_k, t_k+1) the input is u_k, so only y is
    // averaged across the interval.
    double supplied = 0.0;
    report.max_violation = 0.0;
    for (Eigen::Index k = 1; k < m; ++k) {
        supplied += trajectory.inputs.col(k - 1).dot(
                        0.5 * (outputs.col(k) + outputs.col(k - 1))) *
                    (trajectory.t[k] - trajectory.t[k - 1]);
        report.max_violation =
            std::max(report.max_violation, stored[k] - stored[0] - supplied);
    }
    report.supplied_energy = supplied;

    for (Eigen::Index k = 1; k + 1 < m; ++k) {
        const double vdot =
            (stored[k + 1] - stored[k - 1]) / (trajectory.t[k + 1] - trajectory.t[k - 1]);
        const Eigen::VectorXd grad = model.energy.gradient(trajectory.states.col(k));
        const double power_k = trajectory.inputs.col(k).dot(outputs.col(k));
        const double residual = std::abs(vdot - power_k + grad.dot(model.D * grad));
        report.dissipation_identity_residual =
            std::max(report.dissipation_identity_residual, residual);
    }

    report.tolerance = tol.absolute + tol.relative * std::abs(supplied);
    report.passive = report.max_violation <= report.tolerance;
    return report;
}

PendulumParams apply_shift(PendulumParams params, const ShiftSpec& shift) {
    const double factor = 1.0 + shift.relative_shift;
    if (shift.parameter == "m") {
        params.mass *= factor;
    } else if (shift.parameter == "l") {
        params.length *= factor;
    } else if (shift.parameter == "g") {
        params.gravity *= factor;
    } else if (shift.parameter == "d") {
        params.damping *= factor;
    } else {
        throw InvalidInputError("unknown pendulum parameter '" + shift.parameter +
                                "' (valid names: m, l, g, d)");
    }
    params.validate();
    return params;
}

std::vector<ShiftSpec> default_shift_sweep(double magnitude) {
    std::vector<ShiftSpec> shifts;
    for (const char* name : {"m", "l", "g", "d"}) {
        shifts.push_back({name, magnitude});
        shifts.push_back({name, -magnitude});
    }
    return shifts;
}

SensitivityProtocol SensitivityProtocol::make_default(std::uint64_t seed) {
    SensitivityProtocol protocol;
    protocol.seed = seed;
    protocol.free_swing_ic = Eigen::Vector2d(std::numbers::pi / 4.0, 0.0);
    return protocol;
}

std::vector<ShiftReport> sensitivity_study(const SensitivityProtocol& protocol,
                                           const std::vector<ShiftSpec>& shifts) {
    protocol.nominal.validate();
    const OdeSystem true_system = make_pendulum(protocol.nominal);
    const auto training =
        simulate_batch(true_system, pendulum_training_protocol(protocol.seed));

    const Trajectory true_swing =
        rk4_simulate(true_system, protocol.free_swing_ic, zero_signal(),
                     protocol.free_swing_dt, protocol.free_swing_duration);

    std::vector<ShiftReport> reports;
    reports.reserve(shifts.size());
    for (const ShiftSpec& shift : shifts) {
        const PendulumParams shifted = apply_shift(protocol.nominal, shift);
        const EnergyModel energy = pendulum_energy(shifted);
        const LearnResult learned = learn_pchd(training, energy);

        ShiftReport report;
        report.shift = shift;
        report.min_unprojected_eigenvalue =
            learned.fit.unprojected_dissipation_eigenvalues.minCoeff();
        report.projection_changed_dissipation =
            (learned.projected.D - learned.unprojected.D).norm() > 1e-12;
        report.true_swing = true_swing;
        report.model_swing =
            rk4_simulate(learned.projected.as_ode(), protocol.free_swing_ic, zero_signal(),
                         protocol.free_swing_dt, protocol.free_swing_duration);

        double sq_sum = 0.0;
        for (Eigen::Index k = 0; k < true_swing.samples(); ++k) {
            for (int c : protocol.components) {
                const double diff =
                    true_swing.states(c, k) - report.model_swing.states(c, k);
                sq_sum += diff * diff;
            }
        }
        report.rms = std::sqrt(sq_sum / static_cast<double>(true_swing.samples()));
        reports.push_back(std::move(report));
    }
    return reports;
}

} // namespace pchd
