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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pchd/errors.hpp"
#include "pchd/eval.hpp"
#include "pchd/ident.hpp"
#include "pchd/simulate.hpp"

using namespace pchd;

namespace {

constexpr double kPi = std::numbers::pi;

PchdModel reference_pendulum_model() {
    PendulumParams p;
    const double inv_inertia = 1.0 / p.kinetic_coeff();
    PchdModel model{Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 1),
                    pendulum_energy(p), true};
    model.J << 0.0, inv_inertia, -inv_inertia, 0.0;
    model.D = Eigen::Vector2d(0.0, p.damping * inv_inertia * inv_inertia).asDiagonal();
    model.B << 0.0, inv_inertia;
    return model;
}

Trajectory driven_pendulum_reference(std::uint64_t seed) {
    SignalSpec pwc;
    pwc.kind = SignalSpec::Kind::PiecewiseConstantRandom;
    pwc.hold = 0.1;
    pwc.seed = seed;
    return rk4_simulate(make_pendulum(), Eigen::Vector2d(0.4, -0.5), Signal(pwc), 0.01,
                        1.0);
}

} // namespace

TEST_CASE("predict_open_loop: self-prediction replays the reference") {
    const Trajectory reference = driven_pendulum_reference(3);
    const PredictionReport report = predict_open_loop(make_pendulum(), reference);
    CHECK(report.final_cumulative_error <= 1e-8);
    CHECK_FALSE(report.diverged);
    CHECK(report.valid_samples == reference.samples());
}

TEST_CASE("predict_open_loop: zero-dynamics model accumulates error monotonically") {
    const Trajectory reference = driven_pendulum_reference(5);
    OdeSystem frozen{2, 1, [](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
                         return Eigen::VectorXd(Eigen::VectorXd::Zero(x.size()));
                     }};
    const PredictionReport report = predict_open_loop(frozen, reference);
    CHECK(report.cumulative_error[0] == 0.0); // same initial state
    for (Eigen::Index k = 1; k < report.cumulative_error.size(); ++k) {
        CHECK(report.cumulative_error[k] >= report.cumulative_error[k - 1]);
    }
    CHECK(report.final_cumulative_error > 0.01);
}

TEST_CASE("predict_open_loop: identified pendulum model tracks held-out data") {
    const auto training = simulate_batch(make_pendulum(), pendulum_training_protocol(1));
    const LearnResult learned = learn_pchd(training, pendulum_energy(PendulumParams{}));
    const Trajectory held_out = driven_pendulum_reference(1234);
    const PredictionReport report = predict_open_loop(learned.projected, held_out);
    CHECK(report.rms_error < 1e-3); // rad, on the angle component
}

TEST_CASE("predict_open_loop: dimension and component validation") {
    const Trajectory reference = driven_pendulum_reference(8);
    CHECK_THROWS_AS(predict_open_loop(make_exp_decay(), reference), DimensionError);

    PredictionConfig config;
    config.components = {7};
    CHECK_THROWS_AS(predict_open_loop(make_pendulum(), reference, config),
                    InvalidInputError);
}

TEST_CASE("verify_passivity: projected pendulum model is passive") {
    PchdModel model = reference_pendulum_model();
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        SignalSpec pwc;
        pwc.kind = SignalSpec::Kind::PiecewiseConstantRandom;
        pwc.hold = 0.1;
        pwc.seed = seed;
        const Trajectory traj = rk4_simulate(model.as_ode(), Eigen::Vector2d(0.2, 0.1),
                                             Signal(pwc), 0.01, 2.0);
        const PassivityReport report = verify_passivity(model, traj);
        CHECK(report.passive);
        CHECK(report.max_violation <= 1e-6 * (1.0 + std::abs(report.supplied_energy)));
    }
}

TEST_CASE("verify_passivity: energy-pumping model is flagged") {
    PchdModel model = reference_pendulum_model();
    model.D = -Eigen::Matrix2d::Identity(); // bypasses invariants on purpose
    model.projected = false;
    const Trajectory swing = rk4_simulate(model.as_ode(), Eigen::Vector2d(0.3, 0.0),
                                          zero_signal(), 0.01, 1.0);
    const PassivityReport report = verify_passivity(model, swing);
    CHECK_FALSE(report.passive);
    CHECK(report.max_violation > 0.01);
}

TEST_CASE("verify_passivity: lossless model conserves energy") {
    PchdModel model = reference_pendulum_model();
    model.D = Eigen::Matrix2d::Zero();
    const Trajectory swing = rk4_simulate(model.as_ode(), Eigen::Vector2d(0.5, 0.0),
                                          zero_signal(), 0.01, 1.0);
    const PassivityReport report = verify_passivity(model, swing);
    CHECK(report.supplied_energy == 0.0);
    CHECK(report.passive);
    const double v0 = model.energy.value(swing.states.col(0));
    for (Eigen::Index k = 0; k < swing.samples(); ++k) {
        CHECK(std::abs(model.energy.value(swing.states.col(k)) - v0) < 1e-6);
    }
}

TEST_CASE("apply_shift: parameter names and validation") {
    PendulumParams p;
    CHECK(apply_shift(p, {"m", 0.1}).mass == doctest::Approx(1.1));
    CHECK(apply_shift(p, {"l", -0.1}).length == doctest::Approx(0.45));
    CHECK(apply_shift(p, {"g", 0.1}).gravity == doctest::Approx(10.791));
    CHECK(apply_shift(p, {"d", 0.1}).damping == doctest::Approx(0.055));
    CHECK_THROWS_AS(apply_shift(p, {"q", 0.1}), InvalidInputError);
    try {
        apply_shift(p, {"q", 0.1});
    } catch (const InvalidInputError& e) {
        CHECK(std::string(e.what()).find("m, l, g, d") != std::string::npos);
    }
}

TEST_CASE("sensitivity_study: energy-prior errors in m are corrected, in l are not") {
    const SensitivityProtocol protocol = SensitivityProtocol::make_default(1);
    const std::vector<ShiftSpec> shifts = {
        {"m", 0.0}, {"m", 0.1}, {"d", 0.1}, {"l", 0.1}, {"g", 0.1}};
    const auto reports = sensitivity_study(protocol, shifts);
    REQUIRE(reports.size() == 5);

    const double baseline = reports[0].rms;
    const double m_shift = reports[1].rms;
    const double d_shift = reports[2].rms;
    const double l_shift = reports[3].rms;
    const double g_shift = reports[4].rms;

    CHECK(baseline <= 1e-6);
    CHECK(m_shift < 1e-4);
    CHECK(d_shift < 1e-4);
    CHECK(l_shift >= 5.0 * m_shift);
    CHECK(g_shift >= 5.0 * m_shift);
    CHECK(std::max(l_shift, g_shift) > std::max(m_shift, d_shift));

    // the mechanism: a wrong oscillation-relevant prior makes the raw fit
    // lose positive semi-definiteness, so the projection distorts the model
    CHECK_FALSE(reports[1].projection_changed_dissipation);
    CHECK(reports[3].projection_changed_dissipation);
}
