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
#include <random>

#include "pchd/edmdc.hpp"
#include "pchd/errors.hpp"
#include "pchd/ident.hpp"
#include "pchd/simulate.hpp"
#include "test_helpers.hpp"

using namespace pchd;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory tiny_trajectory(Eigen::Index samples, double offset = 0.0) {
    Trajectory traj;
    traj.t = Eigen::VectorXd::LinSpaced(samples, 0.0, 0.01 * double(samples - 1));
    traj.states = Eigen::MatrixXd::Random(2, samples).array() + offset;
    traj.inputs = Eigen::MatrixXd::Random(1, samples);
    traj.derivatives = Eigen::MatrixXd::Random(2, samples);
    return traj;
}

std::vector<Trajectory> pendulum_training_data(std::uint64_t seed) {
    return simulate_batch(make_pendulum(), pendulum_training_protocol(seed));
}

} // namespace

TEST_CASE("assemble_snapshots: concatenation preserves order") {
    Trajectory a = tiny_trajectory(8), b = tiny_trajectory(5, 1.0);
    auto data = assemble_snapshots({a});
    CHECK(data.samples() == 8);

    data = assemble_snapshots({a, b});
    CHECK(data.samples() == 13);
    CHECK((data.states.leftCols(8) - a.states).norm() == 0.0);
    CHECK((data.states.rightCols(5) - b.states).norm() == 0.0);
    CHECK((data.derivatives.leftCols(8) - *a.derivatives).norm() == 0.0);
    CHECK((data.inputs.rightCols(5) - b.inputs).norm() == 0.0);
}

TEST_CASE("assemble_snapshots: error paths") {
    CHECK_THROWS_AS(assemble_snapshots({}), InvalidInputError);

    Trajectory no_deriv = tiny_trajectory(8);
    no_deriv.derivatives.reset();
    CHECK_THROWS_AS(assemble_snapshots({no_deriv}), DataError);

    Trajectory a = tiny_trajectory(8);
    Trajectory wrong = tiny_trajectory(8);
    wrong.states = Eigen::MatrixXd::Random(3, 8);
    wrong.derivatives = Eigen::MatrixXd::Random(3, 8);
    CHECK_THROWS_AS(assemble_snapshots({a, wrong}), DimensionError);
}

TEST_CASE("estimate_derivatives: constant and quadratic series") {
    const Eigen::Index m = 101;
    Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(m, 0.0, 0.1);
    SmoothingConfig none;
    none.method = SmoothingConfig::Method::None;

    auto [sc, dc] = estimate_derivatives(t, Eigen::VectorXd::Constant(m, 3.5), none);
    CHECK(dc.cwiseAbs().maxCoeff() == 0.0);
    CHECK((sc.array() == 3.5).all());

    // x(t) = t^2: central differences are exact on quadratics
    Eigen::VectorXd quad = t.array().square();
    auto [sq, dq] = estimate_derivatives(t, quad, none);
    (void)sq;
    for (Eigen::Index k = 1; k + 1 < m; ++k) {
        CHECK(std::abs(dq[k] - 2.0 * t[k]) < 1e-9);
    }
}

TEST_CASE("estimate_derivatives: noisy sine vs analytic cosine") {
    const double dt = 0.001; // 1 kHz
    const Eigen::Index m = 1001;
    Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(m, 0.0, dt * double(m - 1));
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> noise(0.0, 1e-3);
    Eigen::VectorXd series(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        series[k] = std::sin(2.0 * kPi * t[k]) + noise(rng);
    }

    for (auto method : {SmoothingConfig::Method::MovingAverage,
                        SmoothingConfig::Method::SavitzkyGolay}) {
        SmoothingConfig config;
        config.method = method;
        config.window = 21;
        auto [smoothed, derivative] = estimate_derivatives(t, series, config);
        (void)smoothed;
        double sq_sum = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            const double truth = 2.0 * kPi * std::cos(2.0 * kPi * t[k]);
            sq_sum += (derivative[k] - truth) * (derivative[k] - truth);
        }
        const double rms = std::sqrt(sq_sum / double(m));
        CHECK(rms < 0.1 * 2.0 * kPi);
    }
}

TEST_CASE("estimate_derivatives: error paths") {
    Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(4, 0.0, 0.3);
    CHECK_THROWS_AS(estimate_derivatives(t, Eigen::VectorXd::Zero(4)), InvalidInputError);

    Eigen::VectorXd jitter = Eigen::VectorXd::LinSpaced(10, 0.0, 0.9);
    jitter[5] += 0.01;
    CHECK_THROWS_AS(estimate_derivatives(jitter, Eigen::VectorXd::Zero(10)),
                    InvalidInputError);
}

TEST_CASE("add_estimated_derivatives fills the derivative block") {
    Trajectory traj = rk4_simulate(make_pendulum(), Eigen::Vector2d(0.5, 0.0),
                                   zero_signal(), 0.001, 1.0);
    const Eigen::MatrixXd exact = *traj.derivatives;
    traj.derivatives.reset();
    SmoothingConfig none;
    none.method = SmoothingConfig::Method::None;
    add_estimated_derivatives(traj, none);
    REQUIRE(traj.derivatives.has_value());
    // interior columns approximate the recorded rhs to O(dt^2)
    const Eigen::Index m = traj.samples();
    double worst = 0.0;
    for (Eigen::Index k = 1; k + 1 < m; ++k) {
        worst = std::max(worst, (traj.derivatives->col(k) - exact.col(k)).norm());
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("energy_features: hand-evaluated columns") {
    EnergyModel pend = pendulum_energy(PendulumParams{});
    Eigen::MatrixXd states(2, 2);
    states.col(0) = Eigen::Vector2d::Zero();
    states.col(1) = Eigen::Vector2d(kPi / 2.0, 2.0);
    Eigen::MatrixXd feats = energy_features(pend, states);
    CHECK(feats.col(0).norm() == 0.0);
    CHECK(feats(0, 1) == doctest::Approx(4.905));
    CHECK(feats(1, 1) == doctest::Approx(0.5));

    GolfRobotParams golf;
    EnergyModel golf_energy = golf_robot_energy(golf);
    Eigen::MatrixXd golf_state(2, 1);
    golf_state.col(0) = Eigen::Vector2d(kPi / 2.0, 1.0);
    feats = energy_features(golf_energy, golf_state);
    CHECK(feats(0, 0) == doctest::Approx(golf.mass * golf.gravity * golf.com_distance));
    CHECK(feats(1, 0) == doctest::Approx(golf.inertia));
}

TEST_CASE("fit_kb: exact recovery of a synthetic linear-in-features system") {
    std::mt19937_64 rng(99);
    EnergyModel energy = pendulum_energy(PendulumParams{});
    Eigen::MatrixXd K_true = pchd::testing::random_matrix(rng, 2, 2, 3.0);
    Eigen::MatrixXd B_true = pchd::testing::random_matrix(rng, 2, 1, 2.0);

    const Eigen::Index m = 60;
    SnapshotDataset data;
    data.states = pchd::testing::random_matrix(rng, 2, m, 2.0);
    data.inputs = pchd::testing::random_matrix(rng, 1, m, 1.0);
    const Eigen::MatrixXd features = energy_features(energy, data.states);
    data.derivatives = K_true * features + B_true * data.inputs;

    const FitResult fit = fit_kb(data, features);
    CHECK((fit.K - K_true).norm() < 1e-8);
    CHECK((fit.B - B_true).norm() < 1e-8);
    CHECK(fit.residual < 1e-8);
    CHECK_FALSE(fit.rank_deficient);
}

TEST_CASE("fit_kb: pendulum protocol recovers the published operator") {
    const auto data = pendulum_training_data(1);
    const EnergyModel energy = pendulum_energy(PendulumParams{});
    const SnapshotDataset dataset = assemble_snapshots(data);
    const FitResult fit = fit_kb(dataset, energy_features(energy, dataset.states));

    Eigen::Matrix2d K_expected;
    K_expected << 0.0, 4.0, -4.0, -0.8;
    CHECK(std::abs(fit.K(0, 0)) < 0.02);
    CHECK(fit.K(0, 1) == doctest::Approx(4.0).epsilon(0.01));
    CHECK(fit.K(1, 0) == doctest::Approx(-4.0).epsilon(0.01));
    CHECK(fit.K(1, 1) == doctest::Approx(-0.8).epsilon(0.01));
    CHECK(std::abs(fit.B(0, 0)) < 0.02);
    CHECK(fit.B(1, 0) == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("fit_kb: zero dataset falls back to the minimum-norm solution") {
    SnapshotDataset data;
    data.states = Eigen::MatrixXd::Zero(2, 10);
    data.derivatives = Eigen::MatrixXd::Zero(2, 10);
    data.inputs = Eigen::MatrixXd::Zero(1, 10);
    const Eigen::MatrixXd features = Eigen::MatrixXd::Zero(2, 10);
    const FitResult fit = fit_kb(data, features);
    CHECK(fit.rank_deficient);
    CHECK(fit.K.norm() == 0.0);
    CHECK(fit.B.norm() == 0.0);
}

TEST_CASE("fit_kb: returned operator is a least-squares minimum") {
    const auto data = pendulum_training_data(5);
    const EnergyModel energy = pendulum_energy(PendulumParams{});
    const SnapshotDataset dataset = assemble_snapshots(data);
    const Eigen::MatrixXd features = energy_features(energy, dataset.states);
    const FitResult fit = fit_kb(dataset, features);

    auto residual_of = [&](const Eigen::MatrixXd& K, const Eigen::MatrixXd& B) {
        return (dataset.derivatives - K * features - B * dataset.inputs).norm();
    };
    const double base = residual_of(fit.K, fit.B);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd dK = pchd::testing::random_matrix(rng, 2, 2);
        Eigen::MatrixXd dB = pchd::testing::random_matrix(rng, 2, 1);
        const double scale = 1e-3 / std::sqrt(dK.squaredNorm() + dB.squaredNorm());
        CHECK(residual_of(fit.K + scale * dK, fit.B + scale * dB) >= base);
    }
}

TEST_CASE("learn_pchd: pendulum experiment end to end") {
    const auto data = pendulum_training_data(1);
    const LearnResult result = learn_pchd(data, pendulum_energy(PendulumParams{}));

    Eigen::Matrix2d J_expected;
    J_expected << 0.0, 4.0, -4.0, 0.0;
    CHECK((result.projected.J - J_expected).cwiseAbs().maxCoeff() < 0.04);
    CHECK(std::abs(result.projected.D(0, 0)) < 0.02);
    CHECK(result.projected.D(1, 1) == doctest::Approx(0.8).epsilon(0.01));
    CHECK(std::abs(result.projected.B(0, 0)) < 0.02);
    CHECK(result.projected.B(1, 0) == doctest::Approx(4.0).epsilon(0.01));

    // D is already positive semi-definite, the projection is a no-op
    CHECK((result.projected.D - result.unprojected.D).norm() < 1e-10);
    CHECK(result.fit.unprojected_dissipation_eigenvalues.minCoeff() > -1e-10);

    // structural invariants
    CHECK((result.projected.J + result.projected.J.transpose()).norm() == 0.0);
    const Eigen::MatrixXd K_rebuilt = result.unprojected.J - result.unprojected.D;
    CHECK((K_rebuilt - result.fit.K).norm() <= 1e-14 * (1.0 + result.fit.K.norm()));
}

TEST_CASE("learn_pchd: lossless oscillator yields a vanishing dissipation matrix") {
    // pendulum equations with the damper removed
    PendulumParams p;
    OdeSystem lossless{2, 1, [p](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
                           const double inertia = p.mass * p.length * p.length;
                           Eigen::VectorXd xdot(2);
                           xdot[0] = x[1];
                           xdot[1] = -(p.gravity / p.length) * std::sin(x[0]) +
                                     u[0] / inertia;
                           return xdot;
                       }};
    const auto data = simulate_batch(lossless, pendulum_training_protocol(7));
    const LearnResult result = learn_pchd(data, pendulum_energy(p));
    CHECK(result.unprojected.D.norm() < 1e-6);
    CHECK((result.projected.D - result.unprojected.D).norm() < 1e-6);
}

TEST_CASE("learn_pchd: consistency on data generated by a PCHD model") {
    PendulumParams p;
    const double inv_inertia = 1.0 / p.kinetic_coeff();
    PchdModel generator{Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 2),
                        Eigen::MatrixXd(2, 1), pendulum_energy(p), true};
    generator.J << 0.0, inv_inertia, -inv_inertia, 0.0;
    generator.D = Eigen::Vector2d(0.0, p.damping * inv_inertia * inv_inertia).asDiagonal();
    generator.B << 0.0, inv_inertia;

    const auto data = simulate_batch(generator.as_ode(), pendulum_training_protocol(11));
    const LearnResult result = learn_pchd(data, generator.energy);
    CHECK((result.projected.J - generator.J).norm() < 1e-6);
    CHECK((result.projected.D - generator.D).norm() < 1e-6);
    CHECK((result.projected.B - generator.B).norm() < 1e-6);
    CHECK((result.projected.D - result.unprojected.D).norm() < 1e-9);
}

TEST_CASE("learn_pchd: projection never improves the data fit") {
    const auto data = golf_surrogate_training(GolfRobotParams{}, 21);
    const LearnResult result = learn_pchd(data, golf_robot_energy(GolfRobotParams{}));

    const SnapshotDataset dataset = assemble_snapshots(data);
    const Eigen::MatrixXd features =
        energy_features(golf_robot_energy(GolfRobotParams{}), dataset.states);
    const double projected_residual =
        (dataset.derivatives -
         (result.projected.J - result.projected.D) * features -
         result.projected.B * dataset.inputs)
            .norm();
    CHECK(projected_residual >= result.fit.residual);
}

TEST_CASE("edmdc_fit: identity observables recover a discrete linear system") {
    std::mt19937_64 rng(42);
    Eigen::Matrix2d A;
    A << 0.9, 0.2, -0.1, 0.8;
    Eigen::Vector2d B(0.0, 1.0);

    std::vector<Trajectory> trajectories;
    for (int traj_idx = 0; traj_idx < 3; ++traj_idx) {
        const Eigen::Index m = 30;
        Trajectory traj;
        traj.t = Eigen::VectorXd::LinSpaced(m, 0.0, 0.1 * double(m - 1));
        traj.states.resize(2, m);
        traj.inputs.resize(1, m);
        Eigen::Vector2d x = pchd::testing::random_matrix(rng, 2, 1);
        for (Eigen::Index k = 0; k < m; ++k) {
            const double u = pchd::testing::uniform(rng, -1.0, 1.0);
            traj.states.col(k) = x;
            traj.inputs(0, k) = u;
            x = A * x + B * u;
        }
        trajectories.push_back(traj);
    }

    const auto model = edmdc_fit(trajectories, identity_observables(2));
    CHECK((model.K - A).norm() < 1e-8);
    CHECK((model.B - B).norm() < 1e-8);

    // open-loop prediction matches the closed form x_k = A^k x0 + sum A^j B u
    const Eigen::Index steps = 50;
    Eigen::MatrixXd inputs(1, steps);
    for (Eigen::Index k = 0; k < steps; ++k) inputs(0, k) = std::sin(0.3 * double(k));
    const Eigen::Vector2d x0(0.7, -0.2);
    const auto pred = edmdc_predict(model, identity_observables(2), x0, inputs, steps);

    Eigen::Vector2d x = x0;
    for (Eigen::Index k = 0; k <= steps; ++k) {
        CHECK((pred.states.col(k) - x).norm() < 1e-8);
        if (k < steps) x = A * x + B * inputs.col(k);
    }
}

TEST_CASE("edmdc_fit: autonomous scalar contraction") {
    Trajectory traj;
    const Eigen::Index m = 20;
    traj.t = Eigen::VectorXd::LinSpaced(m, 0.0, double(m - 1));
    traj.states.resize(1, m);
    traj.inputs = Eigen::MatrixXd::Zero(1, m);
    traj.states(0, 0) = 1.0;
    for (Eigen::Index k = 1; k < m; ++k) traj.states(0, k) = 0.5 * traj.states(0, k - 1);
    const auto model = edmdc_fit({traj}, identity_observables(1));
    CHECK(model.K(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("edmdc: sin-augmented dictionary beats identity on pendulum data") {
    auto observables = identity_observables(2);
    observables.push_back(
        Observable{"sin_x1", [](const Eigen::VectorXd& x) { return std::sin(x[0]); }, -1});

    const auto training = pendulum_training_data(31);
    const Trajectory held_out =
        simulate_batch(make_pendulum(), pendulum_training_protocol(99)).front();

    const auto lifted_model = edmdc_fit(training, observables);
    const auto identity_model = edmdc_fit(training, identity_observables(2));

    auto one_step_rms = [&](const EdmdcModel& model,
                            const std::vector<Observable>& dict) {
        double sq_sum = 0.0;
        Eigen::Index count = 0;
        for (Eigen::Index k = 0; k + 1 < held_out.samples(); ++k) {
            const auto pred = edmdc_predict(model, dict, held_out.states.col(k),
                                            held_out.inputs.col(k), 1);
            sq_sum += (pred.states.col(1) - held_out.states.col(k + 1)).squaredNorm();
            ++count;
        }
        return std::sqrt(sq_sum / double(count));
    };

    const double lifted_rms = one_step_rms(lifted_model, observables);
    const double identity_rms = one_step_rms(identity_model, identity_observables(2));
    CHECK(lifted_rms < identity_rms);
}

TEST_CASE("edmdc_predict: degenerate operators") {
    const auto dict = identity_observables(2);
    EdmdcModel zero{Eigen::Matrix2d::Zero(), Eigen::Vector2d::Zero(), 0.1};
    auto pred = edmdc_predict(zero, dict, Eigen::Vector2d(1.0, 2.0),
                              Eigen::MatrixXd::Zero(1, 5), 5);
    CHECK(pred.states.col(0).norm() > 0.0);
    for (Eigen::Index k = 1; k <= 5; ++k) CHECK(pred.states.col(k).norm() == 0.0);

    EdmdcModel hold{Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 0.1};
    pred = edmdc_predict(hold, dict, Eigen::Vector2d(1.0, 2.0),
                         Eigen::MatrixXd::Zero(1, 5), 5);
    CHECK((pred.states.col(5) - Eigen::Vector2d(1.0, 2.0)).norm() == 0.0);
}

TEST_CASE("edmdc: error paths") {
    Trajectory tooshort;
    tooshort.t = Eigen::VectorXd::Zero(1);
    tooshort.states = Eigen::MatrixXd::Zero(2, 1);
    tooshort.inputs = Eigen::MatrixXd::Zero(1, 1);
    CHECK_THROWS_AS(edmdc_fit({tooshort}, identity_observables(2)), InvalidInputError);

    // dictionary without identity coordinates cannot read out states
    std::vector<Observable> no_identity{
        Observable{"x1sq", [](const Eigen::VectorXd& x) { return x[0] * x[0]; }, -1}};
    EdmdcModel model{Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Zero(1, 1), 0.1};
    CHECK_THROWS_AS(edmdc_predict(model, no_identity, Eigen::VectorXd::Ones(1),
                                  Eigen::MatrixXd::Zero(1, 3), 3),
                    InvalidInputError);
}
