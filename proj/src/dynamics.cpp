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

#include "pchd/dynamics.hpp"

#include <cmath>

#include "pchd/errors.hpp"
#include "pchd/linalg.hpp"

namespace pchd {

namespace {

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidInputError(std::string("parameter ") + name +
                                " must be strictly positive and finite");
    }
}

} // namespace

void PendulumParams::validate() const {
    require_positive(mass, "m");
    require_positive(length, "l");
    require_positive(gravity, "g");
    require_positive(damping, "d");
}

void GolfRobotParams::validate() const {
    require_positive(mass, "m");
    require_positive(inertia, "J");
    require_positive(gravity, "g");
    require_positive(com_distance, "a");
    require_positive(damping, "d");
    require_positive(friction_radius, "r");
    require_positive(friction_coeff, "mu");
}

Eigen::Vector2d pendulum_rhs(const Eigen::Vector2d& x, double torque,
                             const PendulumParams& p) {
    const double inertia = p.mass * p.length * p.length;
    Eigen::Vector2d xdot;
    xdot[0] = x[1];
    xdot[1] = -(p.gravity / p.length) * std::sin(x[0]) - (p.damping / inertia) * x[1] +
              torque / inertia;
    return xdot;
}

Eigen::Vector2d golf_rhs(const Eigen::Vector2d& x, double torque,
                         const GolfRobotParams& p) {
    // Dissipation torque combining viscous and sliding friction; sgn(0) = 0
    // keeps the origin a fixed point.
    const double normal_load =
        std::abs(p.mass * x[1] * x[1] * p.com_distance +
                 p.mass * p.gravity * std::cos(x[0]));
    const double friction_torque =
        p.damping * x[1] + p.friction_radius * p.friction_coeff * sgn(x[1]) * normal_load;
    Eigen::Vector2d xdot;
    xdot[0] = x[1];
    xdot[1] = (-p.mass * p.gravity * p.com_distance * std::sin(x[0]) - friction_torque +
               4.0 * torque) /
              p.inertia;
    return xdot;
}

OdeSystem make_pendulum(const PendulumParams& params) {
    params.validate();
    return OdeSystem{2, 1, [params](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
                         return Eigen::VectorXd(pendulum_rhs(x.head<2>(), u[0], params));
                     }};
}

OdeSystem make_golf_robot(const GolfRobotParams& params) {
    params.validate();
    return OdeSystem{2, 1, [params](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
                         return Eigen::VectorXd(golf_rhs(x.head<2>(), u[0], params));
                     }};
}

OdeSystem make_exp_decay() {
    return OdeSystem{1, 1, [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
                         return Eigen::VectorXd(-x + u);
                     }};
}

EnergyModel pendulum_energy(const PendulumParams& params) {
    params.validate();
    return EnergyModel::planar_pendulum(params.kinetic_coeff(), params.potential_coeff());
}

EnergyModel golf_robot_energy(const GolfRobotParams& params) {
    params.validate();
    return EnergyModel::planar_pendulum(params.kinetic_coeff(), params.potential_coeff());
}

void PchdModel::validate() const {
    const Eigen::Index n = J.rows();
    if (J.cols() != n || D.rows() != n || D.cols() != n || B.rows() != n) {
        throw DimensionError("PchdModel: J, D must be n x n and B must be n x p");
    }
    if (energy.state_dim() != n) {
        throw DimensionError("PchdModel: energy family dimension does not match n");
    }
    if ((J + J.transpose()).norm() > 1e-10) {
        throw InvalidInputError("PchdModel: J is not skew-symmetric");
    }
    if ((D - D.transpose()).norm() > 1e-10) {
        throw InvalidInputError("PchdModel: D is not symmetric");
    }
    if (projected) {
        const auto eig = linalg::sym_eig(D);
        if (eig.eigenvalues.minCoeff() < -1e-10) {
            throw InvalidInputError("PchdModel: projected D has a negative eigenvalue");
        }
    }
}

Eigen::VectorXd pchd_rhs(const PchdModel& model, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u) {
    if (x.size() != model.state_dim() || u.size() != model.input_dim()) {
        throw DimensionError("pchd_rhs: state/input dimensions do not match the model");
    }
    return (model.J - model.D) * model.energy.gradient(x) + model.B * u;
}

Eigen::VectorXd pchd_output(const PchdModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.state_dim()) {
        throw DimensionError("pchd_output: state dimension does not match the model");
    }
    return model.B.transpose() * model.energy.gradient(x);
}

OdeSystem PchdModel::as_ode() const {
    PchdModel copy = *this;
    return OdeSystem{state_dim(), input_dim(),
                     [copy](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
                         return pchd_rhs(copy, x, u);
                     }};
}

} // namespace pchd
