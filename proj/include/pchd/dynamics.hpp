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

#ifndef PCHD_DYNAMICS_HPP
#define PCHD_DYNAMICS_HPP

#include <Eigen/Dense>
#include <functional>

#include "pchd/energy.hpp"

namespace pchd {

/// Continuous-time system xdot = rhs(x, u). Reference systems and learned
/// models are both wrapped in this form for simulation.
struct OdeSystem {
    Eigen::Index state_dim = 0;
    Eigen::Index input_dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> rhs;
};

/// Damped pendulum, state (angle [rad], angular velocity [rad/s]),
/// input torque [N m].
struct PendulumParams {
    double mass = 1.0;      ///< [kg]
    double length = 0.5;    ///< [m]
    double gravity = 9.81;  ///< [m/s^2]
    double damping = 0.05;  ///< [kg m^2/s]

    void validate() const;
    double kinetic_coeff() const { return mass * length * length; } ///< m l^2
    double potential_coeff() const { return mass * gravity * length; } ///< m g l
};

/// Single-rigid-body golf-club stroke mechanism, state (angle, angular
/// velocity), input motor torque acting through a 4:1 ratio.
struct GolfRobotParams {
    double mass = 0.5241;           ///< club mass [kg]
    double inertia = 0.1445;        ///< rotating inertia [kg m^2]
    double gravity = 9.81;          ///< [m/s^2]
    double com_distance = 0.4702;   ///< axis to club center of mass [m]
    double damping = 0.0132;        ///< viscous coefficient [kg m^2/s]
    double friction_radius = 0.0245;///< axis to friction contact [m]
    double friction_coeff = 1.5136; ///< sliding friction coefficient [-]

    void validate() const;
    double kinetic_coeff() const { return inertia; }
    double potential_coeff() const { return mass * gravity * com_distance; } ///< m g a
};

Eigen::Vector2d pendulum_rhs(const Eigen::Vector2d& x, double torque,
                             const PendulumParams& params);
Eigen::Vector2d golf_rhs(const Eigen::Vector2d& x, double torque,
                         const GolfRobotParams& params);

OdeSystem make_pendulum(const PendulumParams& params = {});
OdeSystem make_golf_robot(const GolfRobotParams& params = {});
/// Scalar test system xdot = -x + u with a closed-form solution; handy for
/// integrator checks.
OdeSystem make_exp_decay();

EnergyModel pendulum_energy(const PendulumParams& params = {});
EnergyModel golf_robot_energy(const GolfRobotParams& params = {});

/// Learned model xdot = (J - D) grad V(x) + B u, y = B^T grad V(x).
/// J is skew-symmetric (energy flow), D symmetric (dissipation), and D is
/// guaranteed positive semi-definite only when `projected` is set: a raw
/// least-squares fit carries projected = false until its dissipation matrix
/// has been clipped.
struct PchdModel {
    Eigen::MatrixXd J;
    Eigen::MatrixXd D;
    Eigen::MatrixXd B;
    EnergyModel energy;
    bool projected = false;

    Eigen::Index state_dim() const { return J.rows(); }
    Eigen::Index input_dim() const { return B.cols(); }

    /// Checks the structural invariants: J skew within 1e-10, D symmetric
    /// within 1e-10, dimensions consistent with the energy family, and, for
    /// projected models, min eig(D) >= -1e-10.
    void validate() const;
    OdeSystem as_ode() const;
};

Eigen::VectorXd pchd_rhs(const PchdModel& model, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u);
Eigen::VectorXd pchd_output(const PchdModel& model, const Eigen::VectorXd& x);

} // namespace pchd

#endif // PCHD_DYNAMICS_HPP
