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

#ifndef PCHD_ENERGY_HPP
#define PCHD_ENERGY_HPP

#include <Eigen/Dense>
#include <string>

namespace pchd {

/// Storage (total energy) function V(x) together with its analytic gradient.
///
/// The built-in "planar-pendulum" family covers planar one-joint mechanisms
/// with state x = (angle, angular velocity):
///
///   V(x)    = 1/2 * kinetic_coeff * x2^2 + potential_coeff * (1 - cos x1)
///   grad(x) = (potential_coeff * sin x1, kinetic_coeff * x2)
///
/// so V(0) = 0 and V(x) > 0 away from the origin for positive coefficients.
class EnergyModel {
public:
    static EnergyModel planar_pendulum(double kinetic_coeff, double potential_coeff);

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

    int state_dim() const { return 2; }
    const std::string& family() const { return family_; }
    /// Kinetic coefficient (alpha): m*l^2 for the pendulum, the rotating
    /// inertia for the golf robot.
    double kinetic_coeff() const { return kinetic_coeff_; }
    /// Potential coefficient (beta): m*g*l for the pendulum, m*g*a for the
    /// golf robot.
    double potential_coeff() const { return potential_coeff_; }

private:
    EnergyModel(std::string family, double kinetic_coeff, double potential_coeff);

    std::string family_;
    double kinetic_coeff_;
    double potential_coeff_;
};

} // namespace pchd

#endif // PCHD_ENERGY_HPP
