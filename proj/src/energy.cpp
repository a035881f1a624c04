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

#include "pchd/energy.hpp"

#include <cmath>
#include <utility>

#include "pchd/errors.hpp"

namespace pchd {

EnergyModel::EnergyModel(std::string family, double kinetic_coeff, double potential_coeff)
    : family_(std::move(family)),
      kinetic_coeff_(kinetic_coeff),
      potential_coeff_(potential_coeff) {}

EnergyModel EnergyModel::planar_pendulum(double kinetic_coeff, double potential_coeff) {
    if (!(kinetic_coeff > 0.0) || !(potential_coeff > 0.0)) {
        throw InvalidInputError("EnergyModel: coefficients must be strictly positive");
    }
    return EnergyModel("planar-pendulum", kinetic_coeff, potential_coeff);
}

double EnergyModel::value(const Eigen::VectorXd& x) const {
    if (x.size() != 2) {
        throw DimensionError("EnergyModel: planar-pendulum family expects a 2-vector");
    }
    return 0.5 * kinetic_coeff_ * x[1] * x[1] +
           potential_coeff_ * (1.0 - std::cos(x[0]));
}

Eigen::VectorXd EnergyModel::gradient(const Eigen::VectorXd& x) const {
    if (x.size() != 2) {
        throw DimensionError("EnergyModel: planar-pendulum family expects a 2-vector");
    }
    Eigen::VectorXd g(2);
    g[0] = potential_coeff_ * std::sin(x[0]);
    g[1] = kinetic_coeff_ * x[1];
    return g;
}

} // namespace pchd
