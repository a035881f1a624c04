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

#ifndef PCHD_TRAJECTORY_HPP
#define PCHD_TRAJECTORY_HPP

#include <Eigen/Dense>
#include <optional>

#include "pchd/errors.hpp"

namespace pchd {

/// Time-stamped state/input samples, one column per sample. Derivative
/// samples are optional; identification requires them (either recorded by
/// the simulator or estimated offline).
struct Trajectory {
    Eigen::VectorXd t;                          ///< strictly increasing, [s]
    Eigen::MatrixXd states;                     ///< n x M
    Eigen::MatrixXd inputs;                     ///< p x M
    std::optional<Eigen::MatrixXd> derivatives; ///< n x M

    Eigen::Index state_dim() const { return states.rows(); }
    Eigen::Index input_dim() const { return inputs.rows(); }
    Eigen::Index samples() const { return t.size(); }

    void validate() const {
        if (states.cols() != t.size() || inputs.cols() != t.size()) {
            throw DimensionError("Trajectory: column counts must match the time vector");
        }
        if (derivatives && (derivatives->rows() != states.rows() ||
                            derivatives->cols() != states.cols())) {
            throw DimensionError("Trajectory: derivative block must match the state block");
        }
        for (Eigen::Index k = 0; k + 1 < t.size(); ++k) {
            if (!(t[k + 1] > t[k])) {
                throw InvalidInputError("Trajectory: time vector must be strictly increasing");
            }
        }
    }
};

} // namespace pchd

#endif // PCHD_TRAJECTORY_HPP
