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

#ifndef PCHD_EDMDC_HPP
#define PCHD_EDMDC_HPP

#include <functional>
#include <string>
#include <vector>

#include "pchd/trajectory.hpp"

namespace pchd {

/// One scalar dictionary function. Observables that reproduce a state
/// component verbatim set identity_index to that component; the prediction
/// read-out requires one such observable per state component.
struct Observable {
    std::string name;
    std::function<double(const Eigen::VectorXd&)> fn;
    int identity_index = -1;
};

/// The identity dictionary {x_1, ..., x_n}.
std::vector<Observable> identity_observables(Eigen::Index n);

/// Lifts every state column through the dictionary: result is N x M.
Eigen::MatrixXd lift_states(const std::vector<Observable>& observables,
                            const Eigen::MatrixXd& states);

/// Discrete-time lifted model Psi(x_{k+1}) ~ K Psi(x_k) + B u_k learned by
/// least squares over snapshot pairs. Pairs never cross trajectory
/// boundaries, and all trajectories must share one uniform sampling step.
struct EdmdcModel {
    Eigen::MatrixXd K; ///< N x N lifted transition operator
    Eigen::MatrixXd B; ///< N x p lifted input matrix
    double dt = 0.0;   ///< sampling step the model was learned at
};

EdmdcModel edmdc_fit(const std::vector<Trajectory>& trajectories,
                     const std::vector<Observable>& observables,
                     double pinv_tol = 1e-12);

/// Open-loop recursion in the lifted space from Psi(x0). states are read out
/// of the identity coordinates of the dictionary.
struct EdmdcPrediction {
    Eigen::MatrixXd lifted; ///< N x (steps + 1)
    Eigen::MatrixXd states; ///< n x (steps + 1)
};

EdmdcPrediction edmdc_predict(const EdmdcModel& model,
                              const std::vector<Observable>& observables,
                              const Eigen::VectorXd& x0, const Eigen::MatrixXd& inputs,
                              Eigen::Index steps);

} // namespace pchd

#endif // PCHD_EDMDC_HPP
