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

#include "pchd/edmdc.hpp"

#include <cmath>
#include <string>

#include "pchd/errors.hpp"
#include "pchd/linalg.hpp"

namespace pchd {

std::vector<Observable> identity_observables(Eigen::Index n) {
    std::vector<Observable> out;
    out.reserve(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        out.push_back(Observable{"x" + std::to_string(i + 1),
                                 [i](const Eigen::VectorXd& x) { return x[i]; },
                                 static_cast<int>(i)});
    }
    return out;
}

Eigen::MatrixXd lift_states(const std::vector<Observable>& observables,
                            const Eigen::MatrixXd& states) {
    Eigen::MatrixXd lifted(static_cast<Eigen::Index>(observables.size()), states.cols());
    for (Eigen::Index k = 0; k < states.cols(); ++k) {
        const Eigen::VectorXd x = states.col(k);
        for (size_t i = 0; i < observables.size(); ++i) {
            lifted(static_cast<Eigen::Index>(i), k) = observables[i].fn(x);
        }
    }
    return lifted;
}

EdmdcModel edmdc_fit(const std::vector<Trajectory>& trajectories,
                     const std::vector<Observable>& observables, double pinv_tol) {
    if (trajectories.empty()) throw InvalidInputError("edmdc_fit: no trajectories given");
    if (observables.empty()) throw InvalidInputError("edmdc_fit: empty dictionary");

    const Eigen::Index p = trajectories.front().input_dim();
    double dt = 0.0;
    Eigen::Index pairs = 0;
    for (size_t i = 0; i < trajectories.size(); ++i) {
        const Trajectory& traj = trajectories[i];
        traj.validate();
        if (traj.samples() < 2) {
            throw InvalidInputError("edmdc_fit: trajectory " + std::to_string(i) +
                                    " has fewer than 2 samples");
        }
        if (traj.input_dim() != p) {
            throw DimensionError("edmdc_fit: input dimension mismatch across trajectories");
        }
        const double step = traj.t[1] - traj.t[0];
        if (dt == 0.0) dt = step;
        for (Eigen::Index k = 0; k + 1 < traj.samples(); ++k) {
            if (std::abs((traj.t[k + 1] - traj.t[k]) - dt) > 1e-9 * std::max(dt, 1.0)) {
                throw InvalidInputError(
                    "edmdc_fit: trajectories must share one uniform sampling step");
            }
        }
        pairs += traj.samples() - 1;
    }

    const auto N = static_cast<Eigen::Index>(observables.size());
    Eigen::MatrixXd lifted_now(N, pairs);
    Eigen::MatrixXd lifted_next(N, pairs);
    Eigen::MatrixXd inputs(p, pairs);
    Eigen::Index offset = 0;
    for (const Trajectory& traj : trajectories) {
        const Eigen::Index m = traj.samples() - 1;
        const Eigen::MatrixXd lifted = lift_states(observables, traj.states);
        lifted_now.middleCols(offset, m) = lifted.leftCols(m);
        lifted_next.middleCols(offset, m) = lifted.rightCols(m);
        inputs.middleCols(offset, m) = traj.inputs.leftCols(m);
        offset += m;
    }

    Eigen::MatrixXd regressor(N + p, pairs);
    regressor.topRows(N) = lifted_now;
    regressor.bottomRows(p) = inputs;
    const Eigen::MatrixXd stacked = lifted_next * linalg::pinv(regressor, pinv_tol);

    EdmdcModel model;
    model.K = stacked.leftCols(N);
    model.B = stacked.rightCols(p);
    model.dt = dt;
    return model;
}

EdmdcPrediction edmdc_predict(const EdmdcModel& model,
                              const std::vector<Observable>& observables,
                              const Eigen::VectorXd& x0, const Eigen::MatrixXd& inputs,
                              Eigen::Index steps) {
    const auto N = static_cast<Eigen::Index>(observables.size());
    if (model.K.rows() != N || model.K.cols() != N) {
        throw DimensionError("edmdc_predict: dictionary size does not match the operator");
    }
    if (inputs.rows() != model.B.cols() || inputs.cols() < steps) {
        throw DimensionError("edmdc_predict: need one input column per step");
    }

    // read-out map: identity coordinate per state component
    const Eigen::Index n = x0.size();
    std::vector<Eigen::Index> readout(static_cast<size_t>(n), -1);
    for (size_t i = 0; i < observables.size(); ++i) {
        const int idx = observables[i].identity_index;
        if (idx >= 0 && idx < n && readout[static_cast<size_t>(idx)] < 0) {
            readout[static_cast<size_t>(idx)] = static_cast<Eigen::Index>(i);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (readout[static_cast<size_t>(i)] < 0) {
            throw InvalidInputError(
                "edmdc_predict: dictionary lacks an identity observable for state " +
                std::to_string(i + 1) + "; state read-out unavailable");
        }
    }

    EdmdcPrediction pred;
    pred.lifted.resize(N, steps + 1);
    pred.states.resize(n, steps + 1);
    Eigen::VectorXd z(N);
    for (size_t i = 0; i < observables.size(); ++i) {
        z[static_cast<Eigen::Index>(i)] = observables[i].fn(x0);
    }
    for (Eigen::Index k = 0; k <= steps; ++k) {
        pred.lifted.col(k) = z;
        for (Eigen::Index i = 0; i < n; ++i) {
            pred.states(i, k) = z[readout[static_cast<size_t>(i)]];
        }
        if (k < steps) {
            z = model.K * z + model.B * inputs.col(k);
        }
    }
    return pred;
}

} // namespace pchd
