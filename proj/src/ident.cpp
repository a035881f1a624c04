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

#include "pchd/ident.hpp"

#include <cmath>
#include <string>

#include "pchd/errors.hpp"
#include "pchd/linalg.hpp"

namespace pchd {

namespace {

void require_uniform_sampling(const Eigen::VectorXd& t) {
    if (t.size() < 2) return;
    const double dt = t[1] - t[0];
    for (Eigen::Index k = 1; k + 1 < t.size(); ++k) {
        const double step = t[k + 1] - t[k];
        if (std::abs(step - dt) > 1e-9 * std::max(std::abs(dt), 1.0)) {
            throw InvalidInputError(
                "estimate_derivatives: non-uniform sampling at index " + std::to_string(k));
        }
    }
}

// Least-squares polynomial filter value at the window center. offsets are the
// integer sample offsets inside the (possibly shrunk) window.
double savgol_center_value(const Eigen::VectorXd& series, Eigen::Index center,
                           Eigen::Index half_width, int poly_order) {
    const Eigen::Index w = 2 * half_width + 1;
    const int order = std::min<int>(poly_order, static_cast<int>(w) - 1);
    Eigen::MatrixXd vandermonde(w, order + 1);
    Eigen::VectorXd values(w);
    for (Eigen::Index i = 0; i < w; ++i) {
        const double offset = static_cast<double>(i - half_width);
        double power = 1.0;
        for (int j = 0; j <= order; ++j) {
            vandermonde(i, j) = power;
            power *= offset;
        }
        values[i] = series[center - half_width + i];
    }
    // constant coefficient of the local fit = smoothed center value
    const Eigen::VectorXd coeffs =
        vandermonde.colPivHouseholderQr().solve(values);
    return coeffs[0];
}

Eigen::VectorXd smooth_series(const Eigen::VectorXd& series, const SmoothingConfig& config) {
    if (config.method == SmoothingConfig::Method::None) return series;
    if (config.window < 3 || config.window % 2 == 0) {
        throw InvalidInputError("SmoothingConfig: window must be odd and >= 3");
    }
    const Eigen::Index m = series.size();
    const Eigen::Index half = (config.window - 1) / 2;
    Eigen::VectorXd smoothed(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index h = std::min({half, k, m - 1 - k});
        if (h == 0) {
            smoothed[k] = series[k];
        } else if (config.method == SmoothingConfig::Method::MovingAverage) {
            smoothed[k] = series.segment(k - h, 2 * h + 1).mean();
        } else {
            smoothed[k] = savgol_center_value(series, k, h, config.poly_order);
        }
    }
    return smoothed;
}

} // namespace

SnapshotDataset assemble_snapshots(const std::vector<Trajectory>& trajectories) {
    if (trajectories.empty()) {
        throw InvalidInputError("assemble_snapshots: no trajectories given");
    }
    const Eigen::Index n = trajectories.front().state_dim();
    const Eigen::Index p = trajectories.front().input_dim();
    Eigen::Index total = 0;
    for (size_t i = 0; i < trajectories.size(); ++i) {
        const Trajectory& traj = trajectories[i];
        traj.validate();
        if (traj.state_dim() != n || traj.input_dim() != p) {
            throw DimensionError("assemble_snapshots: trajectory " + std::to_string(i) +
                                 " has mismatched dimensions");
        }
        if (!traj.derivatives) {
            throw DataError("assemble_snapshots: trajectory " + std::to_string(i) +
                            " has no derivative samples; estimate them first");
        }
        total += traj.samples();
    }
    if (total < n + p) {
        throw InvalidInputError("assemble_snapshots: need at least n + p = " +
                                std::to_string(n + p) + " columns, got " +
                                std::to_string(total));
    }

    SnapshotDataset data;
    data.states.resize(n, total);
    data.derivatives.resize(n, total);
    data.inputs.resize(p, total);
    Eigen::Index offset = 0;
    for (const Trajectory& traj : trajectories) {
        const Eigen::Index m = traj.samples();
        data.states.middleCols(offset, m) = traj.states;
        data.derivatives.middleCols(offset, m) = *traj.derivatives;
        data.inputs.middleCols(offset, m) = traj.inputs;
        offset += m;
    }
    return data;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> estimate_derivatives(
    const Eigen::VectorXd& t, const Eigen::VectorXd& series,
    const SmoothingConfig& config) {
    if (t.size() != series.size()) {
        throw DimensionError("estimate_derivatives: t and series sizes differ");
    }
    if (t.size() < 5) {
        throw InvalidInputError("estimate_derivatives: need at least 5 samples");
    }
    require_uniform_sampling(t);

    const Eigen::VectorXd smoothed = smooth_series(series, config);
    const Eigen::Index m = t.size();
    Eigen::VectorXd derivative(m);
    derivative[0] = (smoothed[1] - smoothed[0]) / (t[1] - t[0]);
    derivative[m - 1] = (smoothed[m - 1] - smoothed[m - 2]) / (t[m - 1] - t[m - 2]);
    for (Eigen::Index k = 1; k + 1 < m; ++k) {
        derivative[k] = (smoothed[k + 1] - smoothed[k - 1]) / (t[k + 1] - t[k - 1]);
    }
    return {smoothed, derivative};
}

void add_estimated_derivatives(Trajectory& traj, const SmoothingConfig& config) {
    traj.validate();
    Eigen::MatrixXd derivatives(traj.state_dim(), traj.samples());
    for (Eigen::Index i = 0; i < traj.state_dim(); ++i) {
        auto [smoothed, derivative] =
            estimate_derivatives(traj.t, traj.states.row(i).transpose(), config);
        (void)smoothed;
        derivatives.row(i) = derivative.transpose();
    }
    traj.derivatives = derivatives;
}

Eigen::MatrixXd energy_features(const EnergyModel& energy, const Eigen::MatrixXd& states) {
    if (states.rows() != energy.state_dim()) {
        throw DimensionError("energy_features: state dimension does not match the family");
    }
    if (!states.allFinite()) {
        throw InvalidInputError("energy_features: states contain NaN or Inf");
    }
    Eigen::MatrixXd features(states.rows(), states.cols());
    for (Eigen::Index k = 0; k < states.cols(); ++k) {
        features.col(k) = energy.gradient(states.col(k));
    }
    return features;
}

FitResult fit_kb(const SnapshotDataset& dataset, const Eigen::MatrixXd& features,
                 const FitOptions& options) {
    const Eigen::Index n = dataset.state_dim();
    const Eigen::Index p = dataset.input_dim();
    const Eigen::Index m = dataset.samples();
    if (features.rows() != n || features.cols() != m) {
        throw DimensionError("fit_kb: feature block must be n x M");
    }
    if (m < n + p) {
        throw InvalidInputError("fit_kb: need at least n + p columns");
    }

    Eigen::MatrixXd regressor(n + p, m);
    regressor.topRows(n) = features;
    regressor.bottomRows(p) = dataset.inputs;

    const auto pinv = linalg::pinv_with_info(regressor, options.pinv_tol);
    const Eigen::MatrixXd stacked = dataset.derivatives * pinv.value; // n x (n+p)

    FitResult result;
    result.K = stacked.leftCols(n);
    result.B = stacked.rightCols(p);
    result.residual =
        (dataset.derivatives - result.K * features - result.B * dataset.inputs).norm();
    result.rank_deficient = pinv.rank < n + p;
    result.condition_number = pinv.condition_number;
    const Eigen::MatrixXd sym_part = -0.5 * (result.K + result.K.transpose());
    result.unprojected_dissipation_eigenvalues =
        linalg::sym_eig(sym_part, options.symmetry_tol).eigenvalues;
    return result;
}

LearnResult learn_pchd(const std::vector<Trajectory>& trajectories,
                       const EnergyModel& energy, const FitOptions& options) {
    const SnapshotDataset dataset = assemble_snapshots(trajectories);
    const Eigen::MatrixXd features = energy_features(energy, dataset.states);
    FitResult fit = fit_kb(dataset, features, options);

    const auto split = linalg::split_skew_sym(fit.K);
    const Eigen::MatrixXd projected_D =
        linalg::psd_project(split.sym, options.symmetry_tol);

    LearnResult result{PchdModel{split.skew, projected_D, fit.B, energy, true},
                       PchdModel{split.skew, split.sym, fit.B, energy, false},
                       std::move(fit)};
    result.projected.validate();
    result.unprojected.validate();
    return result;
}

} // namespace pchd
