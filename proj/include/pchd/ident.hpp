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

#ifndef PCHD_IDENT_HPP
#define PCHD_IDENT_HPP

#include <utility>
#include <vector>

#include "pchd/dynamics.hpp"
#include "pchd/trajectory.hpp"

namespace pchd {

/// Snapshot matrices stacked over all training trajectories, ready for the
/// least-squares operator fit. Requires at least n + p columns.
struct SnapshotDataset {
    Eigen::MatrixXd states;      ///< n x M
    Eigen::MatrixXd derivatives; ///< n x M
    Eigen::MatrixXd inputs;      ///< p x M

    Eigen::Index state_dim() const { return states.rows(); }
    Eigen::Index input_dim() const { return inputs.rows(); }
    Eigen::Index samples() const { return states.cols(); }
};

/// Horizontal concatenation of the trajectories' state, derivative and input
/// blocks, preserving per-trajectory column order. Every trajectory must
/// carry derivatives.
SnapshotDataset assemble_snapshots(const std::vector<Trajectory>& trajectories);

/// Smoothing applied before numerical differentiation of sampled series.
struct SmoothingConfig {
    enum class Method { None, MovingAverage, SavitzkyGolay };
    Method method = Method::MovingAverage;
    int window = 21;    ///< odd, >= 3; shrinks symmetrically near the ends
    int poly_order = 2; ///< Savitzky-Golay local polynomial degree
};

/// Smooths one uniformly sampled scalar series and differentiates it with
/// central differences (one-sided at the boundaries). Returns (smoothed,
/// derivative). Needs >= 5 samples; relative jitter in t beyond 1e-9 is an
/// error.
std::pair<Eigen::VectorXd, Eigen::VectorXd> estimate_derivatives(
    const Eigen::VectorXd& t, const Eigen::VectorXd& series,
    const SmoothingConfig& config = {});

/// Fills traj.derivatives by applying estimate_derivatives to each state row.
void add_estimated_derivatives(Trajectory& traj, const SmoothingConfig& config = {});

/// Energy-gradient features: column k of the result is grad V(x_k).
Eigen::MatrixXd energy_features(const EnergyModel& energy, const Eigen::MatrixXd& states);

struct FitOptions {
    double pinv_tol = 1e-12;    ///< relative singular-value cutoff
    double symmetry_tol = 1e-8; ///< forwarded to the eigendecomposition
};

/// Joint least-squares fit [K, B] ~ Xdot * pinv([features; U]).
struct FitResult {
    Eigen::MatrixXd K; ///< n x n operator acting on the energy gradient
    Eigen::MatrixXd B; ///< n x p input matrix
    double residual = 0.0; ///< ||Xdot - K*features - B*U||_F
    /// Spectrum of the symmetric part -(K + K^T)/2 before any projection.
    Eigen::VectorXd unprojected_dissipation_eigenvalues;
    bool rank_deficient = false; ///< regressor lost row rank; minimum-norm fit
    double condition_number = 0.0;
};

FitResult fit_kb(const SnapshotDataset& dataset, const Eigen::MatrixXd& features,
                 const FitOptions& options = {});

/// Full learning pipeline: assemble -> features -> fit -> skew/symmetric
/// split -> PSD projection of the dissipation matrix. Returns the passive
/// (projected) model, the raw fit with its unverified dissipation matrix,
/// and the fit diagnostics.
struct LearnResult {
    PchdModel projected;
    PchdModel unprojected;
    FitResult fit;
};

LearnResult learn_pchd(const std::vector<Trajectory>& trajectories,
                       const EnergyModel& energy, const FitOptions& options = {});

} // namespace pchd

#endif // PCHD_IDENT_HPP
