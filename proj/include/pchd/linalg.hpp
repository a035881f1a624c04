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

#ifndef PCHD_LINALG_HPP
#define PCHD_LINALG_HPP

#include <Eigen/Dense>
#include <functional>
#include <limits>

namespace pchd::linalg {

/// Eigendecomposition of a real symmetric matrix: A = V diag(lambda) V^T.
/// Eigenvalues are sorted ascending; ties are broken by lexicographic order
/// of the eigenvector columns. Each column is sign-normalized so that its
/// first significant component is positive, which makes the output
/// deterministic for golden tests.
struct SymEig {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

/// Moore-Penrose pseudo-inverse via SVD. Singular values below
/// rel_tol * sigma_max are treated as zero.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& A, double rel_tol = 1e-12);

/// pinv plus the diagnostics needed by least-squares callers.
struct PinvResult {
    Eigen::MatrixXd value;
    Eigen::VectorXd singular_values; ///< descending, full list
    Eigen::Index rank;               ///< count of singular values above cutoff
    double condition_number;         ///< sigma_max / sigma_min over kept values
};
PinvResult pinv_with_info(const Eigen::MatrixXd& A, double rel_tol = 1e-12);

/// Symmetric eigendecomposition. The input is symmetrized as (A + A^T)/2
/// before decomposition; asymmetry beyond symmetry_tol * ||A||_F is an error.
SymEig sym_eig(const Eigen::MatrixXd& A, double symmetry_tol = 1e-8);

/// f(A) = V diag(f(lambda_1), ..., f(lambda_n)) V^T for symmetric A.
Eigen::MatrixXd matrix_function(const Eigen::MatrixXd& A,
                                const std::function<double(double)>& f,
                                double symmetry_tol = 1e-8);

/// Shifts every eigenvalue of symmetric A into [lo, hi], keeping the
/// eigenvectors. hi may be +infinity. Idempotent.
Eigen::MatrixXd clip_eigenvalues(const Eigen::MatrixXd& A, double lo, double hi,
                                 double symmetry_tol = 1e-8);

/// Nearest (Frobenius) positive semi-definite matrix: negative eigenvalues
/// are clipped to zero.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& A, double symmetry_tol = 1e-8);

/// Unique decomposition K = skew - sym with skew = (K - K^T)/2 exactly
/// skew-symmetric and sym = -(K + K^T)/2 exactly symmetric.
struct SkewSymSplit {
    Eigen::MatrixXd skew; ///< J in a PCHD model
    Eigen::MatrixXd sym;  ///< D in a PCHD model
};
SkewSymSplit split_skew_sym(const Eigen::MatrixXd& K);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace pchd::linalg

#endif // PCHD_LINALG_HPP
