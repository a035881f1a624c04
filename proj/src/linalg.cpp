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

#include "pchd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pchd/errors.hpp"

namespace pchd::linalg {

namespace {

void require_finite(const Eigen::MatrixXd& A, const char* who) {
    if (!A.allFinite()) {
        throw InvalidInputError(std::string(who) + ": input has NaN or Inf entries");
    }
}

void require_square(const Eigen::MatrixXd& A, const char* who) {
    if (A.rows() != A.cols()) {
        throw DimensionError(std::string(who) + ": matrix is " + std::to_string(A.rows()) +
                             "x" + std::to_string(A.cols()) + ", expected square");
    }
}

// Sign convention: first component with non-negligible magnitude is positive.
void normalize_column_sign(Eigen::Ref<Eigen::VectorXd> v) {
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12 * scale) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

bool column_lex_less(const Eigen::MatrixXd& V, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < V.rows(); ++i) {
        if (V(i, a) < V(i, b)) return true;
        if (V(i, a) > V(i, b)) return false;
    }
    return false;
}

} // namespace

PinvResult pinv_with_info(const Eigen::MatrixXd& A, double rel_tol) {
    require_finite(A, "pinv");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
    const double cutoff = rel_tol * sigma_max;

    Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(sigma.size());
    Eigen::Index rank = 0;
    double sigma_min_kept = sigma_max;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma[i] > cutoff && sigma[i] > 0.0) {
            inv_sigma[i] = 1.0 / sigma[i];
            sigma_min_kept = sigma[i];
            ++rank;
        }
    }
    PinvResult result;
    result.value = svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
    result.singular_values = sigma;
    result.rank = rank;
    result.condition_number = (rank > 0) ? sigma_max / sigma_min_kept
                                         : std::numeric_limits<double>::infinity();
    return result;
}

Eigen::MatrixXd pinv(const Eigen::MatrixXd& A, double rel_tol) {
    return pinv_with_info(A, rel_tol).value;
}

SymEig sym_eig(const Eigen::MatrixXd& A, double symmetry_tol) {
    require_square(A, "sym_eig");
    require_finite(A, "sym_eig");
    const double asymmetry = (A - A.transpose()).norm();
    if (asymmetry > symmetry_tol * std::max(A.norm(), 1e-300)) {
        throw InvalidInputError("sym_eig: matrix asymmetry " + std::to_string(asymmetry) +
                                " exceeds tolerance");
    }
    const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("sym_eig: eigendecomposition failed to converge");
    }

    SymEig out;
    out.eigenvalues = solver.eigenvalues(); // ascending already
    out.eigenvectors = solver.eigenvectors();
    for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
        normalize_column_sign(out.eigenvectors.col(j));
    }

    // Stable tie-break on (eigenvalue, lexicographic eigenvector).
    std::vector<Eigen::Index> order(static_cast<size_t>(out.eigenvalues.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (out.eigenvalues[a] != out.eigenvalues[b]) {
            return out.eigenvalues[a] < out.eigenvalues[b];
        }
        return column_lex_less(out.eigenvectors, a, b);
    });
    SymEig sorted;
    sorted.eigenvalues.resize(out.eigenvalues.size());
    sorted.eigenvectors.resize(out.eigenvectors.rows(), out.eigenvectors.cols());
    for (Eigen::Index j = 0; j < out.eigenvalues.size(); ++j) {
        sorted.eigenvalues[j] = out.eigenvalues[order[static_cast<size_t>(j)]];
        sorted.eigenvectors.col(j) = out.eigenvectors.col(order[static_cast<size_t>(j)]);
    }
    return sorted;
}

Eigen::MatrixXd matrix_function(const Eigen::MatrixXd& A,
                                const std::function<double(double)>& f,
                                double symmetry_tol) {
    const SymEig eig = sym_eig(A, symmetry_tol);
    Eigen::VectorXd mapped(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < mapped.size(); ++i) {
        mapped[i] = f(eig.eigenvalues[i]);
    }
    Eigen::MatrixXd result =
        eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.transpose();
    return 0.5 * (result + result.transpose()); // enforce exact symmetry
}

Eigen::MatrixXd clip_eigenvalues(const Eigen::MatrixXd& A, double lo, double hi,
                                 double symmetry_tol) {
    if (!(lo <= hi)) {
        throw InvalidInputError("clip_eigenvalues: invalid range [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");
    }
    return matrix_function(
        A, [lo, hi](double lambda) { return std::clamp(lambda, lo, hi); }, symmetry_tol);
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& A, double symmetry_tol) {
    return clip_eigenvalues(A, 0.0, kInf, symmetry_tol);
}

SkewSymSplit split_skew_sym(const Eigen::MatrixXd& K) {
    require_square(K, "split_skew_sym");
    require_finite(K, "split_skew_sym");
    SkewSymSplit out;
    out.skew = 0.5 * (K - K.transpose());
    out.sym = -0.5 * (K + K.transpose());
    return out;
}

} // namespace pchd::linalg
