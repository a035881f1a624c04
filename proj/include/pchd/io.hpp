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

#ifndef PCHD_IO_HPP
#define PCHD_IO_HPP

#include <filesystem>
#include <string>

#include "pchd/dynamics.hpp"
#include "pchd/trajectory.hpp"

namespace pchd {

/// Trajectory CSV schema: header `t,x1,...,xn,u1,...,up[,dx1,...,dxn]`,
/// one sample per row, plain decimal numbers at 17 significant digits so a
/// read-back reproduces every value bit-exactly.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Provenance block stored under "meta" in model files.
struct ModelMeta {
    double residual = 0.0;
    Eigen::VectorXd unprojected_eigenvalues; ///< spectrum of D before projection
    Eigen::VectorXd projected_eigenvalues;   ///< spectrum of D after projection
    std::uint64_t seed = 0;
    std::string version;
};

/// Model JSON schema: object with fields n, p, J, D, B (row-major nested
/// arrays), energy {family, alpha, beta}, projected (bool), meta.
void write_model_json(const std::filesystem::path& path, const PchdModel& model,
                      const ModelMeta& meta);

struct LoadedModel {
    PchdModel model;
    ModelMeta meta;
};
LoadedModel read_model_json(const std::filesystem::path& path);

} // namespace pchd

#endif // PCHD_IO_HPP
