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

#include "pchd/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "pchd/errors.hpp"

namespace pchd {

namespace {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& field, const std::filesystem::path& path,
                    size_t line_number) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw DataError(path.string() + ":" + std::to_string(line_number) +
                        ": cannot parse number '" + field + "'");
    }
    return value;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& value, Eigen::Index rows, Eigen::Index cols,
                                 const std::string& name,
                                 const std::filesystem::path& path) {
    if (!value.is_array() || value.size() != static_cast<size_t>(rows)) {
        throw DataError(path.string() + ": field '" + name + "' must be a " +
                        std::to_string(rows) + "x" + std::to_string(cols) + " array");
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = value[static_cast<size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<size_t>(cols)) {
            throw DataError(path.string() + ": field '" + name + "' must be a " +
                            std::to_string(rows) + "x" + std::to_string(cols) + " array");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            const json& cell = row[static_cast<size_t>(j)];
            if (!cell.is_number()) {
                throw DataError(path.string() + ": field '" + name +
                                "' has a non-numeric entry");
            }
            m(i, j) = cell.get<double>();
        }
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const json& value) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(value.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = value[static_cast<size_t>(i)].get<double>();
    }
    return v;
}

} // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
    trajectory.validate();
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");

    const Eigen::Index n = trajectory.state_dim();
    const Eigen::Index p = trajectory.input_dim();
    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) out << ",x" << (i + 1);
    for (Eigen::Index i = 0; i < p; ++i) out << ",u" << (i + 1);
    if (trajectory.derivatives) {
        for (Eigen::Index i = 0; i < n; ++i) out << ",dx" << (i + 1);
    }
    out << "\n";

    for (Eigen::Index k = 0; k < trajectory.samples(); ++k) {
        out << format_double(trajectory.t[k]);
        for (Eigen::Index i = 0; i < n; ++i)
            out << ',' << format_double(trajectory.states(i, k));
        for (Eigen::Index i = 0; i < p; ++i)
            out << ',' << format_double(trajectory.inputs(i, k));
        if (trajectory.derivatives) {
            for (Eigen::Index i = 0; i < n; ++i)
                out << ',' << format_double((*trajectory.derivatives)(i, k));
        }
        out << "\n";
    }
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError(path.string() + ":1: empty file");
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "t") {
        throw DataError(path.string() + ":1: header must start with 't'");
    }

    // header layout: t, x1..xn, u1..up, optionally dx1..dxn
    size_t idx = 1;
    Eigen::Index n = 0;
    while (idx < header.size() && header[idx] == "x" + std::to_string(n + 1)) {
        ++n;
        ++idx;
    }
    Eigen::Index p = 0;
    while (idx < header.size() && header[idx] == "u" + std::to_string(p + 1)) {
        ++p;
        ++idx;
    }
    Eigen::Index d = 0;
    while (idx < header.size() && header[idx] == "dx" + std::to_string(d + 1)) {
        ++d;
        ++idx;
    }
    if (n == 0 || p == 0 || idx != header.size() || (d != 0 && d != n)) {
        throw DataError(path.string() +
                        ":1: header must be t,x1..xn,u1..up[,dx1..dxn], got '" + line + "'");
    }
    const bool has_derivatives = d > 0;
    const size_t expected_fields = header.size();

    std::vector<std::vector<double>> rows;
    size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != expected_fields) {
            throw DataError(path.string() + ":" + std::to_string(line_number) +
                            ": expected " + std::to_string(expected_fields) +
                            " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> row(fields.size());
        for (size_t i = 0; i < fields.size(); ++i) {
            row[i] = parse_double(fields[i], path, line_number);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path.string() + ": no data rows");

    const auto m = static_cast<Eigen::Index>(rows.size());
    Trajectory traj;
    traj.t.resize(m);
    traj.states.resize(n, m);
    traj.inputs.resize(p, m);
    if (has_derivatives) traj.derivatives = Eigen::MatrixXd(n, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto& row = rows[static_cast<size_t>(k)];
        size_t col = 0;
        traj.t[k] = row[col++];
        for (Eigen::Index i = 0; i < n; ++i) traj.states(i, k) = row[col++];
        for (Eigen::Index i = 0; i < p; ++i) traj.inputs(i, k) = row[col++];
        if (has_derivatives) {
            for (Eigen::Index i = 0; i < n; ++i) (*traj.derivatives)(i, k) = row[col++];
        }
    }
    try {
        traj.validate();
    } catch (const std::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return traj;
}

void write_model_json(const std::filesystem::path& path, const PchdModel& model,
                      const ModelMeta& meta) {
    json doc;
    doc["n"] = model.state_dim();
    doc["p"] = model.input_dim();
    doc["J"] = matrix_to_json(model.J);
    doc["D"] = matrix_to_json(model.D);
    doc["B"] = matrix_to_json(model.B);
    doc["energy"] = {{"family", model.energy.family()},
                     {"alpha", model.energy.kinetic_coeff()},
                     {"beta", model.energy.potential_coeff()}};
    doc["projected"] = model.projected;
    doc["meta"] = {{"residual", meta.residual},
                   {"eigenvalues",
                    {{"unprojected", vector_to_json(meta.unprojected_eigenvalues)},
                     {"projected", vector_to_json(meta.projected_eigenvalues)}}},
                   {"seed", meta.seed},
                   {"version", meta.version}};

    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out << doc.dump(2) << "\n";
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

LoadedModel read_model_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }

    try {
        for (const char* key : {"n", "p", "J", "D", "B", "energy", "projected"}) {
            if (!doc.contains(key)) {
                throw DataError(path.string() + ": missing field '" + key + "'");
            }
        }
        const auto n = doc["n"].get<Eigen::Index>();
        const auto p = doc["p"].get<Eigen::Index>();
        if (n < 1 || p < 1) throw DataError(path.string() + ": n and p must be >= 1");

        const json& energy = doc["energy"];
        if (!energy.contains("family") || energy["family"] != "planar-pendulum") {
            throw DataError(path.string() + ": unknown energy family");
        }
        PchdModel model{matrix_from_json(doc["J"], n, n, "J", path),
                        matrix_from_json(doc["D"], n, n, "D", path),
                        matrix_from_json(doc["B"], n, p, "B", path),
                        EnergyModel::planar_pendulum(energy["alpha"].get<double>(),
                                                     energy["beta"].get<double>()),
                        doc["projected"].get<bool>()};
        try {
            model.validate();
        } catch (const std::exception& e) {
            throw DataError(path.string() + ": invalid model: " + e.what());
        }

        ModelMeta meta;
        if (doc.contains("meta")) {
            const json& m = doc["meta"];
            meta.residual = m.value("residual", 0.0);
            meta.seed = m.value("seed", std::uint64_t{0});
            meta.version = m.value("version", "");
            if (m.contains("eigenvalues")) {
                const json& eigs = m["eigenvalues"];
                if (eigs.contains("unprojected")) {
                    meta.unprojected_eigenvalues = vector_from_json(eigs["unprojected"]);
                }
                if (eigs.contains("projected")) {
                    meta.projected_eigenvalues = vector_from_json(eigs["projected"]);
                }
            }
        }
        return LoadedModel{std::move(model), std::move(meta)};
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

} // namespace pchd
