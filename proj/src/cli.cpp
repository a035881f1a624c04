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

#include "pchd/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pchd/errors.hpp"
#include "pchd/eval.hpp"
#include "pchd/ident.hpp"
#include "pchd/io.hpp"
#include "pchd/linalg.hpp"
#include "pchd/simulate.hpp"

#ifndef PCHDKIT_VERSION
#define PCHDKIT_VERSION "0.0.0"
#endif

namespace pchd {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string format_short(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

// ---------------------------------------------------------------------------
// JSON config files: flat keys address global options, nested objects address
// subcommand options, e.g. {"seed": 3, "generate": {"count": 5}}.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool,
                          std::string) const override {
        json doc = json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
            const std::string name = opt->get_lnames()[0];
            if (!opt->results().empty()) {
                doc[name] = opt->results().size() == 1 ? json(opt->results()[0])
                                                       : json(opt->results());
            } else if (default_also && !opt->get_default_str().empty()) {
                doc[name] = opt->get_default_str();
            }
        }
        return doc.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json doc;
        try {
            input >> doc;
        } catch (const json::parse_error& e) {
            throw CLI::ConfigError(std::string("config file is not valid JSON: ") +
                                   e.what());
        }
        if (!doc.is_object()) {
            throw CLI::ConfigError("config file must hold a JSON object");
        }
        std::vector<CLI::ConfigItem> items;
        collect(doc, {}, items);
        return items;
    }

private:
    static std::string scalar(const json& value) {
        if (value.is_string()) return value.get<std::string>();
        if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
        return value.dump();
    }

    static void collect(const json& obj, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (it.value().is_object()) {
                auto nested = parents;
                nested.push_back(it.key());
                collect(it.value(), std::move(nested), items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it.value().is_array()) {
                for (const json& v : it.value()) item.inputs.push_back(scalar(v));
            } else {
                item.inputs.push_back(scalar(it.value()));
            }
            items.push_back(std::move(item));
        }
    }
};

// ---------------------------------------------------------------------------
// option bundles

struct SignalOptions {
    std::string kind;
    double amplitude = 1.0;
    double low = -1.0;
    double high = 1.0;
    double hold = 0.1;
    double frequency = 1.0;
    double freq_start = 0.1;
    double freq_end = 2.0;
    double sweep_duration = 1.0;
    double step_time = 0.0;
};

void add_signal_options(CLI::App* cmd, SignalOptions& opts) {
    cmd->add_option("--signal", opts.kind, "signal kind: zero|step|sine|chirp|pwc")
        ->check(CLI::IsMember({"zero", "step", "sine", "chirp", "pwc"}));
    cmd->add_option("--amplitude", opts.amplitude, "step/sine/chirp amplitude");
    cmd->add_option("--low", opts.low, "piecewise-constant lower bound");
    cmd->add_option("--high", opts.high, "piecewise-constant upper bound");
    cmd->add_option("--hold", opts.hold, "piecewise-constant hold duration [s]");
    cmd->add_option("--frequency", opts.frequency, "sine frequency [Hz]");
    cmd->add_option("--freq-start", opts.freq_start, "chirp start frequency [Hz]");
    cmd->add_option("--freq-end", opts.freq_end, "chirp end frequency [Hz]");
    cmd->add_option("--sweep-duration", opts.sweep_duration, "chirp sweep time [s]");
    cmd->add_option("--step-time", opts.step_time, "step turn-on time [s]");
}

SignalSpec to_signal_spec(const SignalOptions& opts, std::uint64_t seed, int channels) {
    SignalSpec spec;
    try {
        spec.kind = SignalSpec::kind_from_string(opts.kind);
    } catch (const InvalidInputError& e) {
        throw UsageError(e.what());
    }
    spec.channels = channels;
    spec.amplitude = opts.amplitude;
    spec.low = opts.low;
    spec.high = opts.high;
    spec.hold = opts.hold;
    spec.frequency = opts.frequency;
    spec.freq_start = opts.freq_start;
    spec.freq_end = opts.freq_end;
    spec.sweep_duration = opts.sweep_duration;
    spec.step_time = opts.step_time;
    spec.seed = seed;
    try {
        spec.validate();
    } catch (const InvalidInputError& e) {
        throw UsageError(e.what());
    }
    return spec;
}

std::map<std::string, double> parse_param_overrides(const std::vector<std::string>& items) {
    std::map<std::string, double> overrides;
    for (const std::string& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("--param expects name=value, got '" + item + "'");
        }
        const std::string name = item.substr(0, eq);
        char* end = nullptr;
        const std::string value_str = item.substr(eq + 1);
        const double value = std::strtod(value_str.c_str(), &end);
        if (end == value_str.c_str() || *end != '\0') {
            throw UsageError("--param " + name + ": cannot parse value '" + value_str + "'");
        }
        overrides[name] = value;
    }
    return overrides;
}

PendulumParams pendulum_params_from(std::map<std::string, double> overrides) {
    PendulumParams p;
    for (const auto& [name, value] : overrides) {
        if (name == "m") p.mass = value;
        else if (name == "l") p.length = value;
        else if (name == "g") p.gravity = value;
        else if (name == "d") p.damping = value;
        else throw UsageError("unknown pendulum parameter '" + name +
                              "' (valid names: m, l, g, d)");
    }
    try {
        p.validate();
    } catch (const InvalidInputError& e) {
        throw UsageError(e.what());
    }
    return p;
}

GolfRobotParams golf_params_from(std::map<std::string, double> overrides) {
    GolfRobotParams p;
    for (const auto& [name, value] : overrides) {
        if (name == "m") p.mass = value;
        else if (name == "J") p.inertia = value;
        else if (name == "g") p.gravity = value;
        else if (name == "a") p.com_distance = value;
        else if (name == "d") p.damping = value;
        else if (name == "r") p.friction_radius = value;
        else if (name == "mu") p.friction_coeff = value;
        else throw UsageError("unknown golf-robot parameter '" + name +
                              "' (valid names: m, J, g, a, d, r, mu)");
    }
    try {
        p.validate();
    } catch (const InvalidInputError& e) {
        throw UsageError(e.what());
    }
    return p;
}

json signal_to_json(const SignalSpec& spec) {
    json out;
    out["kind"] = SignalSpec::kind_to_string(spec.kind);
    switch (spec.kind) {
        case SignalSpec::Kind::Zero:
            break;
        case SignalSpec::Kind::Step:
            out["amplitude"] = spec.amplitude;
            out["step_time"] = spec.step_time;
            break;
        case SignalSpec::Kind::Sine:
            out["amplitude"] = spec.amplitude;
            out["frequency"] = spec.frequency;
            break;
        case SignalSpec::Kind::Chirp:
            out["amplitude"] = spec.amplitude;
            out["freq_start"] = spec.freq_start;
            out["freq_end"] = spec.freq_end;
            out["sweep_duration"] = spec.sweep_duration;
            break;
        case SignalSpec::Kind::PiecewiseConstantRandom:
            out["low"] = spec.low;
            out["high"] = spec.high;
            out["hold"] = spec.hold;
            break;
    }
    return out;
}

std::string matrix_lines(const Eigen::MatrixXd& m, const std::string& indent) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << indent << "[";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ", ";
            out << format_short(m(i, j));
        }
        out << "]\n";
    }
    return out.str();
}

std::string vector_line(const Eigen::VectorXd& v) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        out << format_short(v[i]);
    }
    return out.str();
}

Eigen::VectorXd to_vector(const std::vector<double>& values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
    return v;
}

std::vector<int> parse_components(const std::vector<int>& one_based, Eigen::Index n) {
    if (one_based.empty()) throw UsageError("--components must not be empty");
    std::vector<int> zero_based;
    for (int c : one_based) {
        if (c < 1 || c > n) {
            throw UsageError("--components: x" + std::to_string(c) +
                             " is out of range for n=" + std::to_string(n));
        }
        zero_based.push_back(c - 1);
    }
    return zero_based;
}

// ---------------------------------------------------------------------------
// subcommand payloads

struct GenerateOptions {
    std::string system = "pendulum";
    int count = 10;
    double duration = 1.0;
    std::vector<std::string> params;
    std::vector<double> ic_low;
    std::vector<double> ic_high;
    SignalOptions signal{.kind = "pwc"};
    bool keep_endpoint = false;
};

int cmd_generate(const GenerateOptions& opts, double dt, std::uint64_t seed,
                 const std::string& out) {
    if (opts.count < 1) throw UsageError("--count must be >= 1");
    if (out.empty()) throw UsageError("generate needs --out DIRECTORY");

    const auto overrides = parse_param_overrides(opts.params);
    OdeSystem system;
    BatchConfig config;
    json params_json;
    if (opts.system == "pendulum") {
        const PendulumParams p = pendulum_params_from(overrides);
        system = make_pendulum(p);
        config.ic_low = Eigen::Vector2d(-std::numbers::pi / 2.0, -2.0);
        config.ic_high = Eigen::Vector2d(std::numbers::pi / 2.0, 2.0);
        params_json = {{"m", p.mass}, {"l", p.length}, {"g", p.gravity}, {"d", p.damping}};
    } else {
        const GolfRobotParams p = golf_params_from(overrides);
        system = make_golf_robot(p);
        config.ic_low = Eigen::Vector2d::Zero();
        config.ic_high = Eigen::Vector2d::Zero();
        params_json = {{"m", p.mass},         {"J", p.inertia},
                       {"g", p.gravity},      {"a", p.com_distance},
                       {"d", p.damping},      {"r", p.friction_radius},
                       {"mu", p.friction_coeff}};
    }
    if (!opts.ic_low.empty()) {
        if (opts.ic_low.size() != 2) throw UsageError("--ic-low expects 2 values");
        config.ic_low = to_vector(opts.ic_low);
    }
    if (!opts.ic_high.empty()) {
        if (opts.ic_high.size() != 2) throw UsageError("--ic-high expects 2 values");
        config.ic_high = to_vector(opts.ic_high);
    }
    config.count = opts.count;
    config.dt = dt;
    config.duration = opts.duration;
    config.seed = seed;
    config.signal = to_signal_spec(opts.signal, seed, 1);
    config.drop_endpoint = !opts.keep_endpoint;

    const auto trajectories = simulate_batch(system, config);

    const fs::path dir(out);
    fs::create_directories(dir);
    json manifest;
    manifest["command"] = "generate";
    manifest["version"] = cli_version();
    manifest["system"] = opts.system;
    manifest["params"] = params_json;
    manifest["count"] = config.count;
    manifest["dt"] = config.dt;
    manifest["duration"] = config.duration;
    manifest["seed"] = config.seed;
    manifest["signal"] = signal_to_json(config.signal);
    manifest["ic_low"] = {config.ic_low[0], config.ic_low[1]};
    manifest["ic_high"] = {config.ic_high[0], config.ic_high[1]};
    json files = json::array();
    for (size_t i = 0; i < trajectories.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "traj_%03zu.csv", i);
        write_trajectory_csv(dir / name, trajectories[i]);
        files.push_back(name);
    }
    manifest["files"] = files;
    std::ofstream mout(dir / "manifest.json");
    if (!mout) throw DataError("cannot write manifest in '" + out + "'");
    mout << manifest.dump(2) << "\n";

    std::cout << "wrote " << trajectories.size() << " trajectories ("
              << trajectories.front().samples() << " samples each) to " << out << "\n";
    return 0;
}

struct IdentifyOptions {
    std::vector<std::string> files;
    std::string data_dir;
    std::string energy_from = "pendulum";
    std::vector<std::string> params;
    double alpha = 0.0; ///< set only when the flag is used
    double beta = 0.0;
    bool alpha_set = false;
    bool beta_set = false;
    bool estimate_derivatives = false;
    std::string smooth_method = "ma";
    int smooth_window = 21;
    int poly_order = 2;
    double pinv_tol = 1e-12;
};

std::vector<Trajectory> load_trajectories(const IdentifyOptions& opts) {
    std::vector<fs::path> paths;
    for (const std::string& f : opts.files) paths.emplace_back(f);
    if (!opts.data_dir.empty()) {
        const fs::path dir(opts.data_dir);
        std::ifstream min(dir / "manifest.json");
        if (!min) throw DataError("cannot open manifest in '" + opts.data_dir + "'");
        json manifest;
        try {
            min >> manifest;
        } catch (const json::parse_error& e) {
            throw DataError((dir / "manifest.json").string() + ": " + e.what());
        }
        if (!manifest.contains("files")) {
            throw DataError((dir / "manifest.json").string() + ": missing 'files' list");
        }
        for (const json& f : manifest["files"]) paths.push_back(dir / f.get<std::string>());
    }
    if (paths.empty()) {
        throw UsageError("identify needs trajectory files (positional or --data DIR)");
    }
    std::vector<Trajectory> trajectories;
    trajectories.reserve(paths.size());
    for (const fs::path& path : paths) trajectories.push_back(read_trajectory_csv(path));
    return trajectories;
}

EnergyModel energy_from_options(const IdentifyOptions& opts) {
    if (opts.alpha_set != opts.beta_set) {
        throw UsageError("--alpha and --beta must be given together");
    }
    try {
        if (opts.alpha_set) {
            return EnergyModel::planar_pendulum(opts.alpha, opts.beta);
        }
        const auto overrides = parse_param_overrides(opts.params);
        if (opts.energy_from == "pendulum") {
            return pendulum_energy(pendulum_params_from(overrides));
        }
        return golf_robot_energy(golf_params_from(overrides));
    } catch (const InvalidInputError& e) {
        throw UsageError(e.what());
    }
}

SmoothingConfig smoothing_from_options(const IdentifyOptions& opts) {
    SmoothingConfig config;
    if (opts.smooth_method == "none") config.method = SmoothingConfig::Method::None;
    else if (opts.smooth_method == "ma") config.method = SmoothingConfig::Method::MovingAverage;
    else if (opts.smooth_method == "savgol") config.method = SmoothingConfig::Method::SavitzkyGolay;
    else throw UsageError("--smooth-method must be none|ma|savgol");
    config.window = opts.smooth_window;
    config.poly_order = opts.poly_order;
    return config;
}

int cmd_identify(const IdentifyOptions& opts, std::uint64_t seed, const std::string& out) {
    const std::string prefix = out.empty() ? "model" : out;
    auto trajectories = load_trajectories(opts);
    if (opts.estimate_derivatives) {
        const SmoothingConfig smoothing = smoothing_from_options(opts);
        for (Trajectory& traj : trajectories) {
            if (!traj.derivatives) add_estimated_derivatives(traj, smoothing);
        }
    }
    const EnergyModel energy = energy_from_options(opts);
    FitOptions fit_options;
    fit_options.pinv_tol = opts.pinv_tol;
    const LearnResult result = learn_pchd(trajectories, energy, fit_options);

    const Eigen::VectorXd projected_eigs =
        linalg::sym_eig(result.projected.D).eigenvalues;
    ModelMeta meta{result.fit.residual, result.fit.unprojected_dissipation_eigenvalues,
                   projected_eigs, seed, cli_version()};

    const fs::path projected_path = prefix + "_projected.json";
    const fs::path unprojected_path = prefix + "_unprojected.json";
    const fs::path report_path = prefix + "_report.txt";
    if (const fs::path parent = projected_path.parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    write_model_json(projected_path, result.projected, meta);
    write_model_json(unprojected_path, result.unprojected, meta);

    std::ofstream report(report_path);
    if (!report) throw DataError("cannot open '" + report_path.string() + "' for writing");
    Eigen::Index samples = 0;
    for (const Trajectory& traj : trajectories) samples += traj.samples();
    report << "pchdkit " << cli_version() << " identification report\n"
           << "data: " << trajectories.size() << " trajectories, " << samples
           << " samples, n=" << result.projected.state_dim()
           << ", p=" << result.projected.input_dim() << "\n"
           << "energy: family=" << energy.family()
           << " alpha=" << format_short(energy.kinetic_coeff())
           << " beta=" << format_short(energy.potential_coeff()) << "\n\n"
           << "K (fit operator):\n" << matrix_lines(result.fit.K, "  ")
           << "B (input matrix):\n" << matrix_lines(result.fit.B, "  ")
           << "residual ||Xdot - K*Psi(X) - B*U||_F = "
           << format_short(result.fit.residual) << "\n"
           << "regressor condition number = "
           << format_short(result.fit.condition_number) << "\n";
    if (result.fit.rank_deficient) {
        report << "WARNING: rank-deficient regressor; minimum-norm solution returned\n";
    }
    report << "\nJ (energy flow):\n" << matrix_lines(result.projected.J, "  ")
           << "D before projection:\n" << matrix_lines(result.unprojected.D, "  ")
           << "  eigenvalues: "
           << vector_line(result.fit.unprojected_dissipation_eigenvalues) << "\n"
           << "D after projection:\n" << matrix_lines(result.projected.D, "  ")
           << "  eigenvalues: " << vector_line(projected_eigs) << "\n"
           << "projection delta ||D_proj - D||_F = "
           << format_short((result.projected.D - result.unprojected.D).norm()) << "\n";

    if (result.fit.rank_deficient) {
        std::cout << "warning: rank-deficient regressor; minimum-norm solution returned\n";
    }
    const double min_eig = result.fit.unprojected_dissipation_eigenvalues.minCoeff();
    if (min_eig < 0.0) {
        std::cout << "note: D had negative eigenvalue " << format_short(min_eig)
                  << "; projection applied\n";
    }
    std::cout << "wrote " << projected_path.string() << ", " << unprojected_path.string()
              << ", " << report_path.string() << "\n";
    return 0;
}

int cmd_project(const std::string& model_path, const std::string& out) {
    LoadedModel loaded = read_model_json(model_path);
    const Eigen::VectorXd before = linalg::sym_eig(loaded.model.D).eigenvalues;
    const Eigen::MatrixXd projected = linalg::psd_project(loaded.model.D);
    const Eigen::VectorXd after = linalg::sym_eig(projected).eigenvalues;
    const double delta = (projected - loaded.model.D).norm();

    loaded.model.D = projected;
    loaded.model.projected = true;
    loaded.meta.unprojected_eigenvalues = before;
    loaded.meta.projected_eigenvalues = after;

    const std::string target = out.empty() ? model_path : out;
    write_model_json(target, loaded.model, loaded.meta);

    std::cout << "eigenvalues before: " << vector_line(before) << "\n"
              << "eigenvalues after:  " << vector_line(after) << "\n";
    if (delta <= 1e-12) {
        std::cout << "no-op: D was already positive semi-definite\n";
    } else {
        std::cout << "projection delta ||D_proj - D||_F = " << format_short(delta) << "\n";
    }
    std::cout << "wrote " << target << "\n";
    return 0;
}

struct SimulateOptions {
    std::string system;
    std::string model_path;
    std::vector<double> x0;
    double duration = 1.0;
    SignalOptions signal{.kind = "zero"};
};

int cmd_simulate(const SimulateOptions& opts, double dt, std::uint64_t seed,
                 const std::string& out) {
    const std::string target = out.empty() ? "trajectory.csv" : out;
    if (opts.system.empty() == opts.model_path.empty()) {
        throw UsageError("simulate needs exactly one of --system or --model");
    }

    OdeSystem system;
    if (!opts.model_path.empty()) {
        system = read_model_json(opts.model_path).model.as_ode();
    } else if (opts.system == "pendulum") {
        system = make_pendulum();
    } else if (opts.system == "golf") {
        system = make_golf_robot();
    } else if (opts.system == "exp-decay") {
        system = make_exp_decay();
    } else {
        throw UsageError("unknown system '" + opts.system +
                         "' (expected pendulum|golf|exp-decay)");
    }

    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(system.state_dim);
    if (!opts.x0.empty()) {
        if (static_cast<Eigen::Index>(opts.x0.size()) != system.state_dim) {
            throw UsageError("--x0 expects " + std::to_string(system.state_dim) +
                             " comma-separated values");
        }
        x0 = to_vector(opts.x0);
    }
    const SignalSpec spec =
        to_signal_spec(opts.signal, seed, static_cast<int>(system.input_dim));
    const Trajectory traj = rk4_simulate(system, x0, Signal(spec), dt, opts.duration);
    if (const fs::path parent = fs::path(target).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    write_trajectory_csv(target, traj);
    std::cout << "wrote " << traj.samples() << " samples to " << target << "\n";
    return 0;
}

struct EvaluateOptions {
    std::string model_path;
    std::string unprojected_path;
    std::string reference_path;
    std::vector<int> components = {1};
};

int cmd_evaluate(const EvaluateOptions& opts, double substep, const std::string& out) {
    const std::string prefix = out.empty() ? "eval" : out;
    const LoadedModel projected = read_model_json(opts.model_path);
    const LoadedModel unprojected =
        opts.unprojected_path.empty() ? projected : read_model_json(opts.unprojected_path);
    const Trajectory reference = read_trajectory_csv(opts.reference_path);

    PredictionConfig config;
    config.dt = substep;
    config.components = parse_components(opts.components, reference.state_dim());

    const PredictionReport rp = predict_open_loop(projected.model, reference, config);
    const PredictionReport ru = predict_open_loop(unprojected.model, reference, config);

    const int lead = config.components.front();
    const fs::path csv_path = prefix + ".csv";
    if (const fs::path parent = csv_path.parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    std::ofstream csv(csv_path);
    if (!csv) throw DataError("cannot open '" + csv_path.string() + "' for writing");
    csv << "t,measured,predicted_projected,predicted_unprojected,e_projected,"
           "e_unprojected\n";
    for (Eigen::Index k = 0; k < reference.samples(); ++k) {
        csv << format_double(reference.t[k]) << ','
            << format_double(rp.measured(lead, k)) << ','
            << format_double(rp.predicted(lead, k)) << ','
            << format_double(ru.predicted(lead, k)) << ','
            << format_double(rp.cumulative_error[k]) << ','
            << format_double(ru.cumulative_error[k]) << "\n";
    }

    json summary;
    summary["reference"] = opts.reference_path;
    summary["model_projected"] = opts.model_path;
    summary["model_unprojected"] =
        opts.unprojected_path.empty() ? opts.model_path : opts.unprojected_path;
    summary["components"] = opts.components;
    summary["samples"] = reference.samples();
    summary["projected"] = {{"final_cumulative_error", rp.final_cumulative_error},
                            {"rms_error", rp.rms_error},
                            {"diverged", rp.diverged}};
    summary["unprojected"] = {{"final_cumulative_error", ru.final_cumulative_error},
                              {"rms_error", ru.rms_error},
                              {"diverged", ru.diverged}};
    const fs::path summary_path = prefix + "_summary.json";
    std::ofstream sout(summary_path);
    if (!sout) throw DataError("cannot open '" + summary_path.string() + "' for writing");
    sout << summary.dump(2) << "\n";

    std::cout << "final cumulative error: projected=" << format_short(rp.final_cumulative_error)
              << " unprojected=" << format_short(ru.final_cumulative_error) << "\n"
              << "wrote " << csv_path.string() << ", " << summary_path.string() << "\n";
    return 0;
}

struct SensitivityOptions {
    std::vector<std::string> shifts;
    std::vector<std::string> params;
    std::vector<double> free_swing_ic;
    double free_swing_duration = 5.0;
    double free_swing_dt = 0.01;
    std::vector<int> components = {1};
};

ShiftSpec parse_shift(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0) {
        throw UsageError("--shifts expects entries like m:+0.1 or l:-10%, got '" + text +
                         "'");
    }
    ShiftSpec shift;
    shift.parameter = text.substr(0, colon);
    std::string value = text.substr(colon + 1);
    double scale = 1.0;
    if (!value.empty() && value.back() == '%') {
        value.pop_back();
        scale = 0.01;
    }
    char* end = nullptr;
    shift.relative_shift = std::strtod(value.c_str(), &end) * scale;
    if (end == value.c_str() || *end != '\0') {
        throw UsageError("--shifts: cannot parse shift value in '" + text + "'");
    }
    return shift;
}

std::string shift_file_tag(const ShiftSpec& shift) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%s_%s%gpct", shift.parameter.c_str(),
                  shift.relative_shift < 0 ? "minus" : "plus",
                  std::abs(shift.relative_shift) * 100.0);
    return buffer;
}

int cmd_sensitivity(const SensitivityOptions& opts, std::uint64_t seed,
                    const std::string& out) {
    const std::string prefix = out.empty() ? "sensitivity" : out;

    std::vector<ShiftSpec> shifts;
    if (opts.shifts.empty()) {
        shifts = default_shift_sweep();
    } else {
        for (const std::string& text : opts.shifts) shifts.push_back(parse_shift(text));
    }

    SensitivityProtocol protocol = SensitivityProtocol::make_default(seed);
    protocol.nominal = pendulum_params_from(parse_param_overrides(opts.params));
    if (!opts.free_swing_ic.empty()) {
        if (opts.free_swing_ic.size() != 2) {
            throw UsageError("--free-swing-ic expects 2 values");
        }
        protocol.free_swing_ic = Eigen::Vector2d(opts.free_swing_ic[0], opts.free_swing_ic[1]);
    }
    protocol.free_swing_duration = opts.free_swing_duration;
    protocol.free_swing_dt = opts.free_swing_dt;
    protocol.components = parse_components(opts.components, 2);

    // validate shift names up front so typos are usage errors
    for (const ShiftSpec& shift : shifts) {
        try {
            apply_shift(protocol.nominal, shift);
        } catch (const InvalidInputError& e) {
            throw UsageError(e.what());
        }
    }

    const auto reports = sensitivity_study(protocol, shifts);

    if (const fs::path parent = fs::path(prefix + "_summary.csv").parent_path();
        !parent.empty()) {
        fs::create_directories(parent);
    }
    std::ofstream summary(prefix + "_summary.csv");
    if (!summary) throw DataError("cannot write '" + prefix + "_summary.csv'");
    summary << "parameter,relative_shift,rms,min_unprojected_eigenvalue,"
               "projection_changed\n";
    std::cout << "parameter  shift      free-swing RMS\n";
    for (const ShiftReport& report : reports) {
        summary << report.shift.parameter << ',' << format_double(report.shift.relative_shift)
                << ',' << format_double(report.rms) << ','
                << format_double(report.min_unprojected_eigenvalue) << ','
                << (report.projection_changed_dissipation ? "true" : "false") << "\n";
        std::printf("%-10s %+-9g %g\n", report.shift.parameter.c_str(),
                    report.shift.relative_shift, report.rms);

        const fs::path shift_path = prefix + "_" + shift_file_tag(report.shift) + ".csv";
        std::ofstream csv(shift_path);
        if (!csv) throw DataError("cannot write '" + shift_path.string() + "'");
        csv << "t,x1_true,x1_model,x2_true,x2_model\n";
        for (Eigen::Index k = 0; k < report.true_swing.samples(); ++k) {
            csv << format_double(report.true_swing.t[k]) << ','
                << format_double(report.true_swing.states(0, k)) << ','
                << format_double(report.model_swing.states(0, k)) << ','
                << format_double(report.true_swing.states(1, k)) << ','
                << format_double(report.model_swing.states(1, k)) << "\n";
        }
    }
    std::cout << "wrote " << prefix << "_summary.csv and " << reports.size()
              << " per-shift files\n";
    return 0;
}

} // namespace

const char* cli_version() { return PCHDKIT_VERSION; }

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"pchdkit: learn passive PCHD models from trajectory data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("pchdkit ") + cli_version());
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file (same keys as the long flags)");

    std::uint64_t seed = 1;
    double dt = 0.01;
    std::string out;
    app.add_option("--seed", seed, "master seed; all randomness derives from it");
    app.add_option("--dt", dt, "sampling/integration step [s]");
    app.add_option("--out", out, "output path or prefix");

    GenerateOptions gen;
    CLI::App* generate = app.add_subcommand("generate", "simulate training trajectories");
    generate->fallthrough();
    generate->add_option("--system", gen.system, "pendulum|golf")
        ->check(CLI::IsMember({"pendulum", "golf"}));
    generate->add_option("--count", gen.count, "number of trajectories");
    generate->add_option("--duration", gen.duration, "trajectory duration [s]");
    generate->add_option("--param", gen.params, "system parameter override name=value");
    generate->add_option("--ic-low", gen.ic_low, "initial-condition box, lower corner")
        ->delimiter(',');
    generate->add_option("--ic-high", gen.ic_high, "initial-condition box, upper corner")
        ->delimiter(',');
    generate->add_flag("--keep-endpoint", gen.keep_endpoint,
                       "also write the sample at t = duration");
    add_signal_options(generate, gen.signal);

    IdentifyOptions ident;
    CLI::App* identify = app.add_subcommand("identify", "fit a PCHD model to data");
    identify->fallthrough();
    identify->add_option("files", ident.files, "trajectory CSV files");
    identify->add_option("--data", ident.data_dir, "directory with a generate manifest");
    identify->add_option("--energy-from", ident.energy_from,
                         "energy prior from system parameters: pendulum|golf")
        ->check(CLI::IsMember({"pendulum", "golf"}));
    identify->add_option("--param", ident.params, "parameter override name=value");
    identify->add_option("--alpha", ident.alpha, "kinetic energy coefficient")
        ->trigger_on_parse()
        ->each([&ident](const std::string&) { ident.alpha_set = true; });
    identify->add_option("--beta", ident.beta, "potential energy coefficient")
        ->trigger_on_parse()
        ->each([&ident](const std::string&) { ident.beta_set = true; });
    identify->add_flag("--estimate-derivatives", ident.estimate_derivatives,
                       "estimate missing derivative columns from the states");
    identify->add_option("--smooth-method", ident.smooth_method, "none|ma|savgol");
    identify->add_option("--smooth-window", ident.smooth_window, "smoothing window (odd)");
    identify->add_option("--poly-order", ident.poly_order, "savgol polynomial order");
    identify->add_option("--pinv-tol", ident.pinv_tol,
                         "relative singular-value cutoff of the pseudo-inverse");

    std::string project_model;
    CLI::App* project = app.add_subcommand(
        "project", "clip the dissipation matrix of a model file to be PSD");
    project->fallthrough();
    project->add_option("model", project_model, "model JSON file")->required();

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "integrate a system or model");
    simulate->fallthrough();
    simulate->add_option("--system", sim.system, "pendulum|golf|exp-decay");
    simulate->add_option("--model", sim.model_path, "model JSON file");
    simulate->add_option("--x0", sim.x0, "initial state, comma separated")->delimiter(',');
    simulate->add_option("--duration", sim.duration, "duration [s]");
    add_signal_options(simulate, sim.signal);

    EvaluateOptions eval;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "open-loop prediction of a model against a reference trajectory");
    evaluate->fallthrough();
    evaluate->add_option("--model", eval.model_path, "projected model JSON")->required();
    evaluate->add_option("--unprojected-model", eval.unprojected_path,
                         "unprojected model JSON (defaults to --model)");
    evaluate->add_option("--reference", eval.reference_path, "reference trajectory CSV")
        ->required();
    evaluate->add_option("--components", eval.components,
                         "1-based state components entering the error metrics")
        ->delimiter(',');

    SensitivityOptions sens;
    CLI::App* sensitivity = app.add_subcommand(
        "sensitivity", "energy-prior parameter-shift study on the pendulum");
    sensitivity->fallthrough();
    sensitivity->add_option("--shifts", sens.shifts,
                            "shift list, e.g. m:+0.1,l:-10% (default: +/-10% sweep)")
        ->delimiter(',');
    sensitivity->add_option("--param", sens.params, "nominal parameter override name=value");
    sensitivity->add_option("--free-swing-ic", sens.free_swing_ic,
                            "initial state of the comparison swing")
        ->delimiter(',');
    sensitivity->add_option("--free-swing-duration", sens.free_swing_duration,
                            "comparison swing duration [s]");
    sensitivity->add_option("--free-swing-dt", sens.free_swing_dt,
                            "comparison swing step [s]");
    sensitivity->add_option("--components", sens.components,
                            "1-based components entering the RMS")
        ->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (generate->parsed()) return cmd_generate(gen, dt, seed, out);
        if (identify->parsed()) return cmd_identify(ident, seed, out);
        if (project->parsed()) return cmd_project(project_model, out);
        if (simulate->parsed()) return cmd_simulate(sim, dt, seed, out);
        if (evaluate->parsed()) {
            const double substep = app.count("--dt") > 0 ? dt : 0.0;
            return cmd_evaluate(eval, substep, out);
        }
        if (sensitivity->parsed()) return cmd_sensitivity(sens, seed, out);
        throw UsageError("no subcommand given");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace pchd
