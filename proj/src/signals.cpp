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

#include "pchd/signals.hpp"

#include <cmath>
#include <numbers>

#include "pchd/errors.hpp"
#include "pchd/random.hpp"

namespace pchd {

void SignalSpec::validate() const {
    if (channels < 1) {
        throw InvalidInputError("SignalSpec: channels must be >= 1");
    }
    switch (kind) {
        case Kind::Zero:
            break;
        case Kind::Step:
            if (step_time < 0.0) throw InvalidInputError("SignalSpec: step_time must be >= 0");
            break;
        case Kind::Sine:
            if (!(frequency > 0.0)) throw InvalidInputError("SignalSpec: frequency must be > 0");
            break;
        case Kind::Chirp:
            if (!(freq_start > 0.0) || !(freq_end > 0.0)) {
                throw InvalidInputError("SignalSpec: chirp frequencies must be > 0");
            }
            if (!(sweep_duration > 0.0)) {
                throw InvalidInputError("SignalSpec: sweep_duration must be > 0");
            }
            break;
        case Kind::PiecewiseConstantRandom:
            if (!(high >= low)) throw InvalidInputError("SignalSpec: need high >= low");
            if (!(hold > 0.0)) throw InvalidInputError("SignalSpec: hold must be > 0");
            break;
    }
}

SignalSpec::Kind SignalSpec::kind_from_string(const std::string& name) {
    if (name == "zero") return Kind::Zero;
    if (name == "step") return Kind::Step;
    if (name == "sine") return Kind::Sine;
    if (name == "chirp") return Kind::Chirp;
    if (name == "pwc" || name == "piecewise-constant-random") {
        return Kind::PiecewiseConstantRandom;
    }
    throw InvalidInputError("unknown signal kind '" + name +
                            "' (expected zero|step|sine|chirp|pwc)");
}

std::string SignalSpec::kind_to_string(Kind kind) {
    switch (kind) {
        case Kind::Zero: return "zero";
        case Kind::Step: return "step";
        case Kind::Sine: return "sine";
        case Kind::Chirp: return "chirp";
        case Kind::PiecewiseConstantRandom: return "pwc";
    }
    return "zero";
}

Signal::Signal(SignalSpec spec) : spec_(spec) { spec_.validate(); }

Eigen::VectorXd Signal::operator()(double t) const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(spec_.channels);
    switch (spec_.kind) {
        case SignalSpec::Kind::Zero:
            break;
        case SignalSpec::Kind::Step:
            if (t >= spec_.step_time) u.setConstant(spec_.amplitude);
            break;
        case SignalSpec::Kind::Sine:
            u.setConstant(spec_.amplitude *
                          std::sin(2.0 * std::numbers::pi * spec_.frequency * t));
            break;
        case SignalSpec::Kind::Chirp: {
            // Linear frequency sweep from freq_start to freq_end over
            // sweep_duration; constant freq_end afterwards.
            const double rate = (spec_.freq_end - spec_.freq_start) / spec_.sweep_duration;
            double phase;
            if (t <= spec_.sweep_duration) {
                phase = spec_.freq_start * t + 0.5 * rate * t * t;
            } else {
                const double T = spec_.sweep_duration;
                phase = spec_.freq_start * T + 0.5 * rate * T * T +
                        spec_.freq_end * (t - T);
            }
            u.setConstant(spec_.amplitude * std::sin(2.0 * std::numbers::pi * phase));
            break;
        }
        case SignalSpec::Kind::PiecewiseConstantRandom: {
            const auto segment = static_cast<std::uint64_t>(std::floor(t / spec_.hold));
            for (int c = 0; c < spec_.channels; ++c) {
                const std::uint64_t bits =
                    mix64(derive_seed(spec_.seed, segment) ^
                          mix64(0x5eedULL + static_cast<std::uint64_t>(c)));
                u[c] = spec_.low + (spec_.high - spec_.low) * uniform01(bits);
            }
            break;
        }
    }
    return u;
}

Signal make_signal(const SignalSpec& spec) { return Signal(spec); }

Signal zero_signal(int channels) {
    SignalSpec spec;
    spec.kind = SignalSpec::Kind::Zero;
    spec.channels = channels;
    return Signal(spec);
}

} // namespace pchd
