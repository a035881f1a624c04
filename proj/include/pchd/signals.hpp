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

#ifndef PCHD_SIGNALS_HPP
#define PCHD_SIGNALS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace pchd {

/// Declarative description of an excitation signal u(t). Evaluation is
/// stateless and deterministic given the seed.
struct SignalSpec {
    enum class Kind { Zero, Step, Sine, Chirp, PiecewiseConstantRandom };

    Kind kind = Kind::Zero;
    int channels = 1;

    double amplitude = 1.0;   ///< step/sine/chirp peak value
    double low = -1.0;        ///< piecewise-constant draw interval, lower end
    double high = 1.0;        ///< piecewise-constant draw interval, upper end
    double hold = 0.1;        ///< piecewise-constant hold duration [s]
    double frequency = 1.0;   ///< sine frequency [Hz]
    double freq_start = 0.1;  ///< chirp start frequency [Hz]
    double freq_end = 2.0;    ///< chirp end frequency [Hz]
    double sweep_duration = 1.0; ///< chirp sweep time [s]
    double step_time = 0.0;   ///< step turn-on time [s]
    std::uint64_t seed = 0;   ///< piecewise-constant randomness

    void validate() const;

    static Kind kind_from_string(const std::string& name);
    static std::string kind_to_string(Kind kind);
};

/// Evaluable signal; returns a finite `channels`-vector for any t >= 0.
class Signal {
public:
    explicit Signal(SignalSpec spec);

    Eigen::VectorXd operator()(double t) const;
    int channels() const { return spec_.channels; }
    const SignalSpec& spec() const { return spec_; }

private:
    SignalSpec spec_;
};

Signal make_signal(const SignalSpec& spec);

/// Constant-zero signal with the given channel count.
Signal zero_signal(int channels = 1);

} // namespace pchd

#endif // PCHD_SIGNALS_HPP
