// mmnoma - energy-efficiency simulator for downlink mmWave massive-MIMO NOMA
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace mmnoma {

/// SplitMix64 mixing step. Used to derive independent stream seeds from a
/// master seed so that parallel Monte Carlo workers never share state.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random source. Distributions are implemented on top of the
/// raw 64-bit stream (not the std:: distribution classes) so that a given
/// seed produces the same sequence on every platform and compiler.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (two uniforms per draw, no cached spare).
    double gaussian() {
        const double u1 = positive_uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    /// Polar form: magnitude is Rayleigh, phase uniform.
    std::complex<double> complex_gaussian(double variance) {
        const double u1 = positive_uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-variance * std::log(u1));
        return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }

  private:
    double positive_uniform() {
        double u = uniform();
        while (u <= 0.0)
            u = uniform();
        return u;
    }

    std::mt19937_64 gen_;
};

} // namespace mmnoma
