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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mmnoma/rng.hpp"

namespace mmnoma {

/// Uniform linear transmit array.
struct ArrayConfig {
    int n_tx = 1;                         // antenna count
    double spacing_over_wavelength = 0.5; // d / lambda

    bool valid() const { return n_tx >= 1 && spacing_over_wavelength > 0.0; }
};

/// One propagation path: complex gain and azimuth angle of departure.
struct PathComponent {
    std::complex<double> gain{0.0, 0.0};
    double aod = 0.0; // radians in [0, 2*pi]
};

/// Noise floor model: flat PSD over the signal bandwidth.
struct NoiseModel {
    double psd_dbm_per_hz = -174.0;
    double bandwidth_hz = 50e6;
};

/// A single user's multipath channel, stored as a row vector so that
/// `vector * f` with a beamforming column f is the received scalar.
struct UserChannel {
    std::vector<PathComponent> paths;
    Eigen::RowVectorXcd vector;
    double distance_m = 1.0;
    double path_loss_linear = 1.0;

    double norm() const { return vector.norm(); }

    /// Build the channel row vector from explicit path parameters:
    /// sqrt(path_loss) * sqrt(N_TX / F) * sum_f gain_f * a(aod_f)^T.
    static UserChannel assemble(std::vector<PathComponent> paths, const ArrayConfig &config,
                                double distance_m, double path_loss_linear);
};

/// Unit-norm array steering vector; entry k is
/// (1/sqrt(N_TX)) * exp(j * 2*pi * (d/lambda) * k * sin(aod)).
Eigen::VectorXcd steering_vector(double aod, const ArrayConfig &config);

/// Power-law attenuation (distance in meters)^(-exponent) against a 1 m
/// reference, with an optional intercept in dB. Distances below 1 m are
/// clamped to the reference distance.
double path_loss_linear(double distance_m, double exponent, double intercept_db = 0.0);

/// Noise power in watts: 10^((psd_dbm - 30)/10) * bandwidth.
double noise_power_w(const NoiseModel &model);

/// Draw a random multipath channel: path gains are circularly symmetric
/// complex Gaussian with E|gain|^2 = sigma_f, angles i.i.d. uniform on
/// [0, 2*pi). Deterministic given the generator state.
UserChannel generate_channel(Rng &rng, const ArrayConfig &config, int n_paths, double distance_m,
                             double sigma_f, double pathloss_exponent,
                             double pathloss_intercept_db = 0.0);

} // namespace mmnoma
