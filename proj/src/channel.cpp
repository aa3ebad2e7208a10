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

#include "mmnoma/channel.hpp"

#include <cmath>

#include "mmnoma/errors.hpp"

namespace mmnoma {

Eigen::VectorXcd steering_vector(double aod, const ArrayConfig &config) {
    const int n = config.n_tx;
    Eigen::VectorXcd a(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double phase_step = 2.0 * M_PI * config.spacing_over_wavelength * std::sin(aod);
    for (int k = 0; k < n; ++k) {
        const double phi = phase_step * static_cast<double>(k);
        a(k) = scale * std::complex<double>(std::cos(phi), std::sin(phi));
    }
    return a;
}

double path_loss_linear(double distance_m, double exponent, double intercept_db) {
    const double d = std::max(distance_m, 1.0);
    return std::pow(10.0, intercept_db / 10.0) * std::pow(d, -exponent);
}

double noise_power_w(const NoiseModel &model) {
    return std::pow(10.0, (model.psd_dbm_per_hz - 30.0) / 10.0) * model.bandwidth_hz;
}

UserChannel UserChannel::assemble(std::vector<PathComponent> paths, const ArrayConfig &config,
                                  double distance_m, double path_loss) {
    UserChannel ch;
    ch.distance_m = distance_m;
    ch.path_loss_linear = path_loss;
    const auto n_paths = static_cast<double>(paths.size());
    const double scale =
        std::sqrt(path_loss) * std::sqrt(static_cast<double>(config.n_tx) / n_paths);
    Eigen::RowVectorXcd h = Eigen::RowVectorXcd::Zero(config.n_tx);
    for (const PathComponent &p : paths)
        h += p.gain * steering_vector(p.aod, config).transpose();
    ch.vector = scale * h;
    ch.paths = std::move(paths);
    return ch;
}

UserChannel generate_channel(Rng &rng, const ArrayConfig &config, int n_paths, double distance_m,
                             double sigma_f, double pathloss_exponent,
                             double pathloss_intercept_db) {
    if (!config.valid())
        throw config_error("invalid array configuration");
    if (n_paths < 1)
        throw config_error("channel needs at least one path");
    if (distance_m <= 0.0)
        throw config_error("distance must be positive");

    std::vector<PathComponent> paths(static_cast<std::size_t>(n_paths));
    for (PathComponent &p : paths) {
        p.gain = rng.complex_gaussian(sigma_f);
        p.aod = rng.uniform(0.0, 2.0 * M_PI);
    }
    const double pl = path_loss_linear(distance_m, pathloss_exponent, pathloss_intercept_db);
    return UserChannel::assemble(std::move(paths), config, distance_m, pl);
}

} // namespace mmnoma
