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

#include "mmnoma/clustering.hpp"

#include <algorithm>
#include <cmath>

#include "mmnoma/errors.hpp"

namespace mmnoma {

double correlation(const UserChannel &hi, const UserChannel &hj) {
    const double ni = hi.vector.norm();
    const double nj = hj.vector.norm();
    if (ni <= 0.0 || nj <= 0.0)
        throw degenerate_channel_error("correlation of a zero-norm channel");
    const double c = std::abs(hi.vector.dot(hj.vector)) / (ni * nj);
    return std::min(c, 1.0); // Cauchy-Schwarz, clipped against roundoff
}

std::vector<Cluster> pair_users(const std::vector<UserChannel> &channels, int n_clusters,
                                double epsilon) {
    const int n = static_cast<int>(channels.size());
    std::vector<PairScore> candidates;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double corr = correlation(channels[i], channels[j]);
            if (corr < epsilon)
                continue;
            PairScore s;
            s.i = i;
            s.j = j;
            s.corr = corr;
            s.gain_diff = std::abs(channels[i].norm() - channels[j].norm());
            candidates.push_back(s);
        }
    }

    // Decreasing correlation; the gain difference only breaks exact ties
    // (larger disparity first), then indices for determinism.
    std::sort(candidates.begin(), candidates.end(), [](const PairScore &a, const PairScore &b) {
        if (a.corr != b.corr)
            return a.corr > b.corr;
        if (a.gain_diff != b.gain_diff)
            return a.gain_diff > b.gain_diff;
        if (a.i != b.i)
            return a.i < b.i;
        return a.j < b.j;
    });

    std::vector<bool> assigned(static_cast<std::size_t>(n), false);
    std::vector<Cluster> clusters;
    for (const PairScore &s : candidates) {
        if (static_cast<int>(clusters.size()) == n_clusters)
            break;
        if (assigned[s.i] || assigned[s.j])
            continue;
        assigned[s.i] = assigned[s.j] = true;
        Cluster c;
        const bool i_strong = channels[s.i].norm() >= channels[s.j].norm();
        c.strong = i_strong ? s.i : s.j;
        c.weak = i_strong ? s.j : s.i;
        c.score = s;
        clusters.push_back(c);
    }

    if (static_cast<int>(clusters.size()) < n_clusters)
        throw pairing_infeasible_error("only " + std::to_string(clusters.size()) + " of " +
                                       std::to_string(n_clusters) +
                                       " clusters formable above the correlation threshold");
    return clusters;
}

} // namespace mmnoma
