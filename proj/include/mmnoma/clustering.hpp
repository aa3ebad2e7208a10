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

#include <vector>

#include "mmnoma/channel.hpp"

namespace mmnoma {

/// Correlation / gain-difference score of one candidate user pair.
struct PairScore {
    int i = -1;
    int j = -1;
    double corr = 0.0;      // in [0, 1]
    double gain_diff = 0.0; // | ||h_i|| - ||h_j|| |
};

/// A two-user cluster. The strong user has the larger channel norm; labels
/// may be swapped later if the post-precoding effective gains disagree.
struct Cluster {
    int strong = -1;
    int weak = -1;
    PairScore score;
};

/// Normalized channel correlation |<h_i, h_j>| / (||h_i|| ||h_j||).
/// Throws degenerate_channel_error if either vector has zero norm.
double correlation(const UserChannel &hi, const UserChannel &hj);

/// Greedy pairing: all candidate pairs with corr >= epsilon are ranked by
/// decreasing correlation (ties: larger gain difference first, then lowest
/// indices); pairs are accepted while both users are unassigned, stopping at
/// n_clusters. Throws pairing_infeasible_error if fewer pairs can be formed.
std::vector<Cluster> pair_users(const std::vector<UserChannel> &channels, int n_clusters,
                                double epsilon);

} // namespace mmnoma
