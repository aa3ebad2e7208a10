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

#include <Eigen/Dense>

#include "mmnoma/precoding.hpp"
#include "mmnoma/solver.hpp"

namespace mmnoma {

/// TDMA baseline: the two users of each cluster occupy equal time slots.
/// Slot 1 carries the strong users, slot 2 the weak users.

/// Per-slot link gains. With per-slot zero forcing every active user is
/// interference-free and `beta_weak_slot` is zero; when the shared-beam
/// precoder is reused, the weak-user slot keeps inter-cluster interference
/// ratios.
struct OmaGains {
    Eigen::MatrixXd alpha;          // L x 2: alpha'(l, i) = |h Bv|^2 / sigma2, per slot
    Eigen::MatrixXd beta_weak_slot; // L x L interference ratios in slot 2 (zero if per-slot ZF)
    bool per_slot_zf = true;

    int n_clusters() const { return static_cast<int>(alpha.rows()); }
};

struct OmaAllocation {
    Eigen::MatrixXd p;     // L x 2 slot transmit powers (watts, while active)
    Eigen::MatrixXd rates; // L x 2 time-averaged rates: 0.5 * log2(1 + SINR)
    double se = 0.0;
    double ee = 0.0;          // bits/joule
    double lambda_star = 0.0; // se over average consumed power
};

/// Per-slot effective gains for a cluster set. `per_slot_zf` re-derives a
/// zero-forcing precoder for each slot's active users (the default);
/// otherwise the shared NOMA precoder columns are reused in both slots and
/// the weak-user slot keeps inter-cluster interference.
OmaGains oma_effective_gains(const std::vector<UserChannel> &users,
                             const std::vector<Cluster> &clusters, const ArrayConfig &config,
                             int n_rf, bool digital, double sigma2, bool per_slot_zf,
                             double cond_threshold = 1e8);

/// Energy-efficiency-optimal slot powers via the same ratio iteration used
/// by the NOMA solver, with the interference-free (or block-coordinate, when
/// the precoder is reused) per-slot rate model. Average radiated power is
/// half the slot sum; circuit power is burned in both slots.
OmaAllocation oma_solve(const OmaGains &gains, const QoSConstraints &qos,
                        const SolverContext &ctx, const SolverOptions &opts = {});

} // namespace mmnoma
