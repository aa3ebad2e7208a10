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

#include <Eigen/Dense>

#include "mmnoma/channel.hpp"
#include "mmnoma/clustering.hpp"

namespace mmnoma {

/// Hybrid precoder: analog beam matrix B (one steering-vector column per
/// driven RF chain; the identity in fully digital mode) and the normalized
/// per-cluster digital columns v_l with ||B v_l|| = 1.
struct HybridPrecoder {
    Eigen::MatrixXcd analog;                     // N_TX x n_driven
    std::vector<Eigen::VectorXcd> digital_cols;  // L columns, length n_driven
    bool digital = false;

    int n_driven_chains() const { return static_cast<int>(analog.cols()); }
};

/// Scalar link coefficients consumed by the power allocator.
///   alpha(l, i) = |h_{l,i} B v_l|^2 / sigma2            [1/W]
///   beta(l, j)  = |h_{l,2} B v_j|^2 / |h_{l,2} B v_l|^2 [dimensionless, j != l]
struct EffectiveGains {
    Eigen::MatrixXd alpha; // L x 2
    Eigen::MatrixXd beta;  // L x L, diagonal zero
    double sigma2 = 0.0;
    double max_strong_cross = 0.0; // max_{j != l} |h_{j,1} B v_l|, post-normalization

    int n_clusters() const { return static_cast<int>(alpha.rows()); }
};

/// Candidate analog beams of one cluster: the steering vectors of both
/// users' paths (2F entries, duplicates retained).
std::vector<Eigen::VectorXcd> build_codebook(const UserChannel &h1, const UserChannel &h2,
                                             const ArrayConfig &config);

/// Index of the codebook entry maximizing |h1 f| + |h2 f|; ties go to the
/// lowest index so runs are reproducible.
int select_analog_beam(const UserChannel &h1, const UserChannel &h2,
                       const std::vector<Eigen::VectorXcd> &codebook);

/// Codebook indices ranked by the selection criterion (best first), used to
/// assign additional beams when a cluster owns more than one RF chain.
std::vector<int> rank_analog_beams(const UserChannel &h1, const UserChannel &h2,
                                   const std::vector<Eigen::VectorXcd> &codebook);

/// Zero-forcing digital precoder V = H^H (H H^H)^{-1} for the stacked
/// strong-user effective channels H (L x n_chains). Throws
/// precoder_singular_error when cond(H H^H) exceeds the threshold.
Eigen::MatrixXcd zf_digital(const Eigen::MatrixXcd &H, double cond_threshold = 1e8);

/// Alpha/beta coefficients for given per-cluster strong/weak channel pairs
/// and a normalized precoder. Also certifies the zero-forcing property on
/// the strong users (cross terms below 1e-6 of the raw channel norm).
EffectiveGains effective_gains(const std::vector<const UserChannel *> &strong,
                               const std::vector<const UserChannel *> &weak,
                               const HybridPrecoder &precoder, double sigma2);

/// Full precoding pipeline for a set of clusters.
struct PrecodingResult {
    HybridPrecoder precoder;
    EffectiveGains gains;
    std::vector<Cluster> clusters; // labels possibly swapped by the relabel pass
    bool relabeled = false;        // at least one strong/weak swap happened
    bool ordering_failed = false;  // ordering still violated after one relabel pass
};

/// Select analog beams (round-robin extra chains when n_rf > L; chains with
/// no distinct codebook beam left are idle), run strong-user ZF, normalize,
/// and compute effective gains. If some cluster ends up with
/// alpha_{l,1} < alpha_{l,2}, its labels are swapped once and the precoder
/// rebuilt; a second violation is reported via `ordering_failed`.
PrecodingResult build_cluster_precoding(const std::vector<UserChannel> &users,
                                        std::vector<Cluster> clusters, const ArrayConfig &config,
                                        int n_rf, bool digital, double sigma2,
                                        double cond_threshold = 1e8);

} // namespace mmnoma
