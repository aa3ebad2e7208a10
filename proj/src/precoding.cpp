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

#include "mmnoma/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmnoma/errors.hpp"

namespace mmnoma {

std::vector<Eigen::VectorXcd> build_codebook(const UserChannel &h1, const UserChannel &h2,
                                             const ArrayConfig &config) {
    std::vector<Eigen::VectorXcd> codebook;
    codebook.reserve(h1.paths.size() + h2.paths.size());
    for (const PathComponent &p : h1.paths)
        codebook.push_back(steering_vector(p.aod, config));
    for (const PathComponent &p : h2.paths)
        codebook.push_back(steering_vector(p.aod, config));
    return codebook;
}

namespace {

double beam_metric(const UserChannel &h1, const UserChannel &h2, const Eigen::VectorXcd &f) {
    return std::abs((h1.vector * f)(0)) + std::abs((h2.vector * f)(0));
}

} // namespace

int select_analog_beam(const UserChannel &h1, const UserChannel &h2,
                       const std::vector<Eigen::VectorXcd> &codebook) {
    if (codebook.empty())
        throw config_error("empty analog codebook");
    int best = 0;
    double best_metric = beam_metric(h1, h2, codebook[0]);
    for (int k = 1; k < static_cast<int>(codebook.size()); ++k) {
        const double m = beam_metric(h1, h2, codebook[k]);
        if (m > best_metric) {
            best_metric = m;
            best = k;
        }
    }
    return best;
}

std::vector<int> rank_analog_beams(const UserChannel &h1, const UserChannel &h2,
                                   const std::vector<Eigen::VectorXcd> &codebook) {
    std::vector<double> metric(codebook.size());
    for (std::size_t k = 0; k < codebook.size(); ++k)
        metric[k] = beam_metric(h1, h2, codebook[k]);
    std::vector<int> order(codebook.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return metric[a] > metric[b]; });
    return order;
}

Eigen::MatrixXcd zf_digital(const Eigen::MatrixXcd &H, double cond_threshold) {
    const Eigen::MatrixXcd gram = H * H.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    if (eig.info() != Eigen::Success)
        throw precoder_singular_error("eigendecomposition of the Gram matrix failed");
    const auto &ev = eig.eigenvalues();
    const double lo = ev(0);
    const double hi = ev(ev.size() - 1);
    if (lo <= 0.0 || hi / lo > cond_threshold)
        throw precoder_singular_error("strong-user Gram matrix condition number too large");
    const Eigen::MatrixXcd gram_inv =
        eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().adjoint();
    return H.adjoint() * gram_inv;
}

EffectiveGains effective_gains(const std::vector<const UserChannel *> &strong,
                               const std::vector<const UserChannel *> &weak,
                               const HybridPrecoder &precoder, double sigma2) {
    const int L = static_cast<int>(strong.size());
    EffectiveGains g;
    g.sigma2 = sigma2;
    g.alpha = Eigen::MatrixXd::Zero(L, 2);
    g.beta = Eigen::MatrixXd::Zero(L, L);

    // Received scalars through each cluster beam: row = receiving user.
    Eigen::MatrixXcd rx_strong(L, L), rx_weak(L, L);
    for (int l = 0; l < L; ++l) {
        const Eigen::VectorXcd beam = precoder.analog * precoder.digital_cols[l];
        for (int u = 0; u < L; ++u) {
            rx_strong(u, l) = (strong[u]->vector * beam)(0);
            rx_weak(u, l) = (weak[u]->vector * beam)(0);
        }
    }

    double max_cross = 0.0;
    for (int j = 0; j < L; ++j)
        for (int l = 0; l < L; ++l)
            if (j != l)
                max_cross = std::max(max_cross, std::abs(rx_strong(j, l)));
    g.max_strong_cross = max_cross;
    for (int j = 0; j < L; ++j) {
        for (int l = 0; l < L; ++l) {
            if (j == l)
                continue;
            if (std::abs(rx_strong(j, l)) > 1e-6 * strong[j]->norm())
                throw precoder_singular_error("zero-forcing residual above certification bound");
        }
    }

    for (int l = 0; l < L; ++l) {
        const double own_weak = std::norm(rx_weak(l, l));
        g.alpha(l, 0) = std::norm(rx_strong(l, l)) / sigma2;
        g.alpha(l, 1) = own_weak / sigma2;
        for (int j = 0; j < L; ++j)
            if (j != l)
                g.beta(l, j) = std::norm(rx_weak(l, j)) / own_weak;
    }
    return g;
}

namespace {

HybridPrecoder assemble_precoder(const std::vector<const UserChannel *> &strong,
                                 const std::vector<const UserChannel *> &weak,
                                 const ArrayConfig &config, int n_rf, bool digital,
                                 double cond_threshold) {
    const int L = static_cast<int>(strong.size());
    HybridPrecoder pre;
    pre.digital = digital;

    if (digital) {
        pre.analog = Eigen::MatrixXcd::Identity(config.n_tx, config.n_tx);
    } else {
        // One best beam per cluster, then extra chains round-robin, each
        // carrying its cluster's next-best distinct codebook entry. A chain
        // whose cluster has no distinct beam left stays idle.
        std::vector<std::vector<int>> ranking(L);
        std::vector<std::vector<Eigen::VectorXcd>> codebooks(L);
        for (int l = 0; l < L; ++l) {
            codebooks[l] = build_codebook(*strong[l], *weak[l], config);
            ranking[l] = rank_analog_beams(*strong[l], *weak[l], codebooks[l]);
        }
        std::vector<Eigen::VectorXcd> columns;
        std::vector<std::size_t> used(L, 0);
        for (int l = 0; l < L; ++l) {
            columns.push_back(codebooks[l][ranking[l][0]]);
            used[l] = 1;
        }
        int extra = n_rf - L;
        int l = 0, idle_scan = 0;
        while (extra > 0 && idle_scan < L) {
            if (used[l] < ranking[l].size()) {
                columns.push_back(codebooks[l][ranking[l][used[l]]]);
                ++used[l];
                --extra;
                idle_scan = 0;
            } else {
                ++idle_scan;
            }
            l = (l + 1) % L;
        }
        pre.analog = Eigen::MatrixXcd(config.n_tx, static_cast<int>(columns.size()));
        for (int c = 0; c < static_cast<int>(columns.size()); ++c)
            pre.analog.col(c) = columns[c];
    }

    const int n_chains = pre.n_driven_chains();
    Eigen::MatrixXcd H(L, n_chains);
    for (int l = 0; l < L; ++l)
        H.row(l) = strong[l]->vector * pre.analog;

    const Eigen::MatrixXcd V = zf_digital(H, cond_threshold);
    pre.digital_cols.resize(L);
    for (int l = 0; l < L; ++l) {
        const Eigen::VectorXcd col = V.col(l);
        const double scale = (pre.analog * col).norm();
        if (scale <= 0.0)
            throw precoder_singular_error("zero-norm precoding column");
        pre.digital_cols[l] = col / scale;
    }
    return pre;
}

} // namespace

PrecodingResult build_cluster_precoding(const std::vector<UserChannel> &users,
                                        std::vector<Cluster> clusters, const ArrayConfig &config,
                                        int n_rf, bool digital, double sigma2,
                                        double cond_threshold) {
    const int L = static_cast<int>(clusters.size());
    if (!digital && n_rf < L)
        throw config_error("need at least one RF chain per cluster");

    PrecodingResult result;
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<const UserChannel *> strong(L), weak(L);
        for (int l = 0; l < L; ++l) {
            strong[l] = &users[clusters[l].strong];
            weak[l] = &users[clusters[l].weak];
        }
        HybridPrecoder pre = assemble_precoder(strong, weak, config, n_rf, digital, cond_threshold);
        EffectiveGains gains = effective_gains(strong, weak, pre, sigma2);

        std::vector<int> violated;
        for (int l = 0; l < L; ++l)
            if (gains.alpha(l, 0) < gains.alpha(l, 1))
                violated.push_back(l);

        if (violated.empty() || pass == 1) {
            result.precoder = std::move(pre);
            result.gains = std::move(gains);
            result.clusters = std::move(clusters);
            result.ordering_failed = !violated.empty();
            return result;
        }

        // Swap strong/weak in the violated clusters and rebuild once; the ZF
        // rows change with the labels, so the whole precoder is recomputed.
        for (int l : violated)
            std::swap(clusters[l].strong, clusters[l].weak);
        result.relabeled = true;
    }
    return result; // unreachable
}

} // namespace mmnoma
