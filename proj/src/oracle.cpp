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

#include "mmnoma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mmnoma/errors.hpp"

namespace mmnoma {

namespace {

std::vector<double> axis_points(double lo, double hi, int n) {
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        pts.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
    return pts;
}

} // namespace

ClusterGridResult grid_search_cluster(double lambda, double delta_p, double alpha1, double alpha2,
                                      const QoSConstraints &qos, double xi, int coarse_n,
                                      int refine_passes) {
    if (coarse_n <= 0)
        throw config_error("grid resolution must be positive");

    const double lx = lambda * xi;
    auto evaluate = [&](double p1, double p2, ClusterGridResult &best) {
        if (p1 + p2 > qos.p_max * (1.0 + 1e-12))
            return;
        const double r1 = std::log2(1.0 + alpha1 * p1);
        const double r2 = std::log2(1.0 + p2 / (p1 + delta_p + 1.0 / alpha2));
        if (r1 < qos.r_min - 1e-12 || r2 < qos.r_min - 1e-12)
            return;
        const double obj = r1 + r2 - lx * (p1 + p2);
        if (!best.feasible || obj > best.objective) {
            best.feasible = true;
            best.p1 = p1;
            best.p2 = p2;
            best.objective = obj;
        }
    };

    ClusterGridResult best;
    for (double p1 : axis_points(0.0, qos.p_max, coarse_n))
        for (double p2 : axis_points(0.0, qos.p_max, coarse_n))
            evaluate(p1, p2, best);
    if (!best.feasible)
        return best;

    double step = qos.p_max / coarse_n;
    for (int pass = 0; pass < refine_passes; ++pass) {
        const double lo1 = std::max(0.0, best.p1 - step);
        const double hi1 = std::min(qos.p_max, best.p1 + step);
        const double lo2 = std::max(0.0, best.p2 - step);
        const double hi2 = std::min(qos.p_max, best.p2 + step);
        for (double p1 : axis_points(lo1, hi1, 20))
            for (double p2 : axis_points(lo2, hi2, 20))
                evaluate(p1, p2, best);
        step /= 10.0;
    }
    return best;
}

namespace {

/// Candidate split of one cluster's budget with its own-rate precomputed.
struct SplitPoint {
    double p1;
    double p2;
    double r_strong;
};

std::vector<SplitPoint> cluster_splits(const std::vector<double> &axis1,
                                       const std::vector<double> &axis2, double alpha1,
                                       double p_max, double r_min) {
    std::vector<SplitPoint> pts;
    for (double p1 : axis1) {
        const double r_strong = std::log2(1.0 + alpha1 * p1);
        if (r_strong < r_min - 1e-12)
            continue;
        for (double p2 : axis2) {
            if (p1 + p2 > p_max * (1.0 + 1e-12))
                break;
            pts.push_back({p1, p2, r_strong});
        }
    }
    return pts;
}

template <typename Objective>
SystemGridResult system_grid(const EffectiveGains &gains, const QoSConstraints &qos,
                             Objective &&objective, int coarse_n, int refine_passes) {
    const int L = gains.n_clusters();
    if (L < 1 || L > 2)
        throw config_error("the system grid oracle supports one or two clusters only");

    SystemGridResult best;
    best.p = Eigen::MatrixXd::Zero(L, 2);
    best.objective = -std::numeric_limits<double>::infinity();

    const double b0 = 1.0 / gains.alpha(0, 1);

    if (L == 1) {
        auto run = [&](const std::vector<double> &ax1, const std::vector<double> &ax2) {
            for (const SplitPoint &s :
                 cluster_splits(ax1, ax2, gains.alpha(0, 0), qos.p_max, qos.r_min)) {
                const double r2 = std::log2(1.0 + s.p2 / (s.p1 + b0));
                if (r2 < qos.r_min - 1e-12)
                    continue;
                const double obj = objective(s.r_strong + r2, s.p1 + s.p2);
                if (!best.feasible || obj > best.objective) {
                    best.feasible = true;
                    best.objective = obj;
                    best.p(0, 0) = s.p1;
                    best.p(0, 1) = s.p2;
                }
            }
        };
        const auto coarse = axis_points(0.0, qos.p_max, coarse_n);
        run(coarse, coarse);
        double step = qos.p_max / coarse_n;
        for (int pass = 0; pass < refine_passes && best.feasible; ++pass) {
            auto window = [&](double c) {
                return axis_points(std::max(0.0, c - step), std::min(qos.p_max, c + step), 20);
            };
            run(window(best.p(0, 0)), window(best.p(0, 1)));
            step /= 10.0;
        }
        return best;
    }

    const double b1 = 1.0 / gains.alpha(1, 1);
    const double beta01 = gains.beta(0, 1);
    const double beta10 = gains.beta(1, 0);

    auto run = [&](const std::vector<double> &a00, const std::vector<double> &a01,
                   const std::vector<double> &a10, const std::vector<double> &a11) {
        const auto splits0 = cluster_splits(a00, a01, gains.alpha(0, 0), qos.p_max, qos.r_min);
        const auto splits1 = cluster_splits(a10, a11, gains.alpha(1, 0), qos.p_max, qos.r_min);
        for (const SplitPoint &s0 : splits0) {
            const double t0 = s0.p1 + s0.p2;
            for (const SplitPoint &s1 : splits1) {
                const double t1 = s1.p1 + s1.p2;
                const double r02 = std::log2(1.0 + s0.p2 / (s0.p1 + beta01 * t1 + b0));
                if (r02 < qos.r_min - 1e-12)
                    continue;
                const double r12 = std::log2(1.0 + s1.p2 / (s1.p1 + beta10 * t0 + b1));
                if (r12 < qos.r_min - 1e-12)
                    continue;
                const double obj = objective(s0.r_strong + r02 + s1.r_strong + r12, t0 + t1);
                if (!best.feasible || obj > best.objective) {
                    best.feasible = true;
                    best.objective = obj;
                    best.p(0, 0) = s0.p1;
                    best.p(0, 1) = s0.p2;
                    best.p(1, 0) = s1.p1;
                    best.p(1, 1) = s1.p2;
                }
            }
        }
    };

    const auto coarse = axis_points(0.0, qos.p_max, coarse_n);
    run(coarse, coarse, coarse, coarse);
    double step = qos.p_max / coarse_n;
    for (int pass = 0; pass < refine_passes && best.feasible; ++pass) {
        auto window = [&](double c) {
            return axis_points(std::max(0.0, c - step), std::min(qos.p_max, c + step), 20);
        };
        run(window(best.p(0, 0)), window(best.p(0, 1)), window(best.p(1, 0)),
            window(best.p(1, 1)));
        step /= 10.0;
    }
    return best;
}

} // namespace

SystemGridResult grid_search_system(const EffectiveGains &gains, const QoSConstraints &qos,
                                    const SolverContext &ctx, int coarse_n, int refine_passes) {
    const double p_c = circuit_power_w(ctx.power, ctx.n_rf, ctx.n_tx);
    const double xi = ctx.power.xi;
    return system_grid(
        gains, qos,
        [&](double rate_sum, double power_sum) { return rate_sum / (xi * power_sum + p_c); },
        coarse_n, refine_passes);
}

SystemGridResult grid_search_subtractive(double lambda, const EffectiveGains &gains,
                                         const QoSConstraints &qos, const SolverContext &ctx,
                                         int coarse_n, int refine_passes) {
    const double lx = lambda * ctx.power.xi;
    return system_grid(
        gains, qos, [&](double rate_sum, double power_sum) { return rate_sum - lx * power_sum; },
        coarse_n, refine_passes);
}

} // namespace mmnoma
