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

#include "mmnoma/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmnoma/errors.hpp"

namespace mmnoma {

namespace {

constexpr double kLn2 = 0.693147180559945309;

/// One cluster's subproblem constants in the rate-variable form. With
/// a = 1/alpha1, b = 1/alpha2 and A = b - a + delta_p, the cluster's total
/// transmit power is f(R1, R2) = a 2^(R1+R2) + A 2^R2 - delta_p - b.
struct ClusterProblem {
    double a = 0.0;
    double b = 0.0;
    double delta_p = 0.0;
    double A = 0.0;
    double lambda_xi = 0.0;
    double r_min = 0.0;
    double p_max = 0.0;

    double f(double r1, double r2) const {
        return a * std::exp2(r1 + r2) + A * std::exp2(r2) - delta_p - b;
    }
    double df_dr1(double r1, double r2) const { return kLn2 * a * std::exp2(r1 + r2); }
    double df_dr2(double r1, double r2) const {
        return df_dr1(r1, r2) + kLn2 * A * std::exp2(r2);
    }
};

ClusterProblem make_problem(double lambda, double alpha1, double alpha2, double delta_p,
                            const QoSConstraints &qos, const PowerModel &model) {
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
        throw std::logic_error("effective gains must be positive");
    const double a = 1.0 / alpha1;
    const double b = 1.0 / alpha2;
    if (b - a < -1e-12 * b)
        throw std::logic_error("cluster ordering violated: 1/alpha2 < 1/alpha1");
    ClusterProblem prob;
    prob.a = a;
    prob.b = b;
    prob.delta_p = delta_p;
    prob.A = std::max(0.0, b - a) + delta_p;
    prob.lambda_xi = lambda * model.xi;
    prob.r_min = qos.r_min;
    prob.p_max = qos.p_max;
    return prob;
}

struct KktDetail {
    double residual = std::numeric_limits<double>::infinity();
    double mu1 = 0.0;
    double mu2 = 0.0;
    double theta = 0.0;
};

/// Try every active-set pattern of {R1 floor, R2 floor, power cap}; for each,
/// solve the stationarity equations for the active multipliers and score the
/// remaining violations. The best pattern is the certificate.
KktDetail kkt_detail(double r1, double r2, const ClusterProblem &prob) {
    const double fval = prob.f(r1, r2);
    const double fr1 = prob.df_dr1(r1, r2);
    const double fr2 = prob.df_dr2(r1, r2);
    const double lx = prob.lambda_xi;
    const double pscale = std::max(1.0, prob.p_max);

    const double primal = std::max({0.0, prob.r_min - r1, prob.r_min - r2,
                                    (fval - prob.p_max) / pscale});

    KktDetail best;
    for (int mask = 0; mask < 8; ++mask) {
        const bool act_r1 = mask & 1;
        const bool act_r2 = mask & 2;
        const bool act_p = mask & 4;

        double theta = 0.0;
        if (act_p) {
            if (!act_r1)
                theta = (1.0 - lx * fr1) / fr1;
            else if (!act_r2)
                theta = (1.0 - lx * fr2) / fr2;
            else
                theta = std::max({0.0, (1.0 - lx * fr1) / fr1, (1.0 - lx * fr2) / fr2});
        }
        const double mu1 = act_r1 ? (lx + theta) * fr1 - 1.0 : 0.0;
        const double mu2 = act_r2 ? (lx + theta) * fr2 - 1.0 : 0.0;

        const double stat1 = std::abs(1.0 + mu1 - (lx + theta) * fr1);
        const double stat2 = std::abs(1.0 + mu2 - (lx + theta) * fr2);
        const double neg = std::max({0.0, -mu1, -mu2, -theta});
        const double comp1 = std::abs(mu1 * (r1 - prob.r_min));
        const double comp2 = std::abs(mu2 * (r2 - prob.r_min));
        const double comp_p = std::abs(theta * (prob.p_max - fval)) / pscale;

        const double res = std::max({stat1, stat2, neg, comp1, comp2, comp_p, primal});
        if (res < best.residual) {
            best.residual = res;
            best.mu1 = std::max(0.0, mu1);
            best.mu2 = std::max(0.0, mu2);
            best.theta = std::max(0.0, theta);
        }
    }
    return best;
}

/// Closed-form optimum of the cluster subproblem. The R2 floor is always
/// active when A > 0 (shifting rate from the weak to the strong user at a
/// fixed sum strictly lowers the power bill), which reduces the problem to a
/// 1-D concave maximization in R1 with box bounds.
ClusterSolution solve_cluster_closed_form(const ClusterProblem &prob) {
    const double f_min = prob.f(prob.r_min, prob.r_min);
    if (f_min > prob.p_max * (1.0 + 1e-12) + 1e-300)
        throw cluster_infeasible_error("rate floors exceed the cluster power budget");

    const double r2 = prob.r_min;
    const double e2 = std::exp2(r2);
    const double num = prob.p_max + prob.delta_p + prob.b - prob.A * e2;
    const double r1_max = std::log2(num / (prob.a * e2));

    double r1;
    if (prob.lambda_xi <= 0.0) {
        r1 = r1_max;
    } else {
        const double r1_stat = -std::log2(prob.lambda_xi * kLn2 * prob.a) - r2;
        r1 = std::clamp(r1_stat, prob.r_min, r1_max);
    }

    ClusterSolution sol;
    sol.r1 = r1;
    sol.r2 = r2;
    sol.p1 = (std::exp2(r1) - 1.0) * prob.a;
    sol.p2 = (e2 - 1.0) * (sol.p1 + prob.delta_p + prob.b);
    sol.kkt_residual = kkt_detail(r1, r2, prob).residual;
    sol.converged = true;
    return sol;
}

} // namespace

Eigen::MatrixXd rates(const Eigen::MatrixXd &p, const EffectiveGains &gains) {
    const int L = gains.n_clusters();
    Eigen::MatrixXd r(L, 2);
    for (int l = 0; l < L; ++l) {
        const double denom =
            p(l, 0) + interference_power(l, p, gains) + 1.0 / gains.alpha(l, 1);
        r(l, 0) = std::log2(1.0 + gains.alpha(l, 0) * p(l, 0));
        r(l, 1) = std::log2(1.0 + p(l, 1) / denom);
    }
    return r;
}

double interference_power(int l, const Eigen::MatrixXd &p, const EffectiveGains &gains) {
    double acc = 0.0;
    for (int j = 0; j < gains.n_clusters(); ++j)
        if (j != l)
            acc += gains.beta(l, j) * (p(j, 0) + p(j, 1));
    return acc;
}

Eigen::VectorXd sic_margin(const Eigen::MatrixXd &p, const EffectiveGains &gains) {
    const int L = gains.n_clusters();
    Eigen::VectorXd margin(L);
    for (int l = 0; l < L; ++l) {
        const double a1 = gains.alpha(l, 0);
        const double a2 = gains.alpha(l, 1);
        const double dp = interference_power(l, p, gains);
        const double sinr_strong = a1 * p(l, 1) / (a1 * p(l, 0) + 1.0);
        const double sinr_weak = a2 * p(l, 1) / (a2 * (p(l, 0) + dp) + 1.0);
        margin(l) = sinr_strong - sinr_weak;
    }
    return margin;
}

double circuit_power_w(const PowerModel &model, int n_rf, int n_tx) {
    return model.p_bb_w + n_rf * model.p_rf_w +
           static_cast<double>(n_rf) * static_cast<double>(n_tx) * model.p_ps_w +
           n_tx * model.p_pa_w;
}

double power_consumed_w(const Eigen::MatrixXd &p, const PowerModel &model, int n_rf, int n_tx) {
    return model.xi * p.sum() + circuit_power_w(model, n_rf, n_tx);
}

double energy_efficiency(const Eigen::MatrixXd &p, const EffectiveGains &gains,
                         const PowerModel &model, int n_rf, int n_tx, double bandwidth_hz) {
    return bandwidth_hz * rates(p, gains).sum() / power_consumed_w(p, model, n_rf, n_tx);
}

double PowerAllocation::constraint_violation(const QoSConstraints &qos) const {
    double v = 0.0;
    for (int l = 0; l < rates.rows(); ++l) {
        v = std::max(v, qos.r_min - rates(l, 0));
        v = std::max(v, qos.r_min - rates(l, 1));
        v = std::max(v, p.row(l).sum() - qos.p_max);
    }
    return std::max(v, -p.minCoeff());
}

double cluster_kkt_residual(double r1, double r2, double lambda_xi, double alpha1, double alpha2,
                            double delta_p, const QoSConstraints &qos) {
    PowerModel unit;
    unit.xi = 1.0;
    ClusterProblem prob = make_problem(lambda_xi, alpha1, alpha2, delta_p, qos, unit);
    return kkt_detail(r1, r2, prob).residual;
}

ClusterSolution inner_cluster_solve(int l, double lambda, const Eigen::MatrixXd &frozen_p,
                                    const EffectiveGains &gains, const QoSConstraints &qos,
                                    const PowerModel &model) {
    const double delta_p = interference_power(l, frozen_p, gains);
    ClusterProblem prob =
        make_problem(lambda, gains.alpha(l, 0), gains.alpha(l, 1), delta_p, qos, model);
    return solve_cluster_closed_form(prob);
}

DualState DualState::zero(int n_clusters) {
    DualState s;
    s.mu = Eigen::MatrixXd::Zero(n_clusters, 2);
    s.theta = Eigen::VectorXd::Zero(n_clusters);
    return s;
}

ClusterSolution dual_solve(int l, double lambda, double delta_p, const EffectiveGains &gains,
                           const QoSConstraints &qos, const PowerModel &model, DualState &state,
                           const SolverOptions &opts, bool literal_closed_form) {
    ClusterProblem prob =
        make_problem(lambda, gains.alpha(l, 0), gains.alpha(l, 1), delta_p, qos, model);
    if (prob.f(prob.r_min, prob.r_min) > prob.p_max * (1.0 + 1e-12) + 1e-300)
        throw cluster_infeasible_error("rate floors exceed the cluster power budget");

    // Degenerate A: the closed-form power expressions lose their divisor and
    // the subproblem becomes a function of R1 + R2 only; solve it exactly and
    // store the implied multipliers.
    if (prob.A < 1e-30) {
        ClusterSolution sol = solve_cluster_closed_form(prob);
        const KktDetail d = kkt_detail(sol.r1, sol.r2, prob);
        state.mu(l, 0) = d.mu1;
        state.mu(l, 1) = d.mu2;
        state.theta(l) = d.theta;
        return sol;
    }

    const double lx = prob.lambda_xi;
    const double e_rmin = std::exp2(prob.r_min);

    // Step scales follow the natural magnitudes of the multipliers so the
    // harmonic schedule can both travel to the optimum and contract near it.
    const double scale_mu1 = std::max(1e-4, lx * kLn2 * prob.a * e_rmin * e_rmin);
    const double scale_mu2 = std::max(1e-4, lx * kLn2 * prob.A * e_rmin);
    const double scale_theta = 1.0 / (kLn2 * (prob.p_max + prob.delta_p + prob.b));

    double mu1 = state.mu(l, 0);
    double mu2 = state.mu(l, 1);
    double theta = state.theta(l);
    if (mu2 <= mu1)
        mu2 = mu1 + std::max(scale_mu2, 1e-6);
    if (lx <= 1e-300 && theta <= 0.0)
        theta = scale_theta;

    const double p_cap = 8.0 * prob.p_max;
    const double grad_clip = 30.0;
    const double converge_tol = 1e-7;

    ClusterSolution best;
    best.kkt_residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    int s = 0;
    for (; s < opts.max_dual_iters; ++s) {
        const double denom = std::max(mu2 - mu1, 1e-12 * std::max(1.0, mu2 + mu1));
        const double lx_theta = std::max(lx + theta, 1e-300);
        const double p1 =
            std::clamp((1.0 + mu1) * prob.A / denom - prob.a, 0.0, p_cap);
        const double lead =
            literal_closed_form ? (1.0 + mu2) / lx_theta : (1.0 + mu2) / (lx_theta * kLn2);
        const double p2 = std::clamp(lead - (1.0 + mu2) * prob.A / denom, 0.0, p_cap);

        const double r1 = std::log2(1.0 + p1 / prob.a);
        const double r2 = std::log2(1.0 + p2 / (p1 + prob.delta_p + prob.b));
        const double f = p1 + p2;

        const double res = kkt_detail(r1, r2, prob).residual;
        if (res < best.kkt_residual) {
            best.p1 = p1;
            best.p2 = p2;
            best.r1 = r1;
            best.r2 = r2;
            best.kkt_residual = res;
        }
        if (res <= converge_tol) {
            converged = true;
            ++s;
            break;
        }

        const double step = opts.dual_step_c / (1.0 + s);
        const double g1 = std::clamp(r1 - prob.r_min, -grad_clip, grad_clip);
        const double g2 = std::clamp(r2 - prob.r_min, -grad_clip, grad_clip);
        const double gp = std::clamp((prob.p_max - f) / std::max(prob.p_max, 1e-12), -grad_clip,
                                     grad_clip);
        mu1 = std::max(0.0, mu1 - step * scale_mu1 * g1);
        mu2 = std::max(0.0, mu2 - step * scale_mu2 * g2);
        theta = std::max(0.0, theta - step * scale_theta * gp);
    }
    state.iterations += s;
    state.mu(l, 0) = mu1;
    state.mu(l, 1) = mu2;
    state.theta(l) = theta;

    if (!converged) {
        ++state.fallbacks;
        ClusterSolution sol = solve_cluster_closed_form(prob);
        sol.converged = false;
        return sol;
    }
    best.converged = true;
    return best;
}

Eigen::MatrixXd initial_feasible_power(const EffectiveGains &gains, const QoSConstraints &qos) {
    const int L = gains.n_clusters();
    Eigen::MatrixXd p(L, 2);
    for (int l = 0; l < L; ++l) {
        double worst_dp = 0.0;
        for (int j = 0; j < L; ++j)
            if (j != l)
                worst_dp += gains.beta(l, j) * qos.p_max;
        const double a = 1.0 / gains.alpha(l, 0);
        const double b = 1.0 / gains.alpha(l, 1);
        const double gain = std::exp2(qos.r_min) - 1.0;
        p(l, 0) = gain * a;
        p(l, 1) = gain * (p(l, 0) + worst_dp + b);
        if (p(l, 0) + p(l, 1) > qos.p_max * (1.0 + 1e-12))
            throw problem_infeasible_error(
                "cluster " + std::to_string(l) +
                " cannot meet its rate floor under worst-case interference");
    }
    return p;
}

namespace {

double subtractive_objective(double lambda, const Eigen::MatrixXd &p, const EffectiveGains &gains,
                             const PowerModel &model) {
    return rates(p, gains).sum() - lambda * model.xi * p.sum();
}

PowerAllocation assemble_allocation(const Eigen::MatrixXd &p, const EffectiveGains &gains,
                                    const SolverContext &ctx) {
    PowerAllocation alloc;
    alloc.p = p;
    alloc.rates = rates(p, gains);
    alloc.se = alloc.rates.sum();
    const double consumed = power_consumed_w(p, ctx.power, ctx.n_rf, ctx.n_tx);
    alloc.lambda_star = alloc.se / consumed;
    alloc.ee = ctx.bandwidth_hz * alloc.lambda_star;
    return alloc;
}

} // namespace

std::pair<PowerAllocation, SolverDiagnostics> block_iteration(double lambda,
                                                              const EffectiveGains &gains,
                                                              const QoSConstraints &qos,
                                                              const SolverContext &ctx,
                                                              const SolverOptions &opts) {
    const int L = gains.n_clusters();
    Eigen::MatrixXd p = initial_feasible_power(gains, qos);
    SolverDiagnostics diag;
    diag.dual_var_count = 3;

    DualState dual = DualState::zero(L);
    int sweeps = 0;
    for (; sweeps < opts.max_sweeps; ++sweeps) {
        double max_change = 0.0;
        for (int l = 0; l < L; ++l) {
            ClusterSolution sol;
            if (opts.use_dual_path) {
                const double delta_p = interference_power(l, p, gains);
                sol = dual_solve(l, lambda, delta_p, gains, qos, ctx.power, dual, opts);
            } else {
                sol = inner_cluster_solve(l, lambda, p, gains, qos, ctx.power);
            }
            max_change = std::max({max_change, std::abs(p(l, 0) - sol.p1),
                                   std::abs(p(l, 1) - sol.p2)});
            p(l, 0) = sol.p1;
            p(l, 1) = sol.p2;
            diag.objective_trace.push_back(subtractive_objective(lambda, p, gains, ctx.power));
            diag.max_kkt_residual = std::max(diag.max_kkt_residual, sol.kkt_residual);
        }
        if (max_change < opts.inner_power_tol * qos.p_max) {
            ++sweeps;
            break;
        }
    }
    diag.inner_sweeps.push_back(sweeps);
    diag.dual_iters_total = dual.iterations;
    diag.dual_fallbacks = dual.fallbacks;
    return {assemble_allocation(p, gains, ctx), diag};
}

std::pair<PowerAllocation, SolverDiagnostics> dinkelbach(const EffectiveGains &gains,
                                                         const QoSConstraints &qos,
                                                         const SolverContext &ctx,
                                                         const SolverOptions &opts) {
    SolverDiagnostics diag;
    diag.dual_var_count = 3;
    double lambda = 0.0;
    for (int outer = 0; outer < opts.max_outer; ++outer) {
        auto [alloc, inner_diag] = block_iteration(lambda, gains, qos, ctx, opts);
        diag.inner_sweeps.push_back(inner_diag.inner_sweeps.front());
        diag.objective_trace.insert(diag.objective_trace.end(),
                                    inner_diag.objective_trace.begin(),
                                    inner_diag.objective_trace.end());
        diag.max_kkt_residual = std::max(diag.max_kkt_residual, inner_diag.max_kkt_residual);
        diag.dual_iters_total += inner_diag.dual_iters_total;
        diag.dual_fallbacks += inner_diag.dual_fallbacks;
        ++diag.outer_iters;

        const double consumed = power_consumed_w(alloc.p, ctx.power, ctx.n_rf, ctx.n_tx);
        const double t_value = alloc.se - lambda * consumed;
        diag.lambda_trace.push_back(lambda);
        diag.epsilon_trace.push_back(t_value);
        if (t_value <= opts.dinkelbach_eps)
            return {alloc, diag};
        lambda = alloc.se / consumed;
    }
    throw solver_failure_error("ratio iteration did not converge within the outer cap");
}

std::pair<PowerAllocation, SolverDiagnostics> max_se(const EffectiveGains &gains,
                                                     const QoSConstraints &qos,
                                                     const SolverContext &ctx,
                                                     const SolverOptions &opts) {
    auto [alloc, diag] = block_iteration(0.0, gains, qos, ctx, opts);
    diag.outer_iters = 1;
    diag.lambda_trace.push_back(0.0);
    diag.epsilon_trace.push_back(alloc.se);
    return {alloc, diag};
}

} // namespace mmnoma
