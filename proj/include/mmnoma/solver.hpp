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

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mmnoma/precoding.hpp"

namespace mmnoma {

/// Transmit-chain power draw: fixed circuit blocks plus amplifier slope.
struct PowerModel {
    double p_bb_w = 0.2;   // baseband
    double p_rf_w = 0.16;  // per RF chain
    double p_ps_w = 0.02;  // per phase shifter
    double p_pa_w = 0.04;  // per power amplifier
    double xi = 1.0 / 0.38; // amplifier inefficiency, >= 1
};

struct QoSConstraints {
    double r_min = 1.0; // bits/s/Hz per user
    double p_max = 1.0; // watts per cluster
};

/// Antenna/chain counts and bandwidth needed to turn rates into bits/joule.
struct SolverContext {
    PowerModel power;
    int n_rf = 8;
    int n_tx = 100;
    double bandwidth_hz = 50e6;
};

struct PowerAllocation {
    Eigen::MatrixXd p;     // L x 2, watts
    Eigen::MatrixXd rates; // L x 2, bits/s/Hz
    double se = 0.0;       // sum rate, bits/s/Hz
    double ee = 0.0;       // bandwidth * se / consumed power, bits/joule
    double lambda_star = 0.0; // se / consumed power, bits/s/Hz/W

    /// Largest violation of the rate floors and per-cluster power caps.
    double constraint_violation(const QoSConstraints &qos) const;
};

struct SolverOptions {
    double dinkelbach_eps = 1e-6;      // rate units
    int max_outer = 50;
    double inner_power_tol = 1e-6;     // relative to p_max
    int max_sweeps = 500;
    bool use_dual_path = false;        // subgradient inner solver instead of closed form
    int max_dual_iters = 5000;
    double dual_step_c = 0.1;
    double kkt_tol = 1e-8;
};

struct SolverDiagnostics {
    int outer_iters = 0;
    std::vector<int> inner_sweeps;        // per outer iteration
    std::vector<double> lambda_trace;     // lambda at each outer iteration
    std::vector<double> epsilon_trace;    // subtractive optimum at each outer iteration
    std::vector<double> objective_trace;  // subtractive objective after every cluster update
    double max_kkt_residual = 0.0;
    long dual_iters_total = 0;
    int dual_fallbacks = 0;
    int dual_var_count = 0; // multipliers per cluster subproblem
};

/// Per-user rates for a power matrix:
///   R_{l,1} = log2(1 + alpha_{l,1} P_{l,1})
///   R_{l,2} = log2(1 + P_{l,2} / (P_{l,1} + sum_{j!=l} beta_{l,j}(P_{j,1}+P_{j,2}) + 1/alpha_{l,2}))
Eigen::MatrixXd rates(const Eigen::MatrixXd &p, const EffectiveGains &gains);

/// Interference power seen by cluster l's weak user from the other clusters.
double interference_power(int l, const Eigen::MatrixXd &p, const EffectiveGains &gains);

/// Decode margin of successive interference cancellation per cluster: the
/// strong user's SINR for the weak user's signal minus the weak user's own.
/// Nonnegative whenever alpha_{l,1} >= alpha_{l,2}.
Eigen::VectorXd sic_margin(const Eigen::MatrixXd &p, const EffectiveGains &gains);

/// Fixed circuit power: P_BB + N_RF P_RF + N_RF N_TX P_PS + N_TX P_PA.
double circuit_power_w(const PowerModel &model, int n_rf, int n_tx);

/// Total consumed power xi * sum(p) + circuit power.
double power_consumed_w(const Eigen::MatrixXd &p, const PowerModel &model, int n_rf, int n_tx);

/// System energy efficiency in bits/joule (bandwidth times the rate/power ratio).
double energy_efficiency(const Eigen::MatrixXd &p, const EffectiveGains &gains,
                         const PowerModel &model, int n_rf, int n_tx, double bandwidth_hz);

/// One cluster's convex subproblem solution.
struct ClusterSolution {
    double p1 = 0.0;
    double p2 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double kkt_residual = 0.0;
    bool converged = true; // meaningful for the subgradient path
};

/// Stationarity/feasibility/complementarity residual of a candidate rate
/// pair for the per-cluster subproblem at a given lambda (all plausible
/// active sets are tried; the best is reported). Rate terms are
/// dimensionless, power terms are normalized by p_max.
double cluster_kkt_residual(double r1, double r2, double lambda_xi, double alpha1, double alpha2,
                            double delta_p, const QoSConstraints &qos);

/// Closed-form solution of cluster l's subproblem: maximize
/// R1 + R2 - lambda*xi*(P1+P2) subject to the rate floors and the cluster
/// power cap, with the other clusters' powers frozen at `frozen_p`.
/// Throws cluster_infeasible_error when the floors exceed the cap.
ClusterSolution inner_cluster_solve(int l, double lambda, const Eigen::MatrixXd &frozen_p,
                                    const EffectiveGains &gains, const QoSConstraints &qos,
                                    const PowerModel &model);

/// Multiplier state for the subgradient inner solver, kept across sweeps so
/// later solves warm-start.
struct DualState {
    Eigen::MatrixXd mu;    // L x 2, rate-floor multipliers
    Eigen::VectorXd theta; // L, power-cap multipliers
    long iterations = 0;
    int fallbacks = 0;

    static DualState zero(int n_clusters);
};

/// Subgradient solver for the same subproblem: projected dual updates with
/// diminishing steps and the KKT closed-form primal powers. Falls back to
/// inner_cluster_solve when the iteration cap is hit without meeting the
/// residual tolerance (the fallback is counted in the state).
/// `literal_closed_form` reproduces the uncorrected closed-form power
/// expressions (no ln2 factor) for fidelity experiments.
ClusterSolution dual_solve(int l, double lambda, double delta_p, const EffectiveGains &gains,
                           const QoSConstraints &qos, const PowerModel &model, DualState &state,
                           const SolverOptions &opts = {}, bool literal_closed_form = false);

/// Feasible starting point: every cluster at its rate floors assuming all
/// other clusters transmit at full power. Throws problem_infeasible_error.
Eigen::MatrixXd initial_feasible_power(const EffectiveGains &gains, const QoSConstraints &qos);

/// Block-coordinate sweeps over clusters at fixed lambda until the largest
/// power change drops below tolerance. The subtractive objective evaluated
/// after every cluster update is recorded in the diagnostics.
std::pair<PowerAllocation, SolverDiagnostics> block_iteration(double lambda,
                                                              const EffectiveGains &gains,
                                                              const QoSConstraints &qos,
                                                              const SolverContext &ctx,
                                                              const SolverOptions &opts = {});

/// Two-layer energy-efficiency solver: parametric subtractive problems with
/// the ratio update on lambda, starting from lambda = 0.
std::pair<PowerAllocation, SolverDiagnostics> dinkelbach(const EffectiveGains &gains,
                                                         const QoSConstraints &qos,
                                                         const SolverContext &ctx,
                                                         const SolverOptions &opts = {});

/// Spectral-efficiency-optimal allocation (the lambda = 0 problem).
std::pair<PowerAllocation, SolverDiagnostics> max_se(const EffectiveGains &gains,
                                                     const QoSConstraints &qos,
                                                     const SolverContext &ctx,
                                                     const SolverOptions &opts = {});

} // namespace mmnoma
