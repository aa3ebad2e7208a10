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

#include "mmnoma/solver.hpp"

namespace mmnoma {

/// Brute-force references for the optimization paths. Nothing here shares
/// code with the solvers: rates and objectives are recomputed from their
/// definitions and optima are located by exhaustive enumeration plus local
/// refinement around the incumbent.

struct ClusterGridResult {
    double p1 = 0.0;
    double p2 = 0.0;
    double objective = 0.0;
    bool feasible = false;
};

/// Exhaustive search of one cluster's subproblem over the (P1, P2) rectangle
/// at coarse_n points per axis, then `refine_passes` local passes at 10x
/// finer resolution around the incumbent.
ClusterGridResult grid_search_cluster(double lambda, double delta_p, double alpha1, double alpha2,
                                      const QoSConstraints &qos, double xi, int coarse_n = 200,
                                      int refine_passes = 1);

struct SystemGridResult {
    Eigen::MatrixXd p; // L x 2
    double objective = 0.0;
    bool feasible = false;
};

/// Global energy-efficiency optimum over the power grid (L <= 2 only; the
/// search is 4-dimensional). Objective is the full ratio including circuit
/// power; constraints are the rate floors and per-cluster power caps.
SystemGridResult grid_search_system(const EffectiveGains &gains, const QoSConstraints &qos,
                                    const SolverContext &ctx, int coarse_n = 40,
                                    int refine_passes = 2);

/// Same enumeration for the subtractive objective sum(R) - lambda*xi*sum(P)
/// at a fixed lambda (L <= 2 only).
SystemGridResult grid_search_subtractive(double lambda, const EffectiveGains &gains,
                                         const QoSConstraints &qos, const SolverContext &ctx,
                                         int coarse_n = 40, int refine_passes = 2);

} // namespace mmnoma
