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

#include <stdexcept>
#include <string>

namespace mmnoma {

/// Invalid scenario or algorithm parameters (bad file, out-of-range value, ...).
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// A channel vector is degenerate (zero norm) where a direction is required.
class degenerate_channel_error : public std::runtime_error {
  public:
    explicit degenerate_channel_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Fewer disjoint user pairs above the correlation threshold than clusters requested.
class pairing_infeasible_error : public std::runtime_error {
  public:
    explicit pairing_infeasible_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// The strong-user Gram matrix is rank deficient or too ill-conditioned to invert.
class precoder_singular_error : public std::runtime_error {
  public:
    explicit precoder_singular_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// One cluster cannot meet its rate floor within its power budget.
class cluster_infeasible_error : public std::runtime_error {
  public:
    explicit cluster_infeasible_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// No feasible initial power allocation exists for the whole system.
class problem_infeasible_error : public std::runtime_error {
  public:
    explicit problem_infeasible_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// An iterative solver exhausted its iteration budget without meeting tolerance.
class solver_failure_error : public std::runtime_error {
  public:
    explicit solver_failure_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace mmnoma
