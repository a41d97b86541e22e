// Copyright 2026 the rsengine authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSENGINE_VERIFY_HPP
#define RSENGINE_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "belief.hpp"
#include "rng.hpp"
#include "updates.hpp"

namespace rs {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Monte Carlo verification of the closed-form updates against the exact
// posterior: decomposition-sampler moments, the moment rule's mean and
// scale, cross-agreement of the two independent oracles, and the hybrid
// rule's divergence minimality. `draws` controls the heaviest estimates;
// comparisons are at 3 Monte Carlo standard errors.
std::vector<CheckResult> run_verification(std::uint64_t draws,
                                          std::uint64_t seed);

std::string format_report(const std::vector<CheckResult>& checks);

// Shared test-support generators: a valid random belief state and an
// observation within `spread` posterior standard deviations of the mean.
BeliefState random_belief_state(int dim, Rng& rng);
SingleObservation random_observation(const BeliefState& state, double spread,
                                     Rng& rng);

}  // namespace rs

#endif  // RSENGINE_VERIFY_HPP
