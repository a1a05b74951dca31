// Copyright 2026 The mrlab Authors
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

#pragma once

// The acceptance gate: one check per criterion, each with its own runtime
// budget. Shared by the acceptance binary and the CLI selftest.

#include <cstdint>
#include <string>
#include <vector>

namespace mrlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;  // metric and runtime
  bool metric_passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;

  /// "PASS [n] name: detail (t s < budget s)"; timing omitted on request.
  std::string line(bool with_timing = true) const;
};

inline constexpr std::uint64_t kAcceptanceSeed = 20260101;

CriterionResult accept_gamma_recurrence(std::uint64_t seed);
CriterionResult accept_lacunary_coefficients(std::uint64_t seed);
CriterionResult accept_positivity(std::uint64_t seed);
CriterionResult accept_bv_bound(std::uint64_t seed);
CriterionResult accept_norm_identity(std::uint64_t seed);
CriterionResult accept_thresholds(std::uint64_t seed);
CriterionResult accept_blowup_rates(std::uint64_t seed);
CriterionResult accept_bip_inequality(std::uint64_t seed);
CriterionResult accept_interval_certification(std::uint64_t seed);
CriterionResult accept_dissipativity(std::uint64_t seed);
CriterionResult accept_rademacher(std::uint64_t seed);
CriterionResult accept_permutation(std::uint64_t seed);

/// All twelve, in order.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = kAcceptanceSeed);

}  // namespace mrlab
