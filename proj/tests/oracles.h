// Copyright 2026 The PHT Link Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHT_TESTS_ORACLES_H_
#define PHT_TESTS_ORACLES_H_

// Reference implementations written without reusing library internals. Tests
// compare the optimized code against these.

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pht/analysis.h"
#include "pht/core_model.h"

namespace pht::testing {

// Fraction of all |a|·|b| cross pairs agreeing on each field, clamped like
// the library.
std::array<double, 4> BruteForceU(const std::vector<PseudonymVector>& a,
                                  const std::vector<PseudonymVector>& b);

double HandWeight(const std::array<double, 4>& m, const std::array<double, 4>& u,
                  const std::array<bool, 4>& agree);

// Scores every pair agreeing on all `blocking` field indices, keeps weight >=
// t_upper, then greedily takes pairs by weight descending, (a, b) ascending.
// Returns the accepted pairs sorted.
std::vector<std::pair<std::size_t, std::size_t>> BruteForceGreedyLink(
    const std::vector<PseudonymVector>& a, const std::vector<PseudonymVector>& b,
    const std::array<double, 4>& m, const std::array<double, 4>& u, double t_upper,
    const std::vector<std::size_t>& blocking = {});

// Pairs whose composite occurs exactly once on each side.
std::vector<std::pair<std::size_t, std::size_t>> ExactJoin(const std::vector<PseudonymVector>& a,
                                                           const std::vector<PseudonymVector>& b);

// Counts in a serialized ValidatedResult that fall below k_min: table count
// cells (descriptive/binned "count" columns, every crosstab cell), the audit
// record counts and the linkage counts.
std::vector<std::string> CountsBelowFloor(const nlohmann::json& validated, std::size_t k_min);

// Crosstab lines (interior row or column together with its total, or a
// margin line with the grand total) in which exactly one entry is suppressed
// and all others are released; such an entry is recoverable by subtraction.
std::vector<std::string> RecoverableCells(const nlohmann::json& validated);

}  // namespace pht::testing

#endif  // PHT_TESTS_ORACLES_H_
