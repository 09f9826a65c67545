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

#ifndef PHT_LINKAGE_H_
#define PHT_LINKAGE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pht/core_model.h"

namespace pht {

enum class LinkMode { kExact, kProbabilistic };

// Index into PseudonymVector::per_field.
enum class LinkField : std::uint8_t { kZip = 0, kHouse = 1, kGender = 2, kDob = 3 };

inline constexpr double kUClampLow = 1e-9;
inline constexpr double kUClampHigh = 1.0 - 1e-9;

struct LinkageParams {
  LinkMode mode = LinkMode::kProbabilistic;
  // P(field agrees | true match), order zip, house, gender, dob.
  std::array<double, 4> m = {0.95, 0.95, 0.98, 0.97};
  // P(field agrees | non-match). Estimated from the data when unset.
  std::optional<std::array<double, 4>> u;
  double t_upper = 8.0;
  double t_lower = 0.0;
  std::vector<LinkField> blocking_fields = {LinkField::kDob};

  nlohmann::json ToJson() const;
  static LinkageParams FromJson(const nlohmann::json& j);
};

enum class MatchClass { kMatch, kPossible, kNonMatch };

struct ScoredPair {
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  // Bit i set when per-field digest i agrees.
  std::uint8_t agreement = 0;
  double weight = 0.0;
  MatchClass match_class = MatchClass::kNonMatch;

  friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

struct LinkAudit {
  LinkMode mode = LinkMode::kExact;
  std::size_t candidate_pairs = 0;
  std::size_t match = 0;
  std::size_t possible = 0;
  std::size_t non_match = 0;
  std::size_t accepted = 0;
  // Exact mode: composites present on both sides but repeated on one side.
  std::size_t composite_collisions = 0;
  double t_upper = 0.0;
  double t_lower = 0.0;
  std::array<double, 4> u = {0, 0, 0, 0};
  std::vector<LinkField> blocking_fields;

  nlohmann::json ToJson() const;
};

struct LinkResult {
  // Accepted one-to-one pairs (index_a, index_b), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched_a;
  std::vector<std::size_t> unmatched_b;
  LinkAudit audit;
};

// u_i = sum over digests v of fA_i(v) * fB_i(v), clamped to
// [kUClampLow, kUClampHigh]. Both inputs must be non-empty.
std::array<double, 4> EstimateU(std::span<const PseudonymVector> a,
                                std::span<const PseudonymVector> b);

// Per-field log2 likelihood ratios for agreement and disagreement.
struct WeightTable {
  std::array<double, 4> agree{};
  std::array<double, 4> disagree{};
  // Total weight by 4-bit agreement pattern, summed in field order.
  std::array<double, 16> by_pattern{};

  static WeightTable From(const std::array<double, 4>& m, const std::array<double, 4>& u);
};

MatchClass Classify(double weight, double t_upper, double t_lower);

// Requires params.u. Indices in the result are zero.
ScoredPair ScorePair(const PseudonymVector& pa, const PseudonymVector& pb,
                     const LinkageParams& params);

// Throws MissingPseudonyms or DegenerateParams.
LinkResult Link(const Dataset& a, const Dataset& b, const LinkageParams& params);

// Throws SchemaCollision.
Dataset Merge(const LinkResult& result, const Dataset& a, const Dataset& b);

}  // namespace pht

#endif  // PHT_LINKAGE_H_
