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

#ifndef PHT_KERNELS_H_
#define PHT_KERNELS_H_

// Data-parallel inner loops. Each OpenMP kernel has a serial reference with
// the same signature; results are bit-identical by construction (per-item
// outputs, ordered concatenation, integer reductions).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pht/core_model.h"
#include "pht/linkage.h"
#include "pht/pseudonym.h"

namespace pht::kernels {

std::vector<PseudonymVector> PseudonymizeBatch(std::span<const QuasiIdentifierSet> qids,
                                               const Salt& salt);
std::vector<PseudonymVector> PseudonymizeBatchSerial(
    std::span<const QuasiIdentifierSet> qids, const Salt& salt);

// Candidate pairs: either every (a, b) or, per a, an ascending list of b.
struct Candidates {
  bool all_pairs = true;
  std::vector<std::vector<std::uint32_t>> per_a;
};

// Groups b by the concatenated digests of `fields`; an empty field list
// yields all pairs.
Candidates BuildCandidates(std::span<const PseudonymVector* const> a,
                           std::span<const PseudonymVector* const> b,
                           std::span<const LinkField> fields);

struct ScoreSummary {
  std::size_t candidates = 0;
  std::size_t match = 0;
  std::size_t possible = 0;
  std::size_t non_match = 0;
  // Match-class pairs in (index_a, index_b) order.
  std::vector<ScoredPair> matches;

  friend bool operator==(const ScoreSummary&, const ScoreSummary&) = default;
};

ScoreSummary ScoreCandidates(std::span<const PseudonymVector* const> a,
                             std::span<const PseudonymVector* const> b,
                             const Candidates& candidates, const WeightTable& weights,
                             double t_upper, double t_lower);
ScoreSummary ScoreCandidatesSerial(std::span<const PseudonymVector* const> a,
                                   std::span<const PseudonymVector* const> b,
                                   const Candidates& candidates, const WeightTable& weights,
                                   double t_upper, double t_lower);

std::uint8_t AgreementPattern(const PseudonymVector& pa, const PseudonymVector& pb);

}  // namespace pht::kernels

#endif  // PHT_KERNELS_H_
