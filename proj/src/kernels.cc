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

#include "pht/kernels.h"

#include <string>
#include <unordered_map>

namespace pht::kernels {

std::vector<PseudonymVector> PseudonymizeBatch(std::span<const QuasiIdentifierSet> qids,
                                               const Salt& salt) {
  std::vector<PseudonymVector> out(qids.size());
  const auto n = static_cast<std::int64_t>(qids.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = Pseudonymize(qids[static_cast<std::size_t>(i)], salt);
  }
  return out;
}

std::vector<PseudonymVector> PseudonymizeBatchSerial(
    std::span<const QuasiIdentifierSet> qids, const Salt& salt) {
  std::vector<PseudonymVector> out;
  out.reserve(qids.size());
  for (const QuasiIdentifierSet& q : qids) out.push_back(Pseudonymize(q, salt));
  return out;
}

std::uint8_t AgreementPattern(const PseudonymVector& pa, const PseudonymVector& pb) {
  std::uint8_t bits = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (pa.per_field[i] == pb.per_field[i]) bits |= static_cast<std::uint8_t>(1u << i);
  }
  return bits;
}

Candidates BuildCandidates(std::span<const PseudonymVector* const> a,
                           std::span<const PseudonymVector* const> b,
                           std::span<const LinkField> fields) {
  Candidates c;
  if (fields.empty()) return c;
  c.all_pairs = false;
  auto key = [&](const PseudonymVector& p) {
    std::string k;
    for (LinkField f : fields) {
      k += p.per_field[static_cast<std::size_t>(f)];
      k += '|';
    }
    return k;
  };
  std::unordered_map<std::string, std::vector<std::uint32_t>> buckets;
  for (std::size_t j = 0; j < b.size(); ++j) {
    buckets[key(*b[j])].push_back(static_cast<std::uint32_t>(j));
  }
  c.per_a.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = buckets.find(key(*a[i]));
    if (it != buckets.end()) c.per_a[i] = it->second;
  }
  return c;
}

namespace {

struct RowScore {
  std::size_t candidates = 0;
  std::size_t match = 0;
  std::size_t possible = 0;
  std::size_t non_match = 0;
  std::vector<ScoredPair> matches;
};

inline void ScoreOne(const PseudonymVector& pa, const PseudonymVector& pb, std::size_t i,
                     std::size_t j, const WeightTable& w, double t_upper, double t_lower,
                     RowScore& row) {
  std::uint8_t bits = AgreementPattern(pa, pb);
  double weight = w.by_pattern[bits];
  MatchClass cls = Classify(weight, t_upper, t_lower);
  ++row.candidates;
  switch (cls) {
    case MatchClass::kMatch:
      ++row.match;
      row.matches.push_back({i, j, bits, weight, cls});
      break;
    case MatchClass::kPossible: ++row.possible; break;
    case MatchClass::kNonMatch: ++row.non_match; break;
  }
}

RowScore ScoreRow(std::span<const PseudonymVector* const> a,
                  std::span<const PseudonymVector* const> b, const Candidates& c,
                  std::size_t i, const WeightTable& w, double t_upper, double t_lower) {
  RowScore row;
  if (c.all_pairs) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      ScoreOne(*a[i], *b[j], i, j, w, t_upper, t_lower, row);
    }
  } else {
    for (std::uint32_t j : c.per_a[i]) ScoreOne(*a[i], *b[j], i, j, w, t_upper, t_lower, row);
  }
  return row;
}

ScoreSummary Combine(std::vector<RowScore>& rows) {
  ScoreSummary s;
  for (RowScore& r : rows) {
    s.candidates += r.candidates;
    s.match += r.match;
    s.possible += r.possible;
    s.non_match += r.non_match;
    s.matches.insert(s.matches.end(), r.matches.begin(), r.matches.end());
  }
  return s;
}

}  // namespace

ScoreSummary ScoreCandidates(std::span<const PseudonymVector* const> a,
                             std::span<const PseudonymVector* const> b,
                             const Candidates& candidates, const WeightTable& weights,
                             double t_upper, double t_lower) {
  std::vector<RowScore> rows(a.size());
  const auto n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    rows[static_cast<std::size_t>(i)] = ScoreRow(a, b, candidates, static_cast<std::size_t>(i),
                                                 weights, t_upper, t_lower);
  }
  return Combine(rows);
}

ScoreSummary ScoreCandidatesSerial(std::span<const PseudonymVector* const> a,
                                   std::span<const PseudonymVector* const> b,
                                   const Candidates& candidates, const WeightTable& weights,
                                   double t_upper, double t_lower) {
  std::vector<RowScore> rows;
  rows.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    rows.push_back(ScoreRow(a, b, candidates, i, weights, t_upper, t_lower));
  }
  return Combine(rows);
}

}  // namespace pht::kernels
