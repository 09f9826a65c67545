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

#include "pht/linkage.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "pht/error.h"
#include "pht/kernels.h"

namespace pht {
namespace {

using nlohmann::json;

std::string_view FieldName(LinkField f) {
  return kLinkageFieldNames[static_cast<std::size_t>(f)];
}

LinkField ParseField(std::string_view name) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (kLinkageFieldNames[i] == name) return static_cast<LinkField>(i);
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown linkage field " + std::string(name));
}

json FieldsJson(const std::vector<LinkField>& fields) {
  json arr = json::array();
  for (LinkField f : fields) arr.push_back(std::string(FieldName(f)));
  return arr;
}

std::array<double, 4> EstimateUFromPointers(std::span<const PseudonymVector* const> a,
                                            std::span<const PseudonymVector* const> b) {
  std::array<double, 4> u{};
  for (std::size_t f = 0; f < 4; ++f) {
    std::unordered_map<std::string_view, std::uint64_t> count_a;
    std::unordered_map<std::string_view, std::uint64_t> count_b;
    for (const PseudonymVector* p : a) ++count_a[p->per_field[f]];
    for (const PseudonymVector* p : b) ++count_b[p->per_field[f]];
    // Agreeing cross pairs as an exact integer, divided once.
    std::uint64_t agreeing = 0;
    for (const auto& [digest, ca] : count_a) {
      auto it = count_b.find(digest);
      if (it != count_b.end()) agreeing += ca * it->second;
    }
    double frac = static_cast<double>(agreeing) /
                  (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    u[f] = std::clamp(frac, kUClampLow, kUClampHigh);
  }
  return u;
}

std::vector<const PseudonymVector*> PseudonymsOf(const Dataset& ds) {
  std::vector<const PseudonymVector*> out;
  out.reserve(ds.rows.size());
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    const PseudonymVector* p = ds.rows[i].pseudonyms();
    if (p == nullptr) {
      throw Error(ErrorCode::kMissingPseudonyms,
                  ds.station_id + " row " + std::to_string(i) + " has no pseudonyms");
    }
    out.push_back(p);
  }
  return out;
}

void FillUnmatched(LinkResult& r, std::size_t na, std::size_t nb) {
  std::vector<bool> used_a(na), used_b(nb);
  for (auto [i, j] : r.pairs) {
    used_a[i] = true;
    used_b[j] = true;
  }
  for (std::size_t i = 0; i < na; ++i) {
    if (!used_a[i]) r.unmatched_a.push_back(i);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    if (!used_b[j]) r.unmatched_b.push_back(j);
  }
}

LinkResult LinkExact(std::span<const PseudonymVector* const> a,
                     std::span<const PseudonymVector* const> b, const LinkageParams& params) {
  std::unordered_map<std::string_view, std::vector<std::size_t>> by_a, by_b;
  for (std::size_t i = 0; i < a.size(); ++i) by_a[a[i]->composite].push_back(i);
  for (std::size_t j = 0; j < b.size(); ++j) by_b[b[j]->composite].push_back(j);

  LinkResult r;
  r.audit.mode = LinkMode::kExact;
  r.audit.t_upper = params.t_upper;
  r.audit.t_lower = params.t_lower;
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::string_view key = a[i]->composite;
    auto it = by_b.find(key);
    if (it == by_b.end() || !seen.insert(key).second) continue;
    ++r.audit.candidate_pairs;
    if (by_a[key].size() == 1 && it->second.size() == 1) {
      r.pairs.emplace_back(i, it->second.front());
    } else {
      ++r.audit.composite_collisions;
    }
  }
  std::sort(r.pairs.begin(), r.pairs.end());
  r.audit.match = r.pairs.size();
  r.audit.accepted = r.pairs.size();
  r.audit.non_match = r.audit.candidate_pairs - r.pairs.size();
  FillUnmatched(r, a.size(), b.size());
  return r;
}

LinkResult LinkProbabilistic(std::span<const PseudonymVector* const> a,
                             std::span<const PseudonymVector* const> b,
                             const LinkageParams& params) {
  std::array<double, 4> u = params.u ? *params.u : EstimateUFromPointers(a, b);
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(params.m[i] > 0.0 && params.m[i] < 1.0 && u[i] > 0.0 && u[i] < 1.0)) {
      throw Error(ErrorCode::kDegenerateParams,
                  "m and u must lie in (0,1) for " + std::string(kLinkageFieldNames[i]));
    }
    if (!(params.m[i] > u[i])) {
      throw Error(ErrorCode::kDegenerateParams,
                  "m <= u for " + std::string(kLinkageFieldNames[i]));
    }
  }
  if (!(params.t_upper >= params.t_lower)) {
    throw Error(ErrorCode::kDegenerateParams, "t_upper < t_lower");
  }

  WeightTable weights = WeightTable::From(params.m, u);
  kernels::Candidates cand = kernels::BuildCandidates(a, b, params.blocking_fields);
  kernels::ScoreSummary s =
      kernels::ScoreCandidates(a, b, cand, weights, params.t_upper, params.t_lower);

  std::vector<ScoredPair> order = std::move(s.matches);
  std::sort(order.begin(), order.end(), [](const ScoredPair& x, const ScoredPair& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    if (x.index_a != y.index_a) return x.index_a < y.index_a;
    return x.index_b < y.index_b;
  });
  std::vector<bool> used_a(a.size()), used_b(b.size());
  LinkResult r;
  for (const ScoredPair& p : order) {
    if (used_a[p.index_a] || used_b[p.index_b]) continue;
    used_a[p.index_a] = true;
    used_b[p.index_b] = true;
    r.pairs.emplace_back(p.index_a, p.index_b);
  }
  std::sort(r.pairs.begin(), r.pairs.end());

  r.audit.mode = LinkMode::kProbabilistic;
  r.audit.candidate_pairs = s.candidates;
  r.audit.match = s.match;
  r.audit.possible = s.possible;
  r.audit.non_match = s.non_match;
  r.audit.accepted = r.pairs.size();
  r.audit.t_upper = params.t_upper;
  r.audit.t_lower = params.t_lower;
  r.audit.u = u;
  r.audit.blocking_fields = params.blocking_fields;
  FillUnmatched(r, a.size(), b.size());
  return r;
}

}  // namespace

json LinkageParams::ToJson() const {
  json j = {{"mode", mode == LinkMode::kExact ? "exact" : "probabilistic"},
            {"m", m},
            {"t_upper", t_upper},
            {"t_lower", t_lower},
            {"blocking_fields", FieldsJson(blocking_fields)}};
  if (u) j["u"] = *u;
  return j;
}

LinkageParams LinkageParams::FromJson(const json& j) {
  LinkageParams p;
  try {
    std::string mode = j.value("mode", std::string("probabilistic"));
    if (mode == "exact") {
      p.mode = LinkMode::kExact;
    } else if (mode == "probabilistic") {
      p.mode = LinkMode::kProbabilistic;
    } else {
      throw Error(ErrorCode::kInvalidSpec, "unknown linkage mode " + mode);
    }
    if (j.contains("m")) p.m = j.at("m").get<std::array<double, 4>>();
    if (j.contains("u")) p.u = j.at("u").get<std::array<double, 4>>();
    p.t_upper = j.value("t_upper", p.t_upper);
    p.t_lower = j.value("t_lower", p.t_lower);
    if (j.contains("blocking_fields")) {
      p.blocking_fields.clear();
      for (const json& f : j.at("blocking_fields")) {
        p.blocking_fields.push_back(ParseField(f.get<std::string>()));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("linkage params: ") + e.what());
  }
  return p;
}

json LinkAudit::ToJson() const {
  return {{"mode", mode == LinkMode::kExact ? "exact" : "probabilistic"},
          {"candidate_pairs", candidate_pairs},
          {"class_counts", {{"match", match}, {"possible", possible}, {"non_match", non_match}}},
          {"accepted", accepted},
          {"composite_collisions", composite_collisions},
          {"thresholds", {{"upper", t_upper}, {"lower", t_lower}}},
          {"u", u},
          {"blocking_fields", FieldsJson(blocking_fields)}};
}

std::array<double, 4> EstimateU(std::span<const PseudonymVector> a,
                                std::span<const PseudonymVector> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "u estimation needs non-empty inputs");
  }
  std::vector<const PseudonymVector*> pa, pb;
  for (const auto& p : a) pa.push_back(&p);
  for (const auto& p : b) pb.push_back(&p);
  return EstimateUFromPointers(pa, pb);
}

WeightTable WeightTable::From(const std::array<double, 4>& m, const std::array<double, 4>& u) {
  WeightTable w;
  for (std::size_t i = 0; i < 4; ++i) {
    w.agree[i] = std::log2(m[i] / u[i]);
    w.disagree[i] = std::log2((1.0 - m[i]) / (1.0 - u[i]));
  }
  for (unsigned bits = 0; bits < 16; ++bits) {
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      total += (bits >> i) & 1u ? w.agree[i] : w.disagree[i];
    }
    w.by_pattern[bits] = total;
  }
  return w;
}

MatchClass Classify(double weight, double t_upper, double t_lower) {
  if (weight >= t_upper) return MatchClass::kMatch;
  if (weight <= t_lower) return MatchClass::kNonMatch;
  return MatchClass::kPossible;
}

ScoredPair ScorePair(const PseudonymVector& pa, const PseudonymVector& pb,
                     const LinkageParams& params) {
  if (!params.u) throw Error(ErrorCode::kDegenerateParams, "score_pair needs u");
  WeightTable w = WeightTable::From(params.m, *params.u);
  ScoredPair s;
  s.agreement = kernels::AgreementPattern(pa, pb);
  s.weight = w.by_pattern[s.agreement];
  s.match_class = Classify(s.weight, params.t_upper, params.t_lower);
  return s;
}

LinkResult Link(const Dataset& a, const Dataset& b, const LinkageParams& params) {
  std::vector<const PseudonymVector*> pa = PseudonymsOf(a);
  std::vector<const PseudonymVector*> pb = PseudonymsOf(b);
  if (params.mode == LinkMode::kExact) return LinkExact(pa, pb, params);
  if (pa.empty() || pb.empty()) {
    LinkResult r;
    r.audit.mode = LinkMode::kProbabilistic;
    r.audit.t_upper = params.t_upper;
    r.audit.t_lower = params.t_lower;
    r.audit.blocking_fields = params.blocking_fields;
    FillUnmatched(r, pa.size(), pb.size());
    return r;
  }
  return LinkProbabilistic(pa, pb, params);
}

Dataset Merge(const LinkResult& result, const Dataset& a, const Dataset& b) {
  std::map<std::string, int> counts;
  for (const Column& c : a.schema) ++counts[c.name];
  for (const Column& c : b.schema) ++counts[c.name];

  Dataset merged;
  merged.station_id = "merged";
  auto add_columns = [&](const Dataset& ds) {
    for (const Column& c : ds.schema) {
      std::string name = counts[c.name] > 1 ? ds.station_id + "." + c.name : c.name;
      merged.schema.push_back({name, c.type});
    }
  };
  add_columns(a);
  add_columns(b);
  std::set<std::string> names;
  for (const Column& c : merged.schema) {
    if (!names.insert(c.name).second) {
      throw Error(ErrorCode::kSchemaCollision, "merged column " + c.name + " is ambiguous");
    }
  }

  merged.rows.reserve(result.pairs.size());
  for (auto [i, j] : result.pairs) {
    if (i >= a.rows.size() || j >= b.rows.size()) {
      throw Error(ErrorCode::kInternal, "link result does not belong to these datasets");
    }
    Record r;
    std::size_t col = 0;
    for (const auto& [name, value] : a.rows[i].payload) {
      r.payload.emplace_back(merged.schema[col++].name, value);
    }
    for (const auto& [name, value] : b.rows[j].payload) {
      r.payload.emplace_back(merged.schema[col++].name, value);
    }
    merged.rows.push_back(std::move(r));
  }
  merged.descriptor = {"merge of " + a.station_id + " and " + b.station_id, "",
                       merged.rows.size()};
  return merged;
}

}  // namespace pht
