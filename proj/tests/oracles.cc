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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace pht::testing {

std::array<double, 4> BruteForceU(const std::vector<PseudonymVector>& a,
                                  const std::vector<PseudonymVector>& b) {
  std::array<double, 4> u{};
  for (std::size_t f = 0; f < 4; ++f) {
    std::size_t agree = 0;
    for (const auto& pa : a) {
      for (const auto& pb : b) agree += pa.per_field[f] == pb.per_field[f] ? 1 : 0;
    }
    double frac = static_cast<double>(agree) / (static_cast<double>(a.size()) * b.size());
    u[f] = std::min(std::max(frac, 1e-9), 1.0 - 1e-9);
  }
  return u;
}

double HandWeight(const std::array<double, 4>& m, const std::array<double, 4>& u,
                  const std::array<bool, 4>& agree) {
  double w = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    w += agree[i] ? std::log2(m[i] / u[i]) : std::log2((1.0 - m[i]) / (1.0 - u[i]));
  }
  return w;
}

std::vector<std::pair<std::size_t, std::size_t>> BruteForceGreedyLink(
    const std::vector<PseudonymVector>& a, const std::vector<PseudonymVector>& b,
    const std::array<double, 4>& m, const std::array<double, 4>& u, double t_upper,
    const std::vector<std::size_t>& blocking) {
  struct Scored {
    double w;
    std::size_t i, j;
  };
  std::vector<Scored> matches;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      bool blocked = false;
      for (std::size_t f : blocking) blocked |= a[i].per_field[f] != b[j].per_field[f];
      if (blocked) continue;
      std::array<bool, 4> agree{};
      for (std::size_t f = 0; f < 4; ++f) agree[f] = a[i].per_field[f] == b[j].per_field[f];
      double w = HandWeight(m, u, agree);
      if (w >= t_upper) matches.push_back({w, i, j});
    }
  }
  std::sort(matches.begin(), matches.end(), [](const Scored& x, const Scored& y) {
    if (x.w != y.w) return x.w > y.w;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  std::vector<bool> used_a(a.size()), used_b(b.size());
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const Scored& s : matches) {
    if (used_a[s.i] || used_b[s.j]) continue;
    used_a[s.i] = used_b[s.j] = true;
    out.emplace_back(s.i, s.j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> ExactJoin(const std::vector<PseudonymVector>& a,
                                                           const std::vector<PseudonymVector>& b) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t same_a = 0;
    for (const auto& x : a) same_a += x.composite == a[i].composite ? 1 : 0;
    std::vector<std::size_t> hits;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].composite == a[i].composite) hits.push_back(j);
    }
    if (same_a == 1 && hits.size() == 1) out.emplace_back(i, hits[0]);
  }
  return out;
}

std::vector<std::string> CountsBelowFloor(const nlohmann::json& v, std::size_t k_min) {
  std::vector<std::string> bad;
  auto check = [&](const nlohmann::json& x, const std::string& where) {
    if (x.is_number() && x.get<double>() < static_cast<double>(k_min)) {
      bad.push_back(where + "=" + x.dump());
    }
  };
  for (const auto& t : v.at("tables")) {
    const auto& cols = t.at("columns");
    const auto& cells = t.at("cells");
    for (std::size_t r = 0; r < cells.size(); ++r) {
      for (std::size_t c = 0; c < cells[r].size(); ++c) {
        bool is_count = t.at("kind") == "crosstab" || cols[c] == "count";
        if (is_count) {
          check(cells[r][c], t.at("name").get<std::string>() + "[" + std::to_string(r) + "," +
                                 std::to_string(c) + "]");
        }
      }
    }
  }
  const auto& audit = v.at("audit");
  check(audit.at("records_after"), "records_after");
  for (const auto& [station, n] : audit.at("records_before").items()) {
    check(n, "records_before." + station);
  }
  const auto& link = audit.at("linkage");
  if (link.contains("class_counts")) {
    for (const auto& [name, n] : link.at("class_counts").items()) check(n, "linkage." + name);
  }
  for (const char* key : {"accepted", "candidate_pairs", "composite_collisions"}) {
    if (link.contains(key)) check(link.at(key), std::string("linkage.") + key);
  }
  return bad;
}

std::vector<std::string> RecoverableCells(const nlohmann::json& v) {
  std::vector<std::string> out;
  for (const auto& t : v.at("tables")) {
    if (t.at("kind") != "crosstab") continue;
    const auto& cells = t.at("cells");
    std::size_t rows = cells.size();
    if (rows == 0) continue;
    std::size_t cols = cells[0].size();
    auto scan = [&](const std::vector<std::pair<std::size_t, std::size_t>>& line,
                    const std::string& name) {
      std::size_t suppressed = 0;
      for (auto [r, c] : line) suppressed += cells[r][c].is_string() ? 1 : 0;
      if (suppressed == 1) out.push_back(t.at("name").get<std::string>() + ":" + name);
    };
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::pair<std::size_t, std::size_t>> line;
      for (std::size_t c = 0; c < cols; ++c) line.emplace_back(r, c);
      scan(line, "row" + std::to_string(r));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<std::pair<std::size_t, std::size_t>> line;
      for (std::size_t r = 0; r < rows; ++r) line.emplace_back(r, c);
      scan(line, "col" + std::to_string(c));
    }
  }
  return out;
}

}  // namespace pht::testing
