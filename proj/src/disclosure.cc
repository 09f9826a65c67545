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

#include "pht/disclosure.h"

#include <algorithm>
#include <limits>
#include <utility>

#include "pht/dataset_io.h"
#include "pht/error.h"

namespace pht {
namespace {

using nlohmann::json;

using Coord = std::pair<std::size_t, std::size_t>;

// Lines whose entries sum to their last entry: every interior row and column
// plus the two margin lines.
std::vector<std::vector<Coord>> CrosstabLines(const Table& t) {
  std::vector<std::vector<Coord>> lines;
  std::size_t rows = t.cells.size();
  std::size_t cols = rows == 0 ? 0 : t.cells[0].size();
  if (rows < 2 || cols < 2) return lines;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Coord> line;
    for (std::size_t c = 0; c < cols; ++c) line.emplace_back(r, c);
    lines.push_back(std::move(line));
  }
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<Coord> line;
    for (std::size_t r = 0; r < rows; ++r) line.emplace_back(r, c);
    lines.push_back(std::move(line));
  }
  return lines;
}

bool SecondaryPassCrosstab(Table& t) {
  bool changed = false;
  for (const auto& line : CrosstabLines(t)) {
    std::size_t n_suppressed = 0;
    for (auto [r, c] : line) n_suppressed += t.cells[r][c].suppressed ? 1 : 0;
    if (n_suppressed != 1) continue;
    // Prefer the smallest released interior entry; fall back to the total.
    std::optional<Coord> pick;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k + 1 < line.size(); ++k) {
      auto [r, c] = line[k];
      const Cell& cell = t.cells[r][c];
      if (!cell.suppressed && cell.support < best) {
        best = cell.support;
        pick = line[k];
      }
    }
    if (!pick) pick = line.back();
    t.cells[pick->first][pick->second].suppressed = true;
    changed = true;
  }
  return changed;
}

void SuppressRow(Table& t, std::size_t r) {
  for (Cell& c : t.cells[r]) c.suppressed = true;
}

void ValidateGroupedTable(Table& t, std::size_t k_min) {
  const std::size_t extremum_floor = std::max<std::size_t>(k_min, 2);
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    auto& row = t.cells[r];
    if (row.empty()) continue;
    std::size_t support = row.front().support;
    if (support < k_min) {
      SuppressRow(t, r);
      continue;
    }
    for (Cell& c : row) {
      if (c.extremum && c.support < extremum_floor) c.suppressed = true;
    }
  }
  if (t.kind != AnalysisKind::kBinnedAssociation) return;
  // The bin counts add up to the released record count, so a lone suppressed
  // bin would be recoverable.
  std::size_t n_suppressed = 0;
  for (const auto& row : t.cells) n_suppressed += row.front().suppressed ? 1 : 0;
  if (n_suppressed != 1 || t.cells.size() < 2) return;
  std::optional<std::size_t> pick;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    if (!t.cells[r].front().suppressed && t.cells[r].front().support < best) {
      best = t.cells[r].front().support;
      pick = r;
    }
  }
  if (pick) SuppressRow(t, *pick);
}

SuppressionReason ReasonFor(const Table& t, std::size_t r, std::size_t c, std::size_t k_min) {
  const Cell& cell = t.cells[r][c];
  std::size_t support = t.has_margins ? cell.support : t.cells[r].front().support;
  if (support < k_min) return SuppressionReason::kPrimary;
  if (cell.extremum && cell.support < std::max<std::size_t>(k_min, 2)) {
    return SuppressionReason::kExtremum;
  }
  return SuppressionReason::kSecondary;
}

std::string_view ReasonName(SuppressionReason r) {
  switch (r) {
    case SuppressionReason::kPrimary: return "primary";
    case SuppressionReason::kExtremum: return "extremum";
    case SuppressionReason::kSecondary: return "secondary";
  }
  return "primary";
}

SuppressionReason ParseReason(std::string_view s) {
  if (s == "primary") return SuppressionReason::kPrimary;
  if (s == "extremum") return SuppressionReason::kExtremum;
  return SuppressionReason::kSecondary;
}

AnalysisKind ParseKind(std::string_view s) {
  if (s == "crosstab") return AnalysisKind::kCrosstab;
  if (s == "binned_association") return AnalysisKind::kBinnedAssociation;
  return AnalysisKind::kDescriptive;
}

}  // namespace

json DisclosurePolicy::ToJson() const {
  return {{"k_min", k_min}, {"suppress_marker", suppress_marker}};
}

DisclosurePolicy DisclosurePolicy::FromJson(const json& j) {
  DisclosurePolicy p;
  p.k_min = j.value("k_min", p.k_min);
  p.suppress_marker = j.value("suppress_marker", p.suppress_marker);
  if (p.k_min < 1) throw Error(ErrorCode::kInvalidSpec, "k_min must be >= 1");
  return p;
}

ValidatedResult Validate(const RawResult& raw, const DisclosurePolicy& policy) {
  const std::size_t k = std::max<std::size_t>(policy.k_min, 1);
  ValidatedResult v;
  v.tables = raw.tables;
  v.k_min = k;
  v.suppress_marker = policy.suppress_marker;
  v.records_before = raw.records_before;
  v.records_after = raw.records_after;

  for (Table& t : v.tables) {
    if (t.has_margins) {
      for (auto& row : t.cells) {
        for (Cell& c : row) {
          if (c.support < k) c.suppressed = true;
        }
      }
      while (SecondaryPassCrosstab(t)) {
      }
    } else {
      ValidateGroupedTable(t, k);
    }
  }

  for (std::size_t ti = 0; ti < v.tables.size(); ++ti) {
    Table& t = v.tables[ti];
    for (std::size_t r = 0; r < t.cells.size(); ++r) {
      for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
        Cell& cell = t.cells[r][c];
        if (!cell.suppressed) continue;
        cell.value.reset();
        v.suppressed.push_back({ti, r, c, ReasonFor(t, r, c, k)});
      }
    }
  }
  return v;
}

RawResult ToRaw(const ValidatedResult& v) {
  RawResult r;
  r.kind = v.tables.empty() ? AnalysisKind::kDescriptive : v.tables.front().kind;
  r.tables = v.tables;
  r.records_before = v.records_before;
  r.records_after = v.records_after;
  return r;
}

json ValidatedResult::ToJson() const {
  auto count = [&](std::size_t n) -> json {
    if (n < k_min) return suppress_marker;
    return n;
  };
  json tables_json = json::array();
  for (const Table& t : tables) {
    json cells = json::array();
    for (const auto& row : t.cells) {
      json jr = json::array();
      for (const Cell& c : row) {
        if (c.suppressed) {
          jr.push_back(suppress_marker);
        } else if (c.value) {
          jr.push_back(*c.value);
        } else {
          jr.push_back(nullptr);
        }
      }
      cells.push_back(std::move(jr));
    }
    tables_json.push_back({{"name", t.name},
                           {"kind", std::string(AnalysisKindName(t.kind))},
                           {"row_header", t.row_header},
                           {"row_labels", t.row_labels},
                           {"columns", t.columns},
                           {"has_margins", t.has_margins},
                           {"cells", std::move(cells)},
                           {"plot_hint",
                            {{"x_axis", t.plot.x_axis},
                             {"y_axis", t.plot.y_axis},
                             {"bin_edges", t.plot.bin_edges}}}});
  }
  json suppressed_json = json::array();
  for (const SuppressedCell& s : suppressed) {
    suppressed_json.push_back({{"table", s.table},
                               {"row", s.row},
                               {"column", s.column},
                               {"reason", std::string(ReasonName(s.reason))}});
  }
  json before = json::object();
  for (const auto& [station, n] : records_before) before[station] = count(n);
  json link = linkage;
  if (link.is_object() && link.contains("class_counts")) {
    for (auto& [name, n] : link["class_counts"].items()) {
      if (n.is_number_integer() && n.get<std::int64_t>() >= 0) n = count(n.get<std::size_t>());
    }
    for (const char* key : {"accepted", "candidate_pairs", "composite_collisions"}) {
      if (link.contains(key) && link[key].is_number_integer() && link[key].get<std::int64_t>() >= 0) {
        link[key] = count(link[key].get<std::size_t>());
      }
    }
  }
  return {{"suppress_marker", suppress_marker},
          {"tables", std::move(tables_json)},
          {"audit",
           {{"k_min", k_min},
            {"suppressed_cells", std::move(suppressed_json)},
            {"records_before", std::move(before)},
            {"records_after", count(records_after)},
            {"linkage", std::move(link)}}}};
}

ValidatedResult ValidatedResult::FromJson(const json& j) {
  ValidatedResult v;
  try {
    v.suppress_marker = j.at("suppress_marker").get<std::string>();
    const json& audit = j.at("audit");
    v.k_min = audit.at("k_min").get<std::size_t>();
    auto count = [&](const json& n) -> std::size_t {
      return n.is_number() ? n.get<std::size_t>() : 0;
    };
    for (const auto& [station, n] : audit.at("records_before").items()) {
      v.records_before[station] = count(n);
    }
    v.records_after = count(audit.at("records_after"));
    v.linkage = audit.at("linkage");
    for (const json& s : audit.at("suppressed_cells")) {
      v.suppressed.push_back({s.at("table").get<std::size_t>(), s.at("row").get<std::size_t>(),
                              s.at("column").get<std::size_t>(),
                              ParseReason(s.at("reason").get<std::string>())});
    }
    for (const json& jt : j.at("tables")) {
      Table t;
      t.name = jt.at("name").get<std::string>();
      t.kind = ParseKind(jt.at("kind").get<std::string>());
      t.row_header = jt.at("row_header").get<std::string>();
      t.row_labels = jt.at("row_labels").get<std::vector<std::string>>();
      t.columns = jt.at("columns").get<std::vector<std::string>>();
      t.has_margins = jt.at("has_margins").get<bool>();
      const json& ph = jt.at("plot_hint");
      t.plot = {ph.at("x_axis").get<std::string>(), ph.at("y_axis").get<std::string>(),
                ph.at("bin_edges").get<std::vector<double>>()};
      for (const json& jr : jt.at("cells")) {
        std::vector<Cell> row;
        for (const json& jc : jr) {
          Cell c;
          if (jc.is_string()) {
            c.suppressed = true;
          } else if (jc.is_number()) {
            c.value = jc.get<double>();
          }
          row.push_back(c);
        }
        t.cells.push_back(std::move(row));
      }
      v.tables.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("validated result: ") + e.what());
  }
  return v;
}

std::string ValidatedResult::ToCanonicalString() const { return CanonicalJson(ToJson()); }

std::string TableCsv(const Table& table, const std::string& marker) {
  std::string out = CsvEscape(table.row_header);
  for (const std::string& c : table.columns) out += "," + CsvEscape(c);
  out += '\n';
  for (std::size_t r = 0; r < table.cells.size(); ++r) {
    out += CsvEscape(r < table.row_labels.size() ? table.row_labels[r] : "");
    for (const Cell& c : table.cells[r]) {
      out += ',';
      if (c.suppressed) {
        out += CsvEscape(marker);
      } else if (c.value) {
        out += FormatNumber(*c.value);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace pht
