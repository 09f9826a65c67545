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

#ifndef PHT_ANALYSIS_H_
#define PHT_ANALYSIS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pht/core_model.h"

namespace pht {

enum class AnalysisKind { kDescriptive, kCrosstab, kBinnedAssociation };

struct Binning {
  std::string variable;
  // Exactly one of width / edges is used; edges must be strictly increasing.
  std::optional<double> width;
  std::vector<double> edges;
};

struct AnalysisSpec {
  AnalysisKind kind = AnalysisKind::kDescriptive;
  std::vector<std::string> variables;
  std::optional<Binning> binning;

  // Checks the shape of the spec alone. Throws InvalidAnalysis.
  void Validate() const;

  nlohmann::json ToJson() const;
  static AnalysisSpec FromJson(const nlohmann::json& j);
};

struct Cell {
  std::optional<double> value;
  // Records the value was computed from.
  std::size_t support = 0;
  // Min/max cells: a single record's value.
  bool extremum = false;
  bool suppressed = false;

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct PlotHint {
  std::string x_axis;
  std::string y_axis;
  std::vector<double> bin_edges;

  friend bool operator==(const PlotHint&, const PlotHint&) = default;
};

// Rows are groups (a variable, a bin or a category); columns are statistics
// or, for crosstabs, the second variable's categories. With has_margins the
// last row and the last column hold totals.
struct Table {
  std::string name;
  AnalysisKind kind = AnalysisKind::kDescriptive;
  std::string row_header;
  std::vector<std::string> row_labels;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> cells;
  bool has_margins = false;
  PlotHint plot;

  friend bool operator==(const Table&, const Table&) = default;
};

struct RawResult {
  AnalysisKind kind = AnalysisKind::kDescriptive;
  std::vector<Table> tables;
  // Rows per station before linkage and rows after merging; filled by the
  // caller that knows them.
  std::map<std::string, std::size_t> records_before;
  std::size_t records_after = 0;
};

// descriptive:        count, mean, min, max, stddev (sample) per variable
// crosstab:           counts per category pair with margins
// binned_association: per bin of variables[0], count and mean of variables[1]
// Throws UnknownVariable, TypeMismatch or InvalidAnalysis.
RawResult RunAnalysis(const Dataset& merged, const AnalysisSpec& spec);

std::string_view AnalysisKindName(AnalysisKind k);

}  // namespace pht

#endif  // PHT_ANALYSIS_H_
