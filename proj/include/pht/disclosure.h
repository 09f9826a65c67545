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

#ifndef PHT_DISCLOSURE_H_
#define PHT_DISCLOSURE_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "pht/analysis.h"

namespace pht {

struct DisclosurePolicy {
  std::size_t k_min = 10;
  std::string suppress_marker = "*";

  nlohmann::json ToJson() const;
  static DisclosurePolicy FromJson(const nlohmann::json& j);
};

enum class SuppressionReason { kPrimary, kExtremum, kSecondary };

struct SuppressedCell {
  std::size_t table = 0;
  std::size_t row = 0;
  std::size_t column = 0;
  SuppressionReason reason = SuppressionReason::kPrimary;

  friend bool operator==(const SuppressedCell&, const SuppressedCell&) = default;
};

struct ValidatedResult {
  std::vector<Table> tables;
  std::size_t k_min = 0;
  std::string suppress_marker = "*";
  std::vector<SuppressedCell> suppressed;
  std::map<std::string, std::size_t> records_before;
  std::size_t records_after = 0;
  // Linkage summary attached by the TSE (class counts, thresholds, u).
  nlohmann::json linkage = nlohmann::json::object();

  // Canonical JSON; suppressed cells carry the marker, absent statistics null.
  nlohmann::json ToJson() const;
  static ValidatedResult FromJson(const nlohmann::json& j);
  std::string ToCanonicalString() const;
};

// Never fails. Cells whose support is below k_min are replaced by the marker
// (a whole group at once for descriptive/binned tables); min/max also go when
// support < max(k_min, 2). In crosstabs and binned count columns a line with
// exactly one suppressed entry gets a second one, repeated to a fixpoint.
ValidatedResult Validate(const RawResult& raw, const DisclosurePolicy& policy);

// Back to a RawResult (suppression flags kept) so that validation can be
// re-applied.
RawResult ToRaw(const ValidatedResult& v);

// One CSV per table: header row then one line per row label.
std::string TableCsv(const Table& table, const std::string& marker);

}  // namespace pht

#endif  // PHT_DISCLOSURE_H_
