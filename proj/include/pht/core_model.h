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

#ifndef PHT_CORE_MODEL_H_
#define PHT_CORE_MODEL_H_

#include <array>
#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace pht {

enum class Gender { kFemale, kMale, kOther };

// "F", "M" or "X".
std::string_view GenderCode(Gender g);

// The four linkage fields in canonical form:
//   zip_code       [0-9]{4}[A-Z]{2}
//   house_number   positive decimal integer, no leading zeros
//   date_of_birth  YYYY-MM-DD
struct QuasiIdentifierSet {
  std::string zip_code;
  std::string house_number;
  Gender gender = Gender::kOther;
  std::string date_of_birth;

  friend bool operator==(const QuasiIdentifierSet&,
                         const QuasiIdentifierSet&) = default;
};

inline constexpr std::array<std::string_view, 4> kLinkageFieldNames = {
    "zip_code", "house_number", "gender", "date_of_birth"};

// Canonical string value of linkage field `i` (order as kLinkageFieldNames).
std::string_view LinkageFieldValue(const QuasiIdentifierSet& qid,
                                   std::size_t i);

using RawQid = std::map<std::string, std::string, std::less<>>;

// Throws MalformedField when a field is missing or cannot be canonicalized.
QuasiIdentifierSet Canonicalize(const RawQid& raw);
QuasiIdentifierSet Canonicalize(const QuasiIdentifierSet& qid);
RawQid ToRaw(const QuasiIdentifierSet& qid);

// Parses a canonical ISO date; nullopt when malformed or not a calendar date.
std::optional<std::chrono::year_month_day> ParseIsoDate(std::string_view s);
std::string FormatIsoDate(std::chrono::year_month_day d);

// Completed years between `dob` and `as_of`.
int AgeAt(std::chrono::year_month_day dob, std::chrono::year_month_day as_of);

// Salted digests standing in for the quasi-identifiers (hex, 128 chars each).
struct PseudonymVector {
  std::string composite;
  std::array<std::string, 4> per_field;

  friend bool operator==(const PseudonymVector&,
                         const PseudonymVector&) = default;
};

enum class VarType { kNumeric, kCategorical, kDate };

std::string_view VarTypeName(VarType t);
VarType ParseVarType(std::string_view name);

using Value = std::variant<double, std::string>;

struct Column {
  std::string name;
  VarType type = VarType::kNumeric;

  friend bool operator==(const Column&, const Column&) = default;
};

using Schema = std::vector<Column>;

// A record is identified either by raw quasi-identifiers (at a data station),
// by pseudonyms (after pseudonymization) or not at all (merged rows). The
// variant makes the raw and pseudonymized states mutually exclusive.
using Identity =
    std::variant<std::monostate, QuasiIdentifierSet, PseudonymVector>;

struct Record {
  Identity identity;
  // Values in schema order, keyed by variable name.
  std::vector<std::pair<std::string, Value>> payload;

  const QuasiIdentifierSet* qid() const {
    return std::get_if<QuasiIdentifierSet>(&identity);
  }
  const PseudonymVector* pseudonyms() const {
    return std::get_if<PseudonymVector>(&identity);
  }

  friend bool operator==(const Record&, const Record&) = default;
};

struct Descriptor {
  std::string source;
  std::string extracted_at;
  std::size_t row_count = 0;

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

struct Dataset {
  std::string station_id;
  Schema schema;
  std::vector<Record> rows;
  Descriptor descriptor;

  // Index of `name` in the schema, or nullopt.
  std::optional<std::size_t> ColumnIndex(std::string_view name) const;

  // Throws InvalidSpec if a row does not match the schema (names, types,
  // arity), payload names repeat, or descriptor.row_count != rows.size().
  void Validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace pht

#endif  // PHT_CORE_MODEL_H_
