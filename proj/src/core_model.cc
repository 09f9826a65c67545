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

#include "pht/core_model.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>

#include "pht/error.h"

namespace pht {
namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;
using std::chrono::year_month_day;

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

int CurrentYear() {
  auto today = std::chrono::floor<std::chrono::days>(
      std::chrono::system_clock::now());
  return static_cast<int>(year_month_day{today}.year());
}

const std::string& Field(const RawQid& raw, std::string_view name) {
  auto it = raw.find(name);
  if (it == raw.end()) throw MalformedField(std::string(name), "");
  return it->second;
}

std::string CanonicalZip(const std::string& raw) {
  std::string zip;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    zip.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  bool ok = zip.size() == 6 && AllDigits(std::string_view(zip).substr(0, 4)) &&
            zip[4] >= 'A' && zip[4] <= 'Z' && zip[5] >= 'A' && zip[5] <= 'Z';
  if (!ok) throw MalformedField("zip_code", raw);
  return zip;
}

std::string CanonicalHouseNumber(const std::string& raw) {
  std::string s = Trim(raw);
  if (!AllDigits(s)) throw MalformedField("house_number", raw);
  std::size_t first = s.find_first_not_of('0');
  if (first == std::string::npos) throw MalformedField("house_number", raw);
  s = s.substr(first);
  if (s.size() > 9) throw MalformedField("house_number", raw);
  return s;
}

Gender CanonicalGender(const std::string& raw) {
  std::string s = Trim(raw);
  if (s == "f" || s == "F" || s == "v" || s == "V" || Lower(s) == "female") {
    return Gender::kFemale;
  }
  if (s == "m" || s == "M" || Lower(s) == "male") return Gender::kMale;
  if (s == "X" || s == "x" || Lower(s) == "other") return Gender::kOther;
  throw MalformedField("gender", raw);
}

std::optional<int> ParseInt(std::string_view s) {
  if (!AllDigits(s)) return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string CanonicalDob(const std::string& raw) {
  std::string s = Trim(raw);
  std::optional<int> y, m, d;
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    y = ParseInt(std::string_view(s).substr(0, 4));
    m = ParseInt(std::string_view(s).substr(5, 2));
    d = ParseInt(std::string_view(s).substr(8, 2));
  } else if (s.size() == 10 && s[2] == '-' && s[5] == '-') {
    d = ParseInt(std::string_view(s).substr(0, 2));
    m = ParseInt(std::string_view(s).substr(3, 2));
    y = ParseInt(std::string_view(s).substr(6, 4));
  }
  if (!y || !m || !d) throw MalformedField("date_of_birth", raw);
  year_month_day date{year{*y}, month{static_cast<unsigned>(*m)},
                      day{static_cast<unsigned>(*d)}};
  if (!date.ok() || *y < 1900 || *y > CurrentYear()) {
    throw MalformedField("date_of_birth", raw);
  }
  return FormatIsoDate(date);
}

}  // namespace

std::string_view GenderCode(Gender g) {
  switch (g) {
    case Gender::kFemale: return "F";
    case Gender::kMale: return "M";
    case Gender::kOther: return "X";
  }
  return "X";
}

std::string_view LinkageFieldValue(const QuasiIdentifierSet& qid,
                                   std::size_t i) {
  switch (i) {
    case 0: return qid.zip_code;
    case 1: return qid.house_number;
    case 2: return GenderCode(qid.gender);
    case 3: return qid.date_of_birth;
  }
  throw Error(ErrorCode::kInternal, "linkage field index out of range");
}

QuasiIdentifierSet Canonicalize(const RawQid& raw) {
  QuasiIdentifierSet qid;
  qid.zip_code = CanonicalZip(Field(raw, "zip_code"));
  qid.house_number = CanonicalHouseNumber(Field(raw, "house_number"));
  qid.gender = CanonicalGender(Field(raw, "gender"));
  qid.date_of_birth = CanonicalDob(Field(raw, "date_of_birth"));
  return qid;
}

QuasiIdentifierSet Canonicalize(const QuasiIdentifierSet& qid) {
  return Canonicalize(ToRaw(qid));
}

RawQid ToRaw(const QuasiIdentifierSet& qid) {
  return {{"zip_code", qid.zip_code},
          {"house_number", qid.house_number},
          {"gender", std::string(GenderCode(qid.gender))},
          {"date_of_birth", qid.date_of_birth}};
}

std::optional<year_month_day> ParseIsoDate(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto y = ParseInt(s.substr(0, 4));
  auto m = ParseInt(s.substr(5, 2));
  auto d = ParseInt(s.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  year_month_day date{year{*y}, month{static_cast<unsigned>(*m)},
                      day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string FormatIsoDate(year_month_day d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

int AgeAt(year_month_day dob, year_month_day as_of) {
  int age = static_cast<int>(as_of.year()) - static_cast<int>(dob.year());
  if (as_of.month() < dob.month() ||
      (as_of.month() == dob.month() && as_of.day() < dob.day())) {
    --age;
  }
  return age;
}

std::string_view VarTypeName(VarType t) {
  switch (t) {
    case VarType::kNumeric: return "numeric";
    case VarType::kCategorical: return "categorical";
    case VarType::kDate: return "date";
  }
  return "numeric";
}

VarType ParseVarType(std::string_view name) {
  if (name == "numeric") return VarType::kNumeric;
  if (name == "categorical") return VarType::kCategorical;
  if (name == "date") return VarType::kDate;
  throw Error(ErrorCode::kInvalidSpec, "unknown variable type " + std::string(name));
}

std::optional<std::size_t> Dataset::ColumnIndex(std::string_view name) const {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].name == name) return i;
  }
  return std::nullopt;
}

void Dataset::Validate() const {
  std::set<std::string, std::less<>> names;
  for (const Column& c : schema) {
    if (!names.insert(c.name).second) {
      throw Error(ErrorCode::kInvalidSpec, "duplicate column " + c.name);
    }
  }
  if (descriptor.row_count != rows.size()) {
    throw Error(ErrorCode::kInvalidSpec, "descriptor row_count " +
                                             std::to_string(descriptor.row_count) +
                                             " != " + std::to_string(rows.size()));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& payload = rows[r].payload;
    if (payload.size() != schema.size()) {
      throw Error(ErrorCode::kInvalidSpec, "row " + std::to_string(r) + " arity");
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (payload[c].first != schema[c].name) {
        throw Error(ErrorCode::kInvalidSpec,
                    "row " + std::to_string(r) + " column " + payload[c].first);
      }
      bool numeric = std::holds_alternative<double>(payload[c].second);
      if (numeric != (schema[c].type == VarType::kNumeric)) {
        throw Error(ErrorCode::kInvalidSpec,
                    "row " + std::to_string(r) + " type of " + schema[c].name);
      }
    }
  }
}

}  // namespace pht
