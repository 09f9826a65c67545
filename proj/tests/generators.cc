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

#include "generators.h"

#include <algorithm>
#include <cctype>

namespace pht::testing {

int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

namespace {

std::string Pad(int v, int width) {
  std::string s = std::to_string(v);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

std::string RandomDate(Rng& rng, int y0, int y1) {
  int y = UniformInt(rng, y0, y1);
  int m = UniformInt(rng, 1, 12);
  int d = UniformInt(rng, 1, 28);
  return Pad(y, 4) + "-" + Pad(m, 2) + "-" + Pad(d, 2);
}

}  // namespace

QuasiIdentifierSet RandomQid(Rng& rng) {
  QuasiIdentifierSet q;
  q.zip_code = Pad(UniformInt(rng, 1000, 9999), 4);
  q.zip_code.push_back(static_cast<char>('A' + UniformInt(rng, 0, 25)));
  q.zip_code.push_back(static_cast<char>('A' + UniformInt(rng, 0, 25)));
  q.house_number = std::to_string(UniformInt(rng, 1, 999));
  q.gender = static_cast<Gender>(UniformInt(rng, 0, 2));
  q.date_of_birth = RandomDate(rng, 1930, 2005);
  return q;
}

RawQid RandomSpelling(const QuasiIdentifierSet& qid, Rng& rng) {
  RawQid raw;
  std::string zip = qid.zip_code;
  if (UniformInt(rng, 0, 1)) {
    for (char& c : zip) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (UniformInt(rng, 0, 1)) zip.insert(4, " ");
  raw["zip_code"] = UniformInt(rng, 0, 1) ? " " + zip + " " : zip;
  raw["house_number"] = std::string(UniformInt(rng, 0, 2), '0') + qid.house_number;
  static const char* kLong[] = {"female", "Male", "OTHER"};
  static const char* kShort[] = {"f", "m", "x"};
  int g = static_cast<int>(qid.gender);
  switch (UniformInt(rng, 0, 2)) {
    case 0: raw["gender"] = kLong[g]; break;
    case 1: raw["gender"] = kShort[g]; break;
    default: raw["gender"] = std::string(GenderCode(qid.gender)); break;
  }
  const std::string& d = qid.date_of_birth;
  raw["date_of_birth"] = UniformInt(rng, 0, 1)
                             ? d.substr(8, 2) + "-" + d.substr(5, 2) + "-" + d.substr(0, 4)
                             : "  " + d;
  return raw;
}

Salt FixedSalt(std::uint8_t fill, const std::string& run_id) {
  return Salt{SecretBytes(Bytes(kSaltBytes, fill)), run_id};
}

LinkInstance RandomLinkInstance(Rng& rng, std::size_t max_n) {
  auto na = static_cast<std::size_t>(UniformInt(rng, 20, static_cast<int>(max_n)));
  auto nb = static_cast<std::size_t>(UniformInt(rng, 20, static_cast<int>(max_n)));
  // Small alphabets: 8 zips, 20 house numbers, 3 genders, 12 dates.
  std::vector<std::string> dates;
  for (int i = 0; i < 12; ++i) dates.push_back(RandomDate(rng, 1950, 1960));
  auto draw = [&] {
    QuasiIdentifierSet q;
    q.zip_code = "62" + Pad(UniformInt(rng, 10, 17), 2) + "AB";
    q.house_number = std::to_string(UniformInt(rng, 1, 20));
    q.gender = static_cast<Gender>(UniformInt(rng, 0, 2));
    q.date_of_birth = dates[static_cast<std::size_t>(UniformInt(rng, 0, 11))];
    return q;
  };
  Salt salt = FixedSalt(static_cast<std::uint8_t>(UniformInt(rng, 0, 255)));
  std::vector<QuasiIdentifierSet> qa;
  for (std::size_t i = 0; i < na; ++i) qa.push_back(draw());
  LinkInstance inst;
  for (const auto& q : qa) inst.a.push_back(Pseudonymize(q, salt));
  for (std::size_t j = 0; j < nb; ++j) {
    QuasiIdentifierSet q = UniformInt(rng, 0, 1) ? qa[static_cast<std::size_t>(
                                                       UniformInt(rng, 0, static_cast<int>(na) - 1))]
                                                 : draw();
    if (UniformInt(rng, 0, 4) == 0) q.house_number = std::to_string(UniformInt(rng, 1, 20));
    inst.b.push_back(Pseudonymize(q, salt));
  }
  return inst;
}

Dataset PseudonymDataset(const std::string& station_id, const std::vector<PseudonymVector>& rows) {
  Dataset ds;
  ds.station_id = station_id;
  for (const auto& p : rows) ds.rows.push_back(Record{p, {}});
  ds.descriptor = {station_id, "2020-01-01T00:00:00Z", rows.size()};
  return ds;
}

Dataset RandomAnalysisData(Rng& rng, std::size_t n) {
  Dataset ds;
  ds.station_id = "merged";
  ds.schema = {{"x", VarType::kNumeric},
               {"y", VarType::kNumeric},
               {"c", VarType::kCategorical},
               {"d", VarType::kCategorical}};
  int c_levels = UniformInt(rng, 1, 5);
  int d_levels = UniformInt(rng, 1, 4);
  for (std::size_t i = 0; i < n; ++i) {
    Record r;
    r.payload.emplace_back("x", static_cast<double>(UniformInt(rng, 18, 90)));
    r.payload.emplace_back("y", static_cast<double>(UniformInt(rng, 0, 100000)) / 4.0);
    // Skewed categories so that small cells are common.
    int c = std::min(UniformInt(rng, 0, c_levels - 1), UniformInt(rng, 0, c_levels - 1));
    r.payload.emplace_back("c", "c" + std::to_string(c));
    r.payload.emplace_back("d", "d" + std::to_string(UniformInt(rng, 0, d_levels - 1)));
    ds.rows.push_back(std::move(r));
  }
  ds.descriptor = {"merged", "2020-01-01T00:00:00Z", n};
  return ds;
}

AnalysisSpec RandomAnalysis(Rng& rng) {
  AnalysisSpec s;
  switch (UniformInt(rng, 0, 2)) {
    case 0:
      s.kind = AnalysisKind::kDescriptive;
      s.variables = UniformInt(rng, 0, 1) ? std::vector<std::string>{"x"}
                                          : std::vector<std::string>{"x", "y"};
      break;
    case 1:
      s.kind = AnalysisKind::kCrosstab;
      s.variables = {"c", "d"};
      break;
    default: {
      s.kind = AnalysisKind::kBinnedAssociation;
      s.variables = {"x", "y"};
      Binning b;
      b.variable = "x";
      if (UniformInt(rng, 0, 1)) {
        b.width = static_cast<double>(UniformInt(rng, 3, 25));
      } else {
        double e = 15.0;
        for (int k = UniformInt(rng, 2, 7); k > 0; --k) {
          b.edges.push_back(e);
          e += UniformInt(rng, 2, 30);
        }
      }
      s.binning = b;
    }
  }
  return s;
}

ScenarioOptions SmallScenario(std::uint64_t seed, std::size_t n_large, std::size_t n_small) {
  ScenarioOptions o;
  o.population.n_large = n_large;
  o.population.n_small = n_small;
  o.population.seed = seed;
  o.analysis = {AnalysisKind::kDescriptive, {"age", "activity"}, std::nullopt};
  o.disclosure = {5, "*"};
  return o;
}

}  // namespace pht::testing
