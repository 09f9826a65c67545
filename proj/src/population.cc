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

#include "pht/population.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "pht/dataset_io.h"
#include "pht/error.h"

namespace pht {
namespace {

using std::chrono::day;
using std::chrono::days;
using std::chrono::sys_days;
using std::chrono::year_month_day;
using std::chrono::years;

constexpr std::array<const char*, 3> kStatuses = {"normal", "prediabetes", "t2d"};

class PersonFactory {
 public:
  PersonFactory(const SyntheticPopulationSpec& spec, std::mt19937_64& rng)
      : spec_(spec), rng_(rng), ref_(*ParseIsoDate(spec.reference_date)) {}

  // A QuasiIdentifierSet not produced before.
  QuasiIdentifierSet Fresh(int age_min, int age_max, bool regional) {
    for (;;) {
      QuasiIdentifierSet q;
      q.zip_code = Zip(regional);
      q.house_number = std::to_string(Uniform(1, 200));
      q.gender = Uniform(0, 1) == 0 ? Gender::kFemale : Gender::kMale;
      q.date_of_birth = FormatIsoDate(Dob(Uniform(age_min, age_max)));
      std::string key = q.zip_code + "|" + q.house_number + "|" +
                        std::string(GenderCode(q.gender)) + "|" + q.date_of_birth;
      if (used_.insert(std::move(key)).second) return q;
    }
  }

  int Uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  int AgeOf(const QuasiIdentifierSet& q) const {
    return AgeAt(*ParseIsoDate(q.date_of_birth), ref_);
  }

 private:
  std::string Zip(bool regional) {
    std::string prefix;
    if (regional) {
      const auto& p = spec_.region_zip_prefixes;
      prefix = p[static_cast<std::size_t>(Uniform(0, static_cast<int>(p.size()) - 1))];
    } else {
      prefix = std::to_string(Uniform(1000, 9999));
    }
    prefix.push_back(static_cast<char>('A' + Uniform(0, 25)));
    prefix.push_back(static_cast<char>('A' + Uniform(0, 25)));
    return prefix;
  }

  // Uniform over the birth dates that give exactly `age` on the reference date.
  year_month_day Dob(int age) {
    auto shifted = [&](int y) {
      year_month_day d = ref_ - years(y);
      if (!d.ok()) d = year_month_day{d.year() / d.month() / std::chrono::last};
      return sys_days(d);
    };
    sys_days latest = shifted(age);
    sys_days earliest = shifted(age + 1) + days(1);
    int span = static_cast<int>((latest - earliest).count());
    return year_month_day{earliest + days(Uniform(0, span))};
  }

  const SyntheticPopulationSpec& spec_;
  std::mt19937_64& rng_;
  year_month_day ref_;
  std::set<std::string> used_;
};

// Changes linkage field `field` of `q` to a different valid canonical value.
void PerturbField(QuasiIdentifierSet& q, std::size_t field, std::mt19937_64& rng) {
  switch (field) {
    case 0: {
      std::size_t pos = 4 + std::uniform_int_distribution<std::size_t>(0, 1)(rng);
      char old = q.zip_code[pos];
      char repl = static_cast<char>('A' + std::uniform_int_distribution<int>(0, 24)(rng));
      if (repl >= old) ++repl;
      q.zip_code[pos] = repl;
      break;
    }
    case 1: {
      long n = std::stol(q.house_number);
      bool up = n == 1 || std::uniform_int_distribution<int>(0, 1)(rng) == 0;
      q.house_number = std::to_string(up ? n + 1 : n - 1);
      break;
    }
    case 2:
      q.gender = q.gender == Gender::kFemale ? Gender::kMale : Gender::kFemale;
      break;
    case 3: {
      year_month_day d = *ParseIsoDate(q.date_of_birth);
      unsigned dd = static_cast<unsigned>(d.day());
      unsigned mm = static_cast<unsigned>(d.month());
      year_month_day out;
      if (dd <= 12 && dd != mm) {
        out = year_month_day{d.year(), std::chrono::month{dd}, day{mm}};
      } else {
        out = year_month_day{d.year(), d.month(), day{dd < 28 ? dd + 1 : dd - 1}};
      }
      q.date_of_birth = FormatIsoDate(out);
      break;
    }
  }
}

std::vector<std::size_t> SampleIndices(std::size_t n, std::size_t k,
                                       std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates; only the first k positions matter.
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

Dataset EmptyDataset(const std::string& station, Schema schema,
                     const SyntheticPopulationSpec& spec, const char* role) {
  Dataset ds;
  ds.station_id = station;
  ds.schema = std::move(schema);
  ds.descriptor.source =
      "synthetic seed=" + std::to_string(spec.seed) + " role=" + role;
  ds.descriptor.extracted_at = spec.reference_date + "T00:00:00Z";
  return ds;
}

}  // namespace

void SyntheticPopulationSpec::Validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kInvalidSpec, why); };
  if (!(overlap_fraction >= 0.0 && overlap_fraction <= 1.0)) {
    fail("overlap_fraction outside [0,1]");
  }
  if (!(perturbation_rate >= 0.0 && perturbation_rate <= 1.0)) {
    fail("perturbation_rate outside [0,1]");
  }
  if (static_cast<double>(n_small) * overlap_fraction > static_cast<double>(n_large)) {
    fail("n_small * overlap_fraction exceeds n_large");
  }
  if (age_min < 0 || age_min > age_max) fail("age_range must satisfy 0 <= min <= max");
  auto ref = ParseIsoDate(reference_date);
  if (!ref) fail("reference_date must be YYYY-MM-DD");
  if (static_cast<int>(ref->year()) - std::max(age_max, 95) - 1 < 1900) {
    fail("ages reach before 1900");
  }
  if (region_zip_prefixes.empty()) fail("region_zip_prefixes is empty");
  for (const std::string& p : region_zip_prefixes) {
    if (p.size() != 4 || !std::all_of(p.begin(), p.end(), ::isdigit)) {
      fail("zip prefix must be 4 digits: " + p);
    }
  }
  if (large_station_id.empty() || small_station_id.empty() ||
      large_station_id == small_station_id) {
    fail("station ids must be non-empty and distinct");
  }
}

std::size_t SyntheticPopulationSpec::OverlapCount() const {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  return static_cast<std::size_t>(
      std::floor(overlap_fraction * static_cast<double>(n_small) + 1e-9));
}

nlohmann::json SyntheticPopulationSpec::ToJson() const {
  return {{"n_large", n_large},
          {"n_small", n_small},
          {"overlap_fraction", overlap_fraction},
          {"perturbation_rate", perturbation_rate},
          {"age_range", {age_min, age_max}},
          {"region_zip_prefixes", region_zip_prefixes},
          {"seed", seed},
          {"reference_date", reference_date},
          {"large_station_id", large_station_id},
          {"small_station_id", small_station_id},
          {"layout", layout == PayloadLayout::kStandard ? "standard" : "age_income_split"}};
}

SyntheticPopulationSpec SyntheticPopulationSpec::FromJson(const nlohmann::json& j) {
  SyntheticPopulationSpec s;
  try {
    s.n_large = j.value("n_large", s.n_large);
    s.n_small = j.value("n_small", s.n_small);
    s.overlap_fraction = j.value("overlap_fraction", s.overlap_fraction);
    s.perturbation_rate = j.value("perturbation_rate", s.perturbation_rate);
    if (j.contains("age_range")) {
      s.age_min = j.at("age_range").at(0).get<int>();
      s.age_max = j.at("age_range").at(1).get<int>();
    }
    s.region_zip_prefixes = j.value("region_zip_prefixes", s.region_zip_prefixes);
    s.seed = j.value("seed", s.seed);
    s.reference_date = j.value("reference_date", s.reference_date);
    s.large_station_id = j.value("large_station_id", s.large_station_id);
    s.small_station_id = j.value("small_station_id", s.small_station_id);
    std::string layout = j.value("layout", std::string("standard"));
    if (layout == "standard") {
      s.layout = PayloadLayout::kStandard;
    } else if (layout == "age_income_split") {
      s.layout = PayloadLayout::kAgeIncomeSplit;
    } else {
      throw Error(ErrorCode::kInvalidSpec, "unknown layout " + layout);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, e.what());
  }
  s.Validate();
  return s;
}

Population GeneratePopulation(const SyntheticPopulationSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  PersonFactory people(spec, rng);

  const std::size_t k = spec.OverlapCount();
  std::vector<QuasiIdentifierSet> small_true(spec.n_small);
  for (auto& q : small_true) q = people.Fresh(spec.age_min, spec.age_max, true);

  std::vector<std::size_t> overlap_small = SampleIndices(spec.n_small, k, rng);
  std::vector<std::size_t> overlap_large = SampleIndices(spec.n_large, k, rng);

  std::vector<std::optional<std::size_t>> large_from_small(spec.n_large);
  for (std::size_t i = 0; i < k; ++i) {
    large_from_small[overlap_large[i]] = overlap_small[i];
  }
  std::vector<QuasiIdentifierSet> large_qids(spec.n_large);
  for (std::size_t i = 0; i < spec.n_large; ++i) {
    if (large_from_small[i]) {
      large_qids[i] = small_true[*large_from_small[i]];
    } else {
      bool regional = people.Uniform(0, 1) == 0;
      large_qids[i] = people.Fresh(18, 95, regional);
    }
  }

  Population pop;
  std::vector<QuasiIdentifierSet> small_seen = small_true;
  for (std::size_t i = 0; i < k; ++i) {
    pop.truth.emplace_back(overlap_small[i], overlap_large[i]);
    if (spec.perturbation_rate > 0.0) {
      std::bernoulli_distribution flip(spec.perturbation_rate);
      for (std::size_t f = 0; f < 4; ++f) {
        if (flip(rng)) {
          PerturbField(small_seen[overlap_small[i]], f, rng);
          ++pop.perturbed_fields;
        }
      }
    }
  }
  std::sort(pop.truth.begin(), pop.truth.end());

  Schema large_schema{{"age", VarType::kNumeric}};
  Schema small_schema{{"income", VarType::kNumeric}};
  if (spec.layout == PayloadLayout::kStandard) {
    large_schema.push_back({"income", VarType::kNumeric});
    small_schema = {{"activity", VarType::kNumeric}, {"status", VarType::kCategorical}};
  }
  pop.large = EmptyDataset(spec.large_station_id, large_schema, spec, "large");
  pop.small = EmptyDataset(spec.small_station_id, small_schema, spec, "small");

  std::normal_distribution<double> income_noise(0.0, 6000.0);
  std::normal_distribution<double> activity(150.0, 60.0);
  std::discrete_distribution<int> status({60, 25, 15});
  auto income_for = [&](int age) {
    return std::max(0.0, std::round(18000.0 + 450.0 * age + income_noise(rng)));
  };

  for (std::size_t i = 0; i < spec.n_large; ++i) {
    int age = people.AgeOf(large_qids[i]);
    Record r;
    r.identity = large_qids[i];
    r.payload.emplace_back("age", static_cast<double>(age));
    if (spec.layout == PayloadLayout::kStandard) {
      r.payload.emplace_back("income", income_for(age));
    }
    pop.large.rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < spec.n_small; ++i) {
    Record r;
    r.identity = small_seen[i];
    if (spec.layout == PayloadLayout::kStandard) {
      r.payload.emplace_back("activity", std::max(0.0, std::round(activity(rng))));
      r.payload.emplace_back("status", std::string(kStatuses[static_cast<std::size_t>(status(rng))]));
    } else {
      r.payload.emplace_back("income", income_for(people.AgeOf(small_true[i])));
    }
    pop.small.rows.push_back(std::move(r));
  }
  pop.large.descriptor.row_count = pop.large.rows.size();
  pop.small.descriptor.row_count = pop.small.rows.size();
  return pop;
}

void WriteGroundTruth(const GroundTruthMap& truth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << "small_index,large_index\n";
  for (const auto& [s, l] : truth) out << s << ',' << l << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed " + path.string());
}

GroundTruthMap ReadGroundTruth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  GroundTruthMap truth;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = SplitCsvLine(line);
    if (f.size() != 2) throw Error(ErrorCode::kInvalidSpec, "ground truth line");
    truth.emplace_back(std::stoul(f[0]), std::stoul(f[1]));
  }
  return truth;
}

}  // namespace pht
