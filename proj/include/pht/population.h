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

#ifndef PHT_POPULATION_H_
#define PHT_POPULATION_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pht/core_model.h"

namespace pht {

// Which payload variables each side of the synthetic population carries.
enum class PayloadLayout {
  // large: {age, income}; small: {activity, status}
  kStandard,
  // large: {age}; small: {income}. The two-variable age/income scenario.
  kAgeIncomeSplit,
};

struct SyntheticPopulationSpec {
  std::size_t n_large = 1000;
  std::size_t n_small = 100;
  double overlap_fraction = 0.8;
  // Per-field probability that an overlapping small record differs from its
  // large counterpart.
  double perturbation_rate = 0.0;
  int age_min = 40;
  int age_max = 75;
  std::vector<std::string> region_zip_prefixes = {"6211", "6212", "6221",
                                                  "6411", "6441"};
  std::uint64_t seed = 1;
  // Ages and the descriptor timestamp are computed against this date so that
  // output never depends on the wall clock.
  std::string reference_date = "2020-01-01";
  std::string large_station_id = "A";
  std::string small_station_id = "B";
  PayloadLayout layout = PayloadLayout::kStandard;

  // Throws InvalidSpec.
  void Validate() const;
  std::size_t OverlapCount() const;

  nlohmann::json ToJson() const;
  static SyntheticPopulationSpec FromJson(const nlohmann::json& j);
};

// (index in small dataset, index in large dataset), sorted by small index.
using GroundTruthMap = std::vector<std::pair<std::size_t, std::size_t>>;

struct Population {
  Dataset large;
  Dataset small;
  GroundTruthMap truth;
  // Number of linkage fields changed by perturbation across all true pairs.
  std::size_t perturbed_fields = 0;
};

// Deterministic for a fixed spec. Every generated person has a distinct
// canonical QuasiIdentifierSet. Throws InvalidSpec.
Population GeneratePopulation(const SyntheticPopulationSpec& spec);

void WriteGroundTruth(const GroundTruthMap& truth, const std::filesystem::path& path);
GroundTruthMap ReadGroundTruth(const std::filesystem::path& path);

}  // namespace pht

#endif  // PHT_POPULATION_H_
