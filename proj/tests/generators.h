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

#ifndef PHT_TESTS_GENERATORS_H_
#define PHT_TESTS_GENERATORS_H_

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pht/analysis.h"
#include "pht/core_model.h"
#include "pht/network.h"
#include "pht/pseudonym.h"

namespace pht::testing {

using Rng = std::mt19937_64;

int UniformInt(Rng& rng, int lo, int hi);

QuasiIdentifierSet RandomQid(Rng& rng);

// A non-canonical spelling of `qid`: lower case zip with stray spaces,
// padded house numbers, long-form gender, DD-MM-YYYY dates.
RawQid RandomSpelling(const QuasiIdentifierSet& qid, Rng& rng);

Salt FixedSalt(std::uint8_t fill, const std::string& run_id = "run-test");

// Two pseudonymized sides over a deliberately small value space so that
// partial agreements, ties and competing candidates are common.
struct LinkInstance {
  std::vector<PseudonymVector> a;
  std::vector<PseudonymVector> b;
};
LinkInstance RandomLinkInstance(Rng& rng, std::size_t max_n);

// Wraps pseudonyms into a dataset with no payload.
Dataset PseudonymDataset(const std::string& station_id, const std::vector<PseudonymVector>& rows);

// A merged-style dataset with numeric x, y and categorical c, d columns.
Dataset RandomAnalysisData(Rng& rng, std::size_t n);
AnalysisSpec RandomAnalysis(Rng& rng);

// A small two-station deployment: descriptive statistics over age and
// activity with k_min 5 and probabilistic linkage.
ScenarioOptions SmallScenario(std::uint64_t seed, std::size_t n_large = 300,
                              std::size_t n_small = 60);

}  // namespace pht::testing

#endif  // PHT_TESTS_GENERATORS_H_
