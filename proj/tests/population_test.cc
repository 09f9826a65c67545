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

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "pht/error.h"
#include "pht/population.h"

namespace pht {
namespace {

std::string Key(const QuasiIdentifierSet& q) {
  return q.zip_code + "|" + q.house_number + "|" + std::string(GenderCode(q.gender)) + "|" +
         q.date_of_birth;
}

TEST(Population, DeterministicForFixedSpec) {
  SyntheticPopulationSpec spec;
  spec.perturbation_rate = 0.1;
  spec.seed = 42;
  Population a = GeneratePopulation(spec);
  Population b = GeneratePopulation(spec);
  EXPECT_EQ(a.large, b.large);
  EXPECT_EQ(a.small, b.small);
  EXPECT_EQ(a.truth, b.truth);
  spec.seed = 43;
  EXPECT_NE(GeneratePopulation(spec).large, a.large);
}

TEST(Population, ShapeAndGroundTruth) {
  SyntheticPopulationSpec spec;
  spec.n_large = 10000;
  spec.n_small = 1000;
  spec.overlap_fraction = 0.8;
  Population pop = GeneratePopulation(spec);
  ASSERT_EQ(pop.large.rows.size(), 10000u);
  ASSERT_EQ(pop.small.rows.size(), 1000u);
  ASSERT_EQ(pop.truth.size(), 800u);
  EXPECT_NO_THROW(pop.large.Validate());
  EXPECT_NO_THROW(pop.small.Validate());
  for (auto [s, l] : pop.truth) {
    EXPECT_EQ(*pop.small.rows[s].qid(), *pop.large.rows[l].qid());
  }
  std::set<std::string> seen;
  for (const Record& r : pop.large.rows) EXPECT_TRUE(seen.insert(Key(*r.qid())).second);
  std::set<std::size_t> small_in_truth;
  for (auto [s, l] : pop.truth) small_in_truth.insert(s);
  for (std::size_t i = 0; i < pop.small.rows.size(); ++i) {
    if (!small_in_truth.count(i)) EXPECT_FALSE(seen.count(Key(*pop.small.rows[i].qid())));
  }
}

TEST(Population, SmallSideAgesInRange) {
  SyntheticPopulationSpec spec;
  spec.n_large = 500;
  spec.n_small = 200;
  spec.age_min = 40;
  spec.age_max = 75;
  Population pop = GeneratePopulation(spec);
  auto ref = *ParseIsoDate(spec.reference_date);
  for (const Record& r : pop.small.rows) {
    int age = AgeAt(*ParseIsoDate(r.qid()->date_of_birth), ref);
    EXPECT_GE(age, 40);
    EXPECT_LE(age, 75);
  }
}

// 800 true pairs x 4 fields at rate 0.05: a 99% binomial interval.
TEST(Population, PerturbationCountWithinBinomialInterval) {
  SyntheticPopulationSpec spec;
  spec.n_large = 10000;
  spec.n_small = 1000;
  spec.perturbation_rate = 0.05;
  Population pop = GeneratePopulation(spec);
  EXPECT_GE(pop.perturbed_fields, 129u);
  EXPECT_LE(pop.perturbed_fields, 193u);
  std::size_t differing = 0;
  for (auto [s, l] : pop.truth) {
    const QuasiIdentifierSet& a = *pop.small.rows[s].qid();
    const QuasiIdentifierSet& b = *pop.large.rows[l].qid();
    for (std::size_t f = 0; f < 4; ++f) {
      differing += LinkageFieldValue(a, f) != LinkageFieldValue(b, f) ? 1 : 0;
    }
  }
  EXPECT_EQ(differing, pop.perturbed_fields);
}

TEST(Population, AgeIncomeLayout) {
  SyntheticPopulationSpec spec;
  spec.layout = PayloadLayout::kAgeIncomeSplit;
  Population pop = GeneratePopulation(spec);
  ASSERT_EQ(pop.large.schema.size(), 1u);
  EXPECT_EQ(pop.large.schema[0].name, "age");
  ASSERT_EQ(pop.small.schema.size(), 1u);
  EXPECT_EQ(pop.small.schema[0].name, "income");
}

TEST(Population, RejectsBadSpecs) {
  SyntheticPopulationSpec spec;
  spec.overlap_fraction = 1.5;
  EXPECT_THROW(GeneratePopulation(spec), Error);
  spec = {};
  spec.n_small = 2000;
  spec.n_large = 100;
  EXPECT_THROW(GeneratePopulation(spec), Error);
  spec = {};
  spec.age_min = 80;
  spec.age_max = 40;
  EXPECT_THROW(GeneratePopulation(spec), Error);
}

TEST(Population, SpecJsonAndGroundTruthFile) {
  SyntheticPopulationSpec spec;
  spec.n_large = 300;
  spec.seed = 9;
  spec.layout = PayloadLayout::kAgeIncomeSplit;
  SyntheticPopulationSpec back = SyntheticPopulationSpec::FromJson(spec.ToJson());
  EXPECT_EQ(back.ToJson(), spec.ToJson());

  Population pop = GeneratePopulation(spec);
  auto path = std::filesystem::temp_directory_path() / "pht_truth_test.csv";
  WriteGroundTruth(pop.truth, path);
  EXPECT_EQ(ReadGroundTruth(path), pop.truth);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace pht
