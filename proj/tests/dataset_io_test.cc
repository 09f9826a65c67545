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
#include <fstream>
#include <limits>

#include "generators.h"
#include "pht/dataset_io.h"
#include "pht/error.h"
#include "pht/population.h"
#include "pht/pseudonym.h"

namespace pht {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("pht_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void WriteText(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

TEST(DatasetFiles, RoundTrip) {
  TempDir dir;
  SyntheticPopulationSpec spec;
  spec.n_large = 200;
  spec.n_small = 50;
  Population pop = GeneratePopulation(spec);
  fs::path csv = dir.path() / "station_B.csv";
  WriteDataset(pop.small, csv);
  EXPECT_TRUE(fs::exists(DescriptorPath(csv)));
  Dataset back = ReadDataset(csv);
  Dataset expect = pop.small;
  expect.descriptor.source = csv.string();
  EXPECT_EQ(back, expect);
}

TEST(DatasetFiles, CanonicalizesOnLoadAndNamesBadField) {
  TempDir dir;
  fs::path csv = dir.path() / "d.csv";
  Dataset ds;
  ds.station_id = "A";
  ds.schema = {{"age", VarType::kNumeric}};
  ds.descriptor.row_count = 1;
  WriteText(DescriptorPath(csv), DescriptorJson(ds).dump());
  WriteText(csv, "zip_code,house_number,gender,date_of_birth,age\n6211 ab,012,female,15-03-1960,61\n");
  Dataset back = ReadDataset(csv);
  ASSERT_EQ(back.rows.size(), 1u);
  EXPECT_EQ(*back.rows[0].qid(), (QuasiIdentifierSet{"6211AB", "12", Gender::kFemale, "1960-03-15"}));

  WriteText(csv, "zip_code,house_number,gender,date_of_birth,age\n6211AB,12,?,1960-03-15,61\n");
  try {
    ReadDataset(csv);
    FAIL();
  } catch (const MalformedField& e) {
    EXPECT_EQ(e.field(), "gender");
  }
  EXPECT_THROW(ReadDataset(dir.path() / "missing.csv"), Error);
}

TEST(Csv, SplitAndEscape) {
  EXPECT_EQ(SplitCsvLine("a,\"b,c\",\"d\"\"e\","),
            (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
  EXPECT_EQ(CsvEscape("plain"), "plain");
  EXPECT_EQ(CsvEscape("x,y"), "\"x,y\"");
  EXPECT_EQ(CsvEscape("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(FormatNumber(40.0), "40");
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(-2.5), "-2.5");
  testing::Rng rng(3);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    double v = d(rng);
    EXPECT_EQ(std::stod(FormatNumber(v)), v);
  }
}

TEST(Pseudonymized, RoundTripAndRefusesRawRows) {
  SyntheticPopulationSpec spec;
  spec.n_large = 30;
  spec.n_small = 10;
  Population pop = GeneratePopulation(spec);
  EXPECT_THROW(SerializePseudonymized(pop.small), Error);

  Dataset ds = pop.small;
  Salt salt = testing::FixedSalt(5);
  for (Record& r : ds.rows) r.identity = Pseudonymize(*r.qid(), salt);
  Bytes wire = SerializePseudonymized(ds);
  EXPECT_EQ(ParsePseudonymized(wire), ds);
  std::string text = AsString(wire);
  for (const Record& r : pop.small.rows) {
    EXPECT_EQ(text.find(r.qid()->date_of_birth), std::string::npos);
  }

  Dataset merged = ds;
  for (Record& r : merged.rows) r.identity = std::monostate{};
  EXPECT_EQ(ParsePseudonymized(SerializePseudonymized(merged)), merged);
  EXPECT_THROW(ParsePseudonymized(AsBytes("{not json")), Error);
}

TEST(Schema, JsonRoundTrip) {
  Schema s = {{"age", VarType::kNumeric}, {"status", VarType::kCategorical},
              {"seen", VarType::kDate}};
  EXPECT_EQ(ParseSchema(SchemaJson(s)), s);
  EXPECT_THROW(ParseVarType("complex"), Error);
}

}  // namespace
}  // namespace pht
