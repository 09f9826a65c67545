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

#include <cmath>

#include "generators.h"
#include "pht/analysis.h"
#include "pht/error.h"

namespace pht {
namespace {

Dataset Numbers(const std::vector<double>& xs, const std::vector<double>& ys = {}) {
  Dataset ds;
  ds.station_id = "merged";
  ds.schema = {{"x", VarType::kNumeric}, {"y", VarType::kNumeric}, {"c", VarType::kCategorical}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Record r;
    r.payload = {{"x", xs[i]}, {"y", ys.empty() ? 0.0 : ys[i]}, {"c", std::string("k")}};
    ds.rows.push_back(r);
  }
  ds.descriptor.row_count = xs.size();
  return ds;
}

TEST(Descriptive, HandComputedStatistics) {
  AnalysisSpec s{AnalysisKind::kDescriptive, {"x"}, std::nullopt};
  RawResult r = RunAnalysis(Numbers({2, 4, 4, 4, 5, 5, 7, 9}), s);
  ASSERT_EQ(r.tables.size(), 1u);
  const Table& t = r.tables[0];
  EXPECT_EQ(t.columns, (std::vector<std::string>{"count", "mean", "min", "max", "stddev"}));
  const auto& row = t.cells[0];
  EXPECT_EQ(*row[0].value, 8.0);
  EXPECT_EQ(*row[1].value, 5.0);
  EXPECT_EQ(*row[2].value, 2.0);
  EXPECT_TRUE(row[2].extremum);
  EXPECT_EQ(*row[3].value, 9.0);
  EXPECT_NEAR(*row[4].value, std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_EQ(r.records_after, 8u);
}

TEST(Descriptive, DegenerateSizes) {
  AnalysisSpec s{AnalysisKind::kDescriptive, {"x"}, std::nullopt};
  const auto one = RunAnalysis(Numbers({3}), s).tables[0].cells[0];
  EXPECT_EQ(*one[1].value, 3.0);
  EXPECT_FALSE(one[4].value);
  const auto none = RunAnalysis(Numbers({}), s).tables[0].cells[0];
  EXPECT_EQ(*none[0].value, 0.0);
  EXPECT_FALSE(none[1].value);
}

TEST(Crosstab, MarginsAddUp) {
  testing::Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    Dataset ds = testing::RandomAnalysisData(rng, static_cast<std::size_t>(testing::UniformInt(rng, 1, 300)));
    Table t = RunAnalysis(ds, {AnalysisKind::kCrosstab, {"c", "d"}, std::nullopt}).tables[0];
    ASSERT_TRUE(t.has_margins);
    std::size_t rows = t.cells.size(), cols = t.cells[0].size();
    EXPECT_EQ(t.row_labels.back(), "Total");
    EXPECT_EQ(t.columns.back(), "Total");
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0;
      for (std::size_t c = 0; c + 1 < cols; ++c) sum += *t.cells[r][c].value;
      EXPECT_EQ(sum, *t.cells[r][cols - 1].value);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double sum = 0;
      for (std::size_t r = 0; r + 1 < rows; ++r) sum += *t.cells[r][c].value;
      EXPECT_EQ(sum, *t.cells[rows - 1][c].value);
    }
    EXPECT_EQ(*t.cells[rows - 1][cols - 1].value, static_cast<double>(ds.rows.size()));
  }
}

TEST(Binned, ExplicitEdgesAndWidth) {
  Dataset ds = Numbers({18, 25, 26, 39, 40, 90}, {1, 2, 4, 8, 16, 32});
  AnalysisSpec s{AnalysisKind::kBinnedAssociation, {"x", "y"}, Binning{"x", std::nullopt, {20, 30, 40}}};
  Table t = RunAnalysis(ds, s).tables[0];
  EXPECT_EQ(t.row_labels, (std::vector<std::string>{"[20,30)", "[30,40)"}));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"count", "mean_y"}));
  EXPECT_EQ(*t.cells[0][0].value, 2.0);
  EXPECT_EQ(*t.cells[0][1].value, 3.0);
  EXPECT_EQ(*t.cells[1][1].value, 8.0);
  EXPECT_EQ(t.plot.bin_edges, (std::vector<double>{20, 30, 40}));

  s.binning = Binning{"x", 25.0, {}};
  t = RunAnalysis(ds, s).tables[0];
  EXPECT_EQ(t.plot.bin_edges, (std::vector<double>{0, 25, 50, 75, 100}));
  EXPECT_EQ(*t.cells[0][0].value, 1.0);
  EXPECT_EQ(*t.cells[1][0].value, 4.0);
  EXPECT_EQ(*t.cells[2][0].value, 0.0);
  EXPECT_FALSE(t.cells[2][1].value);
  EXPECT_EQ(*t.cells[3][0].value, 1.0);
}

TEST(AnalysisSpec, RejectsMalformedSpecs) {
  Dataset ds = Numbers({1, 2});
  auto code = [&](const AnalysisSpec& s) {
    try {
      RunAnalysis(ds, s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code({AnalysisKind::kDescriptive, {"nope"}, std::nullopt}), ErrorCode::kUnknownVariable);
  EXPECT_EQ(code({AnalysisKind::kDescriptive, {"c"}, std::nullopt}), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code({AnalysisKind::kCrosstab, {"c"}, std::nullopt}), ErrorCode::kInvalidAnalysis);
  EXPECT_EQ(code({AnalysisKind::kCrosstab, {"x", "c"}, std::nullopt}), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code({AnalysisKind::kBinnedAssociation, {"x", "y"}, std::nullopt}),
            ErrorCode::kInvalidAnalysis);
  EXPECT_EQ(code({AnalysisKind::kBinnedAssociation, {"x", "y"}, Binning{"x", std::nullopt, {3, 2}}}),
            ErrorCode::kInvalidAnalysis);
  EXPECT_EQ(code({AnalysisKind::kBinnedAssociation, {"x", "y"}, Binning{"x", 0.0, {}}}),
            ErrorCode::kInvalidAnalysis);
  EXPECT_EQ(code({AnalysisKind::kBinnedAssociation, {"x", "y"}, Binning{"y", 5.0, {}}}),
            ErrorCode::kInvalidAnalysis);
}

TEST(AnalysisSpec, JsonRoundTrip) {
  testing::Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    AnalysisSpec s = testing::RandomAnalysis(rng);
    EXPECT_EQ(AnalysisSpec::FromJson(s.ToJson()).ToJson(), s.ToJson());
  }
  EXPECT_THROW(AnalysisSpec::FromJson({{"kind", "regression"}, {"variables", {"x"}}}), Error);
}

}  // namespace
}  // namespace pht
