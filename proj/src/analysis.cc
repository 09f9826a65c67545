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

#include "pht/analysis.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "pht/dataset_io.h"
#include "pht/error.h"

namespace pht {
namespace {

using nlohmann::json;

struct ColumnRef {
  std::size_t index;
  VarType type;
};

ColumnRef Lookup(const Dataset& ds, const std::string& name) {
  auto idx = ds.ColumnIndex(name);
  if (!idx) throw Error(ErrorCode::kUnknownVariable, name);
  return {*idx, ds.schema[*idx].type};
}

void RequireType(const std::string& name, VarType actual, VarType wanted) {
  if (actual != wanted) {
    throw Error(ErrorCode::kTypeMismatch, name + " is " + std::string(VarTypeName(actual)) +
                                              ", need " + std::string(VarTypeName(wanted)));
  }
}

Cell Stat(std::optional<double> v, std::size_t n, bool extremum = false) {
  return Cell{v, n, extremum, false};
}

Table Descriptive(const Dataset& ds, const AnalysisSpec& spec) {
  Table t;
  t.name = "descriptive";
  t.kind = AnalysisKind::kDescriptive;
  t.row_header = "variable";
  t.columns = {"count", "mean", "min", "max", "stddev"};
  for (const std::string& var : spec.variables) {
    ColumnRef col = Lookup(ds, var);
    RequireType(var, col.type, VarType::kNumeric);
    std::vector<double> xs;
    xs.reserve(ds.rows.size());
    for (const Record& r : ds.rows) xs.push_back(std::get<double>(r.payload[col.index].second));
    std::size_t n = xs.size();
    std::vector<Cell> row{Stat(static_cast<double>(n), n)};
    if (n == 0) {
      row.push_back(Stat(std::nullopt, 0));
      row.push_back(Stat(std::nullopt, 0, true));
      row.push_back(Stat(std::nullopt, 0, true));
      row.push_back(Stat(std::nullopt, 0));
    } else {
      double sum = 0.0;
      for (double x : xs) sum += x;
      double mean = sum / static_cast<double>(n);
      std::optional<double> sd;
      if (n >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        sd = std::sqrt(ss / static_cast<double>(n - 1));
      }
      row.push_back(Stat(mean, n));
      row.push_back(Stat(*std::min_element(xs.begin(), xs.end()), n, true));
      row.push_back(Stat(*std::max_element(xs.begin(), xs.end()), n, true));
      row.push_back(Stat(sd, n));
    }
    t.row_labels.push_back(var);
    t.cells.push_back(std::move(row));
  }
  return t;
}

Table Crosstab(const Dataset& ds, const AnalysisSpec& spec) {
  const std::string& rv = spec.variables[0];
  const std::string& cv = spec.variables[1];
  ColumnRef rc = Lookup(ds, rv);
  ColumnRef cc = Lookup(ds, cv);
  RequireType(rv, rc.type, VarType::kCategorical);
  RequireType(cv, cc.type, VarType::kCategorical);

  std::set<std::string> rcats, ccats;
  for (const Record& r : ds.rows) {
    rcats.insert(std::get<std::string>(r.payload[rc.index].second));
    ccats.insert(std::get<std::string>(r.payload[cc.index].second));
  }
  std::vector<std::string> rl(rcats.begin(), rcats.end());
  std::vector<std::string> cl(ccats.begin(), ccats.end());
  std::vector<std::vector<std::size_t>> n(rl.size() + 1, std::vector<std::size_t>(cl.size() + 1));
  for (const Record& r : ds.rows) {
    auto ri = static_cast<std::size_t>(
        std::lower_bound(rl.begin(), rl.end(), std::get<std::string>(r.payload[rc.index].second)) -
        rl.begin());
    auto ci = static_cast<std::size_t>(
        std::lower_bound(cl.begin(), cl.end(), std::get<std::string>(r.payload[cc.index].second)) -
        cl.begin());
    ++n[ri][ci];
    ++n[ri][cl.size()];
    ++n[rl.size()][ci];
    ++n[rl.size()][cl.size()];
  }

  Table t;
  t.name = "crosstab";
  t.kind = AnalysisKind::kCrosstab;
  t.row_header = rv + " \\ " + cv;
  t.row_labels = rl;
  t.row_labels.push_back("Total");
  t.columns = cl;
  t.columns.push_back("Total");
  t.has_margins = true;
  t.plot = {rv, cv, {}};
  for (const auto& counts : n) {
    std::vector<Cell> row;
    for (std::size_t c : counts) row.push_back(Stat(static_cast<double>(c), c));
    t.cells.push_back(std::move(row));
  }
  return t;
}

std::vector<double> EdgesFor(const Binning& b, const std::vector<double>& xs) {
  if (!b.width) return b.edges;
  std::vector<double> edges;
  if (xs.empty()) return edges;
  double w = *b.width;
  double lo = std::floor(*std::min_element(xs.begin(), xs.end()) / w) * w;
  double hi = *std::max_element(xs.begin(), xs.end());
  for (std::size_t k = 0;; ++k) {
    double e = lo + static_cast<double>(k) * w;
    edges.push_back(e);
    if (e > hi) break;
  }
  return edges;
}

std::string BinLabel(double lo, double hi) {
  return "[" + FormatNumber(lo) + "," + FormatNumber(hi) + ")";
}

Table Binned(const Dataset& ds, const AnalysisSpec& spec) {
  const std::string& xv = spec.variables[0];
  const std::string& yv = spec.variables[1];
  ColumnRef xc = Lookup(ds, xv);
  ColumnRef yc = Lookup(ds, yv);
  RequireType(xv, xc.type, VarType::kNumeric);
  RequireType(yv, yc.type, VarType::kNumeric);

  std::vector<double> xs, ys;
  for (const Record& r : ds.rows) {
    xs.push_back(std::get<double>(r.payload[xc.index].second));
    ys.push_back(std::get<double>(r.payload[yc.index].second));
  }
  std::vector<double> edges = EdgesFor(*spec.binning, xs);
  std::size_t bins = edges.size() < 2 ? 0 : edges.size() - 1;
  std::vector<std::size_t> count(bins);
  std::vector<double> sum(bins);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (bins == 0 || xs[i] < edges.front() || xs[i] >= edges.back()) continue;
    auto bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), xs[i]) -
                                        edges.begin()) - 1;
    ++count[bin];
    sum[bin] += ys[i];
  }

  Table t;
  t.name = "binned_association";
  t.kind = AnalysisKind::kBinnedAssociation;
  t.row_header = xv;
  t.columns = {"count", "mean_" + yv};
  t.plot = {xv, "mean " + yv, edges};
  for (std::size_t k = 0; k < bins; ++k) {
    t.row_labels.push_back(BinLabel(edges[k], edges[k + 1]));
    std::optional<double> mean;
    if (count[k] > 0) mean = sum[k] / static_cast<double>(count[k]);
    t.cells.push_back({Stat(static_cast<double>(count[k]), count[k]), Stat(mean, count[k])});
  }
  return t;
}

}  // namespace

std::string_view AnalysisKindName(AnalysisKind k) {
  switch (k) {
    case AnalysisKind::kDescriptive: return "descriptive";
    case AnalysisKind::kCrosstab: return "crosstab";
    case AnalysisKind::kBinnedAssociation: return "binned_association";
  }
  return "descriptive";
}

void AnalysisSpec::Validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kInvalidAnalysis, why); };
  if (variables.empty() || variables.size() > 2) fail("analysis takes 1 or 2 variables");
  if (kind == AnalysisKind::kCrosstab && variables.size() != 2) fail("crosstab takes 2 variables");
  if (kind == AnalysisKind::kBinnedAssociation) {
    if (variables.size() != 2) fail("binned_association takes 2 variables");
    if (!binning) fail("binned_association needs a binning");
    if (binning->variable != variables[0]) fail("binning must apply to the first variable");
    if (binning->width) {
      if (!(*binning->width > 0.0) || !std::isfinite(*binning->width)) fail("bin width must be > 0");
      if (!binning->edges.empty()) fail("give either width or edges");
    } else {
      if (binning->edges.size() < 2) fail("need at least two bin edges");
      for (std::size_t i = 1; i < binning->edges.size(); ++i) {
        if (!(binning->edges[i] > binning->edges[i - 1])) fail("bin edges must strictly increase");
      }
    }
  }
}

json AnalysisSpec::ToJson() const {
  json j = {{"kind", std::string(AnalysisKindName(kind))}, {"variables", variables}};
  if (binning) {
    json b = {{"variable", binning->variable}};
    if (binning->width) {
      b["width"] = *binning->width;
    } else {
      b["edges"] = binning->edges;
    }
    j["binning"] = b;
  }
  return j;
}

AnalysisSpec AnalysisSpec::FromJson(const json& j) {
  AnalysisSpec s;
  try {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "descriptive") {
      s.kind = AnalysisKind::kDescriptive;
    } else if (kind == "crosstab") {
      s.kind = AnalysisKind::kCrosstab;
    } else if (kind == "binned_association") {
      s.kind = AnalysisKind::kBinnedAssociation;
    } else {
      throw Error(ErrorCode::kInvalidAnalysis, "unknown analysis kind " + kind);
    }
    s.variables = j.at("variables").get<std::vector<std::string>>();
    if (j.contains("binning")) {
      const json& b = j.at("binning");
      Binning bin;
      bin.variable = b.at("variable").get<std::string>();
      if (b.contains("width")) bin.width = b.at("width").get<double>();
      if (b.contains("edges")) bin.edges = b.at("edges").get<std::vector<double>>();
      s.binning = bin;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidAnalysis, e.what());
  }
  s.Validate();
  return s;
}

RawResult RunAnalysis(const Dataset& merged, const AnalysisSpec& spec) {
  spec.Validate();
  RawResult r;
  r.kind = spec.kind;
  r.records_after = merged.rows.size();
  switch (spec.kind) {
    case AnalysisKind::kDescriptive: r.tables.push_back(Descriptive(merged, spec)); break;
    case AnalysisKind::kCrosstab: r.tables.push_back(Crosstab(merged, spec)); break;
    case AnalysisKind::kBinnedAssociation: r.tables.push_back(Binned(merged, spec)); break;
  }
  return r;
}

}  // namespace pht
