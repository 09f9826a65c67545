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

#include "pht/dataset_io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pht/error.h"

namespace pht {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path DescriptorPath(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".descriptor.json");
  return p;
}

json SchemaJson(const Schema& schema) {
  json arr = json::array();
  for (const Column& c : schema) {
    arr.push_back({{"name", c.name}, {"type", std::string(VarTypeName(c.type))}});
  }
  return arr;
}

Schema ParseSchema(const json& j) {
  Schema schema;
  for (const json& c : j) {
    schema.push_back({c.at("name").get<std::string>(),
                      ParseVarType(c.at("type").get<std::string>())});
  }
  return schema;
}

json DescriptorJson(const Dataset& ds) {
  return {{"station_id", ds.station_id},
          {"extracted_at", ds.descriptor.extracted_at},
          {"row_count", ds.descriptor.row_count},
          {"schema", SchemaJson(ds.schema)}};
}

std::string FormatNumber(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorCode::kInternal, "to_chars");
  return std::string(buf, p);
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

namespace {

std::string ValueText(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return FormatNumber(*d);
  return CsvEscape(std::get<std::string>(v));
}

Value ParseValue(const std::string& text, VarType type, std::size_t line) {
  if (type != VarType::kNumeric) return text;
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidSpec,
                "line " + std::to_string(line) + ": not numeric '" + text + "'");
  }
  return v;
}

json ValueJson(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

}  // namespace

void WriteDataset(const Dataset& ds, const fs::path& csv_path) {
  std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + csv_path.string());
  out << "zip_code,house_number,gender,date_of_birth";
  for (const Column& c : ds.schema) out << ',' << CsvEscape(c.name);
  out << '\n';
  for (const Record& r : ds.rows) {
    const QuasiIdentifierSet* q = r.qid();
    if (q == nullptr) {
      throw Error(ErrorCode::kInvalidSpec, "dataset file rows need raw identifiers");
    }
    out << q->zip_code << ',' << q->house_number << ',' << GenderCode(q->gender)
        << ',' << q->date_of_birth;
    for (const auto& [name, value] : r.payload) out << ',' << ValueText(value);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed " + csv_path.string());

  std::ofstream side(DescriptorPath(csv_path), std::ios::binary | std::ios::trunc);
  side << CanonicalJson(DescriptorJson(ds)) << '\n';
  if (!side) throw Error(ErrorCode::kIoError, "write failed descriptor");
}

Dataset ReadDataset(const fs::path& csv_path) {
  std::ifstream side(DescriptorPath(csv_path), std::ios::binary);
  if (!side) {
    throw Error(ErrorCode::kIoError,
                "cannot read " + DescriptorPath(csv_path).string());
  }
  json desc;
  try {
    desc = json::parse(side);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("descriptor: ") + e.what());
  }

  Dataset ds;
  ds.station_id = desc.at("station_id").get<std::string>();
  ds.schema = ParseSchema(desc.at("schema"));
  ds.descriptor.source = csv_path.string();
  ds.descriptor.extracted_at = desc.at("extracted_at").get<std::string>();

  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + csv_path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kInvalidSpec, "empty csv");
  std::vector<std::string> header = SplitCsvLine(line);
  if (header.size() != 4 + ds.schema.size()) {
    throw Error(ErrorCode::kInvalidSpec, "header arity does not match schema");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (header[i] != kLinkageFieldNames[i]) {
      throw Error(ErrorCode::kInvalidSpec, "header column " + std::to_string(i) +
                                               " must be " +
                                               std::string(kLinkageFieldNames[i]));
    }
  }
  for (std::size_t c = 0; c < ds.schema.size(); ++c) {
    if (header[4 + c] != ds.schema[c].name) {
      throw Error(ErrorCode::kInvalidSpec, "header column " + header[4 + c] +
                                               " not in schema order");
    }
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kInvalidSpec, "line " + std::to_string(line_no) + " arity");
    }
    Record r;
    r.identity = Canonicalize(RawQid{{"zip_code", f[0]},
                                     {"house_number", f[1]},
                                     {"gender", f[2]},
                                     {"date_of_birth", f[3]}});
    for (std::size_t c = 0; c < ds.schema.size(); ++c) {
      r.payload.emplace_back(ds.schema[c].name,
                             ParseValue(f[4 + c], ds.schema[c].type, line_no));
    }
    ds.rows.push_back(std::move(r));
  }
  ds.descriptor.row_count = desc.at("row_count").get<std::size_t>();
  ds.Validate();
  return ds;
}

Bytes SerializePseudonymized(const Dataset& ds) {
  json rows = json::array();
  for (const Record& r : ds.rows) {
    if (r.qid() != nullptr) {
      throw Error(ErrorCode::kMissingPseudonyms, "row still carries quasi-identifiers");
    }
    json values = json::array();
    for (const auto& [name, value] : r.payload) values.push_back(ValueJson(value));
    json row = {{"v", std::move(values)}};
    if (const PseudonymVector* p = r.pseudonyms()) {
      row["p"] = {p->composite, p->per_field[0], p->per_field[1], p->per_field[2],
                  p->per_field[3]};
    }
    rows.push_back(std::move(row));
  }
  json j = {{"station_id", ds.station_id},
            {"schema", SchemaJson(ds.schema)},
            {"descriptor",
             {{"source", ds.descriptor.source},
              {"extracted_at", ds.descriptor.extracted_at},
              {"row_count", ds.descriptor.row_count}}},
            {"rows", std::move(rows)}};
  std::string text = CanonicalJson(j);
  return Bytes(text.begin(), text.end());
}

Dataset ParsePseudonymized(ByteView bytes) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("dataset payload: ") + e.what());
  }
  try {
    Dataset ds;
    ds.station_id = j.at("station_id").get<std::string>();
    ds.schema = ParseSchema(j.at("schema"));
    const json& d = j.at("descriptor");
    ds.descriptor = {d.at("source").get<std::string>(),
                     d.at("extracted_at").get<std::string>(),
                     d.at("row_count").get<std::size_t>()};
    const json& rows = j.at("rows");
    ds.rows.reserve(rows.size());
    for (const json& row : rows) {
      const json& v = row.at("v");
      if (v.size() != ds.schema.size()) throw Error(ErrorCode::kInvalidSpec, "dataset row arity");
      Record r;
      if (row.contains("p")) {
        const json& p = row.at("p");
        if (p.size() != 5) throw Error(ErrorCode::kInvalidSpec, "pseudonym arity");
        PseudonymVector pv;
        pv.composite = p[0].get<std::string>();
        for (std::size_t i = 0; i < 4; ++i) pv.per_field[i] = p[i + 1].get<std::string>();
        r.identity = std::move(pv);
      }
      for (std::size_t c = 0; c < ds.schema.size(); ++c) {
        Value value;
        if (v[c].is_number()) {
          value = v[c].get<double>();
        } else {
          value = v[c].get<std::string>();
        }
        r.payload.emplace_back(ds.schema[c].name, std::move(value));
      }
      ds.rows.push_back(std::move(r));
    }
    ds.Validate();
    return ds;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("dataset payload: ") + e.what());
  }
}

}  // namespace pht
