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

#ifndef PHT_DATASET_IO_H_
#define PHT_DATASET_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pht/bytes.h"
#include "pht/core_model.h"

namespace pht {

// Dataset files are a UTF-8 CSV whose first four columns are the linkage
// fields (zip_code,house_number,gender,date_of_birth) followed by payload
// columns, plus a sidecar `<stem>.descriptor.json` holding
// {station_id, extracted_at, row_count, schema}.
std::filesystem::path DescriptorPath(const std::filesystem::path& csv_path);

nlohmann::json DescriptorJson(const Dataset& ds);

// Requires every row to carry a raw QuasiIdentifierSet.
void WriteDataset(const Dataset& ds, const std::filesystem::path& csv_path);

// Canonicalizes every linkage field on load; throws MalformedField with the
// offending field, IoError or InvalidSpec.
Dataset ReadDataset(const std::filesystem::path& csv_path);

// Shortest decimal text that round-trips to the same double.
std::string FormatNumber(double v);

std::vector<std::string> SplitCsvLine(std::string_view line);
std::string CsvEscape(std::string_view field);

// Wire form of a pseudonymized dataset (the plaintext a station seals).
// Canonical JSON; rows are {"p":[composite, zip, house, gender, dob],
// "v":[values in schema order]}, "p" omitted for merged rows. Rows holding
// raw quasi-identifiers are refused with MissingPseudonyms.
Bytes SerializePseudonymized(const Dataset& ds);
Dataset ParsePseudonymized(ByteView bytes);

nlohmann::json SchemaJson(const Schema& schema);
Schema ParseSchema(const nlohmann::json& j);

}  // namespace pht

#endif  // PHT_DATASET_IO_H_
