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

#ifndef PHT_MANIFEST_H_
#define PHT_MANIFEST_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "pht/analysis.h"
#include "pht/crypto.h"
#include "pht/disclosure.h"
#include "pht/linkage.h"

namespace pht {

// Which records of a station take part in a run.
struct PoolFilter {
  std::optional<int> age_min;
  std::optional<int> age_max;
  // Empty means every zip code qualifies.
  std::vector<std::string> zip_prefixes;
  // Reference date (YYYY-MM-DD) for age computation. Required when an age
  // bound is set.
  std::string as_of;

  friend bool operator==(const PoolFilter&, const PoolFilter&) = default;
};

struct DataRequest {
  std::string station_id;
  std::vector<std::string> variables;
  PoolFilter pool;

  friend bool operator==(const DataRequest&, const DataRequest&) = default;
};

// A train: the signed description of one run. The first data request names
// the station that generates and distributes the salt.
struct TrainManifest {
  std::string train_id;
  std::string run_id;
  std::string researcher_id;
  std::string tse_id;
  std::vector<DataRequest> data_requests;
  AnalysisSpec analysis;
  DisclosurePolicy disclosure;
  LinkageParams linkage;
  PublicKey tse_public_encryption_key;
  std::map<std::string, VerificationKey> station_verification_keys;
  // Used by data stations to seal the salt to each other.
  std::map<std::string, PublicKey> station_encryption_keys;
  // Unix seconds.
  std::int64_t expiry = 0;
  Bytes credential_signature;

  const DataRequest* RequestFor(std::string_view station_id) const;
  const std::string& SaltInitiator() const;

  // Everything except the signature.
  nlohmann::json UnsignedJson() const;
  nlohmann::json ToJson() const;
  // Throws InvalidSpec.
  static TrainManifest FromJson(const nlohmann::json& j);
};

// "PHT-MANIFEST|" followed by the canonical unsigned JSON.
Bytes ManifestSigningInput(const TrainManifest& m);
void SignManifest(TrainManifest& m, const SigningKeys& trust_anchor);

// A data station's release policy.
struct StationPolicy {
  std::string station_id;
  std::set<std::string, std::less<>> allowed_variables;
};

// Throws BadSignature, Expired, RunMismatch (a key not scoped to the run),
// InvalidSpec, or with a policy NotAddressed and UnauthorizedVariable.
// `now` is in unix seconds.
void ValidateTrain(const TrainManifest& m, const VerificationKey& trust_anchor,
                   std::int64_t now, const StationPolicy* policy);

}  // namespace pht

#endif  // PHT_MANIFEST_H_
