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

#include "pht/manifest.h"

#include <algorithm>

#include "pht/core_model.h"
#include "pht/error.h"

namespace pht {
namespace {

using nlohmann::json;

constexpr std::string_view kManifestDomain = "PHT-MANIFEST|";

json PoolJson(const PoolFilter& p) {
  json j = {{"zip_prefixes", p.zip_prefixes}, {"as_of", p.as_of}};
  j["age_min"] = p.age_min ? json(*p.age_min) : json(nullptr);
  j["age_max"] = p.age_max ? json(*p.age_max) : json(nullptr);
  return j;
}

PoolFilter ParsePool(const json& j) {
  PoolFilter p;
  if (j.contains("age_min") && !j.at("age_min").is_null()) p.age_min = j.at("age_min").get<int>();
  if (j.contains("age_max") && !j.at("age_max").is_null()) p.age_max = j.at("age_max").get<int>();
  p.zip_prefixes = j.value("zip_prefixes", std::vector<std::string>{});
  p.as_of = j.value("as_of", std::string());
  return p;
}

void CheckScope(const std::string& key_id, const std::string& run_id) {
  if (KeyScope(key_id) != run_id) {
    throw Error(ErrorCode::kRunMismatch, "key " + key_id + " is not scoped to run " + run_id);
  }
}

}  // namespace

const DataRequest* TrainManifest::RequestFor(std::string_view station_id) const {
  for (const DataRequest& r : data_requests) {
    if (r.station_id == station_id) return &r;
  }
  return nullptr;
}

const std::string& TrainManifest::SaltInitiator() const {
  if (data_requests.empty()) throw Error(ErrorCode::kInvalidSpec, "manifest has no data requests");
  return data_requests.front().station_id;
}

json TrainManifest::UnsignedJson() const {
  json requests = json::array();
  for (const DataRequest& r : data_requests) {
    requests.push_back(
        {{"station_id", r.station_id}, {"variables", r.variables}, {"pool", PoolJson(r.pool)}});
  }
  json verification = json::object();
  for (const auto& [station, key] : station_verification_keys) {
    verification[station] = VerificationKeyJson(key);
  }
  json encryption = json::object();
  for (const auto& [station, key] : station_encryption_keys) {
    encryption[station] = PublicKeyJson(key);
  }
  return {{"train_id", train_id},
          {"run_id", run_id},
          {"researcher_id", researcher_id},
          {"tse_id", tse_id},
          {"data_requests", std::move(requests)},
          {"analysis", analysis.ToJson()},
          {"disclosure", disclosure.ToJson()},
          {"linkage", linkage.ToJson()},
          {"tse_public_encryption_key", PublicKeyJson(tse_public_encryption_key)},
          {"station_verification_keys", std::move(verification)},
          {"station_encryption_keys", std::move(encryption)},
          {"expiry", expiry}};
}

json TrainManifest::ToJson() const {
  json j = UnsignedJson();
  j["credential_signature"] = Base64Encode(credential_signature);
  return j;
}

TrainManifest TrainManifest::FromJson(const json& j) {
  TrainManifest m;
  try {
    m.train_id = j.at("train_id").get<std::string>();
    m.run_id = j.at("run_id").get<std::string>();
    m.researcher_id = j.at("researcher_id").get<std::string>();
    m.tse_id = j.at("tse_id").get<std::string>();
    for (const json& r : j.at("data_requests")) {
      DataRequest req;
      req.station_id = r.at("station_id").get<std::string>();
      req.variables = r.at("variables").get<std::vector<std::string>>();
      if (r.contains("pool")) req.pool = ParsePool(r.at("pool"));
      m.data_requests.push_back(std::move(req));
    }
    m.analysis = AnalysisSpec::FromJson(j.at("analysis"));
    m.disclosure = DisclosurePolicy::FromJson(j.value("disclosure", json::object()));
    m.linkage = LinkageParams::FromJson(j.value("linkage", json::object()));
    if (j.contains("tse_public_encryption_key")) {
      m.tse_public_encryption_key = ParsePublicKey(j.at("tse_public_encryption_key"));
    }
    const json verification = j.value("station_verification_keys", json::object());
    for (const auto& [station, key] : verification.items()) {
      m.station_verification_keys[station] = ParseVerificationKey(key);
    }
    const json encryption = j.value("station_encryption_keys", json::object());
    for (const auto& [station, key] : encryption.items()) {
      m.station_encryption_keys[station] = ParsePublicKey(key);
    }
    m.expiry = j.at("expiry").get<std::int64_t>();
    if (j.contains("credential_signature")) {
      m.credential_signature = Base64Decode(j.at("credential_signature").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("manifest: ") + e.what());
  } catch (const DecodeError& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("manifest: ") + e.what());
  }
  return m;
}

Bytes ManifestSigningInput(const TrainManifest& m) {
  std::string text(kManifestDomain);
  text += CanonicalJson(m.UnsignedJson());
  ByteView v = AsBytes(text);
  return Bytes(v.begin(), v.end());
}

void SignManifest(TrainManifest& m, const SigningKeys& trust_anchor) {
  m.credential_signature = Sign(trust_anchor, ManifestSigningInput(m));
}

void ValidateTrain(const TrainManifest& m, const VerificationKey& trust_anchor,
                   std::int64_t now, const StationPolicy* policy) {
  if (!Verify(trust_anchor, ManifestSigningInput(m), m.credential_signature)) {
    throw Error(ErrorCode::kBadSignature, "credential signature does not verify");
  }
  if (m.expiry <= now) {
    throw Error(ErrorCode::kExpired, "manifest expired at " + std::to_string(m.expiry));
  }
  if (m.data_requests.empty()) throw Error(ErrorCode::kInvalidSpec, "no data requests");
  CheckScope(m.tse_public_encryption_key.key_id, m.run_id);
  for (const DataRequest& r : m.data_requests) {
    auto v = m.station_verification_keys.find(r.station_id);
    auto e = m.station_encryption_keys.find(r.station_id);
    if (v == m.station_verification_keys.end() || e == m.station_encryption_keys.end()) {
      throw Error(ErrorCode::kInvalidSpec, "no keys for station " + r.station_id);
    }
    CheckScope(v->second.key_id, m.run_id);
    CheckScope(e->second.key_id, m.run_id);
    if ((r.pool.age_min || r.pool.age_max) && !ParseIsoDate(r.pool.as_of)) {
      throw Error(ErrorCode::kInvalidSpec, "pool age filter needs a valid as_of date");
    }
  }
  if (policy == nullptr) return;
  const DataRequest* mine = m.RequestFor(policy->station_id);
  if (mine == nullptr) {
    throw Error(ErrorCode::kNotAddressed, "no data request for " + policy->station_id);
  }
  for (const std::string& var : mine->variables) {
    if (!policy->allowed_variables.contains(var)) {
      throw Error(ErrorCode::kUnauthorizedVariable, var);
    }
  }
}

}  // namespace pht
