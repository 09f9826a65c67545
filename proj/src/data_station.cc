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

#include "pht/data_station.h"

#include <algorithm>
#include <utility>

#include "pht/dataset_io.h"
#include "pht/error.h"
#include "pht/kernels.h"

namespace pht {
namespace {

bool IsLinkageField(std::string_view name) {
  return std::find(kLinkageFieldNames.begin(), kLinkageFieldNames.end(), name) !=
         kLinkageFieldNames.end();
}

bool InPool(const QuasiIdentifierSet& qid, const PoolFilter& pool,
            const std::optional<std::chrono::year_month_day>& as_of) {
  if (pool.age_min || pool.age_max) {
    auto dob = ParseIsoDate(qid.date_of_birth);
    if (!dob) throw MalformedField("date_of_birth", qid.date_of_birth);
    int age = AgeAt(*dob, *as_of);
    if (pool.age_min && age < *pool.age_min) return false;
    if (pool.age_max && age > *pool.age_max) return false;
  }
  if (pool.zip_prefixes.empty()) return true;
  return std::any_of(pool.zip_prefixes.begin(), pool.zip_prefixes.end(),
                     [&](const std::string& p) { return qid.zip_code.starts_with(p); });
}

}  // namespace

std::string_view DataPhaseName(DataPhase p) {
  switch (p) {
    case DataPhase::kIdle: return "Idle";
    case DataPhase::kValidated: return "Validated";
    case DataPhase::kSaltAgreed: return "SaltAgreed";
    case DataPhase::kSent: return "Sent";
    case DataPhase::kDone: return "Done";
  }
  return "Unknown";
}

Dataset PreparePseudonymized(const Dataset& raw, const DataRequest& request,
                             const Salt& salt, std::string_view run_id) {
  if (salt.run_id != run_id) {
    throw Error(ErrorCode::kRunMismatch, "salt belongs to run " + salt.run_id);
  }
  if (salt.bytes.size() != kSaltBytes) throw Error(ErrorCode::kInvalidSpec, "salt has wrong length");

  std::vector<std::size_t> columns;
  Schema schema;
  for (const std::string& var : request.variables) {
    if (IsLinkageField(var)) throw Error(ErrorCode::kUnauthorizedVariable, var);
    auto idx = raw.ColumnIndex(var);
    if (!idx) throw Error(ErrorCode::kUnknownVariable, var);
    columns.push_back(*idx);
    schema.push_back(raw.schema[*idx]);
  }

  std::optional<std::chrono::year_month_day> as_of;
  if (request.pool.age_min || request.pool.age_max) {
    as_of = ParseIsoDate(request.pool.as_of);
    if (!as_of) throw Error(ErrorCode::kInvalidSpec, "pool as_of '" + request.pool.as_of + "'");
  }

  std::vector<QuasiIdentifierSet> qids;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const QuasiIdentifierSet* qid = raw.rows[i].qid();
    if (qid == nullptr) throw Error(ErrorCode::kInvalidSpec, "row without quasi-identifiers");
    QuasiIdentifierSet canonical = Canonicalize(*qid);
    if (!InPool(canonical, request.pool, as_of)) continue;
    qids.push_back(std::move(canonical));
    kept.push_back(i);
  }
  std::vector<PseudonymVector> pseudonyms = kernels::PseudonymizeBatch(qids, salt);
  for (QuasiIdentifierSet& q : qids) {
    Cleanse(q.zip_code);
    Cleanse(q.house_number);
    Cleanse(q.date_of_birth);
  }

  Dataset out;
  out.station_id = raw.station_id;
  out.schema = std::move(schema);
  out.rows.reserve(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    Record r;
    r.identity = std::move(pseudonyms[k]);
    for (std::size_t c : columns) r.payload.push_back(raw.rows[kept[k]].payload[c]);
    out.rows.push_back(std::move(r));
  }
  out.descriptor = {raw.descriptor.source, raw.descriptor.extracted_at, out.rows.size()};
  return out;
}

DataStation::DataStation(DataStationConfig config, std::shared_ptr<const Dataset> data,
                         StationKeySource keys, AuditLog* audit)
    : config_(std::move(config)), data_(std::move(data)), key_source_(std::move(keys)),
      audit_(audit) {}

Message DataStation::Make(const std::string& to, MessageBody body) {
  return Message{run_id_, next_seq_++, config_.station_id, to, std::move(body)};
}

void DataStation::Log(Millis now, const std::string& event, nlohmann::json detail) {
  if (audit_ == nullptr) return;
  detail["station"] = config_.station_id;
  audit_->Record({now, run_id_, std::string(DataPhaseName(phase_)), event, std::move(detail)});
}

std::vector<Message> DataStation::Step(const Message& in, Millis now) {
  std::vector<Message> out;
  try {
    if (in.to != config_.station_id) {
      throw Error(ErrorCode::kNotAddressed, "message for " + in.to);
    }
    auto& last = last_seq_[in.sender];
    if (in.seq <= last) {
      throw Error(ErrorCode::kReplay, "seq " + std::to_string(in.seq) + " from " + in.sender);
    }
    last = in.seq;
    if (phase_ != DataPhase::kIdle && in.run_id != run_id_) {
      throw Error(ErrorCode::kRunMismatch, "message for run " + in.run_id);
    }
    if (const auto* d = in.as<TrainDispatch>()) {
      HandleDispatch(in, *d, now, out);
    } else if (const auto* s = in.as<SaltOffer>()) {
      HandleSaltOffer(in, *s, now, out);
    } else if (const auto* a = in.as<Abort>()) {
      if (phase_ == DataPhase::kSent || phase_ == DataPhase::kDone) {
        Log(now, "abort_ignored", {{"reason", a->reason}});
      } else {
        if (run_id_.empty()) run_id_ = in.run_id;
        Log(now, "aborted", {{"reason", a->reason}, {"from", in.sender}});
        Wipe(now, "abort");
        phase_ = DataPhase::kDone;
      }
    } else {
      throw Error(ErrorCode::kOutOfOrder, std::string(MessageTypeName(in.type())) +
                                              " in phase " + std::string(DataPhaseName(phase_)));
    }
  } catch (const Error& e) {
    Fail(e, in, now, out);
  }
  return out;
}

std::vector<Message> DataStation::Tick(Millis now) {
  std::vector<Message> out;
  if (deadline_ && now >= *deadline_ && phase_ == DataPhase::kValidated) {
    deadline_.reset();
    Log(now, "failed", {{"reason", "Timeout"}});
    out.push_back(Make(researcher_id_, Abort{"Timeout"}));
    Wipe(now, "failure");
    phase_ = DataPhase::kDone;
  }
  return out;
}

void DataStation::Fail(const Error& e, const Message& in, Millis now, std::vector<Message>& out) {
  std::string reason(ErrorCodeName(e.code()));
  if (run_id_.empty()) run_id_ = in.run_id;
  Log(now, "failed", {{"reason", reason}, {"detail", e.detail()}});
  bool terminal = phase_ == DataPhase::kSent || phase_ == DataPhase::kDone;
  const std::string& to = (terminal || researcher_id_.empty()) ? in.sender : researcher_id_;
  out.push_back(Make(to, Abort{reason}));
  if (!terminal) {
    Wipe(now, "failure");
    phase_ = DataPhase::kDone;
  }
}

void DataStation::HandleDispatch(const Message& in, const TrainDispatch& d, Millis now,
                                 std::vector<Message>& out) {
  if (phase_ != DataPhase::kIdle) {
    throw Error(ErrorCode::kDuplicateRun, "run " + in.run_id + " already dispatched");
  }
  const TrainManifest& m = d.manifest;
  run_id_ = in.run_id;
  if (m.run_id != in.run_id) throw Error(ErrorCode::kRunMismatch, "manifest run " + m.run_id);
  if (m.researcher_id != in.sender) {
    throw Error(ErrorCode::kInvalidSpec, "dispatch not sent by the manifest's researcher");
  }
  researcher_id_ = in.sender;
  StationPolicy policy{config_.station_id, config_.allowed_variables};
  ValidateTrain(m, config_.trust_anchor, now / 1000, &policy);

  StationKeys keys = key_source_(run_id_);
  if (KeyScope(keys.encryption.key_id) != run_id_ || KeyScope(keys.signing.key_id) != run_id_) {
    throw Error(ErrorCode::kRunMismatch, "station keys are not scoped to run " + run_id_);
  }
  if (m.station_encryption_keys.at(config_.station_id) != keys.encryption.Public() ||
      m.station_verification_keys.at(config_.station_id) != keys.signing.Verification()) {
    throw Error(ErrorCode::kRunMismatch, "manifest keys do not match this station's keys");
  }
  keys_ = std::move(keys);
  manifest_ = m;
  phase_ = DataPhase::kValidated;
  Log(now, "validated");
  out.push_back(Make(researcher_id_, Ack{"OK"}));

  if (m.SaltInitiator() == config_.station_id) {
    salt_ = GenerateSalt(run_id_);
    if (config_.salt_observer) config_.salt_observer(salt_->bytes.view());
    for (const DataRequest& r : m.data_requests) {
      if (r.station_id == config_.station_id) continue;
      SealedPackage pkg = Seal(salt_->bytes.view(), run_id_, config_.station_id,
                               m.station_encryption_keys.at(r.station_id), keys_->signing);
      out.push_back(Make(r.station_id, SaltOffer{std::move(pkg)}));
      Log(now, "salt_offered", {{"to", r.station_id}});
    }
    phase_ = DataPhase::kSaltAgreed;
    SendData(now, out);
    return;
  }
  deadline_ = now + config_.salt_timeout;
  if (pending_offer_) {
    Message early = std::move(*pending_offer_);
    pending_offer_.reset();
    AcceptSalt(early, *early.as<SaltOffer>(), now, out);
  }
}

void DataStation::HandleSaltOffer(const Message& in, const SaltOffer& offer, Millis now,
                                  std::vector<Message>& out) {
  if (phase_ == DataPhase::kIdle && !pending_offer_) {
    // The offer overtook our own dispatch; keep it until validation.
    pending_offer_ = in;
    Log(now, "salt_offer_buffered", {{"from", in.sender}});
    return;
  }
  AcceptSalt(in, offer, now, out);
}

void DataStation::AcceptSalt(const Message& in, const SaltOffer& offer, Millis now,
                             std::vector<Message>& out) {
  if (phase_ != DataPhase::kValidated || manifest_->SaltInitiator() == config_.station_id) {
    throw Error(ErrorCode::kOutOfOrder,
                "SaltOffer in phase " + std::string(DataPhaseName(phase_)));
  }
  if (in.run_id != run_id_) throw Error(ErrorCode::kRunMismatch, "salt offer for run " + in.run_id);
  const std::string& initiator = manifest_->SaltInitiator();
  if (in.sender != initiator || offer.package.sender_station_id != initiator) {
    throw Error(ErrorCode::kOutOfOrder, "salt offer from " + in.sender);
  }
  SecretBytes bytes = Open(offer.package, keys_->encryption,
                           manifest_->station_verification_keys.at(initiator),
                           OpenContext{run_id_, initiator});
  if (bytes.size() != kSaltBytes) throw Error(ErrorCode::kInvalidSpec, "salt has wrong length");
  salt_ = Salt{std::move(bytes), run_id_};
  if (config_.salt_observer) config_.salt_observer(salt_->bytes.view());
  deadline_.reset();
  phase_ = DataPhase::kSaltAgreed;
  Log(now, "salt_agreed", {{"from", initiator}});
  SendData(now, out);
}

void DataStation::SendData(Millis now, std::vector<Message>& out) {
  const DataRequest* request = manifest_->RequestFor(config_.station_id);
  Dataset prepared = PreparePseudonymized(*data_, *request, *salt_, run_id_);
  Bytes plaintext = SerializePseudonymized(prepared);
  SealedPackage pkg = Seal(plaintext, run_id_, config_.station_id,
                           manifest_->tse_public_encryption_key, keys_->signing);
  Cleanse(plaintext);
  out.push_back(Make(manifest_->tse_id, DataTransfer{std::move(pkg)}));
  out.push_back(Make(researcher_id_, Ack{"OK"}));
  std::size_t rows = prepared.rows.size();
  Wipe(now, "sent");
  phase_ = DataPhase::kSent;
  Log(now, "data_sent", {{"rows", rows}, {"before_filter", data_->rows.size()}});
}

void DataStation::Wipe(Millis now, const std::string& why) {
  bool had = salt_.has_value() || keys_.has_value();
  salt_.reset();
  keys_.reset();
  pending_offer_.reset();
  deadline_.reset();
  if (had) Log(now, "wiped", {{"why", why}});
}

}  // namespace pht
