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

#include "pht/tse_station.h"

#include <utility>

#include "pht/analysis.h"
#include "pht/dataset_io.h"
#include "pht/disclosure.h"
#include "pht/linkage.h"

namespace pht {
namespace {

constexpr std::size_t kMaxEarlyTransfers = 16;

std::string ReceivedKey(const std::string& station) { return "received/" + station; }

void CleanseDataset(Dataset& ds) {
  for (Record& r : ds.rows) {
    if (auto* p = std::get_if<PseudonymVector>(&r.identity)) {
      Cleanse(p->composite);
      for (std::string& f : p->per_field) Cleanse(f);
    }
    for (auto& [name, value] : r.payload) {
      if (auto* s = std::get_if<std::string>(&value)) Cleanse(*s);
      if (auto* d = std::get_if<double>(&value)) *d = 0;
    }
  }
  ds.rows.clear();
}

SecretBytes Store(const Dataset& ds) { return SecretBytes(SerializePseudonymized(ds)); }

}  // namespace

std::string_view TsePhaseName(TsePhase p) {
  switch (p) {
    case TsePhase::kIdle: return "Idle";
    case TsePhase::kValidated: return "Validated";
    case TsePhase::kAwaitingData: return "AwaitingData";
    case TsePhase::kLinking: return "Linking";
    case TsePhase::kAnalyzing: return "Analyzing";
    case TsePhase::kValidating: return "Validating";
    case TsePhase::kReturned: return "Returned";
    case TsePhase::kWiped: return "Wiped";
  }
  return "Unknown";
}

TseStation::TseStation(TseConfig config, TseKeySource keys, AuditLog* audit)
    : config_(std::move(config)), key_source_(std::move(keys)), audit_(audit),
      vault_(config_.spill_dir) {}

Message TseStation::Make(const std::string& to, MessageBody body) {
  return Message{run_id_, next_seq_++, config_.station_id, to, std::move(body)};
}

void TseStation::Log(Millis now, const std::string& event, nlohmann::json detail) {
  if (audit_ == nullptr) return;
  detail["station"] = config_.station_id;
  audit_->Record({now, run_id_, std::string(TsePhaseName(phase_)), event, std::move(detail)});
}

Dataset TseStation::ReadMerged() const { return ParsePseudonymized(vault_.Get("merged").view()); }

std::vector<Message> TseStation::Step(const Message& in, Millis now) {
  std::vector<Message> out;
  try {
    if (in.to != config_.station_id) throw Error(ErrorCode::kNotAddressed, "message for " + in.to);
    auto& last = last_seq_[in.sender];
    if (in.seq <= last) {
      throw Error(ErrorCode::kReplay, "seq " + std::to_string(in.seq) + " from " + in.sender);
    }
    last = in.seq;
    if (phase_ == TsePhase::kWiped) throw Error(ErrorCode::kRunClosed, "run " + run_id_ + " is closed");
    if (phase_ != TsePhase::kIdle && in.run_id != run_id_) {
      throw Error(ErrorCode::kRunMismatch, "message for run " + in.run_id);
    }
    if (const auto* d = in.as<TrainDispatch>()) {
      if (phase_ != TsePhase::kIdle) throw Error(ErrorCode::kDuplicateRun, "run " + in.run_id);
      HandleDispatch(in, *d, now, out);
    } else if (const auto* dt = in.as<DataTransfer>()) {
      if (phase_ == TsePhase::kIdle) {
        if (early_.size() >= kMaxEarlyTransfers) {
          throw Error(ErrorCode::kOutOfOrder, "too many transfers before dispatch");
        }
        early_.push_back(in);
        return out;
      }
      if (phase_ != TsePhase::kAwaitingData) {
        throw Error(ErrorCode::kOutOfOrder, "DataTransfer in phase " + std::string(TsePhaseName(phase_)));
      }
      HandleData(in, *dt, now, out);
    } else if (const auto* a = in.as<Abort>()) {
      if (run_id_.empty()) run_id_ = in.run_id;
      Log(now, "aborted", {{"reason", a->reason}, {"from", in.sender}});
      Wipe(now, "abort");
    } else {
      throw Error(ErrorCode::kOutOfOrder, std::string(MessageTypeName(in.type())) + " in phase " +
                                              std::string(TsePhaseName(phase_)));
    }
  } catch (const Error& e) {
    Fail(e, &in, now, out);
  }
  return out;
}

std::vector<Message> TseStation::Tick(Millis now) {
  std::vector<Message> out;
  if (deadline_ && now >= *deadline_ && phase_ == TsePhase::kAwaitingData) {
    nlohmann::json missing = nlohmann::json::array();
    for (const DataRequest& r : manifest_->data_requests) {
      if (!received_.contains(r.station_id)) missing.push_back(r.station_id);
    }
    Log(now, "timeout", {{"missing", missing}});
    Fail(Error(ErrorCode::kTimeout, "waiting for data"), nullptr, now, out);
  }
  return out;
}

void TseStation::Fail(const Error& e, const Message* in, Millis now, std::vector<Message>& out) {
  std::string reason(ErrorCodeName(e.code()));
  if (!opening_.empty()) reason += "@" + opening_;
  opening_.clear();
  if (run_id_.empty() && in != nullptr) run_id_ = in->run_id;
  Log(now, "failed", {{"reason", reason}, {"detail", e.detail()}});
  if (phase_ == TsePhase::kWiped) {
    if (in != nullptr) out.push_back(Make(in->sender, Abort{reason}));
    return;
  }
  std::string to = !researcher_id_.empty() ? researcher_id_ : (in != nullptr ? in->sender : "");
  if (!to.empty()) out.push_back(Make(to, Abort{reason}));
  Wipe(now, "failure");
}

void TseStation::HandleDispatch(const Message& in, const TrainDispatch& d, Millis now,
                                std::vector<Message>& out) {
  const TrainManifest& m = d.manifest;
  run_id_ = in.run_id;
  if (m.run_id != in.run_id) throw Error(ErrorCode::kRunMismatch, "manifest run " + m.run_id);
  if (m.researcher_id != in.sender) {
    throw Error(ErrorCode::kInvalidSpec, "dispatch not sent by the manifest's researcher");
  }
  researcher_id_ = in.sender;
  ValidateTrain(m, config_.trust_anchor, now / 1000, nullptr);
  if (m.tse_id != config_.station_id) throw Error(ErrorCode::kNotAddressed, "manifest names TSE " + m.tse_id);
  if (m.data_requests.size() != 2) {
    throw Error(ErrorCode::kInvalidSpec, "linkage needs exactly two data stations");
  }
  KeyPair keys = key_source_(run_id_);
  if (KeyScope(keys.key_id) != run_id_ || keys.Public() != m.tse_public_encryption_key) {
    throw Error(ErrorCode::kRunMismatch, "manifest TSE key does not match this TSE's run key");
  }
  keys_ = std::move(keys);
  manifest_ = m;
  phase_ = TsePhase::kValidated;
  Log(now, "validated");
  out.push_back(Make(researcher_id_, Ack{"OK"}));
  phase_ = TsePhase::kAwaitingData;
  deadline_ = now + config_.data_timeout;

  std::vector<Message> early = std::move(early_);
  early_.clear();
  for (const Message& e : early) {
    if (phase_ != TsePhase::kAwaitingData) break;
    if (e.run_id != run_id_) throw Error(ErrorCode::kRunMismatch, "message for run " + e.run_id);
    HandleData(e, *e.as<DataTransfer>(), now, out);
  }
}

void TseStation::HandleData(const Message& in, const DataTransfer& d, Millis now,
                            std::vector<Message>& out) {
  const std::string& station = in.sender;
  if (manifest_->RequestFor(station) == nullptr) {
    throw Error(ErrorCode::kNotAddressed, "no data request for " + station);
  }
  if (received_.contains(station)) throw Error(ErrorCode::kReplay, "second transfer from " + station);
  opening_ = station;
  SecretBytes plaintext = Open(d.package, *keys_, manifest_->station_verification_keys.at(station),
                               OpenContext{run_id_, station});
  Dataset ds = ParsePseudonymized(plaintext.view());
  if (ds.station_id != station) throw Error(ErrorCode::kInvalidSpec, "dataset names " + ds.station_id);
  opening_.clear();
  std::size_t rows = ds.rows.size();
  CleanseDataset(ds);
  vault_.Put(ReceivedKey(station), std::move(plaintext));
  received_.insert(station);
  Log(now, "opened", {{"from", station}, {"rows", rows}});
  if (received_.size() == manifest_->data_requests.size()) Process(now, out);
}

void TseStation::Process(Millis now, std::vector<Message>& out) {
  deadline_.reset();
  const TrainManifest& m = *manifest_;
  const std::string& id_a = m.data_requests[0].station_id;
  const std::string& id_b = m.data_requests[1].station_id;

  phase_ = TsePhase::kLinking;
  Dataset a = ParsePseudonymized(vault_.Get(ReceivedKey(id_a)).view());
  Dataset b = ParsePseudonymized(vault_.Get(ReceivedKey(id_b)).view());
  LinkResult link = Link(a, b, m.linkage);
  Dataset merged = Merge(link, a, b);
  std::map<std::string, std::size_t> before = {{id_a, a.rows.size()}, {id_b, b.rows.size()}};
  CleanseDataset(a);
  CleanseDataset(b);
  nlohmann::json link_audit = link.audit.ToJson();
  Log(now, "linked", link_audit);
  vault_.Put("merged", Store(merged));
  CleanseDataset(merged);

  phase_ = TsePhase::kAnalyzing;
  Dataset reread = ReadMerged();
  RawResult raw = RunAnalysis(reread, m.analysis);
  raw.records_before = before;
  raw.records_after = reread.rows.size();
  CleanseDataset(reread);
  Log(now, "analyzed", {{"tables", raw.tables.size()}});

  phase_ = TsePhase::kValidating;
  ValidatedResult result = Validate(raw, m.disclosure);
  result.linkage = std::move(link_audit);
  std::string text = result.ToCanonicalString();
  vault_.Put("result", SecretBytes(Bytes(text.begin(), text.end())));
  Log(now, "validated_result", {{"suppressed_cells", result.suppressed.size()}, {"k_min", result.k_min}});

  phase_ = TsePhase::kReturned;
  out.push_back(Make(researcher_id_, ResultReturn{std::move(result)}));
  ++results_emitted_;
  Log(now, "result_returned");
  Wipe(now, "completed");
}

void TseStation::Wipe(Millis now, const std::string& why) {
  std::size_t destroyed = vault_.Wipe();
  keys_.reset();
  early_.clear();
  deadline_.reset();
  opening_.clear();
  phase_ = TsePhase::kWiped;
  Log(now, "wiped", {{"why", why}, {"items_destroyed", destroyed},
                     {"inventory_after", vault_.Inventory().size()}});
}

}  // namespace pht
