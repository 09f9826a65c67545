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

#include "pht/network.h"

#include <algorithm>
#include <deque>

#include "pht/error.h"

namespace pht {
namespace {

template <typename Runs>
std::optional<Millis> EarliestDeadline(const Runs& runs) {
  std::optional<Millis> next;
  for (const auto& [run, sm] : runs) {
    auto d = sm->Deadline();
    if (d && (!next || *d < *next)) next = d;
  }
  return next;
}

std::vector<std::string> PayloadNames(const Dataset& ds) {
  std::vector<std::string> names;
  for (const Column& c : ds.schema) names.push_back(c.name);
  return names;
}

}  // namespace

DataStationEndpoint::DataStationEndpoint(DataStationConfig config,
                                         std::shared_ptr<const Dataset> data,
                                         StationKeySource keys, AuditLog* audit)
    : config_(std::move(config)), data_(std::move(data)), keys_(std::move(keys)), audit_(audit) {}

std::vector<Message> DataStationEndpoint::Handle(const Message& in, Millis now) {
  auto& sm = runs_[in.run_id];
  if (!sm) sm = std::make_unique<DataStation>(config_, data_, keys_, audit_);
  return sm->Step(in, now);
}

std::vector<Message> DataStationEndpoint::Tick(Millis now) {
  std::vector<Message> out;
  for (auto& [run, sm] : runs_) {
    auto msgs = sm->Tick(now);
    out.insert(out.end(), msgs.begin(), msgs.end());
  }
  return out;
}

std::optional<Millis> DataStationEndpoint::Deadline() const { return EarliestDeadline(runs_); }

const DataStation* DataStationEndpoint::Run(const std::string& run_id) const {
  auto it = runs_.find(run_id);
  return it == runs_.end() ? nullptr : it->second.get();
}

void DataStationEndpoint::WipeAll(Millis now) {
  for (auto& [run, sm] : runs_) sm->Wipe(now, "shutdown");
}

TseEndpoint::TseEndpoint(TseConfig config, TseKeySource keys, AuditLog* audit)
    : config_(std::move(config)), keys_(std::move(keys)), audit_(audit) {}

std::vector<Message> TseEndpoint::Handle(const Message& in, Millis now) {
  auto& sm = runs_[in.run_id];
  if (!sm) {
    TseConfig c = config_;
    if (c.spill_dir) c.spill_dir = *c.spill_dir / HexEncode(AsBytes(in.run_id));
    sm = std::make_unique<TseStation>(std::move(c), keys_, audit_);
  }
  return sm->Step(in, now);
}

std::vector<Message> TseEndpoint::Tick(Millis now) {
  std::vector<Message> out;
  for (auto& [run, sm] : runs_) {
    auto msgs = sm->Tick(now);
    out.insert(out.end(), msgs.begin(), msgs.end());
  }
  return out;
}

std::optional<Millis> TseEndpoint::Deadline() const { return EarliestDeadline(runs_); }

const TseStation* TseEndpoint::Run(const std::string& run_id) const {
  auto it = runs_.find(run_id);
  return it == runs_.end() ? nullptr : it->second.get();
}

void TseEndpoint::WipeAll(Millis now) {
  for (auto& [run, sm] : runs_) {
    if (sm->phase() != TsePhase::kWiped) sm->Wipe(now, "shutdown");
  }
}

std::map<std::string, std::vector<std::string>> RunOutcome::LogicalTrace() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const TraceEntry& e : trace) {
    std::string line = std::string(MessageTypeName(e.type)) + " " + e.from + "->" + e.to + " #" +
                       std::to_string(e.seq);
    if (e.dropped) line += " dropped";
    out[e.from].push_back(std::move(line));
  }
  return out;
}

std::string RunOutcome::ResultBytes() const {
  return result ? result->ToCanonicalString() : std::string();
}

std::optional<Router::Delivery> Router::Route(const std::string& from, const Bytes& frame) {
  Message m = Decode(frame);
  TraceEntry entry{from, m.to, m.type(), m.seq, frame.size(), false};
  if (killed_.contains(from) || killed_.contains(m.to)) {
    entry.dropped = true;
    trace_.push_back(std::move(entry));
    return std::nullopt;
  }
  Delivery d{m.to, frame};
  if (faults_.tamper_data_from == from && m.type() == MessageType::kDataTransfer) {
    auto& body = std::get<DataTransfer>(m.body);
    if (!body.package.ciphertext.empty()) {
      body.package.ciphertext[body.package.ciphertext.size() / 2] ^= 0x01;
    }
    d.frame = Encode(m);
  }
  if (faults_.kill_after_first_ack == from && m.type() == MessageType::kAck) killed_.insert(from);
  entry.bytes = d.frame.size();
  trace_.push_back(std::move(entry));
  return d;
}

void Router::RecordDelivery(const std::string& to, const Bytes& frame) {
  delivered_[to].push_back(frame);
}

RunOutcome RunInProcess(ResearcherEndpoint& researcher, const std::vector<Endpoint*>& stations,
                        const FaultPlan& faults, Millis start) {
  std::map<std::string, Endpoint*> endpoints;
  endpoints[researcher.id()] = &researcher;
  for (Endpoint* e : stations) endpoints[e->id()] = e;

  Router router(faults);
  std::deque<std::pair<std::string, Bytes>> queue;
  auto enqueue = [&](const std::string& from, const std::vector<Message>& msgs) {
    for (const Message& m : msgs) queue.emplace_back(from, Encode(m));
  };

  Millis now = start;
  enqueue(researcher.id(), researcher.Start(now));
  constexpr int kMaxClockJumps = 10'000;
  for (int jumps = 0; jumps < kMaxClockJumps; ++jumps) {
    while (!queue.empty()) {
      auto [from, frame] = std::move(queue.front());
      queue.pop_front();
      std::optional<Router::Delivery> d;
      try {
        d = router.Route(from, frame);
      } catch (const DecodeError&) {
        continue;
      }
      if (!d) continue;
      auto it = endpoints.find(d->to);
      if (it == endpoints.end()) continue;
      router.RecordDelivery(d->to, d->frame);
      Message m;
      try {
        m = Decode(d->frame);
      } catch (const DecodeError&) {
        continue;
      }
      enqueue(it->first, it->second->Handle(m, now));
    }
    std::optional<Millis> next;
    for (const auto& [id, e] : endpoints) {
      auto dl = e->Deadline();
      if (dl && (!next || *dl < *next)) next = dl;
    }
    if (!next) break;
    now = std::max(now, *next);
    for (const auto& [id, e] : endpoints) enqueue(id, e->Tick(now));
  }

  RunOutcome out;
  const Researcher& r = researcher.researcher();
  out.status = r.status();
  out.abort_reason = r.abort_reason();
  out.result = r.result();
  out.milestones = r.milestones();
  out.trace = std::move(router.trace());
  out.delivered = std::move(router.delivered());
  return out;
}

Scenario BuildScenario(const ScenarioOptions& options, Millis now) {
  Scenario s;
  s.population = GeneratePopulation(options.population);
  s.data_a = std::make_shared<const Dataset>(s.population.large);
  s.data_b = std::make_shared<const Dataset>(s.population.small);
  const std::string& run = options.run_id;
  const std::string& id_a = s.data_a->station_id;
  const std::string& id_b = s.data_b->station_id;

  s.keys_a = {GenerateEncryptionKeyPair(run), GenerateSigningKeys(run)};
  s.keys_b = {GenerateEncryptionKeyPair(run), GenerateSigningKeys(run)};
  s.tse_keys = std::make_shared<KeyPair>(GenerateEncryptionKeyPair(run));
  s.trust_anchor = GenerateTrustAnchor();

  TrainManifest& m = s.manifest;
  m.train_id = options.train_id;
  m.run_id = run;
  m.researcher_id = options.researcher_id;
  m.tse_id = options.tse_id;
  m.data_requests = {
      {id_a, options.variables_a.value_or(PayloadNames(*s.data_a)), options.pool_a},
      {id_b, options.variables_b.value_or(PayloadNames(*s.data_b)), options.pool_b},
  };
  m.analysis = options.analysis;
  m.disclosure = options.disclosure;
  m.linkage = options.linkage;
  m.tse_public_encryption_key = s.tse_keys->Public();
  m.station_verification_keys = {{id_a, s.keys_a.signing.Verification()},
                                 {id_b, s.keys_b.signing.Verification()}};
  m.station_encryption_keys = {{id_a, s.keys_a.encryption.Public()},
                               {id_b, s.keys_b.encryption.Public()}};
  m.expiry = now / 1000 + options.lifetime_seconds;
  SignManifest(m, s.trust_anchor);

  auto allowed = [](const std::optional<std::set<std::string, std::less<>>>& given,
                    const std::vector<std::string>& requested) {
    if (given) return *given;
    return std::set<std::string, std::less<>>(requested.begin(), requested.end());
  };
  VerificationKey anchor = s.trust_anchor.Verification();
  s.config_a = {id_a, allowed(options.allowed_a, m.data_requests[0].variables), anchor,
                options.salt_timeout, {}};
  s.config_b = {id_b, allowed(options.allowed_b, m.data_requests[1].variables), anchor,
                options.salt_timeout, {}};
  s.tse_config = {options.tse_id, anchor, options.data_timeout, std::nullopt};
  return s;
}

std::vector<Endpoint*> Deployment::Stations() const {
  return {station_a.get(), station_b.get(), tse.get()};
}

Deployment Deploy(const Scenario& s) {
  auto station_keys = [](StationKeys keys) -> StationKeySource {
    return [keys = std::move(keys)](const std::string& run_id) {
      if (KeyScope(keys.encryption.key_id) != run_id) {
        throw Error(ErrorCode::kNotFound, "no keys for run " + run_id);
      }
      return keys;
    };
  };
  Deployment d;
  d.audit = std::make_unique<AuditLog>();
  d.researcher = std::make_unique<ResearcherEndpoint>(s.manifest);
  d.station_a = std::make_unique<DataStationEndpoint>(s.config_a, s.data_a, station_keys(s.keys_a),
                                                      d.audit.get());
  d.station_b = std::make_unique<DataStationEndpoint>(s.config_b, s.data_b, station_keys(s.keys_b),
                                                      d.audit.get());
  std::shared_ptr<KeyPair> tse_keys = s.tse_keys;
  d.tse = std::make_unique<TseEndpoint>(
      s.tse_config,
      [tse_keys](const std::string& run_id) {
        if (KeyScope(tse_keys->key_id) != run_id) {
          throw Error(ErrorCode::kNotFound, "no keys for run " + run_id);
        }
        return *tse_keys;
      },
      d.audit.get());
  return d;
}

}  // namespace pht
