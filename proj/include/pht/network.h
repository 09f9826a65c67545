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

#ifndef PHT_NETWORK_H_
#define PHT_NETWORK_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pht/audit.h"
#include "pht/data_station.h"
#include "pht/population.h"
#include "pht/researcher.h"
#include "pht/tse_station.h"
#include "pht/wire.h"

namespace pht {

// Something the hub can deliver frames to.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  virtual const std::string& id() const = 0;
  virtual std::vector<Message> Start(Millis) { return {}; }
  virtual std::vector<Message> Handle(const Message& in, Millis now) = 0;
  virtual std::vector<Message> Tick(Millis now) = 0;
  virtual std::optional<Millis> Deadline() const = 0;
};

// Serves any number of runs, one DataStation per run_id.
class DataStationEndpoint : public Endpoint {
 public:
  DataStationEndpoint(DataStationConfig config, std::shared_ptr<const Dataset> data,
                      StationKeySource keys, AuditLog* audit = nullptr);

  const std::string& id() const override { return config_.station_id; }
  std::vector<Message> Handle(const Message& in, Millis now) override;
  std::vector<Message> Tick(Millis now) override;
  std::optional<Millis> Deadline() const override;

  const DataStation* Run(const std::string& run_id) const;
  void WipeAll(Millis now);

 private:
  DataStationConfig config_;
  std::shared_ptr<const Dataset> data_;
  StationKeySource keys_;
  AuditLog* audit_;
  std::map<std::string, std::unique_ptr<DataStation>> runs_;
};

// Serves any number of runs, one TseStation per run_id.
class TseEndpoint : public Endpoint {
 public:
  TseEndpoint(TseConfig config, TseKeySource keys, AuditLog* audit = nullptr);

  const std::string& id() const override { return config_.station_id; }
  std::vector<Message> Handle(const Message& in, Millis now) override;
  std::vector<Message> Tick(Millis now) override;
  std::optional<Millis> Deadline() const override;

  const TseStation* Run(const std::string& run_id) const;
  void WipeAll(Millis now);

 private:
  TseConfig config_;
  TseKeySource keys_;
  AuditLog* audit_;
  std::map<std::string, std::unique_ptr<TseStation>> runs_;
};

class ResearcherEndpoint : public Endpoint {
 public:
  explicit ResearcherEndpoint(TrainManifest manifest) : researcher_(std::move(manifest)) {}

  const std::string& id() const override { return researcher_.id(); }
  std::vector<Message> Start(Millis now) override { return researcher_.Start(now); }
  std::vector<Message> Handle(const Message& in, Millis now) override {
    return researcher_.Step(in, now);
  }
  std::vector<Message> Tick(Millis) override { return {}; }
  std::optional<Millis> Deadline() const override { return std::nullopt; }

  const Researcher& researcher() const { return researcher_; }

 private:
  Researcher researcher_;
};

// Faults injected by the hub, identically for every transport.
struct FaultPlan {
  // Every frame from or to this station is dropped once its first Ack left.
  std::optional<std::string> kill_after_first_ack;
  // One ciphertext bit of this station's DataTransfer is flipped in transit.
  std::optional<std::string> tamper_data_from;
};

struct TraceEntry {
  std::string from;
  std::string to;
  MessageType type = MessageType::kAck;
  std::uint64_t seq = 0;
  std::size_t bytes = 0;
  bool dropped = false;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct RunOutcome {
  RunStatus status = RunStatus::kPending;
  std::string abort_reason;
  std::optional<ValidatedResult> result;
  std::vector<TraceEntry> trace;
  // Every frame handed to each endpoint, in delivery order.
  std::map<std::string, std::vector<Bytes>> delivered;
  std::map<std::string, Millis> milestones;

  // Per-sender sequences of "type from->to #seq". Cross-sender order is not
  // part of the protocol, so this is what two transports must agree on.
  std::map<std::string, std::vector<std::string>> LogicalTrace() const;
  // Canonical bytes of the result, or empty.
  std::string ResultBytes() const;
};

// Routing core shared by the in-process and TCP hubs: applies the fault plan
// and records the trace.
class Router {
 public:
  explicit Router(FaultPlan faults) : faults_(std::move(faults)) {}

  struct Delivery {
    std::string to;
    Bytes frame;
  };
  // Returns the frame to deliver, or nullopt when it is dropped. Throws
  // DecodeError for frames that do not parse.
  std::optional<Delivery> Route(const std::string& from, const Bytes& frame);
  void RecordDelivery(const std::string& to, const Bytes& frame);

  std::vector<TraceEntry>& trace() { return trace_; }
  std::map<std::string, std::vector<Bytes>>& delivered() { return delivered_; }

 private:
  FaultPlan faults_;
  std::set<std::string> killed_;
  std::vector<TraceEntry> trace_;
  std::map<std::string, std::vector<Bytes>> delivered_;
};

// Deterministic single-threaded hub. Frames are delivered in FIFO order;
// when the queue drains the simulated clock jumps to the earliest endpoint
// deadline. Stops when nothing is queued and no deadline is pending.
RunOutcome RunInProcess(ResearcherEndpoint& researcher, const std::vector<Endpoint*>& stations,
                        const FaultPlan& faults, Millis start);

// A complete two-station deployment derived from a synthetic population:
// station A holds the large dataset, station B the small one.
struct ScenarioOptions {
  SyntheticPopulationSpec population;
  std::string run_id = "run-1";
  std::string train_id = "train-1";
  std::string researcher_id = "researcher";
  std::string tse_id = "TSE";
  AnalysisSpec analysis;
  DisclosurePolicy disclosure;
  LinkageParams linkage;
  // Defaults: every payload variable of the station.
  std::optional<std::vector<std::string>> variables_a;
  std::optional<std::vector<std::string>> variables_b;
  PoolFilter pool_a;
  PoolFilter pool_b;
  // Defaults: exactly the requested variables.
  std::optional<std::set<std::string, std::less<>>> allowed_a;
  std::optional<std::set<std::string, std::less<>>> allowed_b;
  std::int64_t lifetime_seconds = 3600;
  Millis salt_timeout = 60'000;
  Millis data_timeout = 60'000;
};

struct Scenario {
  TrainManifest manifest;
  SigningKeys trust_anchor;
  Population population;
  std::shared_ptr<const Dataset> data_a;
  std::shared_ptr<const Dataset> data_b;
  StationKeys keys_a;
  StationKeys keys_b;
  std::shared_ptr<KeyPair> tse_keys;
  DataStationConfig config_a;
  DataStationConfig config_b;
  TseConfig tse_config;
};

// Generates the population, per-run keys for every party and a signed
// manifest. `now` is unix milliseconds. Throws InvalidSpec.
Scenario BuildScenario(const ScenarioOptions& options, Millis now);

// Endpoints instantiated from a Scenario.
struct Deployment {
  std::unique_ptr<AuditLog> audit;
  std::unique_ptr<ResearcherEndpoint> researcher;
  std::unique_ptr<DataStationEndpoint> station_a;
  std::unique_ptr<DataStationEndpoint> station_b;
  std::unique_ptr<TseEndpoint> tse;

  std::vector<Endpoint*> Stations() const;
};

Deployment Deploy(const Scenario& s);

}  // namespace pht

#endif  // PHT_NETWORK_H_
