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

#ifndef PHT_TSE_STATION_H_
#define PHT_TSE_STATION_H_

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pht/audit.h"
#include "pht/crypto.h"
#include "pht/error.h"
#include "pht/manifest.h"
#include "pht/vault.h"
#include "pht/wire.h"

namespace pht {

using TseKeySource = std::function<KeyPair(const std::string& run_id)>;

struct TseConfig {
  std::string station_id;
  VerificationKey trust_anchor;
  // How long to wait for every DataTransfer after validation.
  Millis data_timeout = 60'000;
  std::optional<std::filesystem::path> spill_dir;
};

enum class TsePhase {
  kIdle,
  kValidated,
  kAwaitingData,
  kLinking,
  kAnalyzing,
  kValidating,
  kReturned,
  kWiped,
};

std::string_view TsePhaseName(TsePhase p);

// Trusted secure environment for a single run. Opens every station's
// package, links, merges, analyzes and validates, returns one result and
// wipes. Any failure aborts the run and wipes as well. Open failures are
// reported as "<Code>@<station>".
class TseStation {
 public:
  TseStation(TseConfig config, TseKeySource keys, AuditLog* audit = nullptr);

  std::vector<Message> Step(const Message& in, Millis now);
  std::vector<Message> Tick(Millis now);
  std::optional<Millis> Deadline() const { return deadline_; }

  TsePhase phase() const { return phase_; }
  const std::string& run_id() const { return run_id_; }
  const Vault& vault() const { return vault_; }
  std::size_t results_emitted() const { return results_emitted_; }

  // Re-reads the merged dataset from the vault. Throws NotFound once wiped.
  Dataset ReadMerged() const;

  // Destroys every stored item and enters Wiped.
  void Wipe(Millis now, const std::string& why);

 private:
  void HandleDispatch(const Message& in, const TrainDispatch& d, Millis now,
                      std::vector<Message>& out);
  void HandleData(const Message& in, const DataTransfer& d, Millis now,
                  std::vector<Message>& out);
  void Process(Millis now, std::vector<Message>& out);
  void Fail(const Error& e, const Message* in, Millis now, std::vector<Message>& out);
  Message Make(const std::string& to, MessageBody body);
  void Log(Millis now, const std::string& event, nlohmann::json detail = nlohmann::json::object());

  TseConfig config_;
  TseKeySource key_source_;
  AuditLog* audit_;
  Vault vault_;

  TsePhase phase_ = TsePhase::kIdle;
  std::string run_id_;
  std::string researcher_id_;
  std::optional<TrainManifest> manifest_;
  std::optional<KeyPair> keys_;
  std::set<std::string> received_;
  std::vector<Message> early_;
  std::optional<Millis> deadline_;
  // Station whose package is being opened; names the culprit on failure.
  std::string opening_;
  std::size_t results_emitted_ = 0;
  std::uint64_t next_seq_ = 1;
  std::map<std::string, std::uint64_t> last_seq_;
};

}  // namespace pht

#endif  // PHT_TSE_STATION_H_
