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

#ifndef PHT_DATA_STATION_H_
#define PHT_DATA_STATION_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pht/audit.h"
#include "pht/core_model.h"
#include "pht/crypto.h"
#include "pht/error.h"
#include "pht/manifest.h"
#include "pht/pseudonym.h"
#include "pht/wire.h"

namespace pht {

// The private keys a data station holds for one run.
struct StationKeys {
  KeyPair encryption;
  SigningKeys signing;
};

// Looked up once per dispatched run. May throw.
using StationKeySource = std::function<StationKeys(const std::string& run_id)>;

struct DataStationConfig {
  std::string station_id;
  std::set<std::string, std::less<>> allowed_variables;
  VerificationKey trust_anchor;
  // How long a non-initiating station waits for the salt after validation.
  Millis salt_timeout = 60'000;
  // Instrumentation for leak scans: sees the salt once it is agreed.
  std::function<void(ByteView salt)> salt_observer;
};

enum class DataPhase { kIdle, kValidated, kSaltAgreed, kSent, kDone };

std::string_view DataPhaseName(DataPhase p);

// Pool filter, projection onto the requested variables, canonicalization and
// pseudonymization. The result carries no raw quasi-identifiers. Throws
// RunMismatch (salt from another run), UnauthorizedVariable (a linkage field
// requested as payload), UnknownVariable, InvalidSpec or MalformedField.
Dataset PreparePseudonymized(const Dataset& raw, const DataRequest& request,
                             const Salt& salt, std::string_view run_id);

// Data station state machine for a single run:
//   Idle -> Validated -> SaltAgreed -> Sent, or Done on any failure.
// The first station of the manifest creates the salt and seals it to each
// peer; the others wait for it.
class DataStation {
 public:
  DataStation(DataStationConfig config, std::shared_ptr<const Dataset> data,
              StationKeySource keys, AuditLog* audit = nullptr);

  std::vector<Message> Step(const Message& in, Millis now);
  std::vector<Message> Tick(Millis now);
  std::optional<Millis> Deadline() const { return deadline_; }

  DataPhase phase() const { return phase_; }
  const std::string& run_id() const { return run_id_; }
  bool HoldsSalt() const { return salt_.has_value(); }
  // Forgets the salt and run keys.
  void Wipe(Millis now, const std::string& why);

 private:
  void HandleDispatch(const Message& in, const TrainDispatch& d, Millis now,
                      std::vector<Message>& out);
  void HandleSaltOffer(const Message& in, const SaltOffer& offer, Millis now,
                       std::vector<Message>& out);
  void AcceptSalt(const Message& in, const SaltOffer& offer, Millis now,
                  std::vector<Message>& out);
  void SendData(Millis now, std::vector<Message>& out);
  void Fail(const Error& e, const Message& in, Millis now, std::vector<Message>& out);
  Message Make(const std::string& to, MessageBody body);
  void Log(Millis now, const std::string& event, nlohmann::json detail = nlohmann::json::object());

  DataStationConfig config_;
  std::shared_ptr<const Dataset> data_;
  StationKeySource key_source_;
  AuditLog* audit_;

  DataPhase phase_ = DataPhase::kIdle;
  std::string run_id_;
  std::string researcher_id_;
  std::optional<TrainManifest> manifest_;
  std::optional<StationKeys> keys_;
  std::optional<Salt> salt_;
  std::optional<Message> pending_offer_;
  std::optional<Millis> deadline_;
  std::uint64_t next_seq_ = 1;
  std::map<std::string, std::uint64_t> last_seq_;
};

}  // namespace pht

#endif  // PHT_DATA_STATION_H_
