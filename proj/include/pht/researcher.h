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

#ifndef PHT_RESEARCHER_H_
#define PHT_RESEARCHER_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pht/audit.h"
#include "pht/disclosure.h"
#include "pht/manifest.h"
#include "pht/wire.h"

namespace pht {

enum class RunStatus { kPending, kCompleted, kAborted };

std::string_view RunStatusName(RunStatus s);

// The researcher's side of a run. It dispatches the signed train to the TSE
// and every data station, and only ever receives Acks, Aborts and the
// validated result. A run completes once the result and every expected Ack
// (two per data station, one from the TSE) have arrived; the first Abort ends
// it, and an Abort raised by a data station is passed on to the TSE.
class Researcher {
 public:
  explicit Researcher(TrainManifest manifest);

  const std::string& id() const { return manifest_.researcher_id; }
  const TrainManifest& manifest() const { return manifest_; }

  std::vector<Message> Start(Millis now);
  std::vector<Message> Step(const Message& in, Millis now);

  RunStatus status() const { return status_; }
  const std::string& abort_reason() const { return abort_reason_; }
  const std::optional<ValidatedResult>& result() const { return result_; }
  // Time of the first and last protocol event seen, for reporting.
  const std::map<std::string, Millis>& milestones() const { return milestones_; }

 private:
  void CheckCompleted(Millis now);
  void AbortRun(const std::string& reason, const std::string& from, Millis now,
                std::vector<Message>& out);
  Message Make(const std::string& to, MessageBody body);

  TrainManifest manifest_;
  RunStatus status_ = RunStatus::kPending;
  std::string abort_reason_;
  std::optional<ValidatedResult> result_;
  std::map<std::string, int> acks_;
  std::map<std::string, Millis> milestones_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace pht

#endif  // PHT_RESEARCHER_H_
