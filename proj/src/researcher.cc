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

#include "pht/researcher.h"

#include <utility>

namespace pht {

std::string_view RunStatusName(RunStatus s) {
  switch (s) {
    case RunStatus::kPending: return "Pending";
    case RunStatus::kCompleted: return "Completed";
    case RunStatus::kAborted: return "Aborted";
  }
  return "Pending";
}

Researcher::Researcher(TrainManifest manifest) : manifest_(std::move(manifest)) {}

Message Researcher::Make(const std::string& to, MessageBody body) {
  return Message{manifest_.run_id, next_seq_++, manifest_.researcher_id, to, std::move(body)};
}

std::vector<Message> Researcher::Start(Millis now) {
  std::vector<Message> out;
  milestones_["dispatched"] = now;
  out.push_back(Make(manifest_.tse_id, TrainDispatch{manifest_}));
  for (const DataRequest& r : manifest_.data_requests) {
    out.push_back(Make(r.station_id, TrainDispatch{manifest_}));
  }
  return out;
}

std::vector<Message> Researcher::Step(const Message& in, Millis now) {
  std::vector<Message> out;
  if (status_ != RunStatus::kPending || in.run_id != manifest_.run_id) return out;
  if (const auto* ack = in.as<Ack>()) {
    if (ack->status != "OK") {
      AbortRun(ack->status, in.sender, now, out);
      return out;
    }
    int n = ++acks_[in.sender];
    if (in.sender != manifest_.tse_id) {
      milestones_[(n == 1 ? "validated@" : "sent@") + in.sender] = now;
    }
  } else if (const auto* rr = in.as<ResultReturn>()) {
    if (in.sender == manifest_.tse_id && !result_) {
      result_ = rr->result;
      milestones_["result"] = now;
    }
  } else if (const auto* a = in.as<Abort>()) {
    AbortRun(a->reason, in.sender, now, out);
    return out;
  }
  CheckCompleted(now);
  return out;
}

void Researcher::CheckCompleted(Millis now) {
  if (!result_ || acks_[manifest_.tse_id] < 1) return;
  for (const DataRequest& r : manifest_.data_requests) {
    if (acks_[r.station_id] < 2) return;
  }
  status_ = RunStatus::kCompleted;
  milestones_["completed"] = now;
}

void Researcher::AbortRun(const std::string& reason, const std::string& from, Millis now,
                          std::vector<Message>& out) {
  status_ = RunStatus::kAborted;
  abort_reason_ = reason;
  milestones_["aborted"] = now;
  if (from != manifest_.tse_id) out.push_back(Make(manifest_.tse_id, Abort{reason}));
}

}  // namespace pht
