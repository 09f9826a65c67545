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

#include "pht/audit.h"

#include <chrono>

#include "pht/bytes.h"
#include "pht/error.h"

namespace pht {

Millis WallClockMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

nlohmann::json AuditEvent::ToJson() const {
  return {{"timestamp", timestamp},
          {"run_id", run_id},
          {"phase", phase},
          {"event", event},
          {"detail", detail}};
}

AuditLog::AuditLog(const std::filesystem::path& file) {
  file_.emplace(file, std::ios::app);
  if (!*file_) throw Error(ErrorCode::kIoError, "cannot open audit log " + file.string());
}

void AuditLog::Record(AuditEvent e) {
  std::lock_guard lock(mu_);
  if (file_) {
    *file_ << CanonicalJson(e.ToJson()) << '\n';
    file_->flush();
  }
  events_.push_back(std::move(e));
}

std::vector<AuditEvent> AuditLog::Events() const {
  std::lock_guard lock(mu_);
  return events_;
}

std::size_t AuditLog::Count(const std::string& run_id, const std::string& name) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const AuditEvent& e : events_) n += (e.run_id == run_id && e.event == name) ? 1 : 0;
  return n;
}

}  // namespace pht
