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

#ifndef PHT_AUDIT_H_
#define PHT_AUDIT_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace pht {

// Milliseconds; unix time for real clocks, arbitrary origin for simulated ones.
using Millis = std::int64_t;

Millis WallClockMillis();

struct AuditEvent {
  Millis timestamp = 0;
  std::string run_id;
  std::string phase;
  std::string event;
  nlohmann::json detail = nlohmann::json::object();

  nlohmann::json ToJson() const;
};

// Append-only event log, optionally mirrored to a line-delimited JSON file.
// Thread-safe.
class AuditLog {
 public:
  AuditLog() = default;
  // Throws IoError when the file cannot be opened for append.
  explicit AuditLog(const std::filesystem::path& file);

  void Record(AuditEvent e);
  std::vector<AuditEvent> Events() const;
  // Events of one run whose `event` equals `name`.
  std::size_t Count(const std::string& run_id, const std::string& name) const;

 private:
  mutable std::mutex mu_;
  std::vector<AuditEvent> events_;
  std::optional<std::ofstream> file_;
};

}  // namespace pht

#endif  // PHT_AUDIT_H_
