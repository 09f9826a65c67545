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

#ifndef PHT_VAULT_H_
#define PHT_VAULT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pht/bytes.h"

namespace pht {

// Storage for everything the TSE decrypts or derives during a run. Wipe()
// overwrites every buffer before releasing it and zero-fills then removes any
// spill file, after which reads fail with NotFound.
class Vault {
 public:
  // With a spill directory every item is also written to a file there.
  explicit Vault(std::optional<std::filesystem::path> spill_dir = std::nullopt);
  ~Vault();

  Vault(const Vault&) = delete;
  Vault& operator=(const Vault&) = delete;

  // Replaces an existing item of the same name. Throws IoError on spill.
  void Put(const std::string& name, SecretBytes data);
  // Throws NotFound.
  const SecretBytes& Get(const std::string& name) const;
  bool Contains(const std::string& name) const;

  // Names of items held in memory or on disk.
  std::vector<std::string> Inventory() const;

  // Returns the number of items destroyed.
  std::size_t Wipe();

 private:
  std::filesystem::path SpillPath(const std::string& name) const;
  static void ShredFile(const std::filesystem::path& p);

  std::optional<std::filesystem::path> spill_dir_;
  std::map<std::string, SecretBytes> items_;
};

}  // namespace pht

#endif  // PHT_VAULT_H_
