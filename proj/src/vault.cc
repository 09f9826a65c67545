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

#include "pht/vault.h"

#include <sys/stat.h>

#include <fstream>
#include <system_error>

#include "pht/error.h"

namespace pht {

Vault::Vault(std::optional<std::filesystem::path> spill_dir) : spill_dir_(std::move(spill_dir)) {
  if (spill_dir_) {
    std::error_code ec;
    std::filesystem::create_directories(*spill_dir_, ec);
    if (ec) throw Error(ErrorCode::kIoError, "spill dir " + spill_dir_->string() + ": " + ec.message());
  }
}

Vault::~Vault() { Wipe(); }

std::filesystem::path Vault::SpillPath(const std::string& name) const {
  std::string file = HexEncode(AsBytes(name)) + ".spill";
  return *spill_dir_ / file;
}

void Vault::ShredFile(const std::filesystem::path& p) {
  std::error_code ec;
  auto size = std::filesystem::file_size(p, ec);
  if (!ec) {
    std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
    std::string zeros(4096, '\0');
    for (std::uintmax_t done = 0; f && done < size; done += zeros.size()) {
      f.write(zeros.data(), static_cast<std::streamsize>(std::min<std::uintmax_t>(zeros.size(), size - done)));
    }
    f.flush();
  }
  std::filesystem::remove(p, ec);
}

void Vault::Put(const std::string& name, SecretBytes data) {
  if (spill_dir_) {
    auto path = SpillPath(name);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIoError, "cannot spill " + path.string());
    ::chmod(path.c_str(), 0600);
    f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!f) throw Error(ErrorCode::kIoError, "cannot spill " + path.string());
  }
  items_[name] = std::move(data);
}

const SecretBytes& Vault::Get(const std::string& name) const {
  auto it = items_.find(name);
  if (it == items_.end()) throw Error(ErrorCode::kNotFound, "vault item " + name);
  return it->second;
}

bool Vault::Contains(const std::string& name) const { return items_.contains(name); }

std::vector<std::string> Vault::Inventory() const {
  std::vector<std::string> names;
  for (const auto& [name, data] : items_) names.push_back(name);
  if (spill_dir_) {
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(*spill_dir_, ec)) {
      if (entry.path().extension() != ".spill") continue;
      std::string stem = entry.path().stem().string();
      Bytes raw;
      try {
        raw = HexDecode(stem);
      } catch (const Error&) {
        names.push_back(entry.path().filename().string());
        continue;
      }
      std::string name = AsString(raw);
      if (!items_.contains(name)) names.push_back(name);
    }
  }
  return names;
}

std::size_t Vault::Wipe() {
  std::size_t n = items_.size();
  for (auto& [name, data] : items_) {
    data.Clear();
    if (spill_dir_) ShredFile(SpillPath(name));
  }
  items_.clear();
  return n;
}

}  // namespace pht
