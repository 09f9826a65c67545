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

#ifndef PHT_BYTES_H_
#define PHT_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace pht {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Byte buffer for key material and decrypted data. Contents are overwritten
// with zeros on destruction and on Clear().
class SecretBytes {
 public:
  SecretBytes() = default;
  explicit SecretBytes(Bytes bytes) : bytes_(std::move(bytes)) {}
  SecretBytes(const SecretBytes&) = default;
  SecretBytes& operator=(const SecretBytes& other);
  SecretBytes(SecretBytes&& other) noexcept;
  SecretBytes& operator=(SecretBytes&& other) noexcept;
  ~SecretBytes();

  ByteView view() const { return bytes_; }
  const std::uint8_t* data() const { return bytes_.data(); }
  std::size_t size() const { return bytes_.size(); }
  bool empty() const { return bytes_.empty(); }
  void Clear();

  friend bool operator==(const SecretBytes& a, const SecretBytes& b) {
    return a.bytes_ == b.bytes_;
  }

 private:
  Bytes bytes_;
};

// Overwrites the memory of `s` with zeros; the string keeps its size.
void Cleanse(std::string& s);
void Cleanse(Bytes& b);

// Fills a buffer from the OpenSSL CSPRNG. Throws EntropyUnavailable.
Bytes RandomBytes(std::size_t n);

std::string HexEncode(ByteView bytes);
Bytes HexDecode(std::string_view hex);

std::string Base64Encode(ByteView bytes);
// Throws DecodeError on malformed input.
Bytes Base64Decode(std::string_view text);

inline ByteView AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}
inline std::string AsString(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

bool ConstantTimeEqual(ByteView a, ByteView b);

void AppendU32BigEndian(Bytes& out, std::uint32_t v);
void AppendU64BigEndian(Bytes& out, std::uint64_t v);
std::uint32_t ReadU32BigEndian(const std::uint8_t* p);
std::uint64_t ReadU64BigEndian(const std::uint8_t* p);

// Canonical JSON: object keys sorted, no insignificant whitespace, UTF-8.
std::string CanonicalJson(const nlohmann::json& j);

// True when `needle` occurs anywhere in `haystack`.
bool ContainsBytes(ByteView haystack, ByteView needle);

}  // namespace pht

#endif  // PHT_BYTES_H_
