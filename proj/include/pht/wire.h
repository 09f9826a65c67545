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

#ifndef PHT_WIRE_H_
#define PHT_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "pht/bytes.h"
#include "pht/crypto.h"
#include "pht/disclosure.h"
#include "pht/manifest.h"

namespace pht {

// Frame layout:
//   "PHT1" | version 0x01 | type | u32 big-endian payload length | payload
// The payload is canonical JSON carrying run_id, seq, sender, to and the
// variant's own fields.
inline constexpr std::string_view kFrameMagic = "PHT1";
inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kFrameHeaderSize = 10;
inline constexpr std::size_t kDefaultMaxPayload = 256u * 1024 * 1024;

enum class MessageType : std::uint8_t {
  kTrainDispatch = 1,
  kAck = 2,
  kSaltOffer = 3,
  kDataTransfer = 4,
  kResultReturn = 5,
  kAbort = 6,
};

std::string_view MessageTypeName(MessageType t);

struct TrainDispatch {
  TrainManifest manifest;
};
struct Ack {
  std::string status;
};
// A salt sealed from one data station to another.
struct SaltOffer {
  SealedPackage package;
};
struct DataTransfer {
  SealedPackage package;
};
struct ResultReturn {
  ValidatedResult result;
};
struct Abort {
  std::string reason;
};

using MessageBody =
    std::variant<TrainDispatch, Ack, SaltOffer, DataTransfer, ResultReturn, Abort>;

struct Message {
  std::string run_id;
  // Strictly increasing per sender.
  std::uint64_t seq = 0;
  std::string sender;
  std::string to;
  MessageBody body;

  MessageType type() const;
  template <typename T>
  const T* as() const {
    return std::get_if<T>(&body);
  }
};

nlohmann::json PayloadJson(const Message& m);
Bytes Encode(const Message& m);

// Decodes exactly one frame occupying all of `frame`. Throws DecodeError with
// the offset where decoding stopped; a declared length above `max_payload` is
// rejected before the payload is looked at.
Message Decode(ByteView frame, std::size_t max_payload = kDefaultMaxPayload);

// Messages compare equal when their encodings do.
bool operator==(const Message& a, const Message& b);

// Incremental decoder for a byte stream.
class FrameReader {
 public:
  explicit FrameReader(std::size_t max_payload = kDefaultMaxPayload)
      : max_payload_(max_payload) {}

  void Feed(ByteView bytes);
  // Next complete frame, or nullopt when more bytes are needed. Throws
  // DecodeError on a malformed header.
  std::optional<Bytes> NextFrame();
  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::size_t max_payload_;
  Bytes buffer_;
};

}  // namespace pht

#endif  // PHT_WIRE_H_
