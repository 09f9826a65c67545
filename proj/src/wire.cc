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

#include "pht/wire.h"

#include <utility>

#include "pht/error.h"

namespace pht {
namespace {

using nlohmann::json;

// Decodes a header and returns the payload length. Throws DecodeError.
std::uint32_t CheckHeader(ByteView frame, std::size_t max_payload) {
  for (std::size_t i = 0; i < kFrameMagic.size(); ++i) {
    if (i >= frame.size()) throw DecodeError(frame.size(), "truncated magic");
    if (frame[i] != static_cast<std::uint8_t>(kFrameMagic[i])) {
      throw DecodeError(0, "bad magic");
    }
  }
  if (frame.size() < 5) throw DecodeError(frame.size(), "truncated version");
  if (frame[4] != kWireVersion) throw DecodeError(4, "unsupported version");
  if (frame.size() < 6) throw DecodeError(frame.size(), "truncated type");
  if (frame[5] < 1 || frame[5] > 6) throw DecodeError(5, "unknown message type");
  if (frame.size() < kFrameHeaderSize) throw DecodeError(frame.size(), "truncated length");
  std::uint32_t len = ReadU32BigEndian(frame.data() + 6);
  if (len > max_payload) throw DecodeError(6, "payload length exceeds maximum");
  return len;
}

}  // namespace

std::string_view MessageTypeName(MessageType t) {
  switch (t) {
    case MessageType::kTrainDispatch: return "TrainDispatch";
    case MessageType::kAck: return "Ack";
    case MessageType::kSaltOffer: return "SaltOffer";
    case MessageType::kDataTransfer: return "DataTransfer";
    case MessageType::kResultReturn: return "ResultReturn";
    case MessageType::kAbort: return "Abort";
  }
  return "Unknown";
}

MessageType Message::type() const {
  return static_cast<MessageType>(body.index() + 1);
}

json PayloadJson(const Message& m) {
  json j = {{"run_id", m.run_id}, {"seq", m.seq}, {"sender", m.sender}, {"to", m.to}};
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, TrainDispatch>) {
          j["manifest"] = b.manifest.ToJson();
        } else if constexpr (std::is_same_v<T, Ack>) {
          j["status"] = b.status;
        } else if constexpr (std::is_same_v<T, SaltOffer> || std::is_same_v<T, DataTransfer>) {
          j["package"] = EncodePackage(b.package);
        } else if constexpr (std::is_same_v<T, ResultReturn>) {
          j["result"] = b.result.ToJson();
        } else {
          j["reason"] = b.reason;
        }
      },
      m.body);
  return j;
}

Bytes Encode(const Message& m) {
  std::string payload = CanonicalJson(PayloadJson(m));
  if (payload.size() > kDefaultMaxPayload) {
    throw Error(ErrorCode::kInvalidSpec, "message payload exceeds maximum frame size");
  }
  Bytes out;
  out.reserve(kFrameHeaderSize + payload.size());
  out.insert(out.end(), kFrameMagic.begin(), kFrameMagic.end());
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(m.type()));
  AppendU32BigEndian(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Message Decode(ByteView frame, std::size_t max_payload) {
  std::uint32_t len = CheckHeader(frame, max_payload);
  if (frame.size() < kFrameHeaderSize + len) throw DecodeError(frame.size(), "truncated payload");
  if (frame.size() > kFrameHeaderSize + len) {
    throw DecodeError(kFrameHeaderSize + len, "trailing bytes after frame");
  }
  auto type = static_cast<MessageType>(frame[5]);
  std::string_view text(reinterpret_cast<const char*>(frame.data() + kFrameHeaderSize), len);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw DecodeError(kFrameHeaderSize, "payload is not a JSON object");
  }
  Message m;
  try {
    m.run_id = j.at("run_id").get<std::string>();
    m.seq = j.at("seq").get<std::uint64_t>();
    m.sender = j.at("sender").get<std::string>();
    m.to = j.at("to").get<std::string>();
    switch (type) {
      case MessageType::kTrainDispatch:
        m.body = TrainDispatch{TrainManifest::FromJson(j.at("manifest"))};
        break;
      case MessageType::kAck:
        m.body = Ack{j.at("status").get<std::string>()};
        break;
      case MessageType::kSaltOffer:
        m.body = SaltOffer{DecodePackage(j.at("package").get<std::string>())};
        break;
      case MessageType::kDataTransfer:
        m.body = DataTransfer{DecodePackage(j.at("package").get<std::string>())};
        break;
      case MessageType::kResultReturn:
        m.body = ResultReturn{ValidatedResult::FromJson(j.at("result"))};
        break;
      case MessageType::kAbort:
        m.body = Abort{j.at("reason").get<std::string>()};
        break;
    }
  } catch (const json::exception& e) {
    throw DecodeError(kFrameHeaderSize, std::string("payload field: ") + e.what());
  } catch (const DecodeError& e) {
    throw DecodeError(kFrameHeaderSize, std::string("package: ") + e.detail());
  } catch (const Error& e) {
    throw DecodeError(kFrameHeaderSize, e.what());
  }
  return m;
}

bool operator==(const Message& a, const Message& b) { return Encode(a) == Encode(b); }

void FrameReader::Feed(ByteView bytes) { buffer_.insert(buffer_.end(), bytes.begin(), bytes.end()); }

std::optional<Bytes> FrameReader::NextFrame() {
  if (buffer_.size() < kFrameHeaderSize) {
    // Reject a bad prefix as early as possible.
    if (!buffer_.empty()) {
      try {
        CheckHeader(buffer_, max_payload_);
      } catch (const DecodeError& e) {
        if (e.offset() < buffer_.size()) throw;
      }
    }
    return std::nullopt;
  }
  std::uint32_t len = CheckHeader(buffer_, max_payload_);
  if (buffer_.size() < kFrameHeaderSize + len) return std::nullopt;
  Bytes frame(buffer_.begin(), buffer_.begin() + kFrameHeaderSize + len);
  buffer_.erase(buffer_.begin(), buffer_.begin() + kFrameHeaderSize + len);
  return frame;
}

}  // namespace pht
