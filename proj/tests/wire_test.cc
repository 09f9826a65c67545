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

#include <gtest/gtest.h>

#include "generators.h"
#include "pht/error.h"
#include "pht/wire.h"

namespace pht {
namespace {

std::size_t DecodeOffset(ByteView frame, std::size_t max_payload = kDefaultMaxPayload) {
  try {
    Decode(frame, max_payload);
  } catch (const DecodeError& e) {
    return e.offset();
  }
  return SIZE_MAX;
}

class WireTest : public ::testing::Test {
 protected:
  Scenario s = BuildScenario(testing::SmallScenario(2), 1'700'000'000'000);

  std::vector<Message> Samples() {
    SealedPackage pkg = Seal(AsBytes("data"), "run-1", "A", s.tse_keys->Public(), s.keys_a.signing);
    ValidatedResult result = Validate(RawResult{}, {5, "*"});
    return {
        {"run-1", 1, "researcher", "A", TrainDispatch{s.manifest}},
        {"run-1", 2, "A", "researcher", Ack{"OK"}},
        {"run-1", 3, "A", "B", SaltOffer{pkg}},
        {"run-1", 4, "A", "TSE", DataTransfer{pkg}},
        {"run-1", 5, "TSE", "researcher", ResultReturn{result}},
        {"run-1", 6, "TSE", "researcher", Abort{"Timeout"}},
    };
  }
};

TEST_F(WireTest, EveryVariantRoundTrips) {
  std::uint8_t expected_type = 1;
  for (const Message& m : Samples()) {
    Bytes frame = Encode(m);
    EXPECT_EQ(AsString(ByteView(frame).first(4)), "PHT1");
    EXPECT_EQ(frame[4], kWireVersion);
    EXPECT_EQ(frame[5], expected_type++);
    EXPECT_EQ(ReadU32BigEndian(frame.data() + 6), frame.size() - kFrameHeaderSize);
    Message back = Decode(frame);
    EXPECT_TRUE(back == m);
    EXPECT_EQ(back.type(), m.type());
    EXPECT_EQ(back.sender, m.sender);
    EXPECT_EQ(Encode(back), frame);
  }
}

TEST_F(WireTest, DecodeErrorsCarryOffsets) {
  Bytes good = Encode(Samples()[1]);
  Bytes bad = good;
  bad[1] = 'X';
  EXPECT_EQ(DecodeOffset(bad), 0u);
  bad = good;
  bad[4] = 2;
  EXPECT_EQ(DecodeOffset(bad), 4u);
  bad = good;
  bad[5] = 99;
  EXPECT_EQ(DecodeOffset(bad), 5u);
  EXPECT_EQ(DecodeOffset(good, 8), 6u);
  bad = Bytes(good.begin(), good.end() - 3);
  EXPECT_EQ(DecodeOffset(bad), bad.size());
  EXPECT_EQ(DecodeOffset(ByteView(good).first(7)), 7u);
  bad = good;
  bad[kFrameHeaderSize] = '[';
  EXPECT_EQ(DecodeOffset(bad), kFrameHeaderSize);
  // A well-formed payload whose body does not match the type byte.
  bad = good;
  bad[5] = static_cast<std::uint8_t>(MessageType::kAbort);
  EXPECT_EQ(DecodeOffset(bad), kFrameHeaderSize);
  bad = good;
  bad.push_back(0);
  EXPECT_NE(DecodeOffset(bad), SIZE_MAX);
}

TEST_F(WireTest, FrameReaderReassemblesStream) {
  Bytes stream;
  std::vector<Message> msgs = Samples();
  for (const Message& m : msgs) {
    Bytes f = Encode(m);
    stream.insert(stream.end(), f.begin(), f.end());
  }
  testing::Rng rng(1);
  FrameReader reader;
  std::vector<Message> out;
  std::size_t pos = 0;
  while (pos < stream.size()) {
    std::size_t n = std::min<std::size_t>(stream.size() - pos,
                                          static_cast<std::size_t>(testing::UniformInt(rng, 1, 500)));
    reader.Feed(ByteView(stream).subspan(pos, n));
    pos += n;
    while (auto f = reader.NextFrame()) out.push_back(Decode(*f));
  }
  ASSERT_EQ(out.size(), msgs.size());
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_TRUE(out[i] == msgs[i]);
  EXPECT_EQ(reader.buffered(), 0u);

  FrameReader strict(16);
  strict.Feed(Encode(msgs[0]));
  EXPECT_THROW(strict.NextFrame(), DecodeError);
}

TEST_F(WireTest, PayloadFields) {
  nlohmann::json p = PayloadJson(Samples()[5]);
  EXPECT_EQ(p["run_id"], "run-1");
  EXPECT_EQ(p["seq"], 6);
  EXPECT_EQ(p["sender"], "TSE");
  EXPECT_EQ(p["to"], "researcher");
  EXPECT_EQ(p["reason"], "Timeout");
  EXPECT_EQ(MessageTypeName(MessageType::kSaltOffer), "SaltOffer");
}

}  // namespace
}  // namespace pht
