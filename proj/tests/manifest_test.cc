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
#include "pht/manifest.h"

namespace pht {
namespace {

constexpr Millis kNow = 1'700'000'000'000;
constexpr std::int64_t kNowSecs = kNow / 1000;

ErrorCode ValidateCode(const TrainManifest& m, const VerificationKey& anchor,
                       const StationPolicy* policy = nullptr, std::int64_t now = kNowSecs) {
  try {
    ValidateTrain(m, anchor, now, policy);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

class ManifestTest : public ::testing::Test {
 protected:
  Scenario s = BuildScenario(testing::SmallScenario(1), kNow);
  VerificationKey anchor() const { return s.trust_anchor.Verification(); }
  StationPolicy PolicyA() const { return {"A", {"age", "income"}}; }
};

TEST_F(ManifestTest, SignedManifestValidates) {
  StationPolicy p = PolicyA();
  EXPECT_NO_THROW(ValidateTrain(s.manifest, anchor(), kNowSecs, nullptr));
  EXPECT_NO_THROW(ValidateTrain(s.manifest, anchor(), kNowSecs, &p));
  EXPECT_EQ(s.manifest.SaltInitiator(), "A");
  ASSERT_NE(s.manifest.RequestFor("B"), nullptr);
  EXPECT_EQ(s.manifest.RequestFor("C"), nullptr);
}

TEST_F(ManifestTest, JsonRoundTripKeepsSignature) {
  TrainManifest back = TrainManifest::FromJson(s.manifest.ToJson());
  EXPECT_EQ(back.ToJson(), s.manifest.ToJson());
  EXPECT_NO_THROW(ValidateTrain(back, anchor(), kNowSecs, nullptr));
  EXPECT_THROW(TrainManifest::FromJson({{"train_id", 3}}), Error);
}

TEST_F(ManifestTest, AnyChangeBreaksSignature) {
  TrainManifest m = s.manifest;
  m.data_requests[1].variables.push_back("income");
  EXPECT_EQ(ValidateCode(m, anchor()), ErrorCode::kBadSignature);
  m = s.manifest;
  m.disclosure.k_min = 1;
  EXPECT_EQ(ValidateCode(m, anchor()), ErrorCode::kBadSignature);
  EXPECT_EQ(ValidateCode(s.manifest, GenerateTrustAnchor().Verification()),
            ErrorCode::kBadSignature);
}

TEST_F(ManifestTest, ExpiryIsExclusive) {
  EXPECT_EQ(ValidateCode(s.manifest, anchor(), nullptr, s.manifest.expiry), ErrorCode::kExpired);
  EXPECT_EQ(ValidateCode(s.manifest, anchor(), nullptr, s.manifest.expiry - 1), ErrorCode::kInternal);
}

TEST_F(ManifestTest, KeysMustBelongToRun) {
  TrainManifest m = s.manifest;
  m.tse_public_encryption_key = GenerateEncryptionKeyPair("other-run").Public();
  SignManifest(m, s.trust_anchor);
  EXPECT_EQ(ValidateCode(m, anchor()), ErrorCode::kRunMismatch);
}

TEST_F(ManifestTest, AgeFilterNeedsReferenceDate) {
  TrainManifest m = s.manifest;
  m.data_requests[0].pool.age_min = 40;
  m.data_requests[0].pool.as_of = "";
  SignManifest(m, s.trust_anchor);
  EXPECT_EQ(ValidateCode(m, anchor()), ErrorCode::kInvalidSpec);
  m.data_requests[0].pool.as_of = "2020-01-01";
  SignManifest(m, s.trust_anchor);
  EXPECT_EQ(ValidateCode(m, anchor()), ErrorCode::kInternal);
}

TEST_F(ManifestTest, StationPolicy) {
  StationPolicy other{"Z", {"age"}};
  EXPECT_EQ(ValidateCode(s.manifest, anchor(), &other), ErrorCode::kNotAddressed);
  StationPolicy narrow{"A", {"age"}};
  EXPECT_EQ(ValidateCode(s.manifest, anchor(), &narrow), ErrorCode::kUnauthorizedVariable);
}

TEST_F(ManifestTest, SigningInputIsDomainSeparated) {
  Bytes in = ManifestSigningInput(s.manifest);
  std::string text = AsString(in);
  EXPECT_EQ(text.rfind("PHT-MANIFEST|", 0), 0u);
  EXPECT_EQ(text.substr(13), CanonicalJson(s.manifest.UnsignedJson()));
  EXPECT_FALSE(s.manifest.UnsignedJson().contains("credential_signature"));
}

TEST_F(ManifestTest, CarriesNoPrivateMaterial) {
  std::string text = s.manifest.ToJson().dump();
  auto absent = [&](const SecretBytes& k) {
    EXPECT_EQ(text.find(Base64Encode(k.view())), std::string::npos);
    EXPECT_EQ(text.find(HexEncode(k.view())), std::string::npos);
  };
  absent(s.keys_a.encryption.private_decryption_key);
  absent(s.keys_a.signing.signing_key);
  absent(s.keys_b.signing.signing_key);
  absent(s.tse_keys->private_decryption_key);
  absent(s.trust_anchor.signing_key);
}

}  // namespace
}  // namespace pht
