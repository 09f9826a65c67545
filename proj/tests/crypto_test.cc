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
#include <sys/stat.h>

#include <filesystem>

#include "generators.h"
#include "pht/bytes.h"
#include "pht/crypto.h"
#include "pht/error.h"

namespace pht {
namespace {

ErrorCode OpenCode(const SealedPackage& pkg, const KeyPair& kp, const VerificationKey& vk,
                   const std::optional<OpenContext>& ctx = std::nullopt) {
  try {
    Open(pkg, kp, vk, ctx);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

class Envelope : public ::testing::Test {
 protected:
  KeyPair tse = GenerateEncryptionKeyPair("run-1");
  SigningKeys station = GenerateSigningKeys("run-1");
  Bytes data = Bytes(AsBytes("payload bytes for the trusted environment").begin(),
                     AsBytes("payload bytes for the trusted environment").end());
  SealedPackage Seal1() { return Seal(data, "run-1", "A", tse.Public(), station); }
};

TEST_F(Envelope, RoundTrip) {
  SealedPackage pkg = Seal1();
  EXPECT_EQ(pkg.sender_station_id, "A");
  EXPECT_EQ(pkg.encryption_key_id, tse.key_id);
  EXPECT_EQ(pkg.signing_key_id, station.key_id);
  SecretBytes out = Open(pkg, tse, station.Verification(), OpenContext{"run-1", "A"});
  EXPECT_EQ(Bytes(out.view().begin(), out.view().end()), data);
  EXPECT_FALSE(ContainsBytes(pkg.ciphertext, AsBytes("payload")));
}

TEST_F(Envelope, EncodeDecodeRoundTrip) {
  SealedPackage pkg = Seal1();
  EXPECT_EQ(DecodePackage(EncodePackage(pkg)), pkg);
  EXPECT_THROW(DecodePackage("{}\n!!\n"), DecodeError);
}

TEST_F(Envelope, RejectsKeysFromAnotherRun) {
  KeyPair other = GenerateEncryptionKeyPair("run-2");
  EXPECT_THROW(Seal(data, "run-1", "A", other.Public(), station), Error);
  try {
    Seal(data, "run-2", "A", other.Public(), station);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRunMismatch);
  }
}

TEST_F(Envelope, WrongKeysFailLoudly) {
  SealedPackage pkg = Seal1();
  KeyPair wrong_tse = GenerateEncryptionKeyPair("run-1");
  SigningKeys wrong_signer = GenerateSigningKeys("run-1");
  EXPECT_EQ(OpenCode(pkg, wrong_tse, station.Verification()), ErrorCode::kOuterIntegrityFailure);
  EXPECT_EQ(OpenCode(pkg, tse, wrong_signer.Verification()), ErrorCode::kInnerSignatureFailure);
}

TEST_F(Envelope, PhaseAttribution) {
  // Outer: any header or body change without a matching tag.
  SealedPackage renamed = Seal1();
  renamed.sender_station_id = "B";
  EXPECT_EQ(OpenCode(renamed, tse, station.Verification()), ErrorCode::kOuterIntegrityFailure);

  // Decryption: a ciphertext change carried under a recomputed outer tag.
  SealedPackage garbled = Seal1();
  garbled.ciphertext[20] ^= 0x01;
  detail::ResealOuterTag(garbled, tse);
  EXPECT_EQ(OpenCode(garbled, tse, station.Verification()), ErrorCode::kDecryptionFailure);

  // Inner: a forged signer, or a header relabelled and resealed.
  SigningKeys forger = GenerateSigningKeys("run-1");
  SealedPackage forged = Seal(data, "run-1", "A", tse.Public(), forger);
  EXPECT_EQ(OpenCode(forged, tse, station.Verification()), ErrorCode::kInnerSignatureFailure);
  SealedPackage relabelled = Seal1();
  relabelled.sender_station_id = "B";
  detail::ResealOuterTag(relabelled, tse);
  EXPECT_EQ(OpenCode(relabelled, tse, station.Verification()), ErrorCode::kInnerSignatureFailure);

  // Inner: a valid package presented under another run or sender.
  EXPECT_EQ(OpenCode(Seal1(), tse, station.Verification(), OpenContext{"run-9", "A"}),
            ErrorCode::kInnerSignatureFailure);

  // Unsigned inner content never passes.
  SealedPackage unsigned_pkg =
      detail::SealUnsigned(data, "run-1", "A", tse.Public(), station.key_id);
  ErrorCode c = OpenCode(unsigned_pkg, tse, station.Verification());
  EXPECT_TRUE(c == ErrorCode::kDecryptionFailure || c == ErrorCode::kInnerSignatureFailure);
}

TEST_F(Envelope, EverySingleBitFlipDetected) {
  SealedPackage pkg = Seal1();
  testing::Rng rng(11);
  std::vector<Bytes SealedPackage::*> parts = {&SealedPackage::wrapped_content_key,
                                               &SealedPackage::ciphertext,
                                               &SealedPackage::outer_auth_tag};
  for (int i = 0; i < 300; ++i) {
    SealedPackage t = pkg;
    Bytes& b = t.*parts[static_cast<std::size_t>(i) % parts.size()];
    auto bit = static_cast<std::size_t>(testing::UniformInt(rng, 0, static_cast<int>(b.size() * 8) - 1));
    b[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_EQ(OpenCode(t, tse, station.Verification()), ErrorCode::kOuterIntegrityFailure);
  }
}

TEST(Signatures, VerifyOnlyWithMatchingKey) {
  SigningKeys k = GenerateTrustAnchor();
  EXPECT_EQ(KeyScope(k.key_id), "anchor");
  Bytes sig = Sign(k, AsBytes("hello"));
  EXPECT_TRUE(Verify(k.Verification(), AsBytes("hello"), sig));
  EXPECT_FALSE(Verify(k.Verification(), AsBytes("hellp"), sig));
  EXPECT_FALSE(Verify(GenerateTrustAnchor().Verification(), AsBytes("hello"), sig));
}

TEST(KeyIds, ScopedToRun) {
  KeyPair kp = GenerateEncryptionKeyPair("run-7");
  EXPECT_EQ(KeyScope(kp.key_id), "run-7");
  EXPECT_EQ(ParsePublicKey(PublicKeyJson(kp.Public())), kp.Public());
  SigningKeys sk = GenerateSigningKeys("run-7");
  EXPECT_EQ(ParseVerificationKey(VerificationKeyJson(sk.Verification())), sk.Verification());
  std::string pub = PublicKeyJson(kp.Public()).dump();
  EXPECT_FALSE(ContainsBytes(AsBytes(pub), AsBytes(Base64Encode(kp.private_decryption_key.view()))));
}

TEST(KeyFiles, PrivateFilesAreOwnerOnly) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pht_keyfile_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  KeyPair kp = GenerateEncryptionKeyPair("run-1");
  Bytes priv(kp.private_decryption_key.view().begin(), kp.private_decryption_key.view().end());
  WriteKeyFile(dir / "enc.pub", {std::string(kKindEncryptionPublic), kp.key_id, kp.public_encryption_key},
               false, false);
  WriteKeyFile(dir / "enc.key", {std::string(kKindEncryptionPrivate), kp.key_id, priv}, true, false);
  struct stat st {};
  ASSERT_EQ(::stat((dir / "enc.key").c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600u);
  EXPECT_THROW(WriteKeyFile(dir / "enc.key", {std::string(kKindEncryptionPrivate), kp.key_id, priv},
                            true, false),
               Error);
  KeyPair back = LoadKeyPair(dir / "enc.pub", dir / "enc.key");
  EXPECT_EQ(back.key_id, kp.key_id);
  EXPECT_TRUE(back.private_decryption_key == kp.private_decryption_key);
  EXPECT_THROW(LoadPublicKey(dir / "enc.key"), Error);
  fs::remove_all(dir);
}

TEST(Bytes, HelpersRoundTrip) {
  Bytes b = {0, 1, 2, 250, 255};
  EXPECT_EQ(HexDecode(HexEncode(b)), b);
  EXPECT_EQ(Base64Decode(Base64Encode(b)), b);
  EXPECT_THROW(Base64Decode("a$=="), DecodeError);
  EXPECT_EQ(CanonicalJson(nlohmann::json{{"b", 1}, {"a", {{"d", 2}, {"c", 3}}}}),
            R"({"a":{"c":3,"d":2},"b":1})");
  SecretBytes s(Bytes{1, 2, 3});
  s.Clear();
  EXPECT_TRUE(s.empty());
  std::string text = "secret";
  Cleanse(text);
  EXPECT_EQ(text, std::string(6, '\0'));
}

}  // namespace
}  // namespace pht
