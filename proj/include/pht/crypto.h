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

#ifndef PHT_CRYPTO_H_
#define PHT_CRYPTO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pht/bytes.h"

namespace pht {

// Algorithm identifiers recorded in every sealed package header.
inline constexpr std::string_view kKemAlgorithm = "X25519-HKDF-SHA256";
inline constexpr std::string_view kWrapAlgorithm = "AES-256-GCM";
inline constexpr std::string_view kContentAlgorithm = "AES-256-GCM";
inline constexpr std::string_view kOuterMacAlgorithm = "HMAC-SHA256";
inline constexpr std::string_view kSignatureAlgorithm = "Ed25519";

// Key ids have the form "<scope>/<kind>/<fingerprint>". For run keys the
// scope is the run id; trust anchors use the scope "anchor".
std::string KeyScope(std::string_view key_id);

struct PublicKey {
  std::string key_id;
  Bytes bytes;  // X25519 public value

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct VerificationKey {
  std::string key_id;
  Bytes bytes;  // Ed25519 public key

  friend bool operator==(const VerificationKey&, const VerificationKey&) = default;
};

// Only PublicKey and VerificationKey have JSON encoders; the private halves
// below cannot be placed into a protocol message.
struct KeyPair {
  std::string key_id;
  Bytes public_encryption_key;
  SecretBytes private_decryption_key;

  PublicKey Public() const { return {key_id, public_encryption_key}; }
};

struct SigningKeys {
  std::string key_id;
  SecretBytes signing_key;
  Bytes verification_key;

  VerificationKey Verification() const { return {key_id, verification_key}; }
};

// Fresh per-run keys. Throws EntropyUnavailable.
KeyPair GenerateEncryptionKeyPair(std::string_view run_id);
SigningKeys GenerateSigningKeys(std::string_view run_id);
SigningKeys GenerateTrustAnchor();

Bytes Sign(const SigningKeys& keys, ByteView message);
bool Verify(const VerificationKey& key, ByteView message, ByteView signature);

nlohmann::json PublicKeyJson(const PublicKey& key);
PublicKey ParsePublicKey(const nlohmann::json& j);
nlohmann::json VerificationKeyJson(const VerificationKey& key);
VerificationKey ParseVerificationKey(const nlohmann::json& j);

// Hybrid sign-then-encrypt envelope.
//
//   wrapped_content_key = eph_pub(32) | nonce(12) | AES-GCM(kek, content_key) | tag(16)
//   ciphertext          = nonce(12) | AES-GCM(content_key, inner) | tag(16)
//   inner               = u64 len | data | Ed25519(sig over "PHT-INNER|" run "|" sender "|" data)
//   outer_auth_tag      = HMAC-SHA256(mac_key, header | wrapped_content_key | ciphertext)
//
// kek and mac_key come from HKDF over X25519(eph, recipient).
struct SealedPackage {
  std::string sender_station_id;
  std::string run_id;
  std::string encryption_key_id;
  std::string signing_key_id;
  Bytes wrapped_content_key;
  Bytes ciphertext;
  Bytes outer_auth_tag;

  friend bool operator==(const SealedPackage&, const SealedPackage&) = default;
};

// Throws RunMismatch when either key's scope differs from `run_id`.
SealedPackage Seal(ByteView plaintext, std::string_view run_id,
                   std::string_view sender_id, const PublicKey& recipient,
                   const SigningKeys& signer);

// What the opener expects the inner signature to bind. Defaults to the
// run_id and sender named in the package header.
struct OpenContext {
  std::string run_id;
  std::string sender_station_id;
};

// Verification-decryption-verification. Throws, in phase order,
// OuterIntegrityFailure, DecryptionFailure or InnerSignatureFailure; nothing
// is returned unless all three phases pass.
SecretBytes Open(const SealedPackage& pkg, const KeyPair& recipient,
                 const VerificationKey& sender_verification,
                 const std::optional<OpenContext>& expected = std::nullopt);

// Canonical JSON header line, then base64 wrapped_content_key, ciphertext
// and outer_auth_tag, one per line.
std::string EncodePackage(const SealedPackage& pkg);
// Throws DecodeError.
SealedPackage DecodePackage(std::string_view text);
nlohmann::json PackageHeaderJson(const SealedPackage& pkg);

namespace detail {
// Test hook: recomputes the outer tag so later phases can be exercised.
void ResealOuterTag(SealedPackage& pkg, const KeyPair& recipient);
// Test hook: seals `inner` verbatim, without the length prefix or signature.
SealedPackage SealUnsigned(ByteView inner, std::string_view run_id,
                           std::string_view sender_id, const PublicKey& recipient,
                           std::string_view signing_key_id);
}  // namespace detail

// Key files: canonical JSON {"key_id","kind","material"(base64)}. Private
// files are written with owner-only permissions.
inline constexpr std::string_view kKindEncryptionPublic = "x25519-public";
inline constexpr std::string_view kKindEncryptionPrivate = "x25519-private";
inline constexpr std::string_view kKindSigningPrivate = "ed25519-private";
inline constexpr std::string_view kKindVerification = "ed25519-public";

struct KeyFile {
  std::string kind;
  std::string key_id;
  Bytes material;
};

// Refuses to overwrite an existing file unless `force`. Throws IoError.
void WriteKeyFile(const std::filesystem::path& path, const KeyFile& key,
                  bool private_material, bool force);
KeyFile ReadKeyFile(const std::filesystem::path& path);

PublicKey LoadPublicKey(const std::filesystem::path& path);
VerificationKey LoadVerificationKey(const std::filesystem::path& path);
KeyPair LoadKeyPair(const std::filesystem::path& public_path,
                    const std::filesystem::path& private_path);
SigningKeys LoadSigningKeys(const std::filesystem::path& private_path,
                            const std::filesystem::path& verification_path);

}  // namespace pht

#endif  // PHT_CRYPTO_H_
