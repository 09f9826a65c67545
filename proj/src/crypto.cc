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

#include "pht/crypto.h"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/kdf.h>

#include <fstream>
#include <memory>
#include <sstream>

#include "pht/error.h"

namespace pht {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct PkeyFree { void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); } };
struct PkeyCtxFree { void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); } };
struct CipherCtxFree { void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); } };
struct MdCtxFree { void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); } };

using Pkey = std::unique_ptr<EVP_PKEY, PkeyFree>;
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxFree>;
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxFree>;

constexpr std::size_t kKeyBytes = 32;
constexpr std::size_t kNonceBytes = 12;
constexpr std::size_t kTagBytes = 16;
constexpr std::size_t kSignatureBytes = 64;
constexpr std::size_t kWrappedBytes = kKeyBytes + kNonceBytes + kKeyBytes + kTagBytes;

[[noreturn]] void Fail(const char* what) { throw Error(ErrorCode::kInternal, what); }

Pkey Generate(int type) {
  PkeyCtx ctx(EVP_PKEY_CTX_new_id(type, nullptr));
  EVP_PKEY* raw = nullptr;
  if (!ctx || EVP_PKEY_keygen_init(ctx.get()) != 1 ||
      EVP_PKEY_keygen(ctx.get(), &raw) != 1) {
    throw Error(ErrorCode::kEntropyUnavailable, "key generation failed");
  }
  return Pkey(raw);
}

Bytes RawPublic(EVP_PKEY* key) {
  Bytes out(kKeyBytes);
  std::size_t len = out.size();
  if (EVP_PKEY_get_raw_public_key(key, out.data(), &len) != 1 || len != kKeyBytes) {
    Fail("raw public key");
  }
  return out;
}

SecretBytes RawPrivate(EVP_PKEY* key) {
  Bytes out(kKeyBytes);
  std::size_t len = out.size();
  if (EVP_PKEY_get_raw_private_key(key, out.data(), &len) != 1 || len != kKeyBytes) {
    Fail("raw private key");
  }
  return SecretBytes(std::move(out));
}

std::string Fingerprint(ByteView public_key) {
  unsigned char md[32];
  unsigned int len = 0;
  EVP_Digest(public_key.data(), public_key.size(), md, &len, EVP_sha256(), nullptr);
  return HexEncode(ByteView(md, 8));
}

std::string MakeKeyId(std::string_view scope, std::string_view kind, ByteView pub) {
  return std::string(scope) + "/" + std::string(kind) + "/" + Fingerprint(pub);
}

Bytes X25519Shared(ByteView private_key, ByteView peer_public) {
  Pkey priv(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr,
                                         private_key.data(), private_key.size()));
  Pkey peer(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr,
                                        peer_public.data(), peer_public.size()));
  if (!priv || !peer) return {};
  PkeyCtx ctx(EVP_PKEY_CTX_new(priv.get(), nullptr));
  std::size_t len = kKeyBytes;
  Bytes secret(kKeyBytes);
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1 ||
      EVP_PKEY_derive(ctx.get(), secret.data(), &len) != 1 || len != kKeyBytes) {
    return {};
  }
  return secret;
}

// 64 bytes: key-encryption key followed by the outer MAC key.
SecretBytes DeriveKemKeys(ByteView shared, ByteView eph_pub, ByteView recipient_pub) {
  Bytes salt(eph_pub.begin(), eph_pub.end());
  salt.insert(salt.end(), recipient_pub.begin(), recipient_pub.end());
  static constexpr std::string_view kInfo = "PHT-KEM-v1";
  PkeyCtx ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
  Bytes out(64);
  std::size_t len = out.size();
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()) != 1 ||
      EVP_PKEY_CTX_set1_hkdf_salt(ctx.get(), salt.data(), static_cast<int>(salt.size())) != 1 ||
      EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), shared.data(), static_cast<int>(shared.size())) != 1 ||
      EVP_PKEY_CTX_add1_hkdf_info(ctx.get(), reinterpret_cast<const unsigned char*>(kInfo.data()),
                                  static_cast<int>(kInfo.size())) != 1 ||
      EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1) {
    Fail("HKDF");
  }
  return SecretBytes(std::move(out));
}

// nonce | ciphertext | tag
Bytes GcmEncrypt(ByteView key, ByteView plaintext) {
  Bytes out = RandomBytes(kNonceBytes);
  out.resize(kNonceBytes + plaintext.size() + kTagBytes);
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), out.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data() + kNonceBytes, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), out.data() + kNonceBytes + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagBytes,
                          out.data() + kNonceBytes + plaintext.size()) != 1) {
    Fail("AES-GCM encrypt");
  }
  return out;
}

std::optional<SecretBytes> GcmDecrypt(ByteView key, ByteView sealed) {
  if (sealed.size() < kNonceBytes + kTagBytes) return std::nullopt;
  std::size_t n = sealed.size() - kNonceBytes - kTagBytes;
  Bytes out(n);
  Bytes tag(sealed.end() - kTagBytes, sealed.end());
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  if (!ctx ||
      EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), sealed.data()) != 1 ||
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data() + kNonceBytes,
                        static_cast<int>(n)) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagBytes, tag.data()) != 1 ||
      EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) {
    Cleanse(out);
    return std::nullopt;
  }
  return SecretBytes(std::move(out));
}

Bytes OuterMacInput(const SealedPackage& pkg) {
  Bytes header;
  for (std::string_view field :
       {std::string_view(pkg.sender_station_id), std::string_view(pkg.run_id),
        std::string_view(pkg.encryption_key_id), std::string_view(pkg.signing_key_id),
        kKemAlgorithm, kWrapAlgorithm, kContentAlgorithm, kOuterMacAlgorithm,
        kSignatureAlgorithm}) {
    AppendU32BigEndian(header, static_cast<std::uint32_t>(field.size()));
    header.insert(header.end(), field.begin(), field.end());
  }
  Bytes in;
  in.reserve(32 + header.size() + pkg.wrapped_content_key.size() + pkg.ciphertext.size());
  static constexpr std::string_view kLabel = "PHT-OUTER-v1";
  in.insert(in.end(), kLabel.begin(), kLabel.end());
  AppendU32BigEndian(in, static_cast<std::uint32_t>(header.size()));
  in.insert(in.end(), header.begin(), header.end());
  AppendU32BigEndian(in, static_cast<std::uint32_t>(pkg.wrapped_content_key.size()));
  in.insert(in.end(), pkg.wrapped_content_key.begin(), pkg.wrapped_content_key.end());
  AppendU64BigEndian(in, pkg.ciphertext.size());
  in.insert(in.end(), pkg.ciphertext.begin(), pkg.ciphertext.end());
  return in;
}

Bytes HmacSha256(ByteView key, ByteView data) {
  Bytes out(32);
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
           data.size(), out.data(), &len) == nullptr) {
    Fail("HMAC");
  }
  return out;
}

Bytes InnerSignatureMessage(std::string_view run_id, std::string_view sender,
                            ByteView data) {
  Bytes msg;
  msg.reserve(16 + run_id.size() + sender.size() + data.size());
  static constexpr std::string_view kLabel = "PHT-INNER|";
  msg.insert(msg.end(), kLabel.begin(), kLabel.end());
  msg.insert(msg.end(), run_id.begin(), run_id.end());
  msg.push_back('|');
  msg.insert(msg.end(), sender.begin(), sender.end());
  msg.push_back('|');
  msg.insert(msg.end(), data.begin(), data.end());
  return msg;
}

// Encrypts `inner` for `recipient` and fills every package field but the
// header strings, which the caller sets first.
void SealInto(SealedPackage& pkg, ByteView inner, const PublicKey& recipient) {
  if (recipient.bytes.size() != kKeyBytes) {
    throw Error(ErrorCode::kInvalidSpec, "recipient key must be 32 bytes");
  }
  Pkey eph = Generate(EVP_PKEY_X25519);
  Bytes eph_pub = RawPublic(eph.get());
  SecretBytes eph_priv = RawPrivate(eph.get());
  Bytes shared = X25519Shared(eph_priv.view(), recipient.bytes);
  if (shared.empty()) throw Error(ErrorCode::kInvalidSpec, "bad recipient key");
  SecretBytes kem = DeriveKemKeys(shared, eph_pub, recipient.bytes);
  Cleanse(shared);

  SecretBytes content_key(RandomBytes(kKeyBytes));
  pkg.ciphertext = GcmEncrypt(content_key.view(), inner);
  pkg.wrapped_content_key = eph_pub;
  Bytes wrapped = GcmEncrypt(kem.view().first(kKeyBytes), content_key.view());
  pkg.wrapped_content_key.insert(pkg.wrapped_content_key.end(), wrapped.begin(), wrapped.end());
  pkg.outer_auth_tag = HmacSha256(kem.view().subspan(kKeyBytes), OuterMacInput(pkg));
}

std::optional<SecretBytes> KemKeysFor(const SealedPackage& pkg, const KeyPair& recipient) {
  if (pkg.wrapped_content_key.size() != kWrappedBytes ||
      recipient.private_decryption_key.size() != kKeyBytes) {
    return std::nullopt;
  }
  ByteView eph_pub(pkg.wrapped_content_key.data(), kKeyBytes);
  Bytes shared = X25519Shared(recipient.private_decryption_key.view(), eph_pub);
  if (shared.empty()) return std::nullopt;
  SecretBytes kem = DeriveKemKeys(shared, eph_pub, recipient.public_encryption_key);
  Cleanse(shared);
  return kem;
}

void CheckScope(std::string_view key_id, std::string_view run_id, const char* which) {
  if (KeyScope(key_id) != run_id) {
    throw Error(ErrorCode::kRunMismatch, std::string(which) + " key " +
                                             std::string(key_id) + " is not for run " +
                                             std::string(run_id));
  }
}

}  // namespace

std::string KeyScope(std::string_view key_id) {
  std::size_t last = key_id.rfind('/');
  if (last == std::string_view::npos || last == 0) return {};
  std::size_t prev = key_id.rfind('/', last - 1);
  if (prev == std::string_view::npos) return {};
  return std::string(key_id.substr(0, prev));
}

KeyPair GenerateEncryptionKeyPair(std::string_view run_id) {
  if (run_id.empty()) throw Error(ErrorCode::kInvalidSpec, "key needs a run_id");
  Pkey key = Generate(EVP_PKEY_X25519);
  KeyPair kp;
  kp.public_encryption_key = RawPublic(key.get());
  kp.private_decryption_key = RawPrivate(key.get());
  kp.key_id = MakeKeyId(run_id, "enc", kp.public_encryption_key);
  return kp;
}

namespace {
SigningKeys GenerateSigning(std::string_view scope) {
  Pkey key = Generate(EVP_PKEY_ED25519);
  SigningKeys sk;
  sk.verification_key = RawPublic(key.get());
  sk.signing_key = RawPrivate(key.get());
  sk.key_id = MakeKeyId(scope, "sig", sk.verification_key);
  return sk;
}
}  // namespace

SigningKeys GenerateSigningKeys(std::string_view run_id) {
  if (run_id.empty()) throw Error(ErrorCode::kInvalidSpec, "key needs a run_id");
  return GenerateSigning(run_id);
}

SigningKeys GenerateTrustAnchor() { return GenerateSigning("anchor"); }

Bytes Sign(const SigningKeys& keys, ByteView message) {
  Pkey key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                        keys.signing_key.data(), keys.signing_key.size()));
  MdCtx ctx(EVP_MD_CTX_new());
  Bytes sig(kSignatureBytes);
  std::size_t len = sig.size();
  if (!key || !ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1 ||
      EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1) {
    Fail("Ed25519 sign");
  }
  return sig;
}

bool Verify(const VerificationKey& key, ByteView message, ByteView signature) {
  if (signature.size() != kSignatureBytes) return false;
  Pkey pk(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, key.bytes.data(),
                                      key.bytes.size()));
  MdCtx ctx(EVP_MD_CTX_new());
  if (!pk || !ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pk.get()) != 1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(),
                          message.size()) == 1;
}

json PublicKeyJson(const PublicKey& key) {
  return {{"key_id", key.key_id}, {"x25519", Base64Encode(key.bytes)}};
}

PublicKey ParsePublicKey(const json& j) {
  return {j.at("key_id").get<std::string>(),
          Base64Decode(j.at("x25519").get<std::string>())};
}

json VerificationKeyJson(const VerificationKey& key) {
  return {{"key_id", key.key_id}, {"ed25519", Base64Encode(key.bytes)}};
}

VerificationKey ParseVerificationKey(const json& j) {
  return {j.at("key_id").get<std::string>(),
          Base64Decode(j.at("ed25519").get<std::string>())};
}

json PackageHeaderJson(const SealedPackage& pkg) {
  return {{"sender_station_id", pkg.sender_station_id},
          {"run_id", pkg.run_id},
          {"key_ids", {{"encryption", pkg.encryption_key_id}, {"signing", pkg.signing_key_id}}},
          {"algorithms",
           {{"kem", kKemAlgorithm},
            {"wrap", kWrapAlgorithm},
            {"content", kContentAlgorithm},
            {"outer_mac", kOuterMacAlgorithm},
            {"signature", kSignatureAlgorithm}}}};
}

SealedPackage Seal(ByteView plaintext, std::string_view run_id, std::string_view sender_id,
                   const PublicKey& recipient, const SigningKeys& signer) {
  CheckScope(recipient.key_id, run_id, "encryption");
  CheckScope(signer.key_id, run_id, "signing");

  Bytes sig = Sign(signer, InnerSignatureMessage(run_id, sender_id, plaintext));
  Bytes inner;
  inner.reserve(8 + plaintext.size() + sig.size());
  AppendU64BigEndian(inner, plaintext.size());
  inner.insert(inner.end(), plaintext.begin(), plaintext.end());
  inner.insert(inner.end(), sig.begin(), sig.end());

  SealedPackage pkg;
  pkg.sender_station_id = std::string(sender_id);
  pkg.run_id = std::string(run_id);
  pkg.encryption_key_id = recipient.key_id;
  pkg.signing_key_id = signer.key_id;
  SealInto(pkg, inner, recipient);
  Cleanse(inner);
  return pkg;
}

SecretBytes Open(const SealedPackage& pkg, const KeyPair& recipient,
                 const VerificationKey& sender_verification,
                 const std::optional<OpenContext>& expected) {
  // Phase 1: outer integrity.
  std::optional<SecretBytes> kem = KemKeysFor(pkg, recipient);
  if (!kem) {
    throw Error(ErrorCode::kOuterIntegrityFailure,
                "package from " + pkg.sender_station_id + " not addressed to this key");
  }
  Bytes tag = HmacSha256(kem->view().subspan(kKeyBytes), OuterMacInput(pkg));
  if (!ConstantTimeEqual(tag, pkg.outer_auth_tag)) {
    throw Error(ErrorCode::kOuterIntegrityFailure,
                "outer tag mismatch for package from " + pkg.sender_station_id);
  }

  // Phase 2: unwrap the content key and decrypt.
  ByteView wrapped = ByteView(pkg.wrapped_content_key).subspan(kKeyBytes);
  std::optional<SecretBytes> content_key = GcmDecrypt(kem->view().first(kKeyBytes), wrapped);
  if (!content_key || content_key->size() != kKeyBytes) {
    throw Error(ErrorCode::kDecryptionFailure, "content key unwrap failed");
  }
  std::optional<SecretBytes> inner = GcmDecrypt(content_key->view(), pkg.ciphertext);
  if (!inner) throw Error(ErrorCode::kDecryptionFailure, "content decryption failed");
  if (inner->size() < 8 + kSignatureBytes ||
      ReadU64BigEndian(inner->data()) != inner->size() - 8 - kSignatureBytes) {
    throw Error(ErrorCode::kDecryptionFailure, "inner framing invalid");
  }

  // Phase 3: inner signature over data, run and sender.
  std::size_t n = inner->size() - 8 - kSignatureBytes;
  ByteView data = inner->view().subspan(8, n);
  ByteView sig = inner->view().subspan(8 + n);
  OpenContext ctx = expected.value_or(OpenContext{pkg.run_id, pkg.sender_station_id});
  Bytes msg = InnerSignatureMessage(ctx.run_id, ctx.sender_station_id, data);
  bool ok = Verify(sender_verification, msg, sig);
  Cleanse(msg);
  if (!ok) {
    throw Error(ErrorCode::kInnerSignatureFailure,
                "signature does not bind data to run " + ctx.run_id + " and sender " +
                    ctx.sender_station_id);
  }
  return SecretBytes(Bytes(data.begin(), data.end()));
}

std::string EncodePackage(const SealedPackage& pkg) {
  std::string out = CanonicalJson(PackageHeaderJson(pkg));
  out += '\n';
  out += Base64Encode(pkg.wrapped_content_key);
  out += '\n';
  out += Base64Encode(pkg.ciphertext);
  out += '\n';
  out += Base64Encode(pkg.outer_auth_tag);
  return out;
}

SealedPackage DecodePackage(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (;;) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.size() != 4) throw DecodeError(text.size(), "sealed package needs 4 lines");
  json header;
  try {
    header = json::parse(lines[0]);
  } catch (const json::exception& e) {
    throw DecodeError(0, std::string("package header: ") + e.what());
  }
  SealedPackage pkg;
  try {
    pkg.sender_station_id = header.at("sender_station_id").get<std::string>();
    pkg.run_id = header.at("run_id").get<std::string>();
    pkg.encryption_key_id = header.at("key_ids").at("encryption").get<std::string>();
    pkg.signing_key_id = header.at("key_ids").at("signing").get<std::string>();
  } catch (const json::exception& e) {
    throw DecodeError(0, std::string("package header: ") + e.what());
  }
  if (header != PackageHeaderJson(pkg)) {
    throw DecodeError(0, "unsupported package algorithms or extra header fields");
  }
  pkg.wrapped_content_key = Base64Decode(lines[1]);
  pkg.ciphertext = Base64Decode(lines[2]);
  pkg.outer_auth_tag = Base64Decode(lines[3]);
  return pkg;
}

namespace detail {

void ResealOuterTag(SealedPackage& pkg, const KeyPair& recipient) {
  std::optional<SecretBytes> kem = KemKeysFor(pkg, recipient);
  if (!kem) Fail("reseal: wrong key");
  pkg.outer_auth_tag = HmacSha256(kem->view().subspan(kKeyBytes), OuterMacInput(pkg));
}

SealedPackage SealUnsigned(ByteView inner, std::string_view run_id, std::string_view sender_id,
                           const PublicKey& recipient, std::string_view signing_key_id) {
  SealedPackage pkg;
  pkg.sender_station_id = std::string(sender_id);
  pkg.run_id = std::string(run_id);
  pkg.encryption_key_id = recipient.key_id;
  pkg.signing_key_id = std::string(signing_key_id);
  SealInto(pkg, inner, recipient);
  return pkg;
}

}  // namespace detail

void WriteKeyFile(const fs::path& path, const KeyFile& key, bool private_material,
                  bool force) {
  if (fs::exists(path) && !force) {
    throw Error(ErrorCode::kIoError, path.string() + " exists (use --force)");
  }
  json j = {{"key_id", key.key_id}, {"kind", key.kind}, {"material", Base64Encode(key.material)}};
  std::string text = CanonicalJson(j) + "\n";
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    if (private_material) {
      fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write,
                      fs::perm_options::replace);
    }
    out << text;
    if (!out) throw Error(ErrorCode::kIoError, "write failed " + path.string());
  }
  Cleanse(text);
}

KeyFile ReadKeyFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  try {
    json j = json::parse(in);
    return {j.at("kind").get<std::string>(), j.at("key_id").get<std::string>(),
            Base64Decode(j.at("material").get<std::string>())};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadConfig, path.string() + ": " + e.what());
  } catch (const DecodeError& e) {
    throw Error(ErrorCode::kBadConfig, path.string() + ": " + e.what());
  }
}

namespace {
KeyFile ReadKind(const fs::path& path, std::string_view kind) {
  KeyFile f = ReadKeyFile(path);
  if (f.kind != kind || f.material.size() != kKeyBytes) {
    throw Error(ErrorCode::kBadConfig, path.string() + " is not a " + std::string(kind) + " key");
  }
  return f;
}
}  // namespace

PublicKey LoadPublicKey(const fs::path& path) {
  KeyFile f = ReadKind(path, kKindEncryptionPublic);
  return {f.key_id, f.material};
}

VerificationKey LoadVerificationKey(const fs::path& path) {
  KeyFile f = ReadKind(path, kKindVerification);
  return {f.key_id, f.material};
}

KeyPair LoadKeyPair(const fs::path& public_path, const fs::path& private_path) {
  KeyFile pub = ReadKind(public_path, kKindEncryptionPublic);
  KeyFile priv = ReadKind(private_path, kKindEncryptionPrivate);
  if (pub.key_id != priv.key_id) throw Error(ErrorCode::kBadConfig, "encryption key ids differ");
  return {pub.key_id, pub.material, SecretBytes(std::move(priv.material))};
}

SigningKeys LoadSigningKeys(const fs::path& private_path, const fs::path& verification_path) {
  KeyFile priv = ReadKind(private_path, kKindSigningPrivate);
  KeyFile pub = ReadKind(verification_path, kKindVerification);
  if (pub.key_id != priv.key_id) throw Error(ErrorCode::kBadConfig, "signing key ids differ");
  return {pub.key_id, SecretBytes(std::move(priv.material)), pub.material};
}

}  // namespace pht
