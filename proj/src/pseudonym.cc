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

#include "pht/pseudonym.h"

#include <openssl/evp.h>

#include "pht/error.h"

namespace pht {

Salt GenerateSalt(std::string_view run_id) {
  if (run_id.empty()) throw Error(ErrorCode::kInvalidSpec, "salt needs a run_id");
  return Salt{SecretBytes(RandomBytes(kSaltBytes)), std::string(run_id)};
}

Bytes Sha512(ByteView data) {
  Bytes out(64);
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha512(),
                 nullptr) != 1 ||
      len != 64) {
    throw Error(ErrorCode::kInternal, "SHA-512 failed");
  }
  return out;
}

namespace {
void Append(Bytes& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }
}  // namespace

Bytes CompositePreimage(const QuasiIdentifierSet& qid, ByteView salt) {
  Bytes pre;
  pre.reserve(64 + salt.size());
  Append(pre, "PHT-COMPOSITE|");
  for (std::size_t i = 0; i < 4; ++i) {
    Append(pre, LinkageFieldValue(qid, i));
    Append(pre, "|");
  }
  pre.insert(pre.end(), salt.begin(), salt.end());
  return pre;
}

Bytes FieldPreimage(std::size_t field, std::string_view value, ByteView salt) {
  Bytes pre;
  Append(pre, "PHT-FIELD-");
  Append(pre, std::to_string(field));
  Append(pre, "|");
  Append(pre, value);
  Append(pre, "|");
  pre.insert(pre.end(), salt.begin(), salt.end());
  return pre;
}

PseudonymVector Pseudonymize(const QuasiIdentifierSet& qid, const Salt& salt) {
  PseudonymVector pv;
  Bytes pre = CompositePreimage(qid, salt.bytes.view());
  pv.composite = HexEncode(Sha512(pre));
  Cleanse(pre);
  for (std::size_t i = 0; i < 4; ++i) {
    Bytes fp = FieldPreimage(i, LinkageFieldValue(qid, i), salt.bytes.view());
    pv.per_field[i] = HexEncode(Sha512(fp));
    Cleanse(fp);
  }
  return pv;
}

}  // namespace pht
