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

#ifndef PHT_PSEUDONYM_H_
#define PHT_PSEUDONYM_H_

#include <cstddef>
#include <string>
#include <string_view>

#include "pht/bytes.h"
#include "pht/core_model.h"

namespace pht {

inline constexpr std::size_t kSaltBytes = 32;
inline constexpr std::size_t kDigestHexChars = 128;

// Secret shared by the data stations of one run and never by the TSE.
struct Salt {
  SecretBytes bytes;
  std::string run_id;
};

// 32 bytes from the CSPRNG. Throws EntropyUnavailable, or InvalidSpec on an
// empty run_id.
Salt GenerateSalt(std::string_view run_id);

// composite    = SHA-512("PHT-COMPOSITE|" zip "|" house "|" gender "|" dob "|" salt)
// per_field[i] = SHA-512("PHT-FIELD-<i>|" value_i "|" salt), i = 0..3 in the
//                order zip, house, gender, dob
// Digests are lowercase hex. `qid` must be canonical.
PseudonymVector Pseudonymize(const QuasiIdentifierSet& qid, const Salt& salt);

// Exposed so tests can check the exact preimage layout.
Bytes CompositePreimage(const QuasiIdentifierSet& qid, ByteView salt);
Bytes FieldPreimage(std::size_t field, std::string_view value, ByteView salt);

Bytes Sha512(ByteView data);

}  // namespace pht

#endif  // PHT_PSEUDONYM_H_
