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

#include "pht/error.h"

#include <utility>

namespace pht {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedField: return "MalformedField";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kEntropyUnavailable: return "EntropyUnavailable";
    case ErrorCode::kRunMismatch: return "RunMismatch";
    case ErrorCode::kOuterIntegrityFailure: return "OuterIntegrityFailure";
    case ErrorCode::kDecryptionFailure: return "DecryptionFailure";
    case ErrorCode::kInnerSignatureFailure: return "InnerSignatureFailure";
    case ErrorCode::kMissingPseudonyms: return "MissingPseudonyms";
    case ErrorCode::kDegenerateParams: return "DegenerateParams";
    case ErrorCode::kSchemaCollision: return "SchemaCollision";
    case ErrorCode::kUnknownVariable: return "UnknownVariable";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kInvalidAnalysis: return "InvalidAnalysis";
    case ErrorCode::kBadSignature: return "BadSignature";
    case ErrorCode::kExpired: return "Expired";
    case ErrorCode::kUnauthorizedVariable: return "UnauthorizedVariable";
    case ErrorCode::kNotAddressed: return "NotAddressed";
    case ErrorCode::kDuplicateRun: return "DuplicateRun";
    case ErrorCode::kOutOfOrder: return "OutOfOrder";
    case ErrorCode::kReplay: return "Replay";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kBindError: return "BindError";
    case ErrorCode::kRunClosed: return "RunClosed";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Internal";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) +
                         (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(std::move(detail)) {}

MalformedField::MalformedField(std::string field, std::string raw)
    : Error(ErrorCode::kMalformedField, field + " '" + raw + "'"),
      field_(std::move(field)),
      raw_(std::move(raw)) {}

DecodeError::DecodeError(std::size_t offset, std::string cause)
    : Error(ErrorCode::kDecodeError,
            "at offset " + std::to_string(offset) + ": " + cause),
      offset_(offset) {}

}  // namespace pht
