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

#ifndef PHT_ERROR_H_
#define PHT_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pht {

// Every failure the library reports carries one of these codes. The code name
// (see ErrorCodeName) is the machine-readable token used in Abort reasons,
// audit events and CLI exit lines.
enum class ErrorCode {
  kMalformedField,
  kInvalidSpec,
  kEntropyUnavailable,
  kRunMismatch,
  kOuterIntegrityFailure,
  kDecryptionFailure,
  kInnerSignatureFailure,
  kMissingPseudonyms,
  kDegenerateParams,
  kSchemaCollision,
  kUnknownVariable,
  kTypeMismatch,
  kInvalidAnalysis,
  kBadSignature,
  kExpired,
  kUnauthorizedVariable,
  kNotAddressed,
  kDuplicateRun,
  kOutOfOrder,
  kReplay,
  kTimeout,
  kDecodeError,
  kTransportError,
  kNotFound,
  kIoError,
  kBadConfig,
  kBindError,
  kRunClosed,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Raised when a single quasi-identifier field cannot be canonicalized.
class MalformedField : public Error {
 public:
  MalformedField(std::string field, std::string raw);

  const std::string& field() const { return field_; }
  const std::string& raw() const { return raw_; }

 private:
  std::string field_;
  std::string raw_;
};

// Raised by the wire codec. `offset` is the byte position in the frame where
// decoding stopped.
class DecodeError : public Error {
 public:
  DecodeError(std::size_t offset, std::string cause);

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace pht

#endif  // PHT_ERROR_H_
