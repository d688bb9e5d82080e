// Copyright 2026 The MFT Tracker Authors.
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

#ifndef MFT_ERRORS_H_
#define MFT_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mft {

enum class ErrorCode {
  kInvalidArgument,
  kBadMagic,
  kTruncated,
  kBadDimensions,
  kKindMismatch,
  kIo,
  kMissingPair,
  kParse,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries a code so callers (the CLI in
// particular) can separate usage errors from data errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void ThrowInvalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

}  // namespace mft

#endif  // MFT_ERRORS_H_
