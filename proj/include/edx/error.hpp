// Copyright 2026 The EDX Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDX_ERROR_HPP
#define EDX_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace edx {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kIo,
  kFormatMismatch,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kFormatMismatch: return "format_mismatch";
  }
  return "internal";
}

// All library failures are reported through this exception type. The code
// lets callers (CLI exit status, HTTP status) classify the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string &message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

[[noreturn]] inline void throw_not_found(const std::string &message) {
  throw Error(ErrorCode::kNotFound, message);
}

[[noreturn]] inline void throw_io(const std::string &message) {
  throw Error(ErrorCode::kIo, message);
}

}  // namespace edx

#endif  // EDX_ERROR_HPP
