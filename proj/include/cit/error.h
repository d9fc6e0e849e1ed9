// Copyright 2026 The cit Authors
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

#ifndef CIT_ERROR_H_
#define CIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace cit {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kBudgetExhausted = 4,
  kInsufficientSamples = 5,
  kUnnormalized = 6,
  kInternal = 7,
};

// All failures in the library are reported as cit::Error; the C API maps the
// code onto cit_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// The message is only materialized on failure.
inline void Require(bool condition, const char* what) {
  if (!condition) Fail(ErrorCode::kInvalidArgument, what);
}

inline void Require(bool condition, const std::string& what) {
  if (!condition) Fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace cit

#endif  // CIT_ERROR_H_
