// Copyright 2026 The evlab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace evlab {

// Status codes shared with the C API. The CLI maps them onto process exit
// codes (0 pass, 1 verification failure, 2 usage/format, 3 blow-up,
// 4 incomparable selection).
enum class ErrorCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kConfig = 3,
  kFormat = 4,
  kBlowUp = 5,
  kIncomparable = 6,
  kPrecondition = 7,
  kIntegrity = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ErrorCode::kUsage, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::kConfig, w) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& w) : Error(ErrorCode::kFormat, w) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w)
      : Error(ErrorCode::kPrecondition, w) {}
};
struct IntegrityError : Error {
  explicit IntegrityError(const std::string& w)
      : Error(ErrorCode::kIntegrity, w) {}
};

// Raised when a non-finite coefficient appears during time integration.
class BlowUpError : public Error {
 public:
  explicit BlowUpError(double time)
      : Error(ErrorCode::kBlowUp,
              "non-finite state at t=" + std::to_string(time)),
        time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace evlab
