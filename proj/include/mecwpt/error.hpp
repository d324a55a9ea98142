// Copyright 2026 The mecwpt Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace mecwpt {

// Error categories shared by the C++ core and the C API (see mecwpt.h).
enum class ErrorCode : int {
  kOk = 0,
  kParse = 1,
  kValidation = 2,
  kDomain = 3,
  kInfeasible = 4,
  kNotConverged = 5,
  kChargingDisabled = 6,
  kLpInfeasible = 7,
  kLpUnbounded = 8,
  kIo = 9,
  kInvalidArgument = 10,
  kInternal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::kValidation, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kDomain, what) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ErrorCode::kInfeasible, what) {}
};

class ChargingDisabled : public Error {
 public:
  explicit ChargingDisabled(const std::string& what)
      : Error(ErrorCode::kChargingDisabled, what) {}
};

}  // namespace mecwpt
