// Copyright 2026 The aps Authors
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

#ifndef APS__ERROR_HPP_
#define APS__ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace aps
{

enum class ErrorKind
{
  InvalidArgument,
  InvalidBounds,
  DimensionMismatch,
  InsufficientSamples,
  FactorizationFailure,
  IterationLimit,
  Infeasible,
  ZeroTruth,
  Io,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `kind()` identifies the contract that was violated.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & message);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string & message);

inline void require(bool condition, ErrorKind kind, const char * message)
{
  if (!condition) {
    fail(kind, message);
  }
}

}  // namespace aps

#endif  // APS__ERROR_HPP_
