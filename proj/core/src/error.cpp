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

#include "aps/error.hpp"

namespace aps
{

std::string_view to_string(ErrorKind kind) noexcept
{
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::InvalidBounds: return "invalid bounds";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::InsufficientSamples: return "insufficient samples";
    case ErrorKind::FactorizationFailure: return "factorization failure";
    case ErrorKind::IterationLimit: return "iteration limit";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::ZeroTruth: return "zero truth";
    case ErrorKind::Io: return "i/o";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string & message)
: std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

void fail(ErrorKind kind, const std::string & message) { throw Error(kind, message); }

}  // namespace aps
