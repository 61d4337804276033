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

#include "aps/nmse.hpp"

#include "aps/error.hpp"

namespace aps
{

double nmse(const Eigen::VectorXd & estimate, const Eigen::VectorXd & truth)
{
  require(estimate.size() == truth.size(), ErrorKind::DimensionMismatch,
    "estimate and truth differ in length");
  const double denom = truth.squaredNorm();
  require(denom > 0.0, ErrorKind::ZeroTruth, "NMSE undefined for a zero truth vector");
  return (estimate - truth).squaredNorm() / denom;
}

}  // namespace aps
