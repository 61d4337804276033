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

#ifndef APS__NMSE_HPP_
#define APS__NMSE_HPP_

#include <Eigen/Dense>

namespace aps
{

/// ||estimate - truth||^2 / ||truth||^2. Throws ZeroTruth for a zero truth vector and
/// DimensionMismatch for vectors of different length.
double nmse(const Eigen::VectorXd & estimate, const Eigen::VectorXd & truth);

}  // namespace aps

#endif  // APS__NMSE_HPP_
