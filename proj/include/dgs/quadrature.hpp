// Copyright (c) 2026 The dgs-opt Authors. All Rights Reserved.
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

#ifndef DGS_QUADRATURE_HPP_
#define DGS_QUADRATURE_HPP_

#include <vector>

namespace dgs {

/// Largest supported Gauss-Hermite order. Beyond this the outermost
/// weights fall under ~1e-60 and contribute nothing in double precision.
inline constexpr int kMaxGaussHermiteOrder = 64;

/// Gauss-Hermite rule for the physicists' weight exp(-v^2).
///
/// Nodes are the roots of H_M sorted ascending; nodes and weights are stored
/// exactly mirror-symmetric (the middle node of an odd rule is exactly 0).
/// The rule integrates v^k exp(-v^2) exactly for k <= 2M-1.
struct GHRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  bool operator==(const GHRule&) const = default;
};

/// Builds the M-point rule by Newton iteration on the normalized Hermite
/// three-term recurrence. Deterministic: the same order always yields a
/// bit-identical rule.
///
/// Throws InvalidArgument when order is outside [1, kMaxGaussHermiteOrder].
GHRule build_gh_rule(int order);

}  // namespace dgs

#endif  // DGS_QUADRATURE_HPP_
