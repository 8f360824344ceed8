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

#include "dgs/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dgs/types.hpp"

namespace dgs {
namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kNewtonTolerance = 1e-15;

struct HermiteValues {
  double value;       // normalized H_n(z)
  double derivative;  // d/dz of the normalized H_n(z)
};

// Orthonormal recurrence: p_j = z sqrt(2/j) p_{j-1} - sqrt((j-1)/j) p_{j-2},
// p_0 = pi^{-1/4}. Stays in range for every order up to the cap.
HermiteValues evaluate_normalized(int n, double z) {
  const double pim4 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  double p1 = pim4;
  double p2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
  }
  return {p1, std::sqrt(2.0 * n) * p2};
}

double newton_root(int n, double z) {
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const auto h = evaluate_normalized(n, z);
    const double step = h.value / h.derivative;
    z -= step;
    if (std::abs(step) <= kNewtonTolerance * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace

GHRule build_gh_rule(int order) {
  if (order < 1 || order > kMaxGaussHermiteOrder) {
    throw InvalidArgument("Gauss-Hermite order must lie in [1, " +
                          std::to_string(kMaxGaussHermiteOrder) + "], got " +
                          std::to_string(order));
  }
  const int n = order;
  const int half = (n + 1) / 2;

  GHRule rule;
  rule.order = n;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  // Positive roots, largest first, with the classical asymptotic guesses.
  std::vector<double> roots(half, 0.0);
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * roots[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * roots[1];
    } else {
      z = 2.0 * z - roots[i - 2];
    }
    z = newton_root(n, z);
    roots[i] = z;
  }
  if (n % 2 == 1) roots[half - 1] = 0.0;

  for (int i = 0; i < half; ++i) {
    const double root = roots[i];
    const double d = evaluate_normalized(n, root).derivative;
    // For n odd the recurrence at z = 0 gives the exact middle weight.
    const double w = 2.0 / (d * d);
    rule.nodes[i] = -root;
    rule.nodes[n - 1 - i] = root;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[half - 1] = 0.0;  // avoid a stored -0.0
  return rule;
}

}  // namespace dgs
