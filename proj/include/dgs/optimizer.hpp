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

#ifndef DGS_OPTIMIZER_HPP_
#define DGS_OPTIMIZER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dgs/quadrature.hpp"
#include "dgs/smoothing.hpp"
#include "dgs/types.hpp"

namespace dgs {

/// Constants of the exponentially shrinking radius that yields exact
/// convergence under quadratically diminishing noise.
struct Theorem3Parameters {
  double beta = 1.0;      // noise envelope curvature
  double L = 1.0;         // gradient Lipschitz constant of phi
  double tau = 1.0;       // strong convexity of phi
  double r0_bound = 1.0;  // any upper bound on ||x_0 - x*||
  int dimension = 1;
};

/// Per-iteration rate rho = (1 - tau/(32L)) + (6/(tau L) + 3/(8 L^2)) d beta
/// sqrt(2 L^2 pi + beta^2) / pi.
double theorem3_rate(const Theorem3Parameters& p);

struct SigmaSchedule {
  enum class Kind { kConstant, kTwoPhase, kTheorem3 };

  Kind kind = Kind::kConstant;
  double base_sigma = 1.0;
  int switch_iteration = 5000;
  double contraction = 0.999;
  Theorem3Parameters theorem3;

  static SigmaSchedule constant(double sigma);
  static SigmaSchedule two_phase(double base_sigma, int switch_iteration, double contraction);
  /// base_sigma multiplies the rate-driven radius (1 = unscaled).
  /// Throws InvalidArgument when the rate is not below 1, since the radius
  /// would then grow without bound.
  static SigmaSchedule theorem3_schedule(const Theorem3Parameters& p, double multiplier = 1.0);
};

/// constant: sigma_0. two-phase: sigma_0 for t < switch, then
/// sigma_0 * contraction^(t - switch). theorem3: multiplier *
/// sqrt(beta) / (8 L^2 pi + 4 beta^2)^(1/4) * rho^(t/2) * r0_bound.
double sigma_at(const SigmaSchedule& schedule, long long t);

/// x - lambda * dgs_gradient(f, x, config). No projection.
Vector gd_step(const Vector& x, const Objective& f, const DGSConfig& config, double lambda);

struct InitialBox {
  double lower = -1.0;
  double upper = 1.0;
};

struct RunConfig {
  Objective objective;
  GHRule rule;
  /// Fixed basis; when empty and random_basis is set, one is drawn from the
  /// run seed. Identity otherwise.
  std::optional<DirectionBasis> basis;
  bool random_basis = false;
  double step_size = 1e-3;
  long long max_iterations = 1000;
  SigmaSchedule schedule;
  std::uint64_t seed = 0;
  std::variant<Vector, InitialBox> initial_point = InitialBox{};
};

struct IterationRecord {
  Vector x;
  double distance = 0.0;   // NaN when the minimizer is unknown
  double objective = 0.0;  // F(x_t)
  double cosine = 0.0;     // cos(estimate, grad phi); NaN if unavailable
  double sigma = 0.0;      // radius used at this iterate
};

enum class RunStatus { kCompleted, kSigmaUnderflow, kDiverged };

std::string to_string(RunStatus status);

struct TrialRecord {
  std::vector<IterationRecord> iterations;
  long long steps = 0;             // gradient steps taken
  long long evaluations = 0;       // estimator evaluations: steps * M * d
  RunStatus status = RunStatus::kCompleted;
  std::string message;             // set for kDiverged
};

/// Radius below which a run stops with kSigmaUnderflow.
inline constexpr double kSigmaFloor = 1e-14;
/// Iterates beyond this norm abort the run as diverged.
inline constexpr double kDivergenceNorm = 1e12;

/// Runs DGS gradient descent. Record t holds x_t with the radius, objective
/// value and estimator cosine at x_t; the final record has no estimate and
/// its cosine is NaN. Deterministic given the config.
TrialRecord run(const RunConfig& config);

}  // namespace dgs

#endif  // DGS_OPTIMIZER_HPP_
