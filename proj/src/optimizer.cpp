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

#include "dgs/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace dgs {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double cosine_similarity(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return kNaN;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

Vector draw_initial_point(const InitialBox& box, int dimension, std::mt19937_64& engine) {
  std::uniform_real_distribution<double> uniform(box.lower, box.upper);
  Vector x(dimension);
  for (int i = 0; i < dimension; ++i) x[i] = uniform(engine);
  return x;
}

}  // namespace

double theorem3_rate(const Theorem3Parameters& p) {
  const double L = p.L;
  const double tau = p.tau;
  const double beta = p.beta;
  return (1.0 - tau / (32.0 * L)) +
         (6.0 / (tau * L) + 3.0 / (8.0 * L * L)) * p.dimension * beta *
             std::sqrt(2.0 * L * L * std::numbers::pi + beta * beta) / std::numbers::pi;
}

SigmaSchedule SigmaSchedule::constant(double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  SigmaSchedule s;
  s.kind = Kind::kConstant;
  s.base_sigma = sigma;
  return s;
}

SigmaSchedule SigmaSchedule::two_phase(double base_sigma, int switch_iteration,
                                       double contraction) {
  if (!(base_sigma > 0.0)) throw InvalidArgument("base sigma must be positive");
  if (switch_iteration < 0) throw InvalidArgument("switch_iteration must be >= 0");
  if (!(contraction > 0.0 && contraction < 1.0)) {
    throw InvalidArgument("contraction must lie in (0, 1)");
  }
  SigmaSchedule s;
  s.kind = Kind::kTwoPhase;
  s.base_sigma = base_sigma;
  s.switch_iteration = switch_iteration;
  s.contraction = contraction;
  return s;
}

SigmaSchedule SigmaSchedule::theorem3_schedule(const Theorem3Parameters& p, double multiplier) {
  if (!(p.beta >= 0.0) || !(p.L > 0.0) || !(p.tau > 0.0) || !(p.r0_bound > 0.0) ||
      p.dimension < 1) {
    throw InvalidArgument("theorem3 schedule needs beta >= 0 and positive L, tau, r0_bound, d");
  }
  if (!(multiplier > 0.0)) throw InvalidArgument("sigma multiplier must be positive");
  const double rate = theorem3_rate(p);
  if (!(rate < 1.0)) {
    throw InvalidArgument("theorem3 rate " + std::to_string(rate) +
                          " is not below 1; the radius would grow without bound");
  }
  SigmaSchedule s;
  s.kind = Kind::kTheorem3;
  s.base_sigma = multiplier;
  s.theorem3 = p;
  return s;
}

double sigma_at(const SigmaSchedule& schedule, long long t) {
  if (t < 0) throw InvalidArgument("iteration index must be >= 0");
  switch (schedule.kind) {
    case SigmaSchedule::Kind::kConstant:
      return schedule.base_sigma;
    case SigmaSchedule::Kind::kTwoPhase:
      if (t < schedule.switch_iteration) return schedule.base_sigma;
      return schedule.base_sigma *
             std::pow(schedule.contraction, static_cast<double>(t - schedule.switch_iteration));
    case SigmaSchedule::Kind::kTheorem3: {
      const auto& p = schedule.theorem3;
      const double lead =
          std::sqrt(p.beta) / std::pow(8.0 * p.L * p.L * std::numbers::pi + 4.0 * p.beta * p.beta,
                                       0.25);
      return schedule.base_sigma * lead *
             std::pow(theorem3_rate(p), 0.5 * static_cast<double>(t)) * p.r0_bound;
    }
  }
  return schedule.base_sigma;
}

Vector gd_step(const Vector& x, const Objective& f, const DGSConfig& config, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("step size must be nonnegative");
  return x - lambda * dgs_gradient(f, x, config);
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kCompleted:
      return "completed";
    case RunStatus::kSigmaUnderflow:
      return "sigma-underflow";
    case RunStatus::kDiverged:
      return "diverged";
  }
  return "unknown";
}

TrialRecord run(const RunConfig& config) {
  if (!(config.step_size > 0.0)) throw InvalidArgument("step_size must be positive");
  if (config.max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  const Objective& f = config.objective;
  const int d = f.dimension();

  // One engine per run: the initial point is drawn first, the basis second.
  std::mt19937_64 engine(config.seed);
  Vector x;
  if (const auto* box = std::get_if<InitialBox>(&config.initial_point)) {
    if (!(box->lower < box->upper)) throw InvalidArgument("initial box is empty");
    x = draw_initial_point(*box, d, engine);
  } else {
    x = std::get<Vector>(config.initial_point);
    if (x.size() != d) throw InvalidArgument("initial point dimension mismatch");
  }

  DGSConfig dgs{sigma_at(config.schedule, 0), config.rule, DirectionBasis::identity(d)};
  if (config.basis) {
    dgs.basis = *config.basis;
  } else if (config.random_basis) {
    dgs.basis = random_orthonormal_basis(d, engine());
  }

  const auto& minimizer = f.minimizer();
  const bool has_gradient = f.has_true_gradient();
  const long long per_step = static_cast<long long>(config.rule.order) * d;

  TrialRecord record;
  record.iterations.reserve(static_cast<std::size_t>(config.max_iterations) + 1);

  auto make_record = [&](const Vector& point, double sigma) {
    IterationRecord it;
    it.x = point;
    it.distance = minimizer ? (point - *minimizer).norm() : kNaN;
    it.objective = f(point);
    it.cosine = kNaN;
    it.sigma = sigma;
    return it;
  };

  for (long long t = 0;; ++t) {
    const double sigma = sigma_at(config.schedule, t);
    record.iterations.push_back(make_record(x, sigma));
    if (t == config.max_iterations) break;
    if (sigma < kSigmaFloor) {
      record.status = RunStatus::kSigmaUnderflow;
      break;
    }
    dgs.sigma = sigma;
    Vector estimate;
    try {
      estimate = dgs_gradient(f, x, dgs);
    } catch (const EvaluationError& e) {
      record.status = RunStatus::kDiverged;
      record.message = e.what();
      break;
    }
    if (has_gradient) record.iterations.back().cosine = cosine_similarity(estimate, f.true_gradient(x));
    Vector next = x - config.step_size * estimate;
    record.steps += 1;
    record.evaluations += per_step;
    if (!next.allFinite() || next.norm() > kDivergenceNorm) {
      record.status = RunStatus::kDiverged;
      record.message = "iterate left the finite region at step " + std::to_string(t + 1);
      break;
    }
    x = std::move(next);
  }
  return record;
}

}  // namespace dgs
