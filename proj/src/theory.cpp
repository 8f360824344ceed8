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

#include "dgs/theory.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "dgs/types.hpp"

namespace dgs::theory {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw InvalidArgument(std::string(name) + " must be positive");
}

double leading_factor(const ConvexityConstants& c) {
  return 4.0 / (c.tau * c.tau) + 1.0 / (4.0 * c.L * c.tau);
}

}  // namespace

void ConvexityConstants::validate() const {
  require_positive(L, "L");
  if (!(tau >= 0.0)) throw InvalidArgument("tau must be nonnegative");
  if (tau > L) throw InvalidArgument("tau must not exceed L");
}

std::string to_string(FrequencyBranch branch) {
  switch (branch) {
    case FrequencyBranch::kHigh:
      return "high-frequency";
    case FrequencyBranch::kLow:
      return "low-frequency";
    case FrequencyBranch::kNotApplicable:
      return "n/a";
  }
  return "unknown";
}

double periodic_noise_grad_bound(double gamma_n, int n, double alpha, double sigma, int d) {
  require_positive(gamma_n, "gamma_n");
  require_positive(alpha, "alpha");
  require_positive(sigma, "sigma");
  if (n < 1) throw InvalidArgument("derivative order n must be >= 1");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");

  const double as = alpha * sigma;
  const double attenuation = std::exp(-2.0 * kPi * kPi * as * as);
  const double root_d = std::sqrt(static_cast<double>(d));
  if (n == 1) {
    return gamma_n * root_d / 2.0 * attenuation * (1.0 + 1.0 / (2.0 * as * std::sqrt(2.0 * kPi)));
  }
  if (n == 2) {
    return gamma_n * root_d / (4.0 * kPi * alpha) * attenuation *
           (1.0 + 0.5 * std::log(1.0 + 1.0 / (2.0 * kPi * kPi * as * as)));
  }
  return gamma_n * root_d / (2.0 * std::pow(2.0 * kPi * alpha, n - 1)) * attenuation *
         (1.0 + 1.0 / (4.0 * kPi * kPi * as * as));
}

double bandlimited_noise_grad_bound(double gamma, double alpha0, double sigma, int d) {
  require_positive(gamma, "gamma");
  require_positive(alpha0, "alpha0");
  require_positive(sigma, "sigma");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  const double as = alpha0 * sigma;
  return gamma * std::sqrt(static_cast<double>(d)) / (kPi * sigma * sigma) *
         std::exp(-2.0 * kPi * kPi * as * as);
}

double diminishing_noise_grad_bound(double beta, double sigma, double dist, int d) {
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be nonnegative");
  require_positive(sigma, "sigma");
  if (!(dist >= 0.0)) throw InvalidArgument("dist must be nonnegative");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  return beta * std::sqrt(2.0 * d / kPi) * (2.0 * sigma + dist * dist / sigma);
}

double diminishing_optimal_sigma(double dist) {
  require_positive(dist, "dist");
  return dist / kSqrt2;
}

SigmaRecommendation recommend_sigma_periodic(const ConvexityConstants& c, double gamma1,
                                             double alpha) {
  c.validate();
  require_positive(gamma1, "gamma1");
  require_positive(alpha, "alpha");
  const double threshold = 2.0 * c.L * kSqrt2 / (kPi * gamma1);
  if (alpha > threshold) {
    const double arg = kPi * alpha * gamma1 / (2.0 * c.L * kSqrt2);
    assert(arg > 1.0);
    return {std::sqrt(std::log(arg)) / (kPi * alpha * kSqrt2), FrequencyBranch::kHigh};
  }
  return {1.0 / alpha, FrequencyBranch::kLow};
}

SigmaRecommendation recommend_sigma_bandlimited(const ConvexityConstants& c, double gamma,
                                                double alpha0) {
  c.validate();
  require_positive(gamma, "gamma");
  require_positive(alpha0, "alpha0");
  const double threshold = std::cbrt(c.L) / (kPi * std::cbrt(gamma));
  if (alpha0 > threshold) {
    const double arg = kPi * alpha0 * std::cbrt(gamma) / std::cbrt(c.L);
    assert(arg > 1.0);
    return {std::sqrt(3.0) * std::sqrt(std::log(arg)) / (kPi * alpha0 * kSqrt2),
            FrequencyBranch::kHigh};
  }
  return {1.0 / alpha0, FrequencyBranch::kLow};
}

double quadrature_error_term(int M, double sigma, int d, double C) {
  if (M < 1) throw InvalidArgument("quadrature order must be >= 1");
  require_positive(sigma, "sigma");
  if (!(C >= 0.0)) throw InvalidArgument("C must be nonnegative");
  if (C == 0.0) return 0.0;
  const double log_value = std::log(C) + std::log(kPi) + 2.0 * std::lgamma(M + 1.0) +
                           std::log(static_cast<double>(d)) - M * std::log(4.0) -
                           2.0 * std::lgamma(2.0 * M + 1.0) + (4.0 * M - 2.0) * std::log(sigma);
  return std::exp(log_value);
}

double delta_sigma_periodic(const ConvexityConstants& c, double gamma1, double alpha,
                            double sigma, int d, int M, double C) {
  c.validate();
  require_positive(c.tau, "tau");
  require_positive(gamma1, "gamma1");
  require_positive(alpha, "alpha");
  require_positive(sigma, "sigma");
  const double as2 = alpha * alpha * sigma * sigma;
  const double noise = 3.0 * gamma1 * gamma1 * d / (2.0 * std::exp(4.0 * kPi * kPi * as2)) *
                       (1.0 + 1.0 / (8.0 * kPi * as2));
  return leading_factor(c) *
         (quadrature_error_term(M, sigma, d, C) + 48.0 * c.L * c.L * d * sigma * sigma + noise);
}

double delta_sigma_bandlimited(const ConvexityConstants& c, double gamma, double alpha0,
                               double sigma, int d, int M, double C) {
  c.validate();
  require_positive(c.tau, "tau");
  require_positive(gamma, "gamma");
  require_positive(alpha0, "alpha0");
  require_positive(sigma, "sigma");
  const double s2 = sigma * sigma;
  const double noise = 3.0 * gamma * gamma * d / (kPi * kPi * s2 * s2) *
                       std::exp(-4.0 * kPi * kPi * alpha0 * alpha0 * s2);
  return leading_factor(c) *
         (quadrature_error_term(M, sigma, d, C) + 48.0 * c.L * c.L * d * s2 + noise);
}

double delta_sigma_periodic_upper_bound(const ConvexityConstants& c, double gamma1, double alpha,
                                        int d, int M, double C) {
  const auto rec = recommend_sigma_periodic(c, gamma1, alpha);
  require_positive(c.tau, "tau");
  const double quad = quadrature_error_term(M, rec.sigma, d, C);
  const double l2d = c.L * c.L * d;
  if (rec.branch == FrequencyBranch::kHigh) {
    const double lg = std::log(kPi * alpha * gamma1 / (2.0 * c.L * kSqrt2));
    return leading_factor(c) * (quad + 30.0 * l2d / (kPi * kPi * alpha * alpha) * (lg + 1.0 / lg));
  }
  return leading_factor(c) * (quad + 64.0 * l2d / (alpha * alpha));
}

double delta_sigma_bandlimited_upper_bound(const ConvexityConstants& c, double gamma,
                                           double alpha0, int d, int M, double C) {
  const auto rec = recommend_sigma_bandlimited(c, gamma, alpha0);
  require_positive(c.tau, "tau");
  const double quad = quadrature_error_term(M, rec.sigma, d, C);
  const double l2d = c.L * c.L * d;
  if (rec.branch == FrequencyBranch::kHigh) {
    const double lg = std::log(kPi * alpha0 * std::cbrt(gamma) / std::cbrt(c.L));
    return leading_factor(c) * (quad + 8.0 * l2d / (alpha0 * alpha0) * (lg + 1.0 / (lg * lg)));
  }
  return leading_factor(c) * (quad + 49.0 * l2d / (alpha0 * alpha0));
}

double contraction_rate(const ConvexityConstants& c, double lambda) {
  c.validate();
  require_positive(lambda, "lambda");
  if (lambda > 1.0 / (8.0 * c.L)) {
    throw InvalidArgument("lambda must not exceed 1/(8L) = " + std::to_string(1.0 / (8.0 * c.L)));
  }
  return 1.0 - (lambda * c.tau - 8.0 * lambda * lambda * c.tau * c.L);
}

Theorem3Condition theorem3_condition(double beta, const ConvexityConstants& c, int d) {
  c.validate();
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  Theorem3Condition out;
  out.lhs = beta * std::sqrt(2.0 * c.L * c.L * kPi + beta * beta);
  out.rhs = kPi / (32.0 * d) * (8.0 * c.tau * c.tau * c.L / (48.0 * c.L + 3.0 * c.tau));
  out.holds = out.lhs < out.rhs;
  return out;
}

BoundReport report_periodic(const ConvexityConstants& c, double gamma1, double alpha,
                            double sigma, int d, int M, double C) {
  const auto rec = recommend_sigma_periodic(c, gamma1, alpha);
  const double s = sigma > 0.0 ? sigma : rec.sigma;
  BoundReport r;
  r.noise_gradient_bound = periodic_noise_grad_bound(gamma1, 1, alpha, s, d);
  r.delta_sigma = delta_sigma_periodic(c, gamma1, alpha, s, d, M, C);
  r.recommended_sigma = rec.sigma;
  r.branch = rec.branch;
  return r;
}

BoundReport report_bandlimited(const ConvexityConstants& c, double gamma, double alpha0,
                               double sigma, int d, int M, double C) {
  const auto rec = recommend_sigma_bandlimited(c, gamma, alpha0);
  const double s = sigma > 0.0 ? sigma : rec.sigma;
  BoundReport r;
  r.noise_gradient_bound = bandlimited_noise_grad_bound(gamma, alpha0, s, d);
  r.delta_sigma = delta_sigma_bandlimited(c, gamma, alpha0, s, d, M, C);
  r.recommended_sigma = rec.sigma;
  r.branch = rec.branch;
  return r;
}

BoundReport report_diminishing(double beta, double dist, double sigma, int d) {
  BoundReport r;
  r.recommended_sigma = dist > 0.0 ? diminishing_optimal_sigma(dist) : 0.0;
  const double s = sigma > 0.0 ? sigma : r.recommended_sigma;
  require_positive(s, "sigma");
  r.noise_gradient_bound = diminishing_noise_grad_bound(beta, s, dist, d);
  // Exact convergence: no residual neighborhood under a shrinking radius.
  r.delta_sigma = 0.0;
  r.branch = FrequencyBranch::kNotApplicable;
  return r;
}

}  // namespace dgs::theory
