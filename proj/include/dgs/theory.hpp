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

#ifndef DGS_THEORY_HPP_
#define DGS_THEORY_HPP_

#include <string>

namespace dgs::theory {

/// L: Lipschitz constant of grad phi. tau: strong convexity, 0 <= tau <= L.
struct ConvexityConstants {
  double L = 1.0;
  double tau = 1.0;

  void validate() const;
};

enum class FrequencyBranch { kHigh, kLow, kNotApplicable };

std::string to_string(FrequencyBranch branch);

struct SigmaRecommendation {
  double sigma = 0.0;
  FrequencyBranch branch = FrequencyBranch::kLow;
};

struct BoundReport {
  double noise_gradient_bound = 0.0;
  double delta_sigma = 0.0;
  double recommended_sigma = 0.0;
  FrequencyBranch branch = FrequencyBranch::kNotApplicable;
};

// Upper bounds on ||DGS gradient of the noise alone||.

/// Periodic cross-sections with period 1/alpha and |eta^(n)| <= gamma_n.
/// Branches n = 1, n = 2 and n > 2.
double periodic_noise_grad_bound(double gamma_n, int n, double alpha, double sigma, int d);

/// Cross-section spectra vanishing on (-alpha0, alpha0), bounded by gamma.
double bandlimited_noise_grad_bound(double gamma, double alpha0, double sigma, int d);

/// |eps(x)| <= beta ||x - x*||^2, evaluated at dist = ||x - x*||.
double diminishing_noise_grad_bound(double beta, double sigma, double dist, int d);

/// Radius minimizing the diminishing bound at fixed dist: dist / sqrt(2).
double diminishing_optimal_sigma(double dist);

// Radius selection.

/// High-frequency branch when alpha > 2 L sqrt(2) / (pi gamma1):
/// sigma = log^(1/2)(pi alpha gamma1 / (2 L sqrt 2)) / (pi alpha sqrt 2).
/// Otherwise sigma = 1 / alpha.
SigmaRecommendation recommend_sigma_periodic(const ConvexityConstants& c, double gamma1,
                                             double alpha);

/// High-frequency branch when alpha0 > L^(1/3) / (pi gamma^(1/3)):
/// sigma = sqrt(3) log^(1/2)(pi alpha0 gamma^(1/3) / L^(1/3)) / (pi alpha0 sqrt 2).
/// Otherwise sigma = 1 / alpha0.
SigmaRecommendation recommend_sigma_bandlimited(const ConvexityConstants& c, double gamma,
                                                double alpha0);

// Neighborhood of convergence.

/// C pi (M!)^2 d / (4^M ((2M)!)^2) sigma^(4M-2); computed in log space.
double quadrature_error_term(int M, double sigma, int d, double C = 1.0);

/// Squared radius of the convergence neighborhood for periodic noise:
/// (4/tau^2 + 1/(4 L tau)) * (quadrature term + 48 L^2 d sigma^2
///   + 3 gamma1^2 d / (2 e^{4 pi^2 alpha^2 sigma^2}) (1 + 1/(8 pi alpha^2 sigma^2))).
double delta_sigma_periodic(const ConvexityConstants& c, double gamma1, double alpha,
                            double sigma, int d, int M, double C = 1.0);

/// Same for bandlimited noise; the noise term is
/// 3 gamma^2 d / (pi^2 sigma^4) exp(-4 pi^2 alpha0^2 sigma^2).
double delta_sigma_bandlimited(const ConvexityConstants& c, double gamma, double alpha0,
                               double sigma, int d, int M, double C = 1.0);

/// Closed-form upper bound on delta_sigma at the recommended radius, per branch.
double delta_sigma_periodic_upper_bound(const ConvexityConstants& c, double gamma1, double alpha,
                                        int d, int M, double C = 1.0);
double delta_sigma_bandlimited_upper_bound(const ConvexityConstants& c, double gamma,
                                           double alpha0, int d, int M, double C = 1.0);

/// 1 - (lambda tau - 8 lambda^2 tau L). Requires 0 < lambda <= 1/(8L).
double contraction_rate(const ConvexityConstants& c, double lambda);

/// beta sqrt(2 L^2 pi + beta^2) < (pi / (32 d)) * 8 tau^2 L / (48 L + 3 tau).
struct Theorem3Condition {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};
Theorem3Condition theorem3_condition(double beta, const ConvexityConstants& c, int d);

// Reports used by the CLI. sigma <= 0 selects the recommended radius.

BoundReport report_periodic(const ConvexityConstants& c, double gamma1, double alpha,
                            double sigma, int d, int M, double C = 1.0);
BoundReport report_bandlimited(const ConvexityConstants& c, double gamma, double alpha0,
                               double sigma, int d, int M, double C = 1.0);
BoundReport report_diminishing(double beta, double dist, double sigma, int d);

}  // namespace dgs::theory

#endif  // DGS_THEORY_HPP_
