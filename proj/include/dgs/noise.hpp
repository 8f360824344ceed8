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

#ifndef DGS_NOISE_HPP_
#define DGS_NOISE_HPP_

#include <cstdint>
#include <optional>
#include <variant>

#include "dgs/smoothing.hpp"
#include "dgs/types.hpp"

namespace dgs {

/// eps(x) = amplitude * sum_i sin(2 pi alpha x_i). Period 1/alpha along
/// every coordinate axis; |d/dy| of each cross-section is at most
/// 2 pi alpha * amplitude.
struct PeriodicNoise {
  double alpha = 1.0;
  double amplitude = 1.0;
};

/// eps(x) = (amplitude / K) sum_i sum_j sin(2 pi alpha_ij x_i) with K
/// components per coordinate and every alpha_ij >= alpha0.
struct BandlimitedNoise {
  double alpha0 = 1.0;
  int num_components = 20;
  std::uint64_t seed = 0;
  double amplitude = 1.0;
  Matrix frequencies;  // d x K
};

/// eps(x) = beta * sum_i (x_i - x*_i)^2 sin(2 pi c (x_i - x*_i)), bounded by
/// the envelope beta * ||x - x*||^2.
struct DiminishingNoise {
  double beta = 1.0;
  Vector minimizer;
  double carrier = 1.0;
};

using NoiseModel = std::variant<PeriodicNoise, BandlimitedNoise, DiminishingNoise>;

double eval_periodic(const PeriodicNoise& noise, const Vector& x);
double eval_bandlimited(const BandlimitedNoise& noise, const Vector& x);
double eval_diminishing(const DiminishingNoise& noise, const Vector& x);
double eval_noise(const NoiseModel& noise, const Vector& x);

/// Draws wavelengths 1/alpha_ij i.i.d. uniform on (0, 1/alpha0] from
/// std::mt19937_64(seed), row by row. Wavelengths below 1e-6 are redrawn.
BandlimitedNoise sample_bandlimited(int dimension, double alpha0, int num_components,
                                    std::uint64_t seed, double amplitude = 1.0);

/// Exact derivative at 0 of the Gaussian-smoothed unit sine
/// y -> sin(2 pi alpha (y + phase_point)):
///   2 pi alpha exp(-2 pi^2 alpha^2 sigma^2) cos(2 pi alpha phase_point).
double closed_form_smoothed_sine_derivative(double alpha, double sigma, double phase_point);

enum class PhiKind {
  kPowerSumSqrt,  // phi(x) = (sum_i |x_i|^(2+i))^(1/2), i = 1..d
  kQuadratic,     // phi(x) = sum_i x_i^2
};

/// phi + optional noise on an initialization box. The minimizer of phi is
/// the origin for both kinds.
class SyntheticObjective {
 public:
  SyntheticObjective(PhiKind kind, int dimension, std::optional<NoiseModel> noise,
                     double box_lower, double box_upper);

  PhiKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dimension_; }
  const std::optional<NoiseModel>& noise() const noexcept { return noise_; }
  double box_lower() const noexcept { return box_lower_; }
  double box_upper() const noexcept { return box_upper_; }

  double phi(const Vector& x) const;
  Vector grad_phi(const Vector& x) const;
  double noise_value(const Vector& x) const;
  double operator()(const Vector& x) const { return phi(x) + noise_value(x); }

  /// Black-box view with the analytic grad phi and minimizer 0 attached.
  Objective objective() const;
  /// The noise alone as an objective (phi part removed).
  Objective noise_only_objective() const;

 private:
  PhiKind kind_;
  int dimension_;
  std::optional<NoiseModel> noise_;
  double box_lower_;
  double box_upper_;
};

}  // namespace dgs

#endif  // DGS_NOISE_HPP_
