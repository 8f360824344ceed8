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

#include "dgs/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace dgs {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinWavelength = 1e-6;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double eval_periodic(const PeriodicNoise& noise, const Vector& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::sin(kTwoPi * noise.alpha * x[i]);
  return noise.amplitude * sum;
}

double eval_bandlimited(const BandlimitedNoise& noise, const Vector& x) {
  if (noise.frequencies.rows() != x.size()) {
    throw InvalidArgument("bandlimited noise was sampled for a different dimension");
  }
  const Eigen::Index k = noise.frequencies.cols();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = kTwoPi * x[i];
    for (Eigen::Index j = 0; j < k; ++j) sum += std::sin(noise.frequencies(i, j) * xi);
  }
  return noise.amplitude * sum / static_cast<double>(k);
}

double eval_diminishing(const DiminishingNoise& noise, const Vector& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double shift = noise.minimizer.size() ? noise.minimizer[i] : 0.0;
    const double y = x[i] - shift;
    sum += y * y * std::sin(kTwoPi * noise.carrier * y);
  }
  return noise.beta * sum;
}

double eval_noise(const NoiseModel& noise, const Vector& x) {
  return std::visit(Overloaded{
                        [&](const PeriodicNoise& n) { return eval_periodic(n, x); },
                        [&](const BandlimitedNoise& n) { return eval_bandlimited(n, x); },
                        [&](const DiminishingNoise& n) { return eval_diminishing(n, x); },
                    },
                    noise);
}

BandlimitedNoise sample_bandlimited(int dimension, double alpha0, int num_components,
                                    std::uint64_t seed, double amplitude) {
  if (dimension < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(alpha0 > 0.0)) throw InvalidArgument("alpha0 must be positive");
  if (num_components < 1) throw InvalidArgument("num_components must be >= 1");

  BandlimitedNoise noise;
  noise.alpha0 = alpha0;
  noise.num_components = num_components;
  noise.seed = seed;
  noise.amplitude = amplitude;
  noise.frequencies.resize(dimension, num_components);

  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double max_wavelength = 1.0 / alpha0;
  for (int i = 0; i < dimension; ++i) {
    for (int j = 0; j < num_components; ++j) {
      double wavelength = 0.0;
      do {
        // 1 - u maps [0, 1) onto (0, 1].
        wavelength = max_wavelength * (1.0 - unit(engine));
      } while (wavelength < kMinWavelength);
      noise.frequencies(i, j) = 1.0 / wavelength;
    }
  }
  return noise;
}

double closed_form_smoothed_sine_derivative(double alpha, double sigma, double phase_point) {
  if (!(alpha > 0.0) || !(sigma > 0.0)) throw InvalidArgument("alpha and sigma must be positive");
  const double a = std::numbers::pi * alpha * sigma;
  return kTwoPi * alpha * std::exp(-2.0 * a * a) * std::cos(kTwoPi * alpha * phase_point);
}

SyntheticObjective::SyntheticObjective(PhiKind kind, int dimension,
                                       std::optional<NoiseModel> noise, double box_lower,
                                       double box_upper)
    : kind_(kind),
      dimension_(dimension),
      noise_(std::move(noise)),
      box_lower_(box_lower),
      box_upper_(box_upper) {
  if (dimension_ < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(box_lower_ < box_upper_)) throw InvalidArgument("box lower bound must be below upper");
  if (noise_) {
    if (auto* b = std::get_if<BandlimitedNoise>(&*noise_);
        b && b->frequencies.rows() != dimension_) {
      throw InvalidArgument("bandlimited noise dimension does not match the objective");
    }
    if (auto* m = std::get_if<DiminishingNoise>(&*noise_)) {
      if (m->minimizer.size() == 0) m->minimizer = Vector::Zero(dimension_);
      if (m->minimizer.size() != dimension_ || !m->minimizer.isZero(0.0)) {
        throw InvalidArgument("diminishing noise must vanish at the minimizer of phi (origin)");
      }
    }
  }
}

double SyntheticObjective::phi(const Vector& x) const {
  if (kind_ == PhiKind::kQuadratic) return x.squaredNorm();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]), 3.0 + i);
  return std::sqrt(sum);
}

Vector SyntheticObjective::grad_phi(const Vector& x) const {
  if (kind_ == PhiKind::kQuadratic) return 2.0 * x;
  const double value = phi(x);
  Vector g = Vector::Zero(x.size());
  if (value == 0.0) return g;  // minimum; one-sided slopes all vanish there
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double p = 3.0 + i;
    const double a = std::abs(x[i]);
    g[i] = std::copysign(p * std::pow(a, p - 1.0), x[i]) / (2.0 * value);
    if (a == 0.0) g[i] = 0.0;
  }
  return g;
}

double SyntheticObjective::noise_value(const Vector& x) const {
  return noise_ ? eval_noise(*noise_, x) : 0.0;
}

Objective SyntheticObjective::objective() const {
  // Capture by value so the Objective outlives this instance.
  auto self = *this;
  return Objective(
      dimension_, [self](const Vector& x) { return self(x); },
      [self](const Vector& x) { return self.grad_phi(x); }, Vector::Zero(dimension_));
}

Objective SyntheticObjective::noise_only_objective() const {
  auto self = *this;
  return Objective(dimension_, [self](const Vector& x) { return self.noise_value(x); });
}

}  // namespace dgs
