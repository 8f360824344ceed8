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

#ifndef DGS_SMOOTHING_HPP_
#define DGS_SMOOTHING_HPP_

#include <cstdint>
#include <functional>
#include <optional>

#include "dgs/quadrature.hpp"
#include "dgs/types.hpp"

namespace dgs {

/// A black-box objective F = phi + eps over R^d.
///
/// `evaluate` must be deterministic and safe to call concurrently. The
/// true gradient and minimizer are optional and only exist for synthetic
/// problems where phi is known; they feed diagnostics, never the estimator.
class Objective {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  Objective(int dimension, ValueFn evaluate, GradientFn true_gradient = nullptr,
            std::optional<Vector> minimizer = std::nullopt);

  int dimension() const noexcept { return dimension_; }
  double operator()(const Vector& x) const { return evaluate_(x); }

  bool has_true_gradient() const noexcept { return static_cast<bool>(true_gradient_); }
  Vector true_gradient(const Vector& x) const;
  const std::optional<Vector>& minimizer() const noexcept { return minimizer_; }

 private:
  int dimension_;
  ValueFn evaluate_;
  GradientFn true_gradient_;
  std::optional<Vector> minimizer_;
};

/// d orthonormal directions, stored as the columns of a d x d matrix.
class DirectionBasis {
 public:
  static DirectionBasis identity(int dimension);
  /// Validates orthonormality of the columns to 1e-12.
  static DirectionBasis from_columns(Matrix columns);

  int dimension() const noexcept { return static_cast<int>(columns_.cols()); }
  const Matrix& columns() const noexcept { return columns_; }
  auto direction(int i) const { return columns_.col(i); }

 private:
  explicit DirectionBasis(Matrix columns) : columns_(std::move(columns)) {}
  Matrix columns_;
};

struct DGSConfig {
  double sigma = 1.0;
  GHRule rule;
  DirectionBasis basis = DirectionBasis::identity(1);
};

/// Gauss-Hermite estimate of the derivative at 0 of the Gaussian-smoothed
/// cross-section y -> F(x + y xi):
///
///   (1 / (sqrt(pi) sigma)) sum_m w_m F(x + sqrt(2) sigma v_m xi) sqrt(2) v_m
///
/// Uses exactly rule.order evaluations of f. Throws InvalidArgument for a
/// non-unit xi or sigma <= 0, EvaluationError for a non-finite F value.
double directional_derivative_gh(const Objective& f, const Vector& x, const Vector& xi,
                                 double sigma, const GHRule& rule);

/// DGS gradient: sum_i D_i xi_i over the basis directions, where D_i is the
/// GH directional derivative along xi_i. Costs exactly M * d evaluations.
Vector dgs_gradient(const Objective& f, const Vector& x, const DGSConfig& config);

/// Plain Monte Carlo estimate of grad F_sigma(x),
/// (1 / (N sigma)) sum_k F(x + sigma u_k) u_k with u_k ~ N(0, I_d).
/// Normals come from std::mt19937_64 seeded with `seed`, drawn component by
/// component for k = 1..N. Exactly `samples` evaluations.
Vector gs_gradient_mc(const Objective& f, const Vector& x, double sigma, int samples,
                      std::uint64_t seed);

/// Haar-distributed orthonormal basis: QR of a standard Gaussian matrix with
/// the sign of R's diagonal folded into Q.
DirectionBasis random_orthonormal_basis(int dimension, std::uint64_t seed);

}  // namespace dgs

#endif  // DGS_SMOOTHING_HPP_
