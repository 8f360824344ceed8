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

#include "dgs/smoothing.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/QR>

namespace dgs {
namespace {

constexpr double kUnitTolerance = 1e-10;
constexpr double kOrthonormalTolerance = 1e-12;

std::string format_point(const Vector& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

double checked_eval(const Objective& f, const Vector& point) {
  const double value = f(point);
  if (!std::isfinite(value)) {
    throw EvaluationError("objective returned a non-finite value at " + format_point(point),
                          point);
  }
  return value;
}

void require_dimension(const Objective& f, const Vector& x) {
  if (x.size() != f.dimension()) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) +
                          " but the objective expects " + std::to_string(f.dimension()));
  }
}

// Shared inner loop; xi is assumed validated.
template <typename Direction>
double gh_derivative(const Objective& f, const Vector& x, const Direction& xi, double sigma,
                     const GHRule& rule, Vector& scratch) {
  const double scale = std::numbers::sqrt2 * sigma;
  double sum = 0.0;
  for (int m = 0; m < rule.order; ++m) {
    const double v = rule.nodes[m];
    scratch = x + (scale * v) * xi;
    sum += rule.weights[m] * checked_eval(f, scratch) * (std::numbers::sqrt2 * v);
  }
  return sum / (std::sqrt(std::numbers::pi) * sigma);
}

}  // namespace

Objective::Objective(int dimension, ValueFn evaluate, GradientFn true_gradient,
                     std::optional<Vector> minimizer)
    : dimension_(dimension),
      evaluate_(std::move(evaluate)),
      true_gradient_(std::move(true_gradient)),
      minimizer_(std::move(minimizer)) {
  if (dimension_ < 1) throw InvalidArgument("objective dimension must be >= 1");
  if (!evaluate_) throw InvalidArgument("objective needs an evaluation function");
  if (minimizer_ && minimizer_->size() != dimension_) {
    throw InvalidArgument("minimizer dimension does not match the objective");
  }
}

Vector Objective::true_gradient(const Vector& x) const {
  if (!true_gradient_) throw InvalidArgument("objective has no true gradient");
  return true_gradient_(x);
}

DirectionBasis DirectionBasis::identity(int dimension) {
  if (dimension < 1) throw InvalidArgument("basis dimension must be >= 1");
  return DirectionBasis(Matrix::Identity(dimension, dimension));
}

DirectionBasis DirectionBasis::from_columns(Matrix columns) {
  if (columns.rows() != columns.cols() || columns.cols() < 1) {
    throw InvalidArgument("direction basis must be a non-empty square matrix");
  }
  const Matrix gram = columns.transpose() * columns;
  const Matrix eye = Matrix::Identity(columns.cols(), columns.cols());
  if ((gram - eye).cwiseAbs().maxCoeff() > kOrthonormalTolerance) {
    throw InvalidArgument("direction basis columns are not orthonormal");
  }
  return DirectionBasis(std::move(columns));
}

double directional_derivative_gh(const Objective& f, const Vector& x, const Vector& xi,
                                 double sigma, const GHRule& rule) {
  require_dimension(f, x);
  if (xi.size() != x.size()) throw InvalidArgument("direction dimension mismatch");
  if (std::abs(xi.norm() - 1.0) > kUnitTolerance) {
    throw InvalidArgument("direction must be a unit vector");
  }
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  Vector scratch(x.size());
  return gh_derivative(f, x, xi, sigma, rule, scratch);
}

Vector dgs_gradient(const Objective& f, const Vector& x, const DGSConfig& config) {
  require_dimension(f, x);
  if (config.basis.dimension() != f.dimension()) {
    throw InvalidArgument("basis dimension " + std::to_string(config.basis.dimension()) +
                          " does not match objective dimension " +
                          std::to_string(f.dimension()));
  }
  if (!(config.sigma > 0.0)) throw InvalidArgument("sigma must be positive");

  const Matrix& xi = config.basis.columns();
  const int d = f.dimension();
  Vector derivatives(d);
  Vector scratch(d);
  for (int i = 0; i < d; ++i) {
    derivatives[i] = gh_derivative(f, x, xi.col(i), config.sigma, config.rule, scratch);
  }
  if (xi.isIdentity(0.0)) return derivatives;
  return xi * derivatives;
}

Vector gs_gradient_mc(const Objective& f, const Vector& x, double sigma, int samples,
                      std::uint64_t seed) {
  require_dimension(f, x);
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");

  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = f.dimension();
  Vector u(d);
  Vector point(d);
  Vector sum = Vector::Zero(d);
  for (int k = 0; k < samples; ++k) {
    for (int i = 0; i < d; ++i) u[i] = normal(engine);
    point = x + sigma * u;
    sum += checked_eval(f, point) * u;
  }
  return sum / (static_cast<double>(samples) * sigma);
}

DirectionBasis random_orthonormal_basis(int dimension, std::uint64_t seed) {
  if (dimension < 1) throw InvalidArgument("basis dimension must be >= 1");
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix gaussian(dimension, dimension);
  for (int j = 0; j < dimension; ++j) {
    for (int i = 0; i < dimension; ++i) gaussian(i, j) = normal(engine);
  }
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ() * Matrix::Identity(dimension, dimension);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dimension; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return DirectionBasis::from_columns(std::move(q));
}

}  // namespace dgs
