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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include "dgs/smoothing.hpp"
#include "oracles.hpp"

using namespace dgs;

namespace {

constexpr double kPi = std::numbers::pi;

Vector linear_coeffs(int d) {
  Vector a(d);
  for (int i = 0; i < d; ++i) a[i] = 0.5 * i - 1.25;
  return a;
}

Objective linear(const Vector& a) {
  return Objective(static_cast<int>(a.size()), [a](const Vector& x) { return a.dot(x); });
}

Objective squared_norm(int d) {
  return Objective(d, [](const Vector& x) { return x.squaredNorm(); });
}

Objective sine_first(int d) {
  return Objective(d, [](const Vector& x) { return std::sin(2 * kPi * x[0]); });
}

// Counts calls through a shared counter.
struct Counted {
  std::shared_ptr<long long> calls = std::make_shared<long long>(0);
  Objective wrap(const Objective& f) const {
    auto c = calls;
    return Objective(f.dimension(), [f, c](const Vector& x) {
      ++*c;
      return f(x);
    });
  }
};

Vector random_vector(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = u(rng);
  return x;
}

}  // namespace

TEST_CASE("directional derivative is exact on linear functions for M >= 2") {
  std::mt19937_64 rng(1);
  const Vector a = linear_coeffs(4);
  const auto f = linear(a);
  for (int M = 2; M <= 8; ++M) {
    const auto rule = build_gh_rule(M);
    for (double sigma : {0.01, 1.0, 30.0}) {
      Vector xi = random_vector(4, rng);
      xi.normalize();
      const Vector x = random_vector(4, rng);
      CHECK(std::abs(directional_derivative_gh(f, x, xi, sigma, rule) - a.dot(xi)) <= 1e-12);
    }
  }
}

TEST_CASE("directional derivative of ||x||^2 is 2<x, xi> for M >= 2") {
  std::mt19937_64 rng(2);
  const auto f = squared_norm(3);
  for (int M : {2, 3, 7}) {
    const auto rule = build_gh_rule(M);
    for (double sigma : {0.1, 1.0, 10.0}) {
      Vector xi = random_vector(3, rng);
      xi.normalize();
      const Vector x = random_vector(3, rng);
      const double expected = 2 * x.dot(xi);
      CHECK(directional_derivative_gh(f, x, xi, sigma, rule) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("smoothed sine derivative matches numerical integration and the closed form") {
  const auto f = sine_first(1);
  const auto rule = build_gh_rule(40);
  const Vector x = Vector::Zero(1);
  const Vector e1 = Vector::Ones(1);
  const double got = directional_derivative_gh(f, x, e1, 0.5, rule);
  const double oracle = oracle::smoothed_sine_derivative(1.0, 0.5, 0.0);
  CHECK(std::abs(got - oracle) <= 1e-12);
  CHECK(got == doctest::Approx(2 * kPi * std::exp(-2 * kPi * kPi * 0.25)).epsilon(1e-12));
  CHECK(got == doctest::Approx(0.045216).epsilon(1e-4));
}

TEST_CASE("dgs gradient of a linear function recovers its coefficients in any basis") {
  const Vector a = linear_coeffs(5);
  const auto f = linear(a);
  std::mt19937_64 rng(3);
  for (int M : {2, 4}) {
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
      DGSConfig c{0.7, build_gh_rule(M), random_orthonormal_basis(5, seed)};
      const Vector g = dgs_gradient(f, random_vector(5, rng), c);
      CHECK((g - a).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("dgs gradient of ||x||^2 is 2x") {
  const auto f = squared_norm(5);
  std::mt19937_64 rng(4);
  for (double sigma : {0.1, 1.0, 10.0}) {
    for (std::uint64_t seed : {5ULL, 6ULL}) {
      const Vector x = random_vector(5, rng);
      DGSConfig c{sigma, build_gh_rule(2), random_orthonormal_basis(5, seed)};
      const Vector g = dgs_gradient(f, x, c);
      for (int i = 0; i < 5; ++i) CHECK(g[i] == doctest::Approx(2 * x[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("dgs gradient of a single sine in d = 2") {
  const auto f = sine_first(2);
  DGSConfig c{0.5, build_gh_rule(40), DirectionBasis::identity(2)};
  const Vector g = dgs_gradient(f, Vector::Zero(2), c);
  CHECK(g[0] == doctest::Approx(2 * kPi * std::exp(-0.5 * kPi * kPi)).epsilon(1e-12));
  CHECK(std::abs(g[1]) <= 1e-15);
}

TEST_CASE("basis invariance on a PSD quadratic form") {
  Matrix B(4, 4);
  B << 1, 2, 0, -1, 0, 1, 3, 0, 2, 0, 1, 1, -1, 1, 0, 2;
  const Matrix A = B.transpose() * B;
  const Objective f(4, [A](const Vector& x) { return x.dot(A * x); });
  const Vector x = (Vector(4) << 0.3, -1.2, 2.0, 0.7).finished();
  const auto rule = build_gh_rule(3);
  const Vector ref = dgs_gradient(f, x, {1.3, rule, DirectionBasis::identity(4)});
  CHECK((ref - 2 * A * x).cwiseAbs().maxCoeff() <= 1e-9);
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const Vector g = dgs_gradient(f, x, {1.3, rule, random_orthonormal_basis(4, seed)});
    CHECK((g - ref).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("error shrinks with sigma at order >= 1.5 on ||x||^4") {
  const Objective f(3, [](const Vector& x) { return std::pow(x.squaredNorm(), 2); });
  const Vector x = (Vector(3) << 0.8, -0.5, 0.3).finished();
  const Vector exact = 4 * x.squaredNorm() * x;
  const auto rule = build_gh_rule(10);
  std::vector<double> sigmas{0.4, 0.2, 0.1, 0.05}, errors;
  for (double s : sigmas) {
    errors.push_back((dgs_gradient(f, x, {s, rule, DirectionBasis::identity(3)}) - exact).norm());
  }
  for (std::size_t i = 1; i < errors.size(); ++i) CHECK(errors[i] < errors[i - 1]);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    lx.push_back(std::log(sigmas[i]));
    ly.push_back(std::log(errors[i]));
  }
  CHECK(oracle::fit_line(lx, ly).slope >= 1.5);
}

TEST_CASE("quadrature error decreases in M down to the rounding floor") {
  const auto f = sine_first(1);
  const double exact = 2 * kPi * std::exp(-0.5 * kPi * kPi);
  double previous = std::numeric_limits<double>::infinity();
  for (int M : {4, 6, 8, 10, 12}) {
    const double err = std::abs(
        directional_derivative_gh(f, Vector::Zero(1), Vector::Ones(1), 0.5, build_gh_rule(M)) -
        exact);
    if (previous > 1e-13) CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("evaluation budget: M*d for DGS, N for Monte Carlo") {
  Counted counter;
  const auto f = counter.wrap(squared_norm(5));
  dgs_gradient(f, Vector::Ones(5), {1.0, build_gh_rule(7), DirectionBasis::identity(5)});
  CHECK(*counter.calls == 35);
  *counter.calls = 0;
  gs_gradient_mc(f, Vector::Ones(5), 1.0, 123, 9);
  CHECK(*counter.calls == 123);
}

TEST_CASE("input validation") {
  const auto f = squared_norm(3);
  const auto rule = build_gh_rule(3);
  CHECK_THROWS_AS(directional_derivative_gh(f, Vector::Zero(3), Vector::Ones(3), 1.0, rule),
                  InvalidArgument);
  CHECK_THROWS_AS(directional_derivative_gh(f, Vector::Zero(3), Vector::Unit(3, 0), 0.0, rule),
                  InvalidArgument);
  CHECK_THROWS_AS(dgs_gradient(f, Vector::Zero(2), {1.0, rule, DirectionBasis::identity(2)}),
                  InvalidArgument);
  CHECK_THROWS_AS(dgs_gradient(f, Vector::Zero(3), {1.0, rule, DirectionBasis::identity(2)}),
                  InvalidArgument);
  CHECK_THROWS_AS(DirectionBasis::from_columns(Matrix::Ones(2, 2)), InvalidArgument);
  CHECK_THROWS_AS(random_orthonormal_basis(0, 1), InvalidArgument);
  CHECK_THROWS_AS(gs_gradient_mc(f, Vector::Zero(3), 1.0, 0, 1), InvalidArgument);
}

TEST_CASE("non-finite values abort with the offending point") {
  const Objective f(2, [](const Vector& x) {
    return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : x[0];
  });
  try {
    dgs_gradient(f, Vector::Zero(2), {1.0, build_gh_rule(4), DirectionBasis::identity(2)});
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.point()[0] > 0.5);
  }
  CHECK_THROWS_AS(gs_gradient_mc(f, Vector::Zero(2), 1.0, 100, 3), EvaluationError);
}

TEST_CASE("monte carlo: constant function gives a small zero-mean estimate") {
  const double c = 3.0;
  const Objective f(5, [c](const Vector&) { return c; });
  const int N = 100000;
  const double sigma = 0.5;
  const Vector g = gs_gradient_mc(f, Vector::Zero(5), sigma, N, 42);
  CHECK(g.norm() <= 5 * c * std::sqrt(5.0) / (sigma * std::sqrt(double(N))));
}

TEST_CASE("monte carlo: unbiased on linear functions") {
  const Vector a = linear_coeffs(3);
  const auto f = linear(a);
  const int N = 10000, R = 100;
  const double sigma = 0.8;
  const Vector x = (Vector(3) << 0.5, 1.0, -2.0).finished();
  Vector mean = Vector::Zero(3);
  for (int r = 0; r < R; ++r) mean += gs_gradient_mc(f, x, sigma, N, 1000 + r) / R;
  // Per-sample covariance of F(x + s u) u / s: (<a,x>/s)^2 I + a a^T + |a|^2 I
  // has component variance bounded by (<a,x>/s)^2 + 2|a|^2.
  const double var = std::pow(a.dot(x) / sigma, 2) + 2 * a.squaredNorm();
  const double se = std::sqrt(var / (double(N) * R));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(mean[i] - a[i]) <= 3 * se);
}

TEST_CASE("monte carlo: single sample replays the seeded draw") {
  const Objective f(2, [](const Vector& x) { return x[0]; });
  const std::uint64_t seed = 2024;
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double u0 = normal(engine);
  const double u1 = normal(engine);
  const Vector g = gs_gradient_mc(f, Vector::Zero(2), 1.0, 1, seed);
  CHECK(g[0] == doctest::Approx(u0 * u0).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(u0 * u1).epsilon(1e-15));
}

TEST_CASE("random basis: orthonormal, deterministic and seed dependent") {
  const auto b1 = random_orthonormal_basis(1, 77);
  CHECK(std::abs(std::abs(b1.columns()(0, 0)) - 1.0) <= 1e-15);

  const auto b5 = random_orthonormal_basis(5, 7);
  const Matrix gram = b5.columns().transpose() * b5.columns();
  CHECK((gram - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(b5.columns() == random_orthonormal_basis(5, 7).columns());

  const auto p = random_orthonormal_basis(3, 1), q = random_orthonormal_basis(3, 2);
  CHECK((p.columns() - q.columns()).cwiseAbs().maxCoeff() > 1e-6);
}
