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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>

#include "dgs/harness.hpp"
#include "dgs/noise.hpp"
#include "dgs/optimizer.hpp"
#include "dgs/quadrature.hpp"
#include "dgs/smoothing.hpp"
#include "dgs/theory.hpp"

namespace py = pybind11;
using namespace dgs;

namespace {

// Python callables run with the GIL held; estimators call them serially.
Objective wrap(const py::function& f, Eigen::Index dimension) {
  return Objective(static_cast<int>(dimension), [f](const Vector& x) {
    py::gil_scoped_acquire gil;
    return f(x).cast<double>();
  });
}

DirectionBasis basis_or_identity(const std::optional<Matrix>& columns, Eigen::Index d) {
  return columns ? DirectionBasis::from_columns(*columns)
                 : DirectionBasis::identity(static_cast<int>(d));
}

py::dict point_to_dict(const harness::GridPointSummary& p) {
  py::dict out;
  out["sigma"] = p.sigma;
  out["trials"] = p.trials;
  out["trials_ok"] = p.trials_ok;
  out["invalid"] = p.invalid;
  out["mean_final_dist"] = p.mean_final_dist;
  out["std_final_dist"] = p.std_final_dist;
  out["mean_final_objective"] = p.mean_final_objective;
  out["mean_cosine"] = p.mean_cosine;
  out["evaluations"] = p.evaluations;
  out["iteration"] = p.curve_iteration;
  out["mean_dist"] = p.curve_mean_dist;
  out["geomean_dist"] = p.curve_geomean_dist;
  out["mean_cosine_curve"] = p.curve_mean_cosine;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gauss-Hermite directional Gaussian smoothing for noisy black-box minimization";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);
  py::register_exception<harness::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<harness::IoError>(m, "IoError", PyExc_OSError);

  // quadrature
  py::class_<GHRule>(m, "GHRule")
      .def_readonly("order", &GHRule::order)
      .def_readonly("nodes", &GHRule::nodes)
      .def_readonly("weights", &GHRule::weights)
      .def("__repr__", [](const GHRule& r) { return "GHRule(order=" + std::to_string(r.order) + ")"; });
  m.def("build_gh_rule", &build_gh_rule, py::arg("order"),
        "Nodes and weights for the weight exp(-v^2), order 1..64.");

  // smoothing
  m.def(
      "directional_derivative",
      [](const py::function& f, const Vector& x, const Vector& xi, double sigma, int order) {
        return directional_derivative_gh(wrap(f, x.size()), x, xi, sigma, build_gh_rule(order));
      },
      py::arg("f"), py::arg("x"), py::arg("xi"), py::arg("sigma"), py::arg("order") = 5);
  m.def(
      "dgs_gradient",
      [](const py::function& f, const Vector& x, double sigma, int order,
         const std::optional<Matrix>& basis) {
        const DGSConfig c{sigma, build_gh_rule(order), basis_or_identity(basis, x.size())};
        return dgs_gradient(wrap(f, x.size()), x, c);
      },
      py::arg("f"), py::arg("x"), py::arg("sigma"), py::arg("order") = 5,
      py::arg("basis") = py::none(),
      "DGS gradient; basis columns are the directions (identity when omitted).");
  m.def(
      "gs_gradient_mc",
      [](const py::function& f, const Vector& x, double sigma, int samples, std::uint64_t seed) {
        return gs_gradient_mc(wrap(f, x.size()), x, sigma, samples, seed);
      },
      py::arg("f"), py::arg("x"), py::arg("sigma"), py::arg("samples"), py::arg("seed") = 0);
  m.def(
      "random_orthonormal_basis",
      [](int d, std::uint64_t seed) { return random_orthonormal_basis(d, seed).columns(); },
      py::arg("dimension"), py::arg("seed"));

  // noise
  m.def(
      "periodic_noise",
      [](const Vector& x, double alpha, double amplitude) {
        return eval_periodic(PeriodicNoise{alpha, amplitude}, x);
      },
      py::arg("x"), py::arg("alpha"), py::arg("amplitude") = 1.0);
  m.def(
      "diminishing_noise",
      [](const Vector& x, double beta, double carrier, const std::optional<Vector>& minimizer) {
        return eval_diminishing(
            DiminishingNoise{beta, minimizer.value_or(Vector::Zero(x.size())), carrier}, x);
      },
      py::arg("x"), py::arg("beta") = 1.0, py::arg("carrier") = 1.0,
      py::arg("minimizer") = py::none());
  py::class_<BandlimitedNoise>(m, "BandlimitedNoise")
      .def(py::init([](int d, double alpha0, int k, std::uint64_t seed, double amplitude) {
             return sample_bandlimited(d, alpha0, k, seed, amplitude);
           }),
           py::arg("dimension"), py::arg("alpha0"), py::arg("num_components") = 20,
           py::arg("seed") = 0, py::arg("amplitude") = 1.0)
      .def_readonly("alpha0", &BandlimitedNoise::alpha0)
      .def_readonly("frequencies", &BandlimitedNoise::frequencies)
      .def("__call__", &eval_bandlimited);
  m.def("closed_form_smoothed_sine_derivative", &closed_form_smoothed_sine_derivative,
        py::arg("alpha"), py::arg("sigma"), py::arg("phase_point") = 0.0);

  // theory
  auto t = m.def_submodule("theory", "Bounds, radius choices and contraction rates");
  t.def("periodic_noise_grad_bound", &theory::periodic_noise_grad_bound, py::arg("gamma_n"),
        py::arg("n"), py::arg("alpha"), py::arg("sigma"), py::arg("d"));
  t.def("bandlimited_noise_grad_bound", &theory::bandlimited_noise_grad_bound, py::arg("gamma"),
        py::arg("alpha0"), py::arg("sigma"), py::arg("d"));
  t.def("diminishing_noise_grad_bound", &theory::diminishing_noise_grad_bound, py::arg("beta"),
        py::arg("sigma"), py::arg("dist"), py::arg("d"));
  t.def(
      "recommend_sigma_periodic",
      [](double gamma1, double alpha, double L, double tau) {
        const auto r = theory::recommend_sigma_periodic({L, tau}, gamma1, alpha);
        return py::make_tuple(r.sigma, theory::to_string(r.branch));
      },
      py::arg("gamma1"), py::arg("alpha"), py::arg("L") = 1.0, py::arg("tau") = 1.0);
  t.def(
      "recommend_sigma_bandlimited",
      [](double gamma, double alpha0, double L, double tau) {
        const auto r = theory::recommend_sigma_bandlimited({L, tau}, gamma, alpha0);
        return py::make_tuple(r.sigma, theory::to_string(r.branch));
      },
      py::arg("gamma"), py::arg("alpha0"), py::arg("L") = 1.0, py::arg("tau") = 1.0);
  t.def("quadrature_error_term", &theory::quadrature_error_term, py::arg("M"), py::arg("sigma"),
        py::arg("d"), py::arg("C") = 1.0);
  t.def(
      "delta_sigma_periodic",
      [](double gamma1, double alpha, double sigma, int d, int M, double L, double tau, double C) {
        return theory::delta_sigma_periodic({L, tau}, gamma1, alpha, sigma, d, M, C);
      },
      py::arg("gamma1"), py::arg("alpha"), py::arg("sigma"), py::arg("d"), py::arg("M"),
      py::arg("L") = 1.0, py::arg("tau") = 1.0, py::arg("C") = 1.0);
  t.def(
      "delta_sigma_bandlimited",
      [](double gamma, double alpha0, double sigma, int d, int M, double L, double tau, double C) {
        return theory::delta_sigma_bandlimited({L, tau}, gamma, alpha0, sigma, d, M, C);
      },
      py::arg("gamma"), py::arg("alpha0"), py::arg("sigma"), py::arg("d"), py::arg("M"),
      py::arg("L") = 1.0, py::arg("tau") = 1.0, py::arg("C") = 1.0);
  t.def(
      "contraction_rate",
      [](double lambda, double L, double tau) { return theory::contraction_rate({L, tau}, lambda); },
      py::arg("step_size"), py::arg("L") = 1.0, py::arg("tau") = 1.0);
  t.def(
      "theorem3_condition",
      [](double beta, int d, double L, double tau) {
        const auto c = theory::theorem3_condition(beta, {L, tau}, d);
        return py::make_tuple(c.lhs, c.rhs, c.holds);
      },
      py::arg("beta"), py::arg("d"), py::arg("L") = 1.0, py::arg("tau") = 1.0,
      "Returns (lhs, rhs, holds).");

  // harness
  m.def(
      "run_config",
      [](const std::string& text, int jobs, const std::optional<std::filesystem::path>& out) {
        const auto config = harness::parse_config(text);
        harness::SweepSummary s;
        {
          py::gil_scoped_release release;
          s = harness::run_experiment(config, jobs);
          if (out) harness::write_outputs(s, *out);
        }
        py::list points;
        for (const auto& p : s.points) points.append(point_to_dict(p));
        return points;
      },
      py::arg("config_json"), py::arg("jobs") = 1, py::arg("out_dir") = py::none(),
      "Run a sweep from JSON text; returns one dict per grid point and optionally writes CSV/SVG.");
}
