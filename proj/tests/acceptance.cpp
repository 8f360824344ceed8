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

// Acceptance run. One PASS/FAIL line per criterion; exit status is nonzero if
// any criterion fails. Tolerances are fixed here and never relaxed at runtime.
//
//   acceptance [--diagnostics]
//
// --diagnostics repeats the sweeps of criteria 6 and 7 with a 40-point rule
// and prints them as INFO lines; they do not affect the verdict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dgs/harness.hpp"
#include "dgs/noise.hpp"
#include "dgs/optimizer.hpp"
#include "dgs/quadrature.hpp"
#include "dgs/smoothing.hpp"
#include "dgs/theory.hpp"
#include "oracles.hpp"

using namespace dgs;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kQuadratureRelTol = 1e-10;   // criterion 1
constexpr double kQuadraticAbsTol = 1e-9;     // criterion 2
constexpr double kSineAbsTol = 1e-10;         // criterion 3
constexpr double kBoundSlack = 1.05;          // criterion 4
constexpr int kBoundPoints = 100;             // criterion 4
constexpr double kContraction = 0.96875;      // criterion 5
constexpr double kPeriodicGain = 5.0;         // criterion 6
constexpr double kArgminFactor = 2.0;         // criterion 7
constexpr double kPlateauRelChange = 0.01;    // criterion 8a
constexpr double kWindowR2 = 0.9;             // criterion 8b
constexpr double kFinalDist = 1e-2;           // criterion 8c
constexpr double kConstantPlateau = 1e-1;     // criterion 8c

int failures = 0;

void verdict(int id, const std::string& name, bool pass, const std::string& detail, double seconds) {
  std::printf("%s [%d] %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

void subline(bool pass, const std::string& detail) {
  std::printf("    %s %s\n", pass ? "ok  " : "fail", detail.c_str());
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------------

void criterion1() {
  Timer timer;
  double worst = 0.0;
  for (int M = 1; M <= 10; ++M) {
    const GHRule rule = build_gh_rule(M);
    for (int k = 0; k <= 2 * M - 1; ++k) {
      long double got = 0.0L;
      for (int m = 0; m < M; ++m) got += rule.weights[m] * std::pow((long double)rule.nodes[m], k);
      // int v^k e^{-v^2} dv = Gamma((k+1)/2) for even k, 0 for odd k.
      const long double exact = k % 2 ? 0.0L : std::tgamma((k + 1) / 2.0L);
      const long double err = k % 2 ? std::fabs(got) / std::tgamma((k + 2) / 2.0L)
                                    : std::fabs(got - exact) / exact;
      worst = std::max(worst, (double)err);
    }
  }
  verdict(1, "quadrature exactness", worst <= kQuadratureRelTol,
          fmt("worst relative error %.3g over M=1..10, k<=2M-1 (tol %.0e)", worst,
              kQuadratureRelTol),
          timer.seconds());
}

void criterion2() {
  Timer timer;
  const Objective f(5, [](const Vector& x) { return x.squaredNorm(); });
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<DirectionBasis> bases = {DirectionBasis::identity(5)};
  for (std::uint64_t s : {11ULL, 12ULL, 13ULL}) bases.push_back(random_orthonormal_basis(5, s));
  double worst = 0.0;
  for (int M : {2, 3, 5, 10}) {
    for (double sigma : {0.1, 1.0, 10.0}) {
      for (const auto& basis : bases) {
        Vector x(5);
        for (int i = 0; i < 5; ++i) x[i] = u(rng);
        const Vector g = dgs_gradient(f, x, DGSConfig{sigma, build_gh_rule(M), basis});
        worst = std::max(worst, (g - 2 * x).cwiseAbs().maxCoeff());
      }
    }
  }
  verdict(2, "estimator exactness on quadratics", worst <= kQuadraticAbsTol,
          fmt("worst componentwise error %.3g (tol %.0e)", worst, kQuadraticAbsTol),
          timer.seconds());
}

void criterion3() {
  Timer timer;
  const GHRule rule = build_gh_rule(20);
  const Vector x = Vector::Zero(1), e = Vector::Ones(1);
  double worst = 0.0;
  std::string worst_at;
  std::vector<std::string> lines;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const Objective f(1, [alpha](const Vector& y) { return std::sin(2 * kPi * alpha * y[0]); });
    for (double s : {0.25, 0.5, 1.0}) {
      const double got = directional_derivative_gh(f, x, e, s, rule);
      // Numerical integration, independent of the closed form.
      const double exact = oracle::smoothed_sine_derivative(alpha, s, 0.0);
      const double err = std::abs(got - exact);
      lines.push_back(fmt("alpha=%g sigma=%g: got %.6g, expected %.6g, |err| %.3g", alpha, s, got,
                          exact, err));
      if (err > worst) {
        worst = err;
        worst_at = fmt("alpha=%g sigma=%g", alpha, s);
      }
    }
  }
  const double at_period = oracle::smoothed_sine_derivative(1.0, 1.0, 0.0) / (2 * kPi);
  verdict(3, "sine attenuation", worst <= kSineAbsTol,
          fmt("M=20, worst |err| %.3g at %s (tol %.0e); attenuation at sigma=1/alpha %.4g",
              worst, worst_at.c_str(), kSineAbsTol, at_period),
          timer.seconds());
  for (const auto& l : lines) std::printf("    %s\n", l.c_str());
}

struct BoundCheck {
  std::string label;
  double worst_ratio = 0.0;
  bool pass() const { return worst_ratio <= kBoundSlack; }
};

void criterion4() {
  Timer timer;
  const int d = 5;
  const GHRule rule = build_gh_rule(40);
  const DirectionBasis I = DirectionBasis::identity(d);
  std::vector<BoundCheck> checks;
  auto sweep = [&](const std::string& label, const SyntheticObjective& s, double sigma, double lo,
                   double hi, std::uint64_t seed, const std::function<double(const Vector&)>& rhs) {
    const Objective noise = s.noise_only_objective();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    BoundCheck c{label};
    for (int k = 0; k < kBoundPoints; ++k) {
      Vector x(d);
      for (int i = 0; i < d; ++i) x[i] = u(rng);
      const double norm = dgs_gradient(noise, x, DGSConfig{sigma, rule, I}).norm();
      c.worst_ratio = std::max(c.worst_ratio, norm / rhs(x));
    }
    checks.push_back(c);
  };

  std::uint64_t seed = 400;
  for (double alpha : {1.0, 0.5, 0.25}) {
    const SyntheticObjective s(PhiKind::kQuadratic, d, PeriodicNoise{alpha, 1.0}, -20, 20);
    for (double m : {0.25, 0.5, 1.0, 2.0}) {
      const double sigma = m / alpha;
      const double bound = theory::periodic_noise_grad_bound(2 * kPi * alpha, 1, alpha, sigma, d);
      sweep(fmt("periodic alpha=%g sigma=%g/alpha", alpha, m), s, sigma, -20, 20, seed++,
            [bound](const Vector&) { return bound; });
    }
  }
  for (double alpha0 : {1.0, 0.5}) {
    const auto noise = sample_bandlimited(d, alpha0, 20, 7);
    const SyntheticObjective s(PhiKind::kQuadratic, d, noise, -20, 20);
    for (double m : {0.25, 0.5, 1.0, 2.0}) {
      const double sigma = m / alpha0;
      // A finite sum of sines has a line spectrum; this is the spectral level
      // that turns the bound into a sup bound on each smoothed cross-section.
      const double gamma = 2 * kPi * kPi * sigma * sigma * alpha0 * noise.amplitude;
      const double bound = theory::bandlimited_noise_grad_bound(gamma, alpha0, sigma, d);
      sweep(fmt("bandlimited alpha0=%g sigma=%g/alpha0", alpha0, m), s, sigma, -20, 20, seed++,
            [bound](const Vector&) { return bound; });
    }
  }
  for (double beta : {1.0, 0.3}) {
    const SyntheticObjective s(PhiKind::kQuadratic, d, DiminishingNoise{beta, Vector::Zero(d), 1.0},
                               -5, 5);
    for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
      sweep(fmt("diminishing beta=%g sigma=%g", beta, sigma), s, sigma, -5, 5, seed++,
            [&](const Vector& x) {
              return theory::diminishing_noise_grad_bound(beta, sigma, x.norm(), d);
            });
    }
  }
  bool all = true;
  double worst = 0.0;
  for (const auto& c : checks) {
    all = all && c.pass();
    worst = std::max(worst, c.worst_ratio);
  }
  verdict(4, "bound soundness", all,
          fmt("worst measured/bound ratio %.3g over %zu cases x %d points (slack %.2f)", worst,
              checks.size(), kBoundPoints, kBoundSlack),
          timer.seconds());
  for (const auto& c : checks) subline(c.pass(), fmt("%s: worst ratio %.3g", c.label.c_str(), c.worst_ratio));
}

void criterion5() {
  Timer timer;
  // phi = ||x||^2 has L = tau = 2.
  const double L = 2.0;
  const SyntheticObjective s(PhiKind::kQuadratic, 5, std::nullopt, -5, 5);
  const RunConfig cfg{.objective = s.objective(),
                      .rule = build_gh_rule(5),
                      .basis = std::nullopt,
                      .random_basis = false,
                      .step_size = 1.0 / (16 * L),
                      .max_iterations = 200,
                      .schedule = SigmaSchedule::constant(1.0),
                      .seed = 5,
                      .initial_point = InitialBox{-5, 5}};
  const auto rec = run(cfg);
  double worst = 0.0;
  int steps = 0;
  for (std::size_t t = 0; t + 1 < rec.iterations.size(); ++t) {
    const double r0 = rec.iterations[t].distance, r1 = rec.iterations[t + 1].distance;
    worst = std::max(worst, (r1 * r1) / (r0 * r0));
    ++steps;
  }
  verdict(5, "no-noise contraction", steps == 200 && worst <= kContraction,
          fmt("max r_{t+1}^2/r_t^2 = %.6g over %d steps (bound %.5f)", worst, steps, kContraction),
          timer.seconds());
}

harness::ExperimentConfig scaled(const std::string& preset, int order) {
  auto c = harness::load_config(fs::path(DGS_PRESET_DIR) / preset);
  c.trials = 10;
  c.max_iterations = 20000;
  c.sigma_grid = {0.01, 0.1, 1, 10, 50};
  c.quadrature_order = order;
  c.trace_stride = 100;
  return c;
}

double final_dist(const harness::GridPointSummary& p) {
  return p.invalid ? std::numeric_limits<double>::infinity() : p.mean_final_dist;
}

std::size_t argmin_dist(const harness::SweepSummary& s) {
  std::size_t best = 0;
  for (std::size_t g = 1; g < s.points.size(); ++g)
    if (final_dist(s.points[g]) < final_dist(s.points[best])) best = g;
  return best;
}

void print_sweep(const harness::SweepSummary& s, const char* prefix) {
  for (const auto& p : s.points) {
    std::printf("    %ssigma=%-5g mean final r %-12.5g mean cosine %-10.4g trials ok %d/%d\n",
                prefix, p.sigma, final_dist(p), p.mean_cosine, p.trials_ok, p.trials);
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// FNV-1a over every file in a directory, in name order.
std::uint64_t hash_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& f : files) {
    for (unsigned char ch : f.filename().string() + slurp(f)) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

void criteria6_9_10(int jobs) {
  Timer timer;
  const auto config = scaled("periodic_alpha1.json", 5);
  const auto sweep = harness::run_experiment(config, jobs);
  const double run_seconds = timer.seconds();
  const std::size_t at1 = 2, at001 = 0;
  const std::size_t best = argmin_dist(sweep);
  const double gain = final_dist(sweep.points[at001]) / final_dist(sweep.points[at1]);
  verdict(6, "periodic sweep", best == at1 && gain >= kPeriodicGain,
          fmt("argmin sigma=%g; r(0.01)/r(1) = %.3g (need argmin at 1 and ratio >= %.0f)",
              sweep.points[best].sigma, gain, kPeriodicGain),
          run_seconds);
  print_sweep(sweep, "");

  std::size_t best_cos = 0;
  for (std::size_t g = 1; g < sweep.points.size(); ++g)
    if (sweep.points[g].mean_cosine > sweep.points[best_cos].mean_cosine) best_cos = g;
  verdict(9, "cosine similarity sweep", best_cos == at1,
          fmt("argmax of iteration-averaged cosine at sigma=%g (need 1)",
              sweep.points[best_cos].sigma),
          0.0);

  Timer rerun;
  const fs::path base = fs::temp_directory_path() / "dgs_acceptance_determinism";
  fs::remove_all(base);
  harness::write_outputs(sweep, base / "a");
  harness::write_outputs(harness::run_experiment(config, jobs), base / "b");
  const std::uint64_t ha = hash_dir(base / "a"), hb = hash_dir(base / "b");
  verdict(10, "determinism", ha == hb,
          fmt("output hash %016llx vs %016llx", (unsigned long long)ha, (unsigned long long)hb),
          rerun.seconds());
  fs::remove_all(base);
}

void criterion7(int jobs) {
  Timer timer;
  const auto config = scaled("bandlimited_alpha0_1.json", 5);
  const auto sweep = harness::run_experiment(config, jobs);
  const auto& noise = std::get<BandlimitedNoise>(*config.noise);
  const double target = 1.0 / noise.alpha0;
  const double best = sweep.points[argmin_dist(sweep)].sigma * config.sigma_unit;
  const bool pass = best <= kArgminFactor * target && best >= target / kArgminFactor;
  verdict(7, "bandlimited sweep", pass,
          fmt("argmin sigma=%g, 1/alpha0=%g (need within factor %.0f)", best, target,
              kArgminFactor),
          timer.seconds());
  print_sweep(sweep, "");
}

double curve_at(const harness::GridPointSummary& p, long long t) {
  const auto it = std::find(p.curve_iteration.begin(), p.curve_iteration.end(), t);
  if (it == p.curve_iteration.end()) return std::numeric_limits<double>::quiet_NaN();
  return p.curve_mean_dist[static_cast<std::size_t>(it - p.curve_iteration.begin())];
}

void criterion8(int jobs) {
  Timer timer;
  auto config = harness::load_config(fs::path(DGS_PRESET_DIR) / "diminishing_two_phase.json");
  config.trials = 10;
  config.sigma_grid = {1.0};
  config.trace_stride = 1;
  const auto two_phase = harness::run_experiment(config, jobs).points.at(0);
  config.schedule.kind = harness::ScheduleKind::kConstant;
  const auto constant = harness::run_experiment(config, jobs).points.at(0);

  const double r4000 = curve_at(two_phase, 4000), r4999 = curve_at(two_phase, 4999);
  const double plateau_change = std::abs(r4999 - r4000) / r4000;
  const bool a = plateau_change <= kPlateauRelChange;

  bool b = true;
  double worst_r2 = 1.0, max_slope = -INFINITY, min_slope = INFINITY;
  long long first_bad = -1, last_bad = -1;
  for (long long start = 5000; start + 2000 <= config.max_iterations; start += 500) {
    std::vector<double> ts, ys;
    for (long long t = start; t <= start + 2000; ++t) {
      ts.push_back(static_cast<double>(t));
      ys.push_back(std::log(curve_at(two_phase, t)));
    }
    const auto fit = oracle::fit_line(ts, ys);
    if (!(fit.slope < 0 && fit.r2 >= kWindowR2)) {
      b = false;
      if (first_bad < 0) first_bad = start;
      last_bad = start;
    }
    worst_r2 = std::min(worst_r2, fit.r2);
    max_slope = std::max(max_slope, fit.slope);
    min_slope = std::min(min_slope, fit.slope);
  }

  const double final_two = two_phase.mean_final_dist, final_const = constant.mean_final_dist;
  const bool c = !two_phase.invalid && final_two < kFinalDist && final_const >= kConstantPlateau;
  verdict(8, "shrinking-radius convergence", a && b && c,
          fmt("plateau change %.3g, window slopes [%.3g, %.3g] min R2 %.4g, final r %.3g vs "
              "constant-sigma %.3g",
              plateau_change, min_slope, max_slope, worst_r2, final_two, final_const),
          timer.seconds());
  subline(a, fmt("(a) |r(4999)-r(4000)|/r(4000) = %.3g <= %.2f", plateau_change, kPlateauRelChange));
  subline(b, b ? fmt("(b) every 2000-iteration window after 5000: slope < 0, R2 >= %.1f", kWindowR2)
               : fmt("(b) windows starting %lld..%lld miss slope < 0, R2 >= %.1f", first_bad,
                     last_bad, kWindowR2));
  subline(c, fmt("(c) final r %.3g < %.0e and constant-sigma final %.3g >= %.0e", final_two,
                 kFinalDist, final_const, kConstantPlateau));
}

void diagnostics(int jobs) {
  for (const char* preset : {"periodic_alpha1.json", "bandlimited_alpha0_1.json"}) {
    Timer timer;
    const auto sweep = harness::run_experiment(scaled(preset, 40), jobs);
    std::printf("INFO %s with a 40-point rule (%.1fs)\n", preset, timer.seconds());
    print_sweep(sweep, "");
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool diag = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--diagnostics") {
      diag = true;
    } else {
      std::fprintf(stderr, "usage: acceptance [--diagnostics]\n");
      return 1;
    }
  }
  const int jobs = std::max(1u, std::thread::hardware_concurrency());
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criteria6_9_10(jobs);
  criterion7(jobs);
  criterion8(jobs);
  if (diag) diagnostics(jobs);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
