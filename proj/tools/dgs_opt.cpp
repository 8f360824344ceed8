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

// dgs-opt: run smoothing-radius sweeps, list presets, plot summaries and
// print theoretical bounds.
//
// Exit codes: 0 success, 1 config or usage error, 2 every trial diverged at
// some grid point, 3 I/O error.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgs/harness.hpp"
#include "dgs/theory.hpp"

namespace fs = std::filesystem;
using namespace dgs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitIo = 3;

fs::path preset_dir() {
  if (const char* env = std::getenv("DGS_PRESETS")) return env;
#ifdef DGS_PRESET_DIR
  if (fs::is_directory(DGS_PRESET_DIR)) return DGS_PRESET_DIR;
#endif
  return "presets";
}

void print_value(const char* key, double value) {
  std::printf("%-22s %s\n", key, harness::format_double(value).c_str());
}

int cmd_run(const std::string& config_path, int jobs, const std::string& out,
            const std::string& seed) {
  harness::ExperimentConfig config;
  try {
    config = harness::load_config(config_path);
    if (!seed.empty()) {
      std::size_t used = 0;
      config.seed = std::stoull(seed, &used);
      if (used != seed.size()) throw std::invalid_argument(seed);
    }
  } catch (const harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception&) {
    std::cerr << "config error: --seed expects a nonnegative integer, got \"" << seed << "\"\n";
    return kExitConfig;
  }
  const fs::path dir = out.empty() ? fs::path(config.output_dir) : fs::path(out);

  harness::SweepSummary summary;
  try {
    summary = harness::run_experiment(config, jobs);
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    harness::write_outputs(summary, dir);
  } catch (const harness::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }

  std::printf("%-12s %-24s %-24s %s\n", "sigma", "mean_final_dist", "mean_cosine", "trials_ok");
  for (const auto& p : summary.points) {
    std::printf("%-12g %-24.17g %-24.17g %d/%d\n", p.sigma, p.mean_final_dist, p.mean_cosine,
                p.trials_ok, p.trials);
  }
  std::printf("outputs written to %s\n", dir.string().c_str());
  if (summary.any_point_invalid()) {
    std::cerr << "error: every trial diverged at one or more grid points\n";
    return kExitDiverged;
  }
  return kExitOk;
}

int cmd_presets_list() {
  const fs::path dir = preset_dir();
  if (!fs::is_directory(dir)) {
    std::cerr << "I/O error: preset directory " << dir << " not found\n";
    return kExitIo;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  int status = kExitOk;
  for (const auto& f : files) {
    try {
      const auto c = harness::load_config(f);
      std::printf("%-32s %-24s step=%g iters=%lld trials=%d grid=%zu\n",
                  f.filename().string().c_str(), c.experiment.c_str(), c.step_size,
                  c.max_iterations, c.trials, c.sigma_grid.size());
    } catch (const harness::ConfigError& e) {
      std::fprintf(stderr, "%s: invalid preset: %s\n", f.string().c_str(), e.what());
      status = kExitConfig;
    }
  }
  return status;
}

int cmd_plot(const std::string& summary_path, const std::string& kind, const std::string& out) {
  harness::PlotKind k;
  try {
    k = harness::parse_plot_kind(kind);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const auto summary = harness::read_summary(summary_path);
    harness::emit_plot(summary, k, out);
  } catch (const harness::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

struct BoundsArgs {
  std::string model;
  double L = 1.0, tau = 1.0, gamma = 0.0, alpha = 1.0, alpha0 = 1.0, beta = 1.0;
  double sigma = 0.0, dist = 1.0, C = 1.0, lambda = 0.0;
  int d = 5, M = 5, n = 1;
};

int cmd_bounds(const BoundsArgs& a) {
  try {
    const theory::ConvexityConstants c{a.L, a.tau};
    c.validate();
    theory::BoundReport r;
    if (a.model == "periodic") {
      // Default gamma_1 is the slope bound 2 pi alpha of a unit sine.
      const double g = a.gamma > 0.0 ? a.gamma : 2.0 * std::numbers::pi * a.alpha;
      if (a.n != 1) {
        const double s = a.sigma > 0.0 ? a.sigma : 1.0 / a.alpha;
        print_value("noise_gradient_bound", theory::periodic_noise_grad_bound(g, a.n, a.alpha, s, a.d));
        return kExitOk;
      }
      r = theory::report_periodic(c, g, a.alpha, a.sigma, a.d, a.M, a.C);
      print_value("delta_sigma_bound", theory::delta_sigma_periodic_upper_bound(c, g, a.alpha, a.d, a.M, a.C));
    } else if (a.model == "bandlimited") {
      const double g = a.gamma > 0.0 ? a.gamma : 1.0;
      r = theory::report_bandlimited(c, g, a.alpha0, a.sigma, a.d, a.M, a.C);
      print_value("delta_sigma_bound", theory::delta_sigma_bandlimited_upper_bound(c, g, a.alpha0, a.d, a.M, a.C));
    } else if (a.model == "diminishing") {
      r = theory::report_diminishing(a.beta, a.dist, a.sigma, a.d);
      const auto cond = theory::theorem3_condition(a.beta, c, a.d);
      print_value("condition_lhs", cond.lhs);
      print_value("condition_rhs", cond.rhs);
      std::printf("%-22s %s\n", "condition_holds", cond.holds ? "true" : "false");
      print_value("shrink_rate", theorem3_rate({a.beta, a.L, a.tau, a.dist, a.d}));
    } else {
      std::cerr << "error: --model must be periodic, bandlimited or diminishing\n";
      return kExitConfig;
    }
    print_value("noise_gradient_bound", r.noise_gradient_bound);
    if (a.model != "diminishing") print_value("delta_sigma", r.delta_sigma);
    print_value("recommended_sigma", r.recommended_sigma);
    std::printf("%-22s %s\n", "branch", theory::to_string(r.branch).c_str());
    if (a.lambda > 0.0) print_value("contraction_rate", theory::contraction_rate(c, a.lambda));
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional Gaussian smoothing optimizer: sweeps, plots and bounds"};
  app.require_subcommand(1);

  std::string config_path, out_dir, seed;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run an experiment config and write CSV/SVG outputs");
  run->add_option("config", config_path, "Experiment JSON")->required();
  run->add_option("--jobs,-j", jobs, "Concurrent trials")->check(CLI::PositiveNumber);
  run->add_option("--out,-o", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--seed", seed, "Master seed (overrides seed)");

  auto* presets = app.add_subcommand("presets", "Shipped experiment presets");
  presets->require_subcommand(1);
  auto* presets_list = presets->add_subcommand("list", "List presets");

  std::string summary_path, kind, plot_out;
  auto* plot = app.add_subcommand("plot", "Render an SVG from summary.csv (and curves.csv)");
  plot->add_option("summary", summary_path, "summary.csv")->required();
  plot->add_option("--kind", kind, "convergence-curves | cosine-vs-iteration | final-dist-vs-sigma")
      ->required();
  plot->add_option("--out", plot_out, "Output SVG")->required();

  BoundsArgs b;
  auto* bounds = app.add_subcommand("bounds", "Print theoretical bounds and radius choices");
  bounds->add_option("--model", b.model, "periodic | bandlimited | diminishing")->required();
  bounds->add_option("--L", b.L, "Lipschitz constant of grad phi");
  bounds->add_option("--tau", b.tau, "Strong convexity parameter");
  bounds->add_option("--gamma", b.gamma, "Derivative bound (periodic default 2 pi alpha, bandlimited 1)");
  bounds->add_option("--alpha", b.alpha, "Periodic noise frequency");
  bounds->add_option("--alpha0", b.alpha0, "Lowest bandlimited frequency");
  bounds->add_option("--beta", b.beta, "Diminishing envelope curvature");
  bounds->add_option("--sigma", b.sigma, "Radius; omitted selects the recommended one");
  bounds->add_option("--dist", b.dist, "Distance to the minimizer (diminishing)");
  bounds->add_option("--d", b.d, "Dimension");
  bounds->add_option("--M", b.M, "Quadrature order");
  bounds->add_option("--C", b.C, "Quadrature error constant");
  bounds->add_option("--n", b.n, "Derivative order of the periodic bound");
  bounds->add_option("--lambda", b.lambda, "Step size for the contraction rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(config_path, jobs, out_dir, seed);
  if (*presets_list) return cmd_presets_list();
  if (*plot) return cmd_plot(summary_path, kind, plot_out);
  if (*bounds) return cmd_bounds(b);
  return kExitConfig;
}
