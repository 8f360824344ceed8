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

#ifndef DGS_HARNESS_HPP_
#define DGS_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgs/noise.hpp"
#include "dgs/optimizer.hpp"

namespace dgs::harness {

/// Malformed or invalid experiment configuration. Exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure, message carries the path. Exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScheduleKind { kConstant, kTwoPhase, kTheorem3 };

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::kConstant;
  int switch_iteration = 5000;
  double contraction = 0.999;
  // theorem3 only; beta comes from the diminishing noise.
  double L = 2.0;
  double tau = 2.0;
  double r0_bound = 1.0;
};

struct ExperimentConfig {
  std::string experiment = "custom";  // periodic-sweep | bandlimited-sweep |
                                      // diminishing-two-phase | custom
  int dimension = 5;
  PhiKind phi = PhiKind::kPowerSumSqrt;
  double box_lower = -20.0;
  double box_upper = 20.0;
  std::optional<NoiseModel> noise;
  double step_size = 1e-3;
  /// Radii are sigma_grid[g] * sigma_unit; strictly increasing.
  std::vector<double> sigma_grid;
  double sigma_unit = 1.0;  // defaults to 1/alpha or 1/alpha0
  int trials = 20;
  long long max_iterations = 1000;
  int quadrature_order = 5;
  ScheduleSpec schedule;
  bool random_basis = false;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  /// Trace rows and curve points are kept every trace_stride iterations;
  /// the final iterate is always kept.
  int trace_stride = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses and validates. Unknown keys are rejected. Parse errors report
/// line and column.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// splitmix64(splitmix64(splitmix64(master) ^ grid_index) ^ trial).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t grid_index, std::uint64_t trial);

/// Schedule for grid point g (radius sigma_grid[g] * sigma_unit).
SigmaSchedule schedule_for(const ExperimentConfig& config, std::size_t grid_index);

struct TrialTrace {
  int trial = 0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::kCompleted;
  std::string message;
  std::vector<long long> iteration;
  std::vector<double> sigma;
  std::vector<double> dist;
  std::vector<double> objective;
  std::vector<double> cosine;
  double final_dist = 0.0;
  double final_objective = 0.0;
  double mean_cosine = 0.0;  // over every iteration with an estimate
  long long evaluations = 0;
};

struct GridPointSummary {
  double sigma = 0.0;  // initial radius
  int trials = 0;
  int trials_ok = 0;   // not diverged
  bool invalid = false;  // every trial diverged
  double mean_final_dist = 0.0;
  double std_final_dist = 0.0;  // sample standard deviation; 0 for one trial
  double mean_final_objective = 0.0;
  double mean_cosine = 0.0;     // mean over trials of iteration-averaged cosine
  long long evaluations = 0;    // summed over all trials
  std::vector<long long> curve_iteration;
  std::vector<double> curve_mean_dist;
  std::vector<double> curve_geomean_dist;
  std::vector<double> curve_mean_cosine;
  std::vector<TrialTrace> traces;  // sorted by trial index
};

struct SweepSummary {
  std::string experiment;
  std::vector<GridPointSummary> points;

  bool any_point_invalid() const;
};

/// Runs every (grid point, trial) pair on up to `jobs` threads. Results do
/// not depend on jobs or scheduling order.
SweepSummary run_experiment(const ExperimentConfig& config, int jobs = 1);

/// Summary table: sigma,mean_final_dist,std_final_dist,mean_final_objective,trials_ok
void emit_csv(const SweepSummary& summary, const std::filesystem::path& path);
/// Per-trial traces of one grid point: trial,iteration,sigma_t,dist,objective,cosine_sim
void emit_trace_csv(const GridPointSummary& point, const std::filesystem::path& path);
/// Aggregated curves: sigma,iteration,mean_dist,geomean_dist,mean_cosine
void emit_curves_csv(const SweepSummary& summary, const std::filesystem::path& path);

/// summary.csv, curves.csv, trace_<g>.csv and the three SVG plots.
void write_outputs(const SweepSummary& summary, const std::filesystem::path& dir);

enum class PlotKind { kConvergenceCurves, kCosineVsIteration, kFinalDistVsSigma };

PlotKind parse_plot_kind(const std::string& name);
std::string to_string(PlotKind kind);

/// Self-contained SVG. Throws std::invalid_argument on an empty summary.
std::string render_plot(const SweepSummary& summary, PlotKind kind);
void emit_plot(const SweepSummary& summary, PlotKind kind, const std::filesystem::path& path);

/// Rebuilds a summary from summary.csv and, when present, the curves.csv
/// next to it.
SweepSummary read_summary(const std::filesystem::path& summary_csv);

/// printf "%.17g".
std::string format_double(double value);

}  // namespace dgs::harness

#endif  // DGS_HARNESS_HPP_
