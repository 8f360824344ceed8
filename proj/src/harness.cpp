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

#include "dgs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace dgs::harness {
namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("invalid config field \"" + field + "\": " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(prefix.empty() ? "<root>" : prefix, "expected an object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) fail(join(prefix, item.key()), "unknown key");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& prefix, const char* key) {
  const json* v = find(obj, key);
  if (!v) fail(join(prefix, key), "missing required field");
  return *v;
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

long long as_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() >
                                    static_cast<std::uint64_t>(std::numeric_limits<long long>::max())) {
    fail(field, "integer out of range");
  }
  return v.get<long long>();
}

int as_int(const json& v, const std::string& field) {
  const long long value = as_integer(v, field);
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    fail(field, "integer out of range");
  }
  return static_cast<int>(value);
}

std::uint64_t as_seed(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) fail(field, "seed must be nonnegative");
  fail(field, "expected an integer");
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) fail(field, "expected true or false");
  return v.get<bool>();
}

std::string parse_error_message(const std::string& text, const json::parse_error& e) {
  // e.byte is 1-based and points just past the offending character.
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::string detail = e.what();
  if (auto pos = detail.find(": "); pos != std::string::npos) detail = detail.substr(pos + 2);
  return "JSON parse error at line " + std::to_string(line) + ", column " +
         std::to_string(column) + ": " + detail;
}

void parse_objective(const json& obj, ExperimentConfig& c) {
  reject_unknown(obj, "objective", {"phi", "box"});
  const std::string phi = as_string(require(obj, "objective", "phi"), "objective.phi");
  if (phi == "power-sum-sqrt") {
    c.phi = PhiKind::kPowerSumSqrt;
  } else if (phi == "quadratic") {
    c.phi = PhiKind::kQuadratic;
  } else {
    fail("objective.phi", "expected \"power-sum-sqrt\" or \"quadratic\", got \"" + phi + "\"");
  }
  const json& box = require(obj, "objective", "box");
  if (!box.is_array() || box.size() != 2) fail("objective.box", "expected [lower, upper]");
  c.box_lower = as_number(box[0], "objective.box");
  c.box_upper = as_number(box[1], "objective.box");
}

void parse_noise(const json& obj, ExperimentConfig& c, bool& unit_from_noise, double& unit) {
  const std::string model = as_string(require(obj, "noise", "model"), "noise.model");
  auto number_or = [&](const char* key, double fallback) {
    const json* v = find(obj, key);
    return v ? as_number(*v, join("noise", key)) : fallback;
  };
  if (model == "none") {
    reject_unknown(obj, "noise", {"model"});
    c.noise.reset();
  } else if (model == "periodic") {
    reject_unknown(obj, "noise", {"model", "alpha", "amplitude"});
    PeriodicNoise n;
    n.alpha = as_number(require(obj, "noise", "alpha"), "noise.alpha");
    n.amplitude = number_or("amplitude", 1.0);
    if (!(n.alpha > 0.0)) fail("noise.alpha", "must be positive");
    unit_from_noise = true;
    unit = 1.0 / n.alpha;
    c.noise = n;
  } else if (model == "bandlimited") {
    reject_unknown(obj, "noise", {"model", "alpha0", "num_components", "seed", "amplitude"});
    const double alpha0 = as_number(require(obj, "noise", "alpha0"), "noise.alpha0");
    if (!(alpha0 > 0.0)) fail("noise.alpha0", "must be positive");
    int k = 20;
    if (const json* v = find(obj, "num_components")) k = as_int(*v, "noise.num_components");
    if (k < 1) fail("noise.num_components", "must be >= 1");
    std::uint64_t seed = 0;
    if (const json* v = find(obj, "seed")) seed = as_seed(*v, "noise.seed");
    if (c.dimension < 1) fail("dimension", "must be >= 1");
    c.noise = sample_bandlimited(c.dimension, alpha0, k, seed, number_or("amplitude", 1.0));
    unit_from_noise = true;
    unit = 1.0 / alpha0;
  } else if (model == "diminishing") {
    reject_unknown(obj, "noise", {"model", "beta", "carrier"});
    DiminishingNoise n;
    n.beta = number_or("beta", 1.0);
    n.carrier = number_or("carrier", 1.0);
    if (!(n.beta > 0.0)) fail("noise.beta", "must be positive");
    if (!(n.carrier > 0.0)) fail("noise.carrier", "must be positive");
    c.noise = n;
  } else {
    fail("noise.model", "expected none, periodic, bandlimited or diminishing; got \"" + model +
                            "\"");
  }
}

void parse_schedule(const json& obj, ScheduleSpec& s) {
  const std::string kind = as_string(require(obj, "schedule", "kind"), "schedule.kind");
  if (kind == "constant") {
    reject_unknown(obj, "schedule", {"kind"});
    s.kind = ScheduleKind::kConstant;
  } else if (kind == "two-phase-decay" || kind == "two-phase") {
    reject_unknown(obj, "schedule", {"kind", "switch_iteration", "contraction"});
    s.kind = ScheduleKind::kTwoPhase;
    if (const json* v = find(obj, "switch_iteration")) {
      s.switch_iteration = as_int(*v, "schedule.switch_iteration");
    }
    if (const json* v = find(obj, "contraction")) s.contraction = as_number(*v, "schedule.contraction");
  } else if (kind == "theorem3") {
    reject_unknown(obj, "schedule", {"kind", "L", "tau", "r0_bound"});
    s.kind = ScheduleKind::kTheorem3;
    s.L = as_number(require(obj, "schedule", "L"), "schedule.L");
    s.tau = as_number(require(obj, "schedule", "tau"), "schedule.tau");
    s.r0_bound = as_number(require(obj, "schedule", "r0_bound"), "schedule.r0_bound");
  } else {
    fail("schedule.kind", "expected constant, two-phase-decay or theorem3; got \"" + kind + "\"");
  }
}

Theorem3Parameters theorem3_params(const ExperimentConfig& c) {
  const auto& n = std::get<DiminishingNoise>(*c.noise);
  return {n.beta, c.schedule.L, c.schedule.tau, c.schedule.r0_bound, c.dimension};
}

// ---- aggregation -----------------------------------------------------------

TrialTrace compress(const TrialRecord& record, int trial, std::uint64_t seed, int stride) {
  TrialTrace t;
  t.trial = trial;
  t.seed = seed;
  t.status = record.status;
  t.message = record.message;
  t.evaluations = record.evaluations;
  const auto& its = record.iterations;
  double cos_sum = 0.0;
  long long cos_count = 0;
  for (std::size_t i = 0; i < its.size(); ++i) {
    if (std::isfinite(its[i].cosine)) {
      cos_sum += its[i].cosine;
      ++cos_count;
    }
    if (i % static_cast<std::size_t>(stride) != 0 && i + 1 != its.size()) continue;
    t.iteration.push_back(static_cast<long long>(i));
    t.sigma.push_back(its[i].sigma);
    t.dist.push_back(its[i].distance);
    t.objective.push_back(its[i].objective);
    t.cosine.push_back(its[i].cosine);
  }
  t.final_dist = its.back().distance;
  t.final_objective = its.back().objective;
  t.mean_cosine = cos_count ? cos_sum / static_cast<double>(cos_count) : kNaN;
  return t;
}

void aggregate(GridPointSummary& p) {
  std::vector<const TrialTrace*> ok;
  for (const auto& t : p.traces) {
    p.evaluations += t.evaluations;
    if (t.status != RunStatus::kDiverged) ok.push_back(&t);
  }
  p.trials = static_cast<int>(p.traces.size());
  p.trials_ok = static_cast<int>(ok.size());
  p.invalid = ok.empty();
  if (p.invalid) {
    p.mean_final_dist = p.std_final_dist = p.mean_final_objective = p.mean_cosine = kNaN;
    return;
  }
  const double n = static_cast<double>(ok.size());
  double sum = 0.0, obj = 0.0, cos = 0.0;
  for (const auto* t : ok) {
    sum += t->final_dist;
    obj += t->final_objective;
    cos += t->mean_cosine;
  }
  p.mean_final_dist = sum / n;
  p.mean_final_objective = obj / n;
  p.mean_cosine = cos / n;
  double ss = 0.0;
  for (const auto* t : ok) ss += (t->final_dist - p.mean_final_dist) * (t->final_dist - p.mean_final_dist);
  p.std_final_dist = ok.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  // Trials at one grid point share the schedule, so traces differ in length
  // only on early stops; shorter ones are held at their last value.
  const TrialTrace* longest = ok.front();
  for (const auto* t : ok) {
    if (t->iteration.size() > longest->iteration.size()) longest = t;
  }
  const std::size_t len = longest->iteration.size();
  p.curve_iteration = longest->iteration;
  p.curve_mean_dist.assign(len, 0.0);
  p.curve_geomean_dist.assign(len, 0.0);
  p.curve_mean_cosine.assign(len, kNaN);
  for (std::size_t k = 0; k < len; ++k) {
    double s = 0.0, logs = 0.0, c = 0.0;
    int cn = 0;
    for (const auto* t : ok) {
      const std::size_t j = std::min(k, t->iteration.size() - 1);
      s += t->dist[j];
      logs += std::log(t->dist[j]);
      if (j == k && std::isfinite(t->cosine[j])) {
        c += t->cosine[j];
        ++cn;
      }
    }
    p.curve_mean_dist[k] = s / n;
    p.curve_geomean_dist[k] = std::exp(logs / n);
    if (cn) p.curve_mean_cosine[k] = c / cn;
  }
}

// ---- files -----------------------------------------------------------------

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, const std::filesystem::path& path) {
  if (cell.empty()) return kNaN;
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    // stod rejects "nan"/"inf" on some platforms; accept the %g spellings.
    if (cell == "nan" || cell == "-nan") return kNaN;
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    throw IoError("malformed number \"" + cell + "\" in " + path.string());
  }
}

// ---- svg -------------------------------------------------------------------

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // already in plot coordinates
  bool markers = false;
};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, bool log_x, bool log_y,
                       const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x0 <= x1) || !(y0 <= y1)) throw std::invalid_argument("no plottable data");
  if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  if (log_y) { y0 = std::floor(y0); y1 = std::ceil(y1); }

  constexpr double W = 860, H = 520, L = 80, R = 180, T = 40, B = 60;
  const double pw = W - L - R, ph = H - T - B;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return T + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << L + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << xml_escape(title) << "</text>\n"
    << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto tick_label = [](double v, bool log) {
    return log ? "1e" + fmt("%.0f", v) : fmt("%g", v);
  };
  // y ticks: decades on log axes, 5 intervals otherwise
  std::vector<double> yt;
  if (log_y) {
    const double step = std::max(1.0, std::ceil((y1 - y0) / 10.0));
    for (double v = y0; v <= y1 + 1e-9; v += step) yt.push_back(v);
  } else {
    for (int i = 0; i <= 5; ++i) yt.push_back(y0 + (y1 - y0) * i / 5.0);
  }
  for (double v : yt) {
    o << "<line x1=\"" << L << "\" y1=\"" << sy(v) << "\" x2=\"" << L + pw << "\" y2=\"" << sy(v)
      << "\" stroke=\"#dddddd\"/>\n"
      << "<text x=\"" << L - 6 << "\" y=\"" << sy(v) + 4 << "\" text-anchor=\"end\">"
      << tick_label(v, log_y) << "</text>\n";
  }
  std::vector<double> xt;
  if (log_x) {
    for (double v = std::ceil(x0); v <= std::floor(x1) + 1e-9; v += 1.0) xt.push_back(v);
  } else {
    for (int i = 0; i <= 5; ++i) xt.push_back(x0 + (x1 - x0) * i / 5.0);
  }
  for (double v : xt) {
    o << "<line x1=\"" << sx(v) << "\" y1=\"" << T + ph << "\" x2=\"" << sx(v) << "\" y2=\""
      << T + ph + 5 << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << sx(v) << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">"
      << tick_label(v, log_x) << "</text>\n";
  }
  o << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">"
    << xml_escape(x_label) << "</text>\n"
    << "<text transform=\"translate(20," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      if (k) o << ' ';
      o << fmt("%.2f", sx(s.points[k].first)) << ',' << fmt("%.2f", sy(s.points[k].second));
    }
    o << "\"/>\n";
    if (s.markers) {
      for (auto [x, y] : s.points) {
        o << "<circle cx=\"" << fmt("%.2f", sx(x)) << "\" cy=\"" << fmt("%.2f", sy(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    const double ly = T + 14 + 18.0 * static_cast<double>(i);
    o << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 36
      << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << L + pw + 42 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

// ---- config ----------------------------------------------------------------

void ExperimentConfig::validate() const {
  static const std::set<std::string> experiments = {"periodic-sweep", "bandlimited-sweep",
                                                    "diminishing-two-phase", "custom"};
  if (!experiments.count(experiment)) fail("experiment", "unknown experiment id \"" + experiment + "\"");
  if (dimension < 1) fail("dimension", "must be >= 1");
  if (!(box_lower < box_upper)) fail("objective.box", "lower bound must be below upper bound");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) fail("step_size", "must be positive");
  if (sigma_grid.empty()) fail("sigma_grid", "must not be empty");
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > 0.0) || !std::isfinite(sigma_grid[i])) fail("sigma_grid", "values must be positive");
    if (i && !(sigma_grid[i] > sigma_grid[i - 1])) fail("sigma_grid", "values must be strictly increasing");
  }
  if (!(sigma_unit > 0.0) || !std::isfinite(sigma_unit)) fail("sigma_unit", "must be positive");
  if (trials < 1) fail("trials", "must be >= 1");
  if (max_iterations < 1) fail("max_iterations", "must be >= 1");
  if (quadrature_order < 1 || quadrature_order > kMaxGaussHermiteOrder) {
    fail("quadrature_order", "must lie in [1, " + std::to_string(kMaxGaussHermiteOrder) + "]");
  }
  if (trace_stride < 1) fail("trace_stride", "must be >= 1");
  if (output_dir.empty()) fail("output_dir", "must not be empty");
  if (noise) {
    if (auto* b = std::get_if<BandlimitedNoise>(&*noise); b && b->frequencies.rows() != dimension) {
      fail("noise", "bandlimited frequencies were sampled for another dimension");
    }
  }
  switch (schedule.kind) {
    case ScheduleKind::kConstant:
      break;
    case ScheduleKind::kTwoPhase:
      if (schedule.switch_iteration < 0) fail("schedule.switch_iteration", "must be >= 0");
      if (!(schedule.contraction > 0.0 && schedule.contraction < 1.0)) {
        fail("schedule.contraction", "must lie in (0, 1)");
      }
      break;
    case ScheduleKind::kTheorem3:
      if (!noise || !std::holds_alternative<DiminishingNoise>(*noise)) {
        fail("schedule.kind", "theorem3 requires diminishing noise");
      }
      if (!(schedule.L > 0.0)) fail("schedule.L", "must be positive");
      if (!(schedule.tau > 0.0) || schedule.tau > schedule.L) fail("schedule.tau", "must lie in (0, L]");
      if (!(schedule.r0_bound > 0.0)) fail("schedule.r0_bound", "must be positive");
      if (!(theorem3_rate(theorem3_params(*this)) < 1.0)) {
        fail("schedule", "theorem3 rate is not below 1 for these constants; radius would grow");
      }
      break;
  }
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(parse_error_message(text, e));
  }
  reject_unknown(root, "", {"experiment", "dimension", "objective", "noise", "step_size",
                            "sigma_grid", "sigma_unit", "trials", "max_iterations",
                            "quadrature_order", "schedule", "random_basis", "seed",
                            "output_dir", "trace_stride"});
  ExperimentConfig c;
  if (const json* v = find(root, "experiment")) c.experiment = as_string(*v, "experiment");
  if (const json* v = find(root, "dimension")) c.dimension = as_int(*v, "dimension");
  if (c.dimension < 1) fail("dimension", "must be >= 1");
  parse_objective(require(root, "", "objective"), c);

  bool unit_from_noise = false;
  double unit = 1.0;
  if (const json* v = find(root, "noise")) parse_noise(*v, c, unit_from_noise, unit);
  c.sigma_unit = unit;
  if (const json* v = find(root, "sigma_unit")) c.sigma_unit = as_number(*v, "sigma_unit");

  c.step_size = as_number(require(root, "", "step_size"), "step_size");
  const json& grid = require(root, "", "sigma_grid");
  if (!grid.is_array()) fail("sigma_grid", "expected an array of numbers");
  for (const auto& g : grid) c.sigma_grid.push_back(as_number(g, "sigma_grid"));
  c.trials = as_int(require(root, "", "trials"), "trials");
  c.max_iterations = as_integer(require(root, "", "max_iterations"), "max_iterations");
  if (const json* v = find(root, "quadrature_order")) c.quadrature_order = as_int(*v, "quadrature_order");
  if (const json* v = find(root, "schedule")) parse_schedule(*v, c.schedule);
  if (const json* v = find(root, "random_basis")) c.random_basis = as_bool(*v, "random_basis");
  if (const json* v = find(root, "seed")) c.seed = as_seed(*v, "seed");
  if (const json* v = find(root, "output_dir")) c.output_dir = as_string(*v, "output_dir");
  if (const json* v = find(root, "trace_stride")) c.trace_stride = as_int(*v, "trace_stride");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// ---- running ---------------------------------------------------------------

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t grid_index, std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(master) ^ grid_index) ^ trial);
}

SigmaSchedule schedule_for(const ExperimentConfig& config, std::size_t grid_index) {
  const double multiplier = config.sigma_grid.at(grid_index);
  const double sigma = multiplier * config.sigma_unit;
  switch (config.schedule.kind) {
    case ScheduleKind::kConstant:
      return SigmaSchedule::constant(sigma);
    case ScheduleKind::kTwoPhase:
      return SigmaSchedule::two_phase(sigma, config.schedule.switch_iteration,
                                      config.schedule.contraction);
    case ScheduleKind::kTheorem3:
      return SigmaSchedule::theorem3_schedule(theorem3_params(config), multiplier);
  }
  return SigmaSchedule::constant(sigma);
}

bool SweepSummary::any_point_invalid() const {
  return std::any_of(points.begin(), points.end(), [](const auto& p) { return p.invalid; });
}

SweepSummary run_experiment(const ExperimentConfig& config, int jobs) {
  config.validate();
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");

  const SyntheticObjective synthetic(config.phi, config.dimension, config.noise,
                                     config.box_lower, config.box_upper);
  const Objective objective = synthetic.objective();
  const GHRule rule = build_gh_rule(config.quadrature_order);

  const std::size_t grid = config.sigma_grid.size();
  const std::size_t trials = static_cast<std::size_t>(config.trials);
  std::vector<SigmaSchedule> schedules;
  for (std::size_t g = 0; g < grid; ++g) schedules.push_back(schedule_for(config, g));

  SweepSummary summary;
  summary.experiment = config.experiment;
  summary.points.resize(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    summary.points[g].sigma = sigma_at(schedules[g], 0);
    summary.points[g].traces.resize(trials);
  }

  // Each task writes only its own slot, so the result is schedule-independent.
  const std::size_t total = grid * trials;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(total);
  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const std::size_t g = task / trials;
      const std::size_t k = task % trials;
      try {
        const std::uint64_t seed = trial_seed(config.seed, g, k);
        const RunConfig rc{.objective = objective,
                           .rule = rule,
                           .basis = std::nullopt,
                           .random_basis = config.random_basis,
                           .step_size = config.step_size,
                           .max_iterations = config.max_iterations,
                           .schedule = schedules[g],
                           .seed = seed,
                           .initial_point = InitialBox{config.box_lower, config.box_upper}};
        summary.points[g].traces[k] =
            compress(run(rc), static_cast<int>(k), seed, config.trace_stride);
      } catch (...) {
        errors[task] = std::current_exception();
      }
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (auto& p : summary.points) aggregate(p);
  return summary;
}

// ---- csv -------------------------------------------------------------------

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void emit_csv(const SweepSummary& summary, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "sigma,mean_final_dist,std_final_dist,mean_final_objective,trials_ok\n";
  for (const auto& p : summary.points) {
    out << format_double(p.sigma) << ',' << format_double(p.mean_final_dist) << ','
        << format_double(p.std_final_dist) << ',' << format_double(p.mean_final_objective) << ','
        << p.trials_ok << '\n';
  }
  finish(out, path);
}

void emit_trace_csv(const GridPointSummary& point, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "trial,iteration,sigma_t,dist,objective,cosine_sim\n";
  for (const auto& t : point.traces) {
    for (std::size_t k = 0; k < t.iteration.size(); ++k) {
      out << t.trial << ',' << t.iteration[k] << ',' << format_double(t.sigma[k]) << ','
          << format_double(t.dist[k]) << ',' << format_double(t.objective[k]) << ',';
      if (std::isfinite(t.cosine[k])) out << format_double(t.cosine[k]);
      out << '\n';
    }
  }
  finish(out, path);
}

void emit_curves_csv(const SweepSummary& summary, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "sigma,iteration,mean_dist,geomean_dist,mean_cosine\n";
  for (const auto& p : summary.points) {
    for (std::size_t k = 0; k < p.curve_iteration.size(); ++k) {
      out << format_double(p.sigma) << ',' << p.curve_iteration[k] << ','
          << format_double(p.curve_mean_dist[k]) << ',' << format_double(p.curve_geomean_dist[k])
          << ',';
      if (std::isfinite(p.curve_mean_cosine[k])) out << format_double(p.curve_mean_cosine[k]);
      out << '\n';
    }
  }
  finish(out, path);
}

void write_outputs(const SweepSummary& summary, const std::filesystem::path& dir) {
  emit_csv(summary, dir / "summary.csv");
  emit_curves_csv(summary, dir / "curves.csv");
  for (std::size_t g = 0; g < summary.points.size(); ++g) {
    emit_trace_csv(summary.points[g], dir / ("trace_" + std::to_string(g) + ".csv"));
  }
  for (PlotKind kind : {PlotKind::kConvergenceCurves, PlotKind::kCosineVsIteration,
                        PlotKind::kFinalDistVsSigma}) {
    try {
      emit_plot(summary, kind, dir / (to_string(kind) + ".svg"));
    } catch (const std::invalid_argument&) {
      // Nothing plottable (every point diverged); the CSVs still record it.
    }
  }
}

SweepSummary read_summary(const std::filesystem::path& summary_csv) {
  std::ifstream in(summary_csv);
  if (!in) throw IoError("cannot read " + summary_csv.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "sigma,mean_final_dist,std_final_dist,mean_final_objective,trials_ok") {
    throw IoError("unexpected header in " + summary_csv.string());
  }
  SweepSummary s;
  s.experiment = summary_csv.parent_path().filename().string();
  std::map<std::string, std::size_t> by_sigma;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw IoError("malformed row in " + summary_csv.string() + ": " + line);
    GridPointSummary p;
    p.sigma = parse_cell(cells[0], summary_csv);
    p.mean_final_dist = parse_cell(cells[1], summary_csv);
    p.std_final_dist = parse_cell(cells[2], summary_csv);
    p.mean_final_objective = parse_cell(cells[3], summary_csv);
    p.trials_ok = static_cast<int>(parse_cell(cells[4], summary_csv));
    p.invalid = p.trials_ok == 0;
    by_sigma[cells[0]] = s.points.size();
    s.points.push_back(std::move(p));
  }

  const auto curves = summary_csv.parent_path() / "curves.csv";
  std::ifstream cin(curves);
  if (!cin) return s;
  if (!std::getline(cin, line) || line != "sigma,iteration,mean_dist,geomean_dist,mean_cosine") {
    throw IoError("unexpected header in " + curves.string());
  }
  while (std::getline(cin, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw IoError("malformed row in " + curves.string() + ": " + line);
    auto it = by_sigma.find(cells[0]);
    if (it == by_sigma.end()) throw IoError("sigma " + cells[0] + " in " + curves.string() + " is not in the summary");
    auto& p = s.points[it->second];
    p.curve_iteration.push_back(static_cast<long long>(parse_cell(cells[1], curves)));
    p.curve_mean_dist.push_back(parse_cell(cells[2], curves));
    p.curve_geomean_dist.push_back(parse_cell(cells[3], curves));
    p.curve_mean_cosine.push_back(parse_cell(cells[4], curves));
  }
  return s;
}

// ---- plots -----------------------------------------------------------------

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "convergence-curves") return PlotKind::kConvergenceCurves;
  if (name == "cosine-vs-iteration") return PlotKind::kCosineVsIteration;
  if (name == "final-dist-vs-sigma") return PlotKind::kFinalDistVsSigma;
  throw std::invalid_argument("unknown plot kind \"" + name +
                              "\"; expected convergence-curves, cosine-vs-iteration or "
                              "final-dist-vs-sigma");
}

std::string to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::kConvergenceCurves: return "convergence-curves";
    case PlotKind::kCosineVsIteration: return "cosine-vs-iteration";
    case PlotKind::kFinalDistVsSigma: return "final-dist-vs-sigma";
  }
  return "unknown";
}

std::string render_plot(const SweepSummary& summary, PlotKind kind) {
  if (summary.points.empty()) throw std::invalid_argument("summary has no data to plot");
  std::vector<Series> series;
  const std::string title = summary.experiment.empty() ? to_string(kind)
                                                       : summary.experiment + ": " + to_string(kind);
  if (kind == PlotKind::kFinalDistVsSigma) {
    Series s{"mean final r_T", {}, true};
    for (const auto& p : summary.points) {
      if (p.sigma > 0.0 && p.mean_final_dist > 0.0 && std::isfinite(p.mean_final_dist)) {
        s.points.emplace_back(std::log10(p.sigma), std::log10(p.mean_final_dist));
      }
    }
    series.push_back(std::move(s));
    return render_svg(title, "sigma", "mean final distance to minimizer", true, true, series);
  }
  const bool cosine = kind == PlotKind::kCosineVsIteration;
  for (const auto& p : summary.points) {
    Series s{"sigma = " + fmt("%g", p.sigma), {}, false};
    const auto& ys = cosine ? p.curve_mean_cosine : p.curve_mean_dist;
    for (std::size_t k = 0; k < p.curve_iteration.size() && k < ys.size(); ++k) {
      const double y = ys[k];
      if (!std::isfinite(y) || (!cosine && !(y > 0.0))) continue;
      s.points.emplace_back(static_cast<double>(p.curve_iteration[k]), cosine ? y : std::log10(y));
    }
    if (!s.points.empty()) series.push_back(std::move(s));
  }
  if (series.empty()) throw std::invalid_argument("summary has no curve data to plot");
  return render_svg(title, "iteration", cosine ? "mean cosine similarity" : "mean distance to minimizer",
                    false, !cosine, series);
}

void emit_plot(const SweepSummary& summary, PlotKind kind, const std::filesystem::path& path) {
  const std::string svg = render_plot(summary, kind);
  auto out = open_for_write(path);
  out << svg;
  finish(out, path);
}

}  // namespace dgs::harness
