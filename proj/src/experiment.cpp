// Copyright 2026 The magcat Authors
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

#include "magcat/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "magcat/analysis.hpp"
#include "magcat/modular.hpp"
#include "magcat/sweep.hpp"

namespace magcat {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::pair<Mode, std::string_view> kModeNames[] = {
    {Mode::single_evolve, "single_evolve"}, {Mode::two_evolve, "two_evolve"}, {Mode::wigner, "wigner"},
    {Mode::catfit, "catfit"},               {Mode::project, "project"},       {Mode::chsh, "chsh"},
    {Mode::sweep_g, "sweep_g"},             {Mode::sweep_gamma, "sweep_gamma"}, {Mode::stability, "stability"},
};

bool is_two_mode(Mode m) {
  return m == Mode::two_evolve || m == Mode::project || m == Mode::chsh || m == Mode::sweep_g ||
         m == Mode::sweep_gamma;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// --------------------------------------------------------------- JSON reader

// Reads one JSON object, remembering which keys were consumed so that the
// leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* take(const std::string& key, bool required) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) {
      if (required) missing_.push_back(key);
      return nullptr;
    }
    return &*it;
  }

  void number(const std::string& key, double& out, bool required = false) {
    if (const json* v = take(key, required)) out = as_number(key, *v);
  }

  void integer(const std::string& key, long long& out, bool required = false) {
    if (const json* v = take(key, required)) {
      if (!v->is_number_integer()) fail(key, "expected integer, got " + v->dump());
      out = v->get<long long>();
    }
  }

  void complex(const std::string& key, Complex& out, bool required = false) {
    if (const json* v = take(key, required)) {
      if (v->is_number()) {
        out = Complex(as_number(key, *v), 0.0);
      } else if (v->is_string()) {
        try {
          out = parse_complex(v->get<std::string>());
        } catch (const ConfigError& e) {
          fail(key, e.what());
        }
      } else {
        fail(key, "expected complex string like \"1.4i\" or a number, got " + v->dump());
      }
    }
  }

  void string(const std::string& key, std::string& out, bool required = false) {
    if (const json* v = take(key, required)) {
      if (!v->is_string()) fail(key, "expected string, got " + v->dump());
      out = v->get<std::string>();
    }
  }

  void numbers(const std::string& key, std::vector<double>& out, bool required = false) {
    if (const json* v = take(key, required)) {
      if (!v->is_array()) fail(key, "expected array of numbers, got " + v->dump());
      out.clear();
      for (const json& e : *v) out.push_back(as_number(key, e));
    }
  }

  Reader child(const std::string& key) {
    const json* v = take(key, false);
    static const json empty = json::object();
    return Reader(v ? *v : empty, join(key));
  }

  /// Rejects every key that no accessor asked for, then any missing required
  /// key. Unknown keys go first since they are usually misspelt required ones.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
    if (!missing_.empty()) fail(missing_.front(), "required field is missing");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string where = key.empty() ? (path_.empty() ? std::string("<root>") : path_) : join(key);
    throw ConfigError(where + ": " + what);
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  double as_number(const std::string& key, const json& v) const {
    if (!v.is_number()) fail(key, "expected number, got " + v.dump());
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "expected finite number");
    return x;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
  std::vector<std::string> missing_;
};

QuadGrid read_grid(Reader r, const QuadGrid& fallback) {
  QuadGrid g = fallback;
  long long count = g.count;
  r.number("min", g.minimum);
  r.number("max", g.maximum);
  r.integer("count", count);
  r.finish();
  if (count < 2) r.fail("count", "expected integer >= 2, got " + std::to_string(count));
  if (!(g.maximum > g.minimum)) r.fail("max", "must exceed min");
  g.count = static_cast<int>(count);
  return g;
}

ordered_json grid_json(const QuadGrid& g) { return {{"min", g.minimum}, {"max", g.maximum}, {"count", g.count}}; }

void require_non_negative(const Reader& r, const std::string& key, double v) {
  if (v < 0.0) r.fail(key, "must be non-negative, got " + shortest(v));
}

void require_positive(const Reader& r, const std::string& key, double v) {
  if (!(v > 0.0)) r.fail(key, "must be positive, got " + shortest(v));
}

// ---------------------------------------------------------------- run helpers

struct Diagnostics {
  double truncation_tail = 0.0;  // Poisson tail of the target coherent amplitude
  double fock_edge_population = 0.0;
  double max_trace_drift = 0.0;
  double projection_mass_leak = 0.0;
  bool projection_used = false;
  std::vector<std::string> warnings;

  void warn(std::string w) {
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(std::move(w));
  }
};

// Population on Fock levels that touch the cutoff in any mode.
double edge_population(const DensityMatrix& rho) {
  const ModeSpace& s = rho.space();
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    Eigen::Index rest = i;
    bool edge = false;
    for (std::size_t m = s.modes(); m-- > 0;) {
      const int n = s.cutoff(m);
      if (rest % n == n - 1) edge = true;
      rest /= n;
    }
    if (edge) total += rho.matrix()(i, i).real();
  }
  return total;
}

class Artifacts {
 public:
  Artifacts(std::filesystem::path dir, const OutputConfig& out) : dir_(std::move(dir)), out_(out) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  bool csv() const { return out_.csv; }
  bool json() const { return out_.json; }

  std::string path(const std::string& name) {
    files_.push_back(name);
    return (dir_ / name).string();
  }

  void text(const std::string& name, const std::string& body) {
    std::ofstream f(path(name), std::ios::binary);
    f << body << '\n';
    if (!f) throw IoError("failed writing " + (dir_ / name).string());
  }

  void series(const std::string& name, const MetricSeries& s) {
    if (csv()) write_series_csv(s, path(name));
  }

  const std::vector<std::string>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  OutputConfig out_;
  std::vector<std::string> files_;
};

SingleModeParams single_params(const PhysicalParams& p) { return {p.delta, p.pump, p.kerr}; }

TwoModeParams two_params(const PhysicalParams& p) {
  return {p.delta, p.pump.real(), p.kerr, p.cross_talk, p.collective_rate, p.local_loss_rate};
}

EvolveOptions evolve_options(const NumericsConfig& n) {
  EvolveOptions o;
  o.t_final = n.t_final;
  o.dt = n.dt;
  o.save_every = n.save_every;
  return o;
}

Trajectory run_model(const LindbladModel& model, const ModeSpace& space, const EvolveOptions& options,
                     Diagnostics& diag) {
  Trajectory traj = evolve(model, DensityMatrix::pure(StateVector::vacuum(space)), options);
  diag.max_trace_drift = std::max(diag.max_trace_drift, traj.max_trace_drift);
  for (const DensityMatrix& rho : traj.states)
    diag.fock_edge_population = std::max(diag.fock_edge_population, edge_population(rho));
  return traj;
}

Trajectory run_single(const ExperimentConfig& c, Diagnostics& diag) {
  const int n = c.numerics.cutoff;
  return run_model(single_mode_model(single_params(c.params), n, c.params.local_loss_rate), ModeSpace::single(n),
                   evolve_options(c.numerics), diag);
}

Trajectory run_two(const ExperimentConfig& c, const PhysicalParams& p, const EvolveOptions& options,
                   Diagnostics& diag) {
  const int n = c.numerics.cutoff;
  return run_model(two_mode_model(two_params(p), n), ModeSpace::pair(n), options, diag);
}

ModularGrid modular_grid(const ExperimentConfig& c) {
  const ModularSpec& m = c.numerics.modular;
  return {m.length ? *m.length : optimal_modular_length(c.params.alpha_target), m.offset, m.index_min, m.index_max};
}

void note_target(const ExperimentConfig& c, Diagnostics& diag) {
  const TruncationReport t = coherent_truncation(c.params.alpha_target, c.numerics.cutoff);
  diag.truncation_tail = t.tail;
  if (t.warn) diag.warn("target coherent amplitude loses " + shortest(t.tail) + " of its norm to the Fock cutoff");
}

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

// First time index after a drop below `low` at which the series re-exceeds `high`.
std::optional<std::size_t> first_return(const MetricSeries& s, double low, double high) {
  bool dropped = false;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (s.values[i] < low) dropped = true;
    if (dropped && s.values[i] > high) return i;
  }
  return std::nullopt;
}

ordered_json optional_time(const MetricSeries& s, std::optional<std::size_t> i) {
  return i ? ordered_json(s.times[*i]) : ordered_json(nullptr);
}

// ---------------------------------------------------------------- modes

ordered_json do_single_evolve(const ExperimentConfig& c, Artifacts& out, Diagnostics& diag) {
  const Trajectory traj = run_single(c, diag);
  const int n = c.numerics.cutoff;
  const MetricSeries vac = fidelity_series(traj, StateVector::vacuum(ModeSpace::single(n)));
  MetricSeries photons{"photon_number", traj.times, {}, {}};
  const Operator num = number(ModeSpace::single(n), 0);
  for (const DensityMatrix& rho : traj.states) photons.values.push_back(rho.expectation(num).real());
  out.series("vacuum_fidelity.csv", vac);
  out.series("photon_number.csv", photons);
  const SeriesPeak peak = series_max(photons);
  return {{"frames", traj.times.size()},
          {"max_photon_number", peak.value},
          {"t_at_max_photon_number", peak.time},
          {"min_vacuum_fidelity", *std::min_element(vac.values.begin(), vac.values.end())},
          {"vacuum_return_time", optional_time(vac, first_return(vac, 0.5, 0.9))}};
}

void write_wigner(Artifacts& out, const std::string& stem, const WignerMap& w) {
  if (out.csv()) write_wigner_csv(w, out.path(stem + ".csv"));
  if (out.json()) out.text(stem + ".json", wigner_header_json(w));
}

ordered_json wigner_stats(const WignerMap& w) {
  return {{"min", w.min()}, {"max", w.max()}, {"integral", w.integral()}};
}

ordered_json do_catfit(const ExperimentConfig& c, Artifacts& out, Diagnostics& diag) {
  const Trajectory traj = run_single(c, diag);
  const int n = c.numerics.cutoff;
  const MetricSeries vac = fidelity_series(traj, StateVector::vacuum(ModeSpace::single(n)));
  const MetricSeries fit = cat_fit_series(traj, c.analysis.search_radius);
  out.series("vacuum_fidelity.csv", vac);
  out.series("catfit.csv", fit);

  // best frame among fits with a macroscopic amplitude, falling back to the overall best
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < fit.values.size(); ++i)
    if (std::abs(fit.complex_values[i]) >= 1.0 && (!best || fit.values[i] > fit.values[*best])) best = i;
  if (!best) best = series_max(fit).index;
  const WignerMap w = wigner(traj.states[*best], c.numerics.wigner_grid, c.numerics.wigner_grid);
  write_wigner(out, "wigner", w);

  const auto ret = first_return(vac, 0.5, 0.9);
  std::optional<std::size_t> later;
  for (std::size_t i = *best + 1; i < vac.values.size() && !later; ++i)
    if (vac.values[i] > 0.9) later = i;
  return {{"frames", traj.times.size()},
          {"best_cat", {{"time", fit.times[*best]},
                        {"alpha", complex_json(fit.complex_values[*best])},
                        {"abs_alpha", std::abs(fit.complex_values[*best])},
                        {"fidelity", fit.values[*best]},
                        {"wigner_min", w.min()}}},
          {"vacuum_return_time", optional_time(vac, ret)},
          {"vacuum_return_after_best", optional_time(vac, later)}};
}

ordered_json do_wigner(const ExperimentConfig& c, Artifacts& out, Diagnostics& diag) {
  const QuadGrid& g = c.numerics.wigner_grid;
  ordered_json panels = ordered_json::array();
  if (c.analysis.wigner_source == "reduced") {
    EvolveOptions o = evolve_options(c.numerics);
    o.save_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(o.t_final / o.dt)));
    for (std::size_t k = 0; k < c.analysis.panels.size(); ++k) {
      PhysicalParams p = c.params;
      p.cross_talk = c.analysis.panels[k];
      const Trajectory traj = run_two(c, p, o, diag);
      const WignerMap w = wigner(partial_trace(traj.states.back(), 0), g, g);
      const std::string stem = "wigner_" + std::to_string(k);
      write_wigner(out, stem, w);
      ordered_json entry = {{"file", stem}, {"g", p.cross_talk}, {"time", traj.times.back()}};
      entry.update(wigner_stats(w));
      panels.push_back(entry);
    }
    return {{"source", "reduced"}, {"panels", panels}};
  }

  EvolveOptions o = evolve_options(c.numerics);
  Trajectory traj;
  if (c.analysis.wigner_times.empty()) {
    traj = run_model(single_mode_model(single_params(c.params), c.numerics.cutoff, c.params.local_loss_rate),
                     ModeSpace::single(c.numerics.cutoff), o, diag);
    const MetricSeries fit = cat_fit_series(traj, c.analysis.search_radius);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < fit.values.size(); ++i)
      if (std::abs(fit.complex_values[i]) >= 1.0 && (!best || fit.values[i] > fit.values[*best])) best = i;
    if (!best) best = series_max(fit).index;
    const WignerMap w = wigner(traj.states[*best], g, g);
    write_wigner(out, "wigner", w);
    ordered_json entry = {{"file", "wigner"},
                          {"time", traj.times[*best]},
                          {"cat_alpha", complex_json(fit.complex_values[*best])},
                          {"cat_fidelity", fit.values[*best]}};
    entry.update(wigner_stats(w));
    panels.push_back(entry);
    return {{"source", "single"}, {"panels", panels}};
  }

  // explicit times: save every step and pick the nearest frame
  o.t_final = *std::max_element(c.analysis.wigner_times.begin(), c.analysis.wigner_times.end());
  o.save_every = 1;
  traj = run_model(single_mode_model(single_params(c.params), c.numerics.cutoff, c.params.local_loss_rate),
                   ModeSpace::single(c.numerics.cutoff), o, diag);
  for (std::size_t k = 0; k < c.analysis.wigner_times.size(); ++k) {
    const double t = c.analysis.wigner_times[k];
    std::size_t idx = 0;
    for (std::size_t i = 1; i < traj.times.size(); ++i)
      if (std::abs(traj.times[i] - t) < std::abs(traj.times[idx] - t)) idx = i;
    const WignerMap w = wigner(traj.states[idx], g, g);
    const std::string stem = "wigner_" + std::to_string(k);
    write_wigner(out, stem, w);
    ordered_json entry = {{"file", stem}, {"time", traj.times[idx]}};
    entry.update(wigner_stats(w));
    panels.push_back(entry);
  }
  return {{"source", "single"}, {"panels", panels}};
}

ordered_json do_two_evolve(const ExperimentConfig& c, Artifacts& out, Diagnostics& diag) {
  note_target(c, diag);
  const Trajectory traj = run_two(c, c.params, evolve_options(c.numerics), diag);
  const MetricSeries fid = fidelity_series(traj, entangled_cat(c.params.alpha_target, c.numerics.cutoff));
  out.series("fidelity.csv", fid);
  const SeriesPeak peak = series_max(fid);
  return {{"frames", traj.times.size()},
          {"max_fidelity", peak.value},
          {"t_at_max", peak.time},
          {"final_fidelity", fid.values.back()}};
}

ordered_json do_chsh(const ExperimentConfig& c, Artifacts& out, Diagnostics& diag) {
  note_target(c, diag);
  const Trajectory traj = run_two(c, c.params, evolve_options(c.numerics), diag);
  const ModularGrid grid = modular_grid(c);
  double leak = 0.0;
  const MetricSeries q = qualifier_series(traj, grid, bell_setting(c.analysis.variant), c.numerics.momentum_grid, &leak);
  diag.projection_used = true;
  diag.projection_mass_leak = std::max(diag.projection_mass_leak, leak);
  const MetricSeries fid = fidelity_series(traj, entangled_cat(c.params.alpha_target, c.numerics.cutoff));
  out.series("qualifier.csv", q);
  out.series("fidelity.csv", fid);
  const SeriesPeak peak = series_max(q);
  std::optional<std::size_t> crossing;
  for (std::size_t i = 0; i < q.values.size() && !crossing; ++i)
    if (is_entangled_by_chsh(q.values[i])) crossing = i;
  return {{"frames", traj.times.size()},
          {"modular_length", grid.modular_length},
          {"variant", std::string(to_string(c.analysis.variant))},
          {"q_max", peak.value},
          {"t_at_max", peak.time},
          {"q_final", q.values.back()},
          {"first_violation_time", optional_time(q, crossing)},
          {"entangled_final", is_entangled_by_chsh(q.values.back())}};
}

ordered_json do_project(const ExperimentConfig& c, Artifacts& out, Diagnostics& diag) {
  note_target(c, diag);
  EvolveOptions o = evolve_options(c.numerics);
  o.save_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(o.t_final / o.dt)));
  const Trajectory traj = run_two(c, c.params, o, diag);
  const DensityMatrix& rho = traj.states.back();
  const DensityMatrix reduced = partial_trace(rho, 0);
  const ModularGrid grid = modular_grid(c);
  const QuadGrid& quad = c.numerics.momentum_grid;

  const EffectiveSpinState joint = project_joint(rho, grid, quad);
  const EffectiveSpinState single = project_single(reduced, grid, quad);
  const EffectiveSpinState sign = sign_projection(reduced, quad);
  diag.projection_used = true;
  for (const auto* s : {&joint, &single, &sign})
    diag.projection_mass_leak = std::max(diag.projection_mass_leak, 1.0 - s->raw_trace);

  if (out.json()) {
    out.text("spin_joint.json", to_json(joint));
    out.text("spin_single.json", to_json(single));
    out.text("spin_sign.json", to_json(sign));
  }
  if (out.csv()) {
    const std::vector<double> density = momentum_density(reduced, quad);
    std::FILE* f = std::fopen(out.path("momentum_density.csv").c_str(), "w");
    if (!f) throw IoError("cannot write momentum_density.csv");
    std::fputs("p,density\n", f);
    for (int k = 0; k < quad.count; ++k) std::fprintf(f, "%.10g,%.12e\n", quad.at(k), density[k]);
    if (std::fclose(f) != 0) throw IoError("failed writing momentum_density.csv");
  }
  const Eigen::Vector4cd bell = bell_state(c.analysis.variant);
  const double bell_fidelity = bell.dot(joint.matrix * bell).real();
  return {{"time", traj.times.back()},
          {"modular_length", grid.modular_length},
          {"variant", std::string(to_string(c.analysis.variant))},
          {"q_modular", chsh_qualifier(joint, bell_setting(c.analysis.variant))},
          {"bell_fidelity", bell_fidelity},
          {"raw_trace", {{"joint", joint.raw_trace}, {"single", single.raw_trace}, {"sign", sign.raw_trace}}},
          {"single_coherence", std::abs(single.matrix(0, 1))},
          {"sign_coherence", std::abs(sign.matrix(0, 1))}};
}

ordered_json do_sweep(const ExperimentConfig& c, const RunOptions& opts, Artifacts& out, Diagnostics& diag) {
  note_target(c, diag);
  SweepSpec spec;
  spec.base = two_params(c.params);
  spec.axis = c.mode == Mode::sweep_g ? SweepAxis::cross_talk : SweepAxis::local_loss_rate;
  spec.values = c.sweep.values;
  spec.t_final = c.numerics.t_final;
  spec.dt = c.numerics.dt;
  spec.target_alpha = c.params.alpha_target;
  spec.cutoff = c.numerics.cutoff;
  spec.max_frames = c.sweep.max_frames;
  spec.threads = std::max(1u, opts.threads);
  spec.variant = c.analysis.variant;
  spec.quad = c.numerics.momentum_grid;
  spec.grid_offset = c.numerics.modular.offset;
  spec.index_min = c.numerics.modular.index_min;
  spec.index_max = c.numerics.modular.index_max;
  spec.modular_length = c.numerics.modular.length;

  const SweepResult result = run_sweep(spec);
  diag.projection_used = true;
  diag.projection_mass_leak = std::max(diag.projection_mass_leak, result.max_mass_leak);
  diag.max_trace_drift = std::max(diag.max_trace_drift, result.max_trace_drift);
  for (std::size_t i = 0; i < result.errors.size(); ++i)
    if (!result.errors[i].empty())
      diag.warn("sweep point " + shortest(result.axis_values[i]) + " failed: " + result.errors[i]);

  std::optional<double> threshold;
  std::vector<std::pair<double, SweepPoint>> probes;
  if (c.sweep.tolerance > 0.0) {
    if (result.threshold_estimate)
      threshold = locate_threshold(spec, result, c.sweep.tolerance, &probes);
    else
      diag.warn("no Q_max = 2 crossing inside the scanned range; threshold not located");
  }
  std::optional<LinearFit> fit;
  if (c.sweep.fit_window) {
    const double lo = (*c.sweep.fit_window)[0], hi = (*c.sweep.fit_window)[1];
    std::vector<double> x, y;
    for (std::size_t i = 0; i < result.axis_values.size(); ++i)
      if (result.errors[i].empty() && result.axis_values[i] >= lo && result.axis_values[i] <= hi) {
        x.push_back(result.axis_values[i]);
        y.push_back(result.q_max[i] - 2.0);
      }
    for (const auto& [v, p] : probes)
      if (v >= lo && v <= hi) {
        x.push_back(v);
        y.push_back(p.q_max - 2.0);
      }
    if (x.size() >= 2)
      fit = fit_line(x, y);
    else
      diag.warn("fewer than two sweep points inside the fit window; fit skipped");
  }
  if (out.csv()) write_sweep_csv(result, out.path("sweep.csv"));
  const std::string summary = sweep_summary_json(spec, result, threshold, fit, probes);
  if (out.json()) out.text("sweep.json", summary);
  return ordered_json::parse(summary);
}

ordered_json do_stability(const ExperimentConfig& c, Diagnostics& diag) {
  const double s = std::abs(c.params.pump);
  const bool stable = parametric_stability(c.params.delta, s);
  ordered_json j = {{"delta", c.params.delta},
                    {"pump_magnitude", s},
                    {"stable", stable},
                    {"verdict", stable ? "stable" : "unstable"}};
  if (c.effective) {
    const EffectiveParams e = effective_params(*c.effective);
    if (e.weak_detuning) diag.warn("cavity detuning is below 10 |g|; adiabatic elimination is questionable");
    const bool eff_stable = parametric_stability(e.params.delta, std::abs(e.params.pump));
    j["effective"] = {{"delta", e.params.delta},
                      {"S", complex_json(e.params.pump)},
                      {"K", e.params.kerr},
                      {"weak_detuning", e.weak_detuning},
                      {"stable", eff_stable},
                      {"verdict", eff_stable ? "stable" : "unstable"}};
  }
  return j;
}

}  // namespace

// ---------------------------------------------------------------- public API

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModeNames)
    if (m == mode) return name;
  return "unknown";
}

Mode mode_from_string(std::string_view name) {
  for (const auto& [m, n] : kModeNames)
    if (n == name) return m;
  throw ConfigError("mode: unknown mode \"" + std::string(name) + "\"");
}

Complex parse_complex(std::string_view text) {
  auto bad = [&]() -> ConfigError {
    return ConfigError("malformed complex literal \"" + std::string(text) + "\"");
  };
  auto number = [&](std::string_view s, bool coefficient) -> double {
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
      neg = s[0] == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) {
      if (coefficient) return neg ? -1.0 : 1.0;
      throw bad();
    }
    if (s[0] == '+' || s[0] == '-') throw bad();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) throw bad();
    return neg ? -v : v;
  };

  if (text.empty()) throw bad();
  if (text.back() != 'i') return {number(text, false), 0.0};
  const std::string_view body = text.substr(0, text.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, number(body, true)};
  return {number(body.substr(0, split), false), number(body.substr(split), true)};
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return shortest(z.real());
  std::string im = shortest(z.imag()) + "i";
  if (z.real() == 0.0) return im;
  if (im[0] != '-') im = "+" + im;
  return shortest(z.real()) + im;
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string(source) + ": not valid JSON: " + e.what());
  }

  ExperimentConfig c;
  Reader root(doc, "");
  std::string mode;
  if (!root.has("mode")) root.fail("mode", "required field is missing");
  root.string("mode", mode, true);
  try {
    c.mode = mode_from_string(mode);
  } catch (const ConfigError&) {
    root.fail("mode", "unknown mode \"" + mode + "\"");
  }
  const bool two = is_two_mode(c.mode);
  const bool evolves = c.mode != Mode::stability;

  {
    Reader p = root.child("params");
    if (!root.has("params")) root.fail("params", "required field is missing");
    p.number("delta", c.params.delta, true);
    p.complex("S", c.params.pump, true);
    p.number("K", c.params.kerr, evolves);
    p.number("g", c.params.cross_talk);
    p.number("gamma_c", c.params.collective_rate, two);
    p.number("gamma_s", c.params.local_loss_rate);
    p.complex("alpha_target", c.params.alpha_target, two);
    p.finish();
    require_non_negative(p, "K", c.params.kerr);
    require_non_negative(p, "gamma_c", c.params.collective_rate);
    require_non_negative(p, "gamma_s", c.params.local_loss_rate);
    if (two && c.params.pump.imag() != 0.0) p.fail("S", "two-mode models take a real pump");
    if (two && std::abs(c.params.alpha_target) == 0.0) p.fail("alpha_target", "must be nonzero");
  }
  {
    Reader n = root.child("numerics");
    long long cutoff = c.numerics.cutoff, save_every = static_cast<long long>(c.numerics.save_every);
    n.integer("N", cutoff);
    n.number("dt", c.numerics.dt);
    n.number("t_final", c.numerics.t_final);
    n.integer("save_every", save_every);
    if (n.has("wigner_grid")) c.numerics.wigner_grid = read_grid(n.child("wigner_grid"), c.numerics.wigner_grid);
    if (n.has("momentum_grid"))
      c.numerics.momentum_grid = read_grid(n.child("momentum_grid"), c.numerics.momentum_grid);
    if (n.has("modular")) {
      Reader m = n.child("modular");
      if (m.has("length")) {
        double l = 0.0;
        m.number("length", l);
        require_positive(m, "length", l);
        c.numerics.modular.length = l;
      }
      long long lo = c.numerics.modular.index_min, hi = c.numerics.modular.index_max;
      m.number("offset", c.numerics.modular.offset);
      m.integer("index_min", lo);
      m.integer("index_max", hi);
      m.finish();
      if (lo > hi) m.fail("index_max", "must not be below index_min");
      c.numerics.modular.index_min = static_cast<int>(lo);
      c.numerics.modular.index_max = static_cast<int>(hi);
    }
    n.finish();
    if (cutoff < 2) n.fail("N", "cutoff too small: expected integer >= 2, got " + std::to_string(cutoff));
    if (cutoff > 60) n.fail("N", "cutoff above 60 is not supported, got " + std::to_string(cutoff));
    if (save_every < 1) n.fail("save_every", "expected integer >= 1, got " + std::to_string(save_every));
    require_positive(n, "dt", c.numerics.dt);
    require_non_negative(n, "t_final", c.numerics.t_final);
    c.numerics.cutoff = static_cast<int>(cutoff);
    c.numerics.save_every = static_cast<std::size_t>(save_every);
  }
  {
    Reader a = root.child("analysis");
    std::string variant(to_string(c.analysis.variant));
    a.string("variant", variant);
    try {
      c.analysis.variant = bell_variant_from_string(variant);
    } catch (const Error&) {
      a.fail("variant", "expected one of PhiPlus, PhiMinus, PsiPlus, PsiMinus, got \"" + variant + "\"");
    }
    a.number("search_radius", c.analysis.search_radius);
    a.numbers("wigner_times", c.analysis.wigner_times);
    a.string("wigner_source", c.analysis.wigner_source);
    a.numbers("panels", c.analysis.panels);
    a.finish();
    require_positive(a, "search_radius", c.analysis.search_radius);
    if (c.analysis.wigner_source != "single" && c.analysis.wigner_source != "reduced")
      a.fail("wigner_source", "expected \"single\" or \"reduced\", got \"" + c.analysis.wigner_source + "\"");
    for (double t : c.analysis.wigner_times) require_non_negative(a, "wigner_times", t);
    for (double g : c.analysis.panels) require_non_negative(a, "panels", g);
    if (c.mode == Mode::wigner && c.analysis.wigner_source == "reduced") {
      if (c.analysis.panels.empty()) a.fail("panels", "reduced Wigner maps need at least one cross-talk value");
      if (c.params.pump.imag() != 0.0) root.fail("params.S", "two-mode models take a real pump");
    }
  }
  {
    const bool sweeping = c.mode == Mode::sweep_g || c.mode == Mode::sweep_gamma;
    if (sweeping && !root.has("sweep")) root.fail("sweep", "required field is missing");
    Reader s = root.child("sweep");
    s.numbers("values", c.sweep.values, sweeping);
    s.number("tolerance", c.sweep.tolerance);
    long long frames = static_cast<long long>(c.sweep.max_frames);
    s.integer("max_frames", frames);
    if (s.has("fit_window")) {
      std::vector<double> w;
      s.numbers("fit_window", w);
      if (w.size() != 2 || !(w[1] > w[0])) s.fail("fit_window", "expected [low, high] with low < high");
      c.sweep.fit_window = w;
    }
    s.finish();
    require_non_negative(s, "tolerance", c.sweep.tolerance);
    if (frames < 2) s.fail("max_frames", "expected integer >= 2, got " + std::to_string(frames));
    c.sweep.max_frames = static_cast<std::size_t>(frames);
    if (sweeping) {
      if (c.sweep.values.empty()) s.fail("values", "must not be empty");
      for (std::size_t i = 1; i < c.sweep.values.size(); ++i)
        if (!(c.sweep.values[i] > c.sweep.values[i - 1])) s.fail("values", "must be strictly increasing");
      for (double v : c.sweep.values) require_non_negative(s, "values", v);
    }
  }
  if (root.has("effective")) {
    Reader e = root.child("effective");
    EffectiveParamsInput in;
    e.number("omega_c", in.omega_c, true);
    e.number("omega_m", in.omega_m, true);
    e.number("omega_d", in.omega_d, true);
    e.complex("g", in.coupling_g, true);
    e.complex("G", in.pump_G, true);
    e.number("K", in.kerr, true);
    e.finish();
    const double delta_c = in.omega_c - 0.5 * in.omega_d;
    if (!(delta_c * delta_c - std::norm(in.pump_G) > 0.0))
      e.fail("G", "cavity detuning must exceed |G| for the elimination to hold");
    c.effective = in;
  }
  {
    Reader o = root.child("output");
    o.string("directory", c.output.directory);
    if (o.has("formats")) {
      const json* f = o.take("formats", false);
      if (!f->is_array()) o.fail("formats", "expected array of \"csv\"/\"json\"");
      c.output.csv = c.output.json = false;
      for (const json& e : *f) {
        if (e == "csv")
          c.output.csv = true;
        else if (e == "json")
          c.output.json = true;
        else
          o.fail("formats", "unknown format " + e.dump());
      }
    }
    o.finish();
    if (c.output.directory.empty()) o.fail("directory", "must not be empty");
  }
  root.finish();
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string write_config(const ExperimentConfig& c) {
  ordered_json j;
  j["mode"] = std::string(to_string(c.mode));
  j["params"] = {{"delta", c.params.delta},
                 {"S", format_complex(c.params.pump)},
                 {"K", c.params.kerr},
                 {"g", c.params.cross_talk},
                 {"gamma_c", c.params.collective_rate},
                 {"gamma_s", c.params.local_loss_rate},
                 {"alpha_target", format_complex(c.params.alpha_target)}};
  ordered_json modular = {{"offset", c.numerics.modular.offset},
                          {"index_min", c.numerics.modular.index_min},
                          {"index_max", c.numerics.modular.index_max}};
  if (c.numerics.modular.length) modular["length"] = *c.numerics.modular.length;
  j["numerics"] = {{"N", c.numerics.cutoff},
                   {"dt", c.numerics.dt},
                   {"t_final", c.numerics.t_final},
                   {"save_every", c.numerics.save_every},
                   {"wigner_grid", grid_json(c.numerics.wigner_grid)},
                   {"momentum_grid", grid_json(c.numerics.momentum_grid)},
                   {"modular", modular}};
  j["analysis"] = {{"variant", std::string(to_string(c.analysis.variant))},
                   {"search_radius", c.analysis.search_radius},
                   {"wigner_times", c.analysis.wigner_times},
                   {"wigner_source", c.analysis.wigner_source},
                   {"panels", c.analysis.panels}};
  ordered_json sweep = {{"values", c.sweep.values},
                        {"tolerance", c.sweep.tolerance},
                        {"max_frames", c.sweep.max_frames}};
  if (c.sweep.fit_window) sweep["fit_window"] = *c.sweep.fit_window;
  j["sweep"] = sweep;
  if (c.effective) {
    const EffectiveParamsInput& e = *c.effective;
    j["effective"] = {{"omega_c", e.omega_c},
                      {"omega_m", e.omega_m},
                      {"omega_d", e.omega_d},
                      {"g", format_complex(e.coupling_g)},
                      {"G", format_complex(e.pump_G)},
                      {"K", e.kerr}};
  }
  ordered_json formats = ordered_json::array();
  if (c.output.csv) formats.push_back("csv");
  if (c.output.json) formats.push_back("json");
  j["output"] = {{"directory", c.output.directory}, {"formats", formats}};
  return j.dump(2);
}

RunReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::filesystem::path dir = options.out_dir ? *options.out_dir : config.output.directory;
  Artifacts out(dir, config.output);
  Diagnostics diag;

  ordered_json summary;
  switch (config.mode) {
    case Mode::single_evolve:
      summary = do_single_evolve(config, out, diag);
      break;
    case Mode::catfit:
      summary = do_catfit(config, out, diag);
      break;
    case Mode::wigner:
      summary = do_wigner(config, out, diag);
      break;
    case Mode::two_evolve:
      summary = do_two_evolve(config, out, diag);
      break;
    case Mode::chsh:
      summary = do_chsh(config, out, diag);
      break;
    case Mode::project:
      summary = do_project(config, out, diag);
      break;
    case Mode::sweep_g:
    case Mode::sweep_gamma:
      summary = do_sweep(config, options, out, diag);
      break;
    case Mode::stability:
      summary = do_stability(config, diag);
      break;
  }
  if (diag.fock_edge_population > kTruncationTailWarning)
    diag.warn("population " + shortest(diag.fock_edge_population) + " reached the Fock cutoff; consider a larger N");
  if (diag.projection_mass_leak > 1.0 - kMinWindowMass)
    diag.warn("projection lost " + shortest(diag.projection_mass_leak) + " of the momentum mass");

  const std::string summary_text = summary.dump(2);
  if (config.output.json && config.mode != Mode::sweep_g && config.mode != Mode::sweep_gamma)
    out.text("summary.json", summary_text);
  if (config.mode == Mode::stability && !config.output.json) out.text("summary.json", summary_text);

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ordered_json manifest;
  manifest["software"] = {{"name", "magcat"}, {"version", kVersion}};
  manifest["mode"] = std::string(to_string(config.mode));
  manifest["config"] = ordered_json::parse(write_config(config));
  manifest["threads"] = std::max(1u, options.threads);
  manifest["wall_clock_seconds"] = seconds;
  manifest["files"] = out.files();
  manifest["diagnostics"] = {{"truncation_tail", diag.truncation_tail},
                             {"fock_edge_population", diag.fock_edge_population},
                             {"max_trace_drift", diag.max_trace_drift},
                             {"projection_used", diag.projection_used},
                             {"projection_mass_leak", diag.projection_mass_leak}};
  manifest["warnings"] = diag.warnings;
  out.text("manifest.json", manifest.dump(2));

  RunReport report;
  report.directory = out.dir().string();
  report.files = out.files();
  report.warnings = diag.warnings;
  report.summary_json = summary_text;
  return report;
}

}  // namespace magcat
