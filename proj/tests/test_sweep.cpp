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

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "magcat/analysis.hpp"
#include "magcat/error.hpp"
#include "magcat/sweep.hpp"

using namespace magcat;

namespace {

// A cheap sweep: short horizon, coarse step, small cutoff.
SweepSpec small_spec() {
  SweepSpec s;
  s.base = {1.0, 1.8, 1.2, 0.0, 5.0, 0.0};
  s.cutoff = 8;
  s.t_final = 1.0;
  s.dt = 2e-3;
  s.max_frames = 20;
  return s;
}

}  // namespace

TEST(Sweep, ValidateRejectsBadAxes) {
  SweepSpec s = small_spec();
  EXPECT_THROW(validate(s), ArgumentError);  // empty
  s.values = {0.2, 0.1};
  EXPECT_THROW(validate(s), ArgumentError);  // not increasing
  s.values = {0.1, 0.2};
  EXPECT_NO_THROW(validate(s));
  s.axis = SweepAxis::local_loss_rate;
  s.values = {-0.1, 0.2};
  EXPECT_THROW(validate(s), ArgumentError);  // negative rate
}

TEST(Sweep, ParamsAtSetsOnlyTheAxis) {
  SweepSpec s = small_spec();
  s.axis = SweepAxis::local_loss_rate;
  const TwoModeParams p = params_at(s, 0.01);
  EXPECT_DOUBLE_EQ(p.local_loss_rate, 0.01);
  EXPECT_DOUBLE_EQ(p.cross_talk, 0.0);
  EXPECT_DOUBLE_EQ(p.pump, 1.8);
}

TEST(Sweep, SinglePointMatchesDirectRun) {
  SweepSpec s = small_spec();
  s.values = {0.0};
  const SweepResult r = run_sweep(s);
  ASSERT_EQ(r.q_max.size(), 1u);

  EvolveOptions o;
  o.t_final = s.t_final;
  o.dt = s.dt;
  o.save_every = static_cast<std::size_t>(std::ceil(std::ceil(s.t_final / s.dt) / s.max_frames));
  const Trajectory t = evolve(two_mode_model(s.base, s.cutoff),
                              DensityMatrix::pure(StateVector::vacuum(ModeSpace::pair(s.cutoff))), o);
  const MetricSeries q = qualifier_series(t, {optimal_modular_length(s.target_alpha), 0.0, -8, 7},
                                          bell_setting(s.variant), s.quad);
  EXPECT_NEAR(r.q_max[0], series_max(q).value, 1e-9);
  EXPECT_NEAR(r.t_at_max[0], series_max(q).time, 1e-12);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  SweepSpec s = small_spec();
  s.values = {0.0, 0.5, 1.0};
  const SweepResult one = run_sweep(s);
  s.threads = 3;
  const SweepResult three = run_sweep(s);
  EXPECT_EQ(one.q_max, three.q_max);
  EXPECT_EQ(one.t_at_max, three.t_at_max);
}

TEST(Sweep, FailedPointIsRecordedNotFatal) {
  SweepSpec s = small_spec();
  s.dt = 0.5;  // unstable step
  s.values = {0.0};
  const SweepResult r = run_sweep(s);
  EXPECT_FALSE(r.errors[0].empty());
  EXPECT_TRUE(std::isnan(r.q_max[0]));
}

TEST(Sweep, ThresholdNeedsSignChange) {
  SweepSpec s = small_spec();
  SweepResult scan;
  scan.axis_values = {0.0, 1.0};
  scan.q_max = {2.5, 2.2};
  scan.t_at_max = {1.0, 1.0};
  scan.errors = {"", ""};
  EXPECT_THROW(locate_threshold(s, scan, 0.01), ArgumentError);
}

TEST(FitLine, ExactLineHasZeroResidual) {
  const double x[] = {0.0, 1.0, 2.0, 3.0};
  const double y[] = {1.0, 3.0, 5.0, 7.0};
  const LinearFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.residual_rms, 0.0, 1e-14);
}

TEST(FitLine, ResidualIsRootMeanSquare) {
  const double x[] = {0.0, 1.0, 2.0};
  const double y[] = {0.0, 1.0, 0.0};
  const LinearFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 0.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(f.residual_rms, std::sqrt((1.0 / 9 + 4.0 / 9 + 1.0 / 9) / 3.0), 1e-14);
}

TEST(SweepOutput, CsvAndSummary) {
  SweepSpec s = small_spec();
  s.values = {0.0, 0.5};
  const SweepResult r = run_sweep(s);
  const auto path = std::filesystem::temp_directory_path() / "magcat_sweep_test.csv";
  write_sweep_csv(r, path.string());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "axis,q_max,t_at_max,status");
  std::filesystem::remove(path);

  const auto j = nlohmann::json::parse(sweep_summary_json(s, r, std::nullopt, LinearFit{1.0, 2.0, 0.5}));
  EXPECT_EQ(j.at("axis"), "cross_talk");
  EXPECT_EQ(j.at("points").size(), 2u);
  EXPECT_TRUE(j.at("threshold").is_null());
  EXPECT_DOUBLE_EQ(j.at("fit").at("residual_rms").get<double>(), 0.5);
}
