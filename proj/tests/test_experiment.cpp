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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "magcat/error.hpp"
#include "magcat/experiment.hpp"

using namespace magcat;
namespace fs = std::filesystem;

namespace {

const char* kFig3 = R"({
  "mode": "two_evolve",
  "params": {"delta": 1, "S": 1.8, "K": 1.2, "g": 0, "gamma_c": 5, "alpha_target": "1.4i"},
  "numerics": {"N": 15}
})";

std::string with(const std::string& base, const std::string& from, const std::string& to) {
  std::string s = base;
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text, "test");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("magcat_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(ComplexLiteral, Parses) {
  EXPECT_EQ(parse_complex("1.4i"), Complex(0.0, 1.4));
  EXPECT_EQ(parse_complex("-1.2"), Complex(-1.2, 0.0));
  EXPECT_EQ(parse_complex("1.5-2i"), Complex(1.5, -2.0));
  EXPECT_EQ(parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(parse_complex("i"), Complex(0.0, 1.0));
  EXPECT_EQ(parse_complex("1e-3+2e+1i"), Complex(1e-3, 20.0));
  EXPECT_EQ(parse_complex("+3"), Complex(3.0, 0.0));
}

TEST(ComplexLiteral, RejectsMalformed) {
  for (const char* bad : {"", "1.4j", "1+", "1++2i", "abc", "1.4 i", "nan", "inf", "1e999", "2i3"})
    EXPECT_THROW(parse_complex(bad), ConfigError) << bad;
}

TEST(ComplexLiteral, FormatRoundTrips) {
  for (Complex z : {Complex(0.0, 1.4), Complex(1.8, 0.0), Complex(-0.1, -2.5), Complex(1.0 / 3.0, 1e-17)})
    EXPECT_EQ(parse_complex(format_complex(z)), z) << format_complex(z);
  EXPECT_EQ(format_complex(Complex(0.0, 1.4)), "1.4i");
  EXPECT_EQ(format_complex(Complex(1.8, 0.0)), "1.8");
  EXPECT_EQ(format_complex(Complex(1.0, -2.0)), "1-2i");
}

TEST(Config, ReferencePointIsAccepted) {
  const ExperimentConfig c = parse_config_text(kFig3, "test");
  EXPECT_EQ(c.mode, Mode::two_evolve);
  EXPECT_EQ(c.params.pump, Complex(1.8));
  EXPECT_EQ(c.params.alpha_target, Complex(0.0, 1.4));
  EXPECT_EQ(c.numerics.cutoff, 15);
  EXPECT_DOUBLE_EQ(c.numerics.dt, 5e-4);
}

TEST(Config, CutoffTooSmall) {
  const std::string msg = config_error(with(kFig3, "\"N\": 15", "\"N\": 1"));
  EXPECT_NE(msg.find("numerics.N"), std::string::npos) << msg;
  EXPECT_NE(msg.find("cutoff too small"), std::string::npos) << msg;
}

TEST(Config, UnknownKeyIsNamed) {
  const std::string msg = config_error(with(kFig3, "\"gamma_c\"", "\"gamma_C\""));
  EXPECT_NE(msg.find("params.gamma_C"), std::string::npos) << msg;
}

TEST(Config, TypeErrorsNameFieldAndValue) {
  const std::string msg = config_error(with(kFig3, "\"N\": 15", "\"N\": \"fifteen\""));
  EXPECT_NE(msg.find("numerics.N"), std::string::npos);
  EXPECT_NE(msg.find("integer"), std::string::npos);
  EXPECT_NE(msg.find("fifteen"), std::string::npos);
}

TEST(Config, RejectsNegativeRatesAndComplexTwoModePump) {
  EXPECT_NE(config_error(with(kFig3, "\"gamma_c\": 5", "\"gamma_c\": -5")).find("params.gamma_c"),
            std::string::npos);
  EXPECT_NE(config_error(with(kFig3, "\"S\": 1.8", "\"S\": \"1.8i\"")).find("params.S"), std::string::npos);
}

TEST(Config, RequiredFieldsDependOnMode) {
  EXPECT_NE(config_error(with(kFig3, ", \"alpha_target\": \"1.4i\"", "")).find("alpha_target"), std::string::npos);
  // stability needs only delta and S
  EXPECT_NO_THROW(parse_config_text(R"({"mode":"stability","params":{"delta":1,"S":1.8}})", "test"));
  EXPECT_NE(config_error(R"({"mode":"single_evolve","params":{"delta":1,"S":"1.2i"}})").find("params.K"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"mode":"sweep_g","params":{"delta":1,"S":1.8,"K":1.2,"gamma_c":5,"alpha_target":"1.4i"}})")
                .find("sweep"),
            std::string::npos);
}

TEST(Config, RejectsUnknownModeAndBadJson) {
  EXPECT_NE(config_error(with(kFig3, "two_evolve", "three_evolve")).find("mode"), std::string::npos);
  EXPECT_NE(config_error("{ not json").find("not valid JSON"), std::string::npos);
  EXPECT_THROW(parse_config("/nonexistent/magcat.json"), ConfigError);
}

TEST(Config, WriteThenParseIsIdentity) {
  ExperimentConfig c = parse_config_text(kFig3, "test");
  c.numerics.modular.length = 4.2;
  c.sweep.fit_window = std::vector<double>{0.005, 0.011};
  c.effective = EffectiveParamsInput{10.0, 3.0, 4.0, Complex(0.5, 0.1), Complex(0.0, 2.0), 0.1};
  c.output.csv = false;
  EXPECT_EQ(parse_config_text(write_config(c), "roundtrip"), c);
}

TEST(Config, ShippedRecipesRoundTrip) {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(MAGCAT_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const ExperimentConfig c = parse_config(entry.path().string());
    EXPECT_EQ(parse_config_text(write_config(c), "roundtrip"), c) << entry.path();
    ++seen;
  }
  EXPECT_GE(seen, 7);
}

TEST(Run, StabilityReportsUnstableReferencePump) {
  const fs::path dir = scratch("stability");
  const ExperimentConfig c = parse_config_text(R"({"mode":"stability","params":{"delta":1,"S":1.8}})", "test");
  const RunReport r = run_experiment(c, {dir.string(), 1});
  const auto summary = nlohmann::json::parse(r.summary_json);
  EXPECT_EQ(summary.at("verdict"), "unstable");
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}

TEST(Run, SingleEvolveWritesSeriesAndManifest) {
  const fs::path dir = scratch("single");
  const ExperimentConfig c = parse_config_text(
      R"({"mode":"single_evolve","params":{"delta":1,"S":"1.2i","K":1.2},
          "numerics":{"N":10,"dt":1e-3,"t_final":0.5,"save_every":50}})",
      "test");
  const RunReport r = run_experiment(c, {dir.string(), 1});
  EXPECT_EQ(r.files.back(), "manifest.json");
  EXPECT_TRUE(fs::exists(dir / "vacuum_fidelity.csv"));
  EXPECT_TRUE(fs::exists(dir / "photon_number.csv"));

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest.at("software").at("version"), kVersion);
  for (const char* key : {"truncation_tail", "fock_edge_population", "max_trace_drift", "projection_mass_leak"})
    EXPECT_TRUE(manifest.at("diagnostics").contains(key)) << key;
  EXPECT_EQ(parse_config_text(manifest.at("config").dump(), "echo"), c);
  fs::remove_all(dir);
}

TEST(Run, OutputsAreReproducible) {
  const ExperimentConfig c = parse_config_text(
      R"({"mode":"two_evolve","params":{"delta":1,"S":1.8,"K":1.2,"gamma_c":5,"alpha_target":"1.4i"},
          "numerics":{"N":6,"dt":1e-3,"t_final":0.3,"save_every":30}})",
      "test");
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  const RunReport ra = run_experiment(c, {a.string(), 1});
  run_experiment(c, {b.string(), 1});
  for (const std::string& f : ra.files)
    if (f != "manifest.json") EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, FormatsControlWhichFilesAppear) {
  const fs::path dir = scratch("formats");
  const ExperimentConfig c = parse_config_text(
      R"({"mode":"single_evolve","params":{"delta":1,"S":"1.2i","K":1.2},
          "numerics":{"N":6,"dt":1e-3,"t_final":0.1},"output":{"formats":["json"]}})",
      "test");
  run_experiment(c, {dir.string(), 1});
  EXPECT_FALSE(fs::exists(dir / "vacuum_fidelity.csv"));
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  fs::remove_all(dir);
}

TEST(Run, DivergingStepIsANumericsError) {
  const ExperimentConfig c = parse_config_text(
      R"({"mode":"two_evolve","params":{"delta":1,"S":1.8,"K":1.2,"gamma_c":5,"alpha_target":"1.4i"},
          "numerics":{"N":8,"dt":0.5,"t_final":2}})",
      "test");
  const fs::path dir = scratch("diverge");
  EXPECT_THROW(run_experiment(c, {dir.string(), 1}), NumericsError);
  fs::remove_all(dir);
}

TEST(Run, CoarseMomentumGridIsAResolutionError) {
  const ExperimentConfig c = parse_config_text(
      R"({"mode":"chsh","params":{"delta":1,"S":1.8,"K":1.2,"gamma_c":5,"alpha_target":"1.4i"},
          "numerics":{"N":6,"dt":1e-3,"t_final":0.01,"momentum_grid":{"min":-12,"max":12,"count":101}}})",
      "test");
  const fs::path dir = scratch("coarse");
  EXPECT_THROW(run_experiment(c, {dir.string(), 1}), ResolutionError);
  fs::remove_all(dir);
}
