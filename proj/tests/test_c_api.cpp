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

// Exercises the shared library strictly through its C header.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "magcat/magcat.h"

namespace fs = std::filesystem;

TEST(CApi, Version) { EXPECT_STREQ(magcat_version(), "0.3.0"); }

TEST(CApi, ParseAndSerializeConfig) {
  magcat_config* cfg = nullptr;
  ASSERT_EQ(magcat_config_parse(R"({"mode":"stability","params":{"delta":1,"S":1.8}})", &cfg), MAGCAT_OK);
  const char* mode = nullptr;
  ASSERT_EQ(magcat_config_mode(cfg, &mode), MAGCAT_OK);
  EXPECT_STREQ(mode, "stability");
  char* text = nullptr;
  ASSERT_EQ(magcat_config_to_json(cfg, &text), MAGCAT_OK);
  magcat_config* again = nullptr;
  EXPECT_EQ(magcat_config_parse(text, &again), MAGCAT_OK);
  magcat_string_free(text);
  magcat_config_free(again);
  magcat_config_free(cfg);
}

TEST(CApi, ConfigErrorsCarryMessage) {
  magcat_config* cfg = nullptr;
  EXPECT_EQ(magcat_config_parse(R"({"mode":"stability","params":{"delta":1,"S":1.8,"bogus":1}})", &cfg),
            MAGCAT_ERR_CONFIG);
  EXPECT_EQ(cfg, nullptr);
  EXPECT_NE(std::string(magcat_last_error()).find("params.bogus"), std::string::npos);
  EXPECT_EQ(magcat_config_load("/nonexistent.json", &cfg), MAGCAT_ERR_CONFIG);
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(magcat_config_parse(nullptr, nullptr), MAGCAT_ERR_ARGUMENT);
  EXPECT_EQ(magcat_stability(1.0, 1.0, nullptr), MAGCAT_ERR_ARGUMENT);
  magcat_config_free(nullptr);
  magcat_state_free(nullptr);
  magcat_string_free(nullptr);
}

TEST(CApi, RunWritesReport) {
  const fs::path dir = fs::temp_directory_path() / "magcat_capi_run";
  fs::remove_all(dir);
  magcat_config* cfg = nullptr;
  ASSERT_EQ(magcat_config_parse(R"({"mode":"stability","params":{"delta":1,"S":0.3}})", &cfg), MAGCAT_OK);
  char* report = nullptr;
  ASSERT_EQ(magcat_run(cfg, dir.c_str(), 1, &report), MAGCAT_OK) << magcat_last_error();
  EXPECT_NE(std::string(report).find("\"stable\""), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  magcat_string_free(report);
  magcat_config_free(cfg);
  fs::remove_all(dir);
}

TEST(CApi, NumericsFailureMapsToStatus) {
  magcat_config* cfg = nullptr;
  ASSERT_EQ(magcat_config_parse(R"({"mode":"two_evolve",
      "params":{"delta":1,"S":1.8,"K":1.2,"gamma_c":5,"alpha_target":"1.4i"},
      "numerics":{"N":8,"dt":0.5,"t_final":2}})",
                                &cfg),
            MAGCAT_OK);
  const fs::path dir = fs::temp_directory_path() / "magcat_capi_diverge";
  EXPECT_EQ(magcat_run(cfg, dir.c_str(), 1, nullptr), MAGCAT_ERR_NUMERICS);
  EXPECT_NE(std::string(magcat_last_error()).find("reduce dt"), std::string::npos);
  magcat_config_free(cfg);
  fs::remove_all(dir);
}

TEST(CApi, StatesAndFidelity) {
  magcat_state* cat = nullptr;
  magcat_state* vac = nullptr;
  ASSERT_EQ(magcat_state_new(MAGCAT_STATE_CAT, {0.0, 1.4}, 15, &cat), MAGCAT_OK);
  ASSERT_EQ(magcat_state_new(MAGCAT_STATE_VACUUM, {0.0, 0.0}, 15, &vac), MAGCAT_OK);
  size_t dim = 0;
  ASSERT_EQ(magcat_state_dim(cat, &dim), MAGCAT_OK);
  EXPECT_EQ(dim, 15u);
  std::vector<magcat_complex> amp(dim);
  ASSERT_EQ(magcat_state_amplitudes(cat, amp.data(), amp.size()), MAGCAT_OK);
  EXPECT_EQ(amp[1].re, 0.0);
  double f = 0.0;
  ASSERT_EQ(magcat_state_fidelity(cat, vac, &f), MAGCAT_OK);
  // |<0|cat>|^2 = 2 e^{-|a|^2} / (1 + e^{-2|a|^2})
  EXPECT_NEAR(f, 2.0 * std::exp(-1.96) / (1.0 + std::exp(-3.92)), 1e-8);

  magcat_state* ent = nullptr;
  ASSERT_EQ(magcat_state_new(MAGCAT_STATE_ENTANGLED, {0.0, 1.4}, 15, &ent), MAGCAT_OK);
  EXPECT_EQ(magcat_state_fidelity(cat, ent, &f), MAGCAT_ERR_ARGUMENT);
  EXPECT_EQ(magcat_state_new(static_cast<magcat_state_kind>(42), {0, 0}, 5, &ent), MAGCAT_ERR_ARGUMENT);
  magcat_state_free(ent);
  magcat_state_free(cat);
  magcat_state_free(vac);
}

TEST(CApi, ChshOfBellState) {
  magcat_complex rho[16] = {};
  // |Psi+> = (|01> + |10>)/sqrt2
  for (int r : {1, 2})
    for (int c : {1, 2}) rho[4 * r + c] = {0.5, 0.0};
  double q = 0.0;
  ASSERT_EQ(magcat_chsh(rho, "PsiPlus", &q), MAGCAT_OK);
  EXPECT_NEAR(q, 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NE(magcat_chsh(rho, "Bogus", &q), MAGCAT_OK);
}

TEST(CApi, StabilityAndEffectiveParams) {
  int stable = -1;
  ASSERT_EQ(magcat_stability(1.0, 0.5, &stable), MAGCAT_OK);
  EXPECT_EQ(stable, 0);
  magcat_effective e{};
  ASSERT_EQ(magcat_effective_params(10.0, 3.0, 4.0, {0.5, 0.0}, {0.0, 2.0}, 0.1, &e), MAGCAT_OK);
  EXPECT_NEAR(e.delta, 1.0 - 0.25 * 8.0 / 60.0, 1e-14);
  EXPECT_EQ(e.weak_detuning, 0);
  EXPECT_EQ(magcat_effective_params(2.0, 1.0, 2.0, {0.5, 0.0}, {1.0, 0.0}, 0.0, &e), MAGCAT_ERR_ARGUMENT);
}
