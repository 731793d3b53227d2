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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "magcat/magcat.h"

namespace {

// Usage errors get their own code so scripts can tell them from run failures.
constexpr int kUsageExit = 64;

int report_failure(magcat_status status, const char* what) {
  std::fprintf(stderr, "magcat: %s: %s\n", what, magcat_last_error());
  return static_cast<int>(status);
}

magcat_status load(const std::string& path, magcat_config** config) {
  return magcat_config_load(path.c_str(), config);
}

int cmd_validate(const std::string& path) {
  magcat_config* config = nullptr;
  if (magcat_status s = load(path, &config); s != MAGCAT_OK) return report_failure(s, "invalid config");
  const char* mode = nullptr;
  magcat_config_mode(config, &mode);
  std::printf("%s: ok (mode %s)\n", path.c_str(), mode);
  magcat_config_free(config);
  return 0;
}

int cmd_run(const std::string& path, const std::string& out_dir, unsigned threads) {
  magcat_config* config = nullptr;
  if (magcat_status s = load(path, &config); s != MAGCAT_OK) return report_failure(s, "invalid config");
  char* report = nullptr;
  const magcat_status s = magcat_run(config, out_dir.empty() ? nullptr : out_dir.c_str(), threads, &report);
  magcat_config_free(config);
  if (s != MAGCAT_OK) return report_failure(s, "run failed");
  std::printf("%s\n", report);
  magcat_string_free(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnon cat-state simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  unsigned threads = 1;

  CLI::App* run = app.add_subcommand("run", "Run an experiment and write its artifacts");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output.directory)");
  run->add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::Range(1u, 1024u));

  CLI::App* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("--config", config_path, "Experiment config (JSON)")->required();

  app.add_subcommand("version", "Print the library version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  if (app.got_subcommand("version")) {
    std::printf("magcat %s\n", magcat_version());
    return 0;
  }
  if (app.got_subcommand("validate")) return cmd_validate(config_path);
  return cmd_run(config_path, out_dir, threads);
}
