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

#include "magcat/magcat.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "magcat/bell.hpp"
#include "magcat/dynamics.hpp"
#include "magcat/experiment.hpp"
#include "magcat/hilbert.hpp"

struct magcat_config {
  magcat::ExperimentConfig value;
  std::string mode;
};

struct magcat_state {
  magcat::StateVector value;
};

namespace {

thread_local std::string last_error;

magcat_status fail(magcat_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
magcat_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return MAGCAT_OK;
  } catch (const magcat::Error& e) {
    return fail(static_cast<magcat_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MAGCAT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MAGCAT_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

magcat::Complex to_cpp(magcat_complex z) { return {z.re, z.im}; }
magcat_complex to_c(magcat::Complex z) { return {z.real(), z.imag()}; }

#define MAGCAT_REQUIRE(ptr) \
  if (!(ptr)) return fail(MAGCAT_ERR_ARGUMENT, std::string(__func__) + ": " #ptr " must not be NULL")

}  // namespace

extern "C" {

const char* magcat_version(void) { return magcat::kVersion; }

const char* magcat_last_error(void) { return last_error.c_str(); }

magcat_status magcat_config_load(const char* path, magcat_config** out) {
  MAGCAT_REQUIRE(path);
  MAGCAT_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto cfg = magcat::parse_config(path);
    *out = new magcat_config{cfg, std::string(magcat::to_string(cfg.mode))};
  });
}

magcat_status magcat_config_parse(const char* json_text, magcat_config** out) {
  MAGCAT_REQUIRE(json_text);
  MAGCAT_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto cfg = magcat::parse_config_text(json_text, "<string>");
    *out = new magcat_config{cfg, std::string(magcat::to_string(cfg.mode))};
  });
}

magcat_status magcat_config_to_json(const magcat_config* config, char** out) {
  MAGCAT_REQUIRE(config);
  MAGCAT_REQUIRE(out);
  return guarded([&] { *out = dup_string(magcat::write_config(config->value)); });
}

magcat_status magcat_config_mode(const magcat_config* config, const char** out) {
  MAGCAT_REQUIRE(config);
  MAGCAT_REQUIRE(out);
  *out = config->mode.c_str();
  return MAGCAT_OK;
}

void magcat_config_free(magcat_config* config) { delete config; }

void magcat_string_free(char* s) { delete[] s; }

magcat_status magcat_run(const magcat_config* config, const char* out_dir, unsigned threads, char** report) {
  MAGCAT_REQUIRE(config);
  if (report) *report = nullptr;
  return guarded([&] {
    magcat::RunOptions options;
    if (out_dir) options.out_dir = out_dir;
    options.threads = threads == 0 ? 1 : threads;
    const magcat::RunReport r = magcat::run_experiment(config->value, options);
    if (report) {
      nlohmann::ordered_json j;
      j["directory"] = r.directory;
      j["files"] = r.files;
      j["warnings"] = r.warnings;
      j["summary"] = nlohmann::ordered_json::parse(r.summary_json);
      *report = dup_string(j.dump(2));
    }
  });
}

magcat_status magcat_state_new(magcat_state_kind kind, magcat_complex alpha, int cutoff, magcat_state** out) {
  MAGCAT_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const magcat::Complex a = to_cpp(alpha);
    switch (kind) {
      case MAGCAT_STATE_VACUUM:
        *out = new magcat_state{magcat::StateVector::vacuum(magcat::ModeSpace::single(cutoff))};
        return;
      case MAGCAT_STATE_COHERENT:
        *out = new magcat_state{magcat::coherent_state(a, cutoff)};
        return;
      case MAGCAT_STATE_CAT:
        *out = new magcat_state{magcat::cat_state(a, cutoff)};
        return;
      case MAGCAT_STATE_SEPARABLE:
        *out = new magcat_state{magcat::separable_cat(a, cutoff)};
        return;
      case MAGCAT_STATE_ENTANGLED:
        *out = new magcat_state{magcat::entangled_cat(a, cutoff)};
        return;
    }
    throw magcat::ArgumentError("magcat_state_new: unknown state kind " + std::to_string(static_cast<int>(kind)));
  });
}

magcat_status magcat_state_dim(const magcat_state* state, size_t* out) {
  MAGCAT_REQUIRE(state);
  MAGCAT_REQUIRE(out);
  *out = static_cast<size_t>(state->value.amplitudes().size());
  return MAGCAT_OK;
}

magcat_status magcat_state_amplitudes(const magcat_state* state, magcat_complex* out, size_t capacity) {
  MAGCAT_REQUIRE(state);
  MAGCAT_REQUIRE(out);
  const auto& amp = state->value.amplitudes();
  const size_t n = std::min(capacity, static_cast<size_t>(amp.size()));
  for (size_t i = 0; i < n; ++i) out[i] = to_c(amp(static_cast<Eigen::Index>(i)));
  return MAGCAT_OK;
}

magcat_status magcat_state_fidelity(const magcat_state* a, const magcat_state* b, double* out) {
  MAGCAT_REQUIRE(a);
  MAGCAT_REQUIRE(b);
  MAGCAT_REQUIRE(out);
  if (a->value.amplitudes().size() != b->value.amplitudes().size())
    return fail(MAGCAT_ERR_ARGUMENT, "magcat_state_fidelity: dimension mismatch");
  *out = std::norm(a->value.inner(b->value));
  return MAGCAT_OK;
}

void magcat_state_free(magcat_state* state) { delete state; }

magcat_status magcat_chsh(const magcat_complex* rho4x4, const char* variant, double* out) {
  MAGCAT_REQUIRE(rho4x4);
  MAGCAT_REQUIRE(variant);
  MAGCAT_REQUIRE(out);
  return guarded([&] {
    magcat::CMatrix rho(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) rho(r, c) = to_cpp(rho4x4[4 * r + c]);
    *out = magcat::chsh_qualifier(rho, magcat::bell_setting(magcat::bell_variant_from_string(variant)));
  });
}

magcat_status magcat_stability(double delta, double pump_magnitude, int* stable) {
  MAGCAT_REQUIRE(stable);
  *stable = magcat::parametric_stability(delta, pump_magnitude) ? 1 : 0;
  return MAGCAT_OK;
}

magcat_status magcat_effective_params(double omega_c, double omega_m, double omega_d, magcat_complex g,
                                      magcat_complex pump_g, double kerr, magcat_effective* out) {
  MAGCAT_REQUIRE(out);
  return guarded([&] {
    const magcat::EffectiveParams e =
        magcat::effective_params({omega_c, omega_m, omega_d, to_cpp(g), to_cpp(pump_g), kerr});
    *out = {e.params.delta, to_c(e.params.pump), e.params.kerr, e.weak_detuning ? 1 : 0};
  });
}

}  // extern "C"
