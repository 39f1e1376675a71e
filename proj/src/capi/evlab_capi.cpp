// Copyright 2026 The evlab Authors
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


#include "evlab/evlab.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "json.hpp"
#include "evlab/certify/certificates.hpp"
#include "evlab/common/error.hpp"
#include "evlab/experiments/experiments.hpp"
#include "evlab/solver/config.hpp"

struct evlab_config {
  evlab::SolverConfig cfg;
};

struct evlab_candidate {
  evlab::CandidateSolution c;
};

namespace {

thread_local std::string g_last_error;

evlab_status to_status(evlab::ErrorCode code) {
  switch (code) {
    case evlab::ErrorCode::kOk: return EVLAB_OK;
    case evlab::ErrorCode::kVerificationFailed: return EVLAB_VERIFICATION_FAILED;
    case evlab::ErrorCode::kUsage: return EVLAB_ERR_USAGE;
    case evlab::ErrorCode::kConfig: return EVLAB_ERR_CONFIG;
    case evlab::ErrorCode::kFormat: return EVLAB_ERR_FORMAT;
    case evlab::ErrorCode::kBlowUp: return EVLAB_ERR_BLOWUP;
    case evlab::ErrorCode::kIncomparable: return EVLAB_INCOMPARABLE;
    case evlab::ErrorCode::kPrecondition: return EVLAB_ERR_PRECONDITION;
    case evlab::ErrorCode::kIntegrity: return EVLAB_ERR_INTEGRITY;
    case evlab::ErrorCode::kInternal: return EVLAB_ERR_INTERNAL;
  }
  return EVLAB_ERR_INTERNAL;
}

evlab_status fail(evlab_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
evlab_status guarded(F&& f) {
  try {
    f();
    return EVLAB_OK;
  } catch (const evlab::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(EVLAB_ERR_FORMAT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EVLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EVLAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EVLAB_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

#define EVLAB_REQUIRE(cond, what) \
  if (!(cond)) return fail(EVLAB_ERR_USAGE, what)

}  // namespace

extern "C" {

const char* evlab_version(void) { return "1.0.0"; }

const char* evlab_last_error(void) { return g_last_error.c_str(); }

int evlab_exit_code(evlab_status status) {
  switch (status) {
    case EVLAB_OK: return 0;
    case EVLAB_VERIFICATION_FAILED: return 1;
    case EVLAB_ERR_BLOWUP: return 3;
    case EVLAB_INCOMPARABLE: return 4;
    case EVLAB_ERR_INTERNAL: return 1;
    default: return 2;
  }
}

void evlab_string_free(char* s) { std::free(s); }

evlab_status evlab_config_new(evlab_config** out) {
  EVLAB_REQUIRE(out, "null output pointer");
  return guarded([&] { *out = new evlab_config{}; });
}

evlab_status evlab_config_parse(const char* text, evlab_config** out) {
  EVLAB_REQUIRE(text && out, "null argument");
  return guarded([&] { *out = new evlab_config{evlab::parse_solver_config(text)}; });
}

evlab_status evlab_config_load(const char* path, evlab_config** out) {
  EVLAB_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new evlab_config{evlab::load_solver_config(path)}; });
}

evlab_status evlab_config_set(evlab_config* cfg, const char* key, const char* value) {
  EVLAB_REQUIRE(cfg && key && value, "null argument");
  return guarded([&] {
    std::string text = evlab::to_config_text(cfg->cfg);
    text += std::string(key) + "=" + value + "\n";
    cfg->cfg = evlab::parse_solver_config(text);
  });
}

evlab_status evlab_config_to_text(const evlab_config* cfg, char** out) {
  EVLAB_REQUIRE(cfg && out, "null argument");
  return guarded([&] { *out = dup_string(evlab::to_config_text(cfg->cfg)); });
}

void evlab_config_free(evlab_config* cfg) { delete cfg; }

evlab_status evlab_simulate(const evlab_config* cfg, evlab_candidate** out) {
  EVLAB_REQUIRE(cfg && out, "null argument");
  return guarded([&] {
    *out = new evlab_candidate{evlab::build_energy_trace(evlab::integrate(cfg->cfg))};
  });
}

evlab_status evlab_candidate_load(const char* dir, evlab_candidate** out) {
  EVLAB_REQUIRE(dir && out, "null argument");
  return guarded([&] { *out = new evlab_candidate{evlab::load_candidate(dir)}; });
}

evlab_status evlab_candidate_save(const evlab_candidate* c, const char* dir) {
  EVLAB_REQUIRE(c && dir, "null argument");
  return guarded([&] { evlab::save_candidate(dir, c->c); });
}

evlab_status evlab_candidate_coarse_grain(const evlab_candidate* c, int m, evlab_candidate** out) {
  EVLAB_REQUIRE(c && out, "null argument");
  return guarded([&] {
    *out = new evlab_candidate{evlab::synthesize_defect_candidate(c->c.trajectory, m)};
  });
}

evlab_status evlab_candidate_size(const evlab_candidate* c, size_t* n) {
  EVLAB_REQUIRE(c && n, "null argument");
  *n = c->c.size();
  return EVLAB_OK;
}

evlab_status evlab_candidate_trace(const evlab_candidate* c, double* times, double* E,
                                   double* kinetic, double* xi, size_t capacity,
                                   size_t* written) {
  EVLAB_REQUIRE(c, "null candidate");
  const auto& tr = c->c.trace;
  const size_t n = tr.size() < capacity ? tr.size() : capacity;
  for (size_t i = 0; i < n; ++i) {
    if (times) times[i] = tr.times[i];
    if (E) E[i] = tr.E[i];
    if (kinetic) kinetic[i] = tr.kinetic[i];
    if (xi) xi[i] = tr.xi[i];
  }
  if (written) *written = n;
  return EVLAB_OK;
}

evlab_status evlab_candidate_xi_max(const evlab_candidate* c, double* out) {
  EVLAB_REQUIRE(c && out, "null argument");
  *out = c->c.xi_max();
  return EVLAB_OK;
}

evlab_status evlab_candidate_id(const evlab_candidate* c, char** out) {
  EVLAB_REQUIRE(c && out, "null argument");
  return guarded([&] { *out = dup_string(c->c.id); });
}

evlab_status evlab_candidate_verify(const evlab_candidate* c, const char* weight,
                                    double tol_scale, char** report_json, int* passed) {
  EVLAB_REQUIRE(c && report_json && passed, "null argument");
  return guarded([&] {
    if (!(tol_scale > 0.0)) throw evlab::UsageError("tolerance scale must be positive");
    evlab::VerifyOptions opt;
    opt.weight = evlab::RegularityWeight::parse(weight ? weight : "lipschitz", c->c.grid().dim);
    opt.policy.scale = tol_scale;
    const evlab::VerifyOutcome v = evlab::verify_candidate(c->c, opt);
    *report_json = dup_string(evlab::dump_report(v.report));
    *passed = v.pass ? 1 : 0;
  });
}

void evlab_candidate_free(evlab_candidate* c) { delete c; }

evlab_status evlab_run_experiment(const char* spec_json, char** report_json, int* exit_code) {
  EVLAB_REQUIRE(spec_json && report_json && exit_code, "null argument");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(spec_json);
    } catch (const nlohmann::json::exception& e) {
      throw evlab::UsageError(std::string("experiment spec is not valid JSON: ") + e.what());
    }
    const evlab::ExperimentSpec spec = evlab::parse_experiment_spec(j);
    const evlab::ExperimentResult r = evlab::run_experiment(spec);
    *report_json = dup_string(evlab::dump_report(r.report));
    *exit_code = r.exit_code;
  });
}

}  // extern "C"
