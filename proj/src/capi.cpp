// Copyright 2026 The halfheat Authors
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

#include "halfheat/halfheat.h"

#include <new>
#include <string>

#include "halfheat/decomposition.hpp"
#include "halfheat/experiments.hpp"
#include "halfheat/observability.hpp"
#include "halfheat/sector.hpp"
#include "halfheat/spectral.hpp"

struct hh_config {
  hh::ExperimentConfig cfg;
  mutable std::string scratch;
};

struct hh_result {
  hh::ExperimentOutput out;
};

namespace {

thread_local std::string g_last_error;

hh_status fail(hh_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
hh_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return HH_OK;
  } catch (const hh::ValidationError& e) {
    return fail(HH_ERR_VALIDATION, e.what());
  } catch (const hh::NumericalError& e) {
    return fail(HH_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HH_ERR_NUMERICAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HH_ERR_NUMERICAL, e.what());
  }
}

hh::AnnularSector sector(int side, double T, double t1, double t2) {
  hh::require(side == 0 || side == 1, "side must be 0 (exterior) or 1 (interior)");
  return hh::AnnularSector(side == 0 ? hh::Side::Exterior : hh::Side::Interior, T,
                           hh::ArcInterval(t1, t2));
}

}  // namespace

extern "C" {

const char* hh_version(void) { return "1.0.0"; }
const char* hh_last_error(void) { return g_last_error.c_str(); }

size_t hh_command_count(void) { return hh::experiment_commands().size(); }
const char* hh_command_name(size_t i) {
  const auto& c = hh::experiment_commands();
  return i < c.size() ? c[i].c_str() : nullptr;
}

hh_status hh_config_create(hh_config** out) {
  if (!out) return fail(HH_ERR_VALIDATION, "null output pointer");
  return guarded([&] { *out = new hh_config(); });
}

void hh_config_destroy(hh_config* cfg) { delete cfg; }

hh_status hh_config_load(hh_config* cfg, const char* path) {
  if (!cfg || !path) return fail(HH_ERR_VALIDATION, "null argument");
  return guarded([&] { cfg->cfg = hh::ExperimentConfig::load(path); });
}

hh_status hh_config_parse(hh_config* cfg, const char* text) {
  if (!cfg || !text) return fail(HH_ERR_VALIDATION, "null argument");
  return guarded([&] { cfg->cfg = hh::ExperimentConfig::from_text(text); });
}

hh_status hh_config_set(hh_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(HH_ERR_VALIDATION, "null argument");
  return guarded([&] { cfg->cfg.set(key, value); });
}

hh_status hh_config_get(const hh_config* cfg, const char* key, const char** value) {
  if (!cfg || !key || !value) return fail(HH_ERR_VALIDATION, "null argument");
  return guarded([&] {
    cfg->scratch = cfg->cfg.text(key);
    *value = cfg->scratch.c_str();
  });
}

hh_status hh_config_to_text(const hh_config* cfg, const char** text) {
  if (!cfg || !text) return fail(HH_ERR_VALIDATION, "null argument");
  return guarded([&] {
    cfg->scratch = cfg->cfg.to_text();
    *text = cfg->scratch.c_str();
  });
}

size_t hh_config_key_count(void) { return hh::ExperimentConfig::keys().size(); }
const char* hh_config_key_name(size_t i) {
  const auto& k = hh::ExperimentConfig::keys();
  return i < k.size() ? k[i].name.c_str() : nullptr;
}
const char* hh_config_key_help(size_t i) {
  const auto& k = hh::ExperimentConfig::keys();
  return i < k.size() ? k[i].help.c_str() : nullptr;
}

hh_status hh_run(const char* command, const hh_config* cfg, hh_result** out) {
  if (!command || !cfg || !out) return fail(HH_ERR_VALIDATION, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new hh_result{hh::run_experiment(command, cfg->cfg)}; });
}

void hh_result_destroy(hh_result* r) { delete r; }

const char* hh_result_text(const hh_result* r) { return r ? r->out.primary.c_str() : nullptr; }

size_t hh_result_artifact_count(const hh_result* r) { return r ? r->out.artifacts.size() : 0; }

const char* hh_result_artifact_name(const hh_result* r, size_t i) {
  if (!r || i >= r->out.artifacts.size()) return nullptr;
  return r->out.artifacts[i].name.c_str();
}

const char* hh_result_artifact_data(const hh_result* r, size_t i, size_t* length) {
  if (!r || i >= r->out.artifacts.size()) return nullptr;
  if (length) *length = r->out.artifacts[i].data.size();
  return r->out.artifacts[i].data.data();
}

hh_status hh_dilog(double re, double im, double* out_re, double* out_im) {
  if (!out_re || !out_im) return fail(HH_ERR_VALIDATION, "null output pointer");
  return guarded([&] {
    const hh::cplx v = hh::dilog(hh::cplx(re, im));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

hh_status hh_gram_entry(int side, double T, double theta1, double theta2, int m, int n,
                        double* out_re, double* out_im) {
  if (!out_re || !out_im) return fail(HH_ERR_VALIDATION, "null output pointer");
  return guarded([&] {
    hh::require(m >= 0 && n >= 0, "indices must be nonnegative");
    const hh::BergmanDomain d = hh::BergmanDomain::sector(sector(side, T, theta1, theta2));
    const hh::cplx v = d.radial(m + n) * d.angular(m - n);
    *out_re = v.real();
    *out_im = v.imag();
  });
}

hh_status hh_kernel_observability(double u_re, double u_im, double T, double theta1, double theta2,
                                  int N, double* out) {
  if (!out) return fail(HH_ERR_VALIDATION, "null output pointer");
  return guarded([&] {
    *out = hh::observability_constant(hh::CoefficientSource::kernel(hh::cplx(u_re, u_im)),
                                      sector(0, T, theta1, theta2), N)
               .value;
  });
}

hh_status hh_friedrichs_theta(int domain, double T, double theta1, double theta2, int N,
                              double* out) {
  if (!out) return fail(HH_ERR_VALIDATION, "null output pointer");
  return guarded([&] {
    hh::require(domain >= 0 && domain <= 2, "domain must be 0 (disk), 1 (interior sector) or 2 (annulus)");
    const hh::BergmanDomain d = domain == 0   ? hh::BergmanDomain::unit_disk()
                                : domain == 1 ? hh::BergmanDomain::sector(sector(1, T, theta1, theta2))
                                              : hh::BergmanDomain::annulus(std::exp(-T), 1.0);
    *out = hh::friedrichs_constant(d, N).theta;
  });
}

}  // extern "C"
