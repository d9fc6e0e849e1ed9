// Copyright 2026 The cit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cit/cit.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cit/dist_core.h"
#include "cit/error.h"
#include "cit/flattening.h"
#include "cit/harness.h"
#include "cit/instances.h"
#include "cit/io.h"
#include "cit/polynomial.h"
#include "cit/rng.h"
#include "cit/testers.h"

struct cit_distribution {
  cit::JointDistribution dist;
  std::optional<cit::InstanceMetadata> meta;
  std::string family;
};

struct cit_samples {
  cit::Dims dims;
  std::vector<cit::SampleTriple> samples;
};

struct cit_verdict {
  cit::Verdict verdict;
  cit::TesterMode mode;
};

namespace {

using nlohmann::json;

thread_local std::string last_error;

template <class F>
cit_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return CIT_OK;
  } catch (const cit::Error& e) {
    last_error = e.what();
    return static_cast<cit_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return CIT_ERR_INTERNAL;
}

void NotNull(const void* p, const char* name) {
  if (p == nullptr) {
    cit::Fail(cit::ErrorCode::kInvalidArgument, std::string(name) + " is null");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cit::TesterMode ToMode(cit_mode m) {
  switch (m) {
    case CIT_MODE_BINARY:
      return cit::TesterMode::kBinary;
    case CIT_MODE_GENERAL:
      return cit::TesterMode::kGeneral;
    case CIT_MODE_CMI:
      return cit::TesterMode::kCmi;
  }
  cit::Fail(cit::ErrorCode::kInvalidArgument, "unknown tester mode");
}

cit::TesterConfig ToConfig(const cit_tester_config* c) {
  NotNull(c, "config");
  cit::TesterConfig cfg;
  cfg.mode = ToMode(c->mode);
  cfg.epsilon = c->epsilon;
  cfg.beta = c->beta;
  cfg.zeta = c->zeta;
  cfg.c_cmi = c->c_cmi;
  if (c->has_m) cfg.m_override = c->m;
  if (c->has_tau) cfg.tau_override = c->tau;
  cfg.seed = c->seed;
  return cfg;
}

cit::EnsembleSpec ToSpec(const cit_generate_params* p) {
  NotNull(p, "params");
  NotNull(p->family, "family");
  cit::EnsembleSpec spec;
  spec.family = cit::ParseFamily(p->family);
  spec.n = p->n;
  spec.m = p->m;
  spec.epsilon = p->epsilon;
  spec.l1 = p->l1;
  spec.l2 = p->l2;
  spec.seed = p->seed;
  return spec;
}

const char* SliceKindName(cit::SliceKind k) {
  switch (k) {
    case cit::SliceKind::kHeavy: return "heavy";
    case cit::SliceKind::kAnchor: return "anchor";
    case cit::SliceKind::kY1: return "Y1";
    case cit::SliceKind::kY2: return "Y2";
    case cit::SliceKind::kN1: return "N1";
    case cit::SliceKind::kN2: return "N2";
    case cit::SliceKind::kN3: return "N3";
    case cit::SliceKind::kOther: return "other";
  }
  return "other";
}

}  // namespace

extern "C" {

const char* cit_version(void) { return "1.0.0"; }

const char* cit_last_error(void) { return last_error.c_str(); }

void cit_string_free(char* s) { std::free(s); }

void cit_generate_params_init(cit_generate_params* params) {
  if (params == nullptr) return;
  params->family = "random_ci";
  params->n = 10;
  params->m = 1;
  params->epsilon = 0.1;
  params->l1 = 2;
  params->l2 = 2;
  params->seed = 0;
}

cit_status cit_distribution_load(const char* path, cit_distribution** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new cit_distribution{cit::ParseDistribution(cit::ReadTextFile(path)),
                                std::nullopt, ""};
  });
}

cit_status cit_distribution_save(const cit_distribution* dist, const char* path) {
  return Guard([&] {
    NotNull(dist, "dist");
    NotNull(path, "path");
    cit::WriteTextFile(path, cit::FormatDistribution(dist->dist));
  });
}

cit_status cit_distribution_generate(const cit_generate_params* params,
                                     cit_distribution** out) {
  return Guard([&] {
    NotNull(out, "out");
    const cit::EnsembleSpec spec = ToSpec(params);
    cit::Instance inst = cit::Generate(spec);
    *out = new cit_distribution{std::move(inst.dist), std::move(inst.meta),
                                cit::FamilyName(spec.family)};
  });
}

void cit_distribution_free(cit_distribution* dist) { delete dist; }

cit_status cit_distribution_dims(const cit_distribution* dist, size_t* l1,
                                 size_t* l2, size_t* n) {
  return Guard([&] {
    NotNull(dist, "dist");
    const cit::Dims& d = dist->dist.dims();
    if (l1) *l1 = d.l1;
    if (l2) *l2 = d.l2;
    if (n) *n = d.n;
  });
}

cit_status cit_distribution_ci_proxy(const cit_distribution* dist, double* out) {
  return Guard([&] {
    NotNull(dist, "dist");
    NotNull(out, "out");
    *out = cit::CiDistanceProxy(dist->dist);
  });
}

cit_status cit_distribution_cmi(const cit_distribution* dist, double* out) {
  return Guard([&] {
    NotNull(dist, "dist");
    NotNull(out, "out");
    *out = cit::ConditionalMutualInformation(dist->dist);
  });
}

cit_status cit_distribution_metadata_json(const cit_distribution* dist,
                                          char** out_json) {
  return Guard([&] {
    NotNull(dist, "dist");
    NotNull(out_json, "out_json");
    json j = json::object();
    if (dist->meta) {
      const cit::InstanceMetadata& m = *dist->meta;
      j["family"] = dist->family;
      j["raw_mass"] = m.raw_mass;
      j["normalization_factor"] = m.normalization_factor;
      j["raw_ci_proxy"] = m.raw_ci_proxy;
      j["ci_proxy"] = m.ci_proxy;
      j["heavy_bins"] = m.heavy_bins;
      if (m.heavy_set_size) j["heavy_set_size"] = m.heavy_set_size;
      if (!m.slice_kinds.empty()) {
        json counts = json::object();
        for (cit::SliceKind k : m.slice_kinds) {
          const char* name = SliceKindName(k);
          counts[name] = counts.value(name, 0) + 1;
        }
        j["slice_kind_counts"] = counts;
      }
    }
    *out_json = CopyString(j.dump());
  });
}

cit_status cit_samples_load(const char* path, cit_samples** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    cit::SampleSet s = cit::ParseSamples(cit::ReadTextFile(path));
    *out = new cit_samples{s.dims, std::move(s.samples)};
  });
}

cit_status cit_samples_save(const cit_samples* samples, const char* path) {
  return Guard([&] {
    NotNull(samples, "samples");
    NotNull(path, "path");
    cit::WriteTextFile(path, cit::FormatSamples(samples->dims, samples->samples));
  });
}

cit_status cit_samples_draw_fixed(const cit_distribution* dist, uint64_t count,
                                  uint64_t seed, cit_samples** out) {
  return Guard([&] {
    NotNull(dist, "dist");
    NotNull(out, "out");
    *out = new cit_samples{dist->dist.dims(),
                           cit::SampleFixed(dist->dist, count, seed)};
  });
}

cit_status cit_samples_draw_poissonized(const cit_distribution* dist, double m,
                                        uint64_t seed, cit_samples** out) {
  return Guard([&] {
    NotNull(dist, "dist");
    NotNull(out, "out");
    *out = new cit_samples{dist->dist.dims(),
                           cit::SamplePoissonized(dist->dist, m, seed)};
  });
}

void cit_samples_free(cit_samples* samples) { delete samples; }

cit_status cit_samples_count(const cit_samples* samples, uint64_t* out) {
  return Guard([&] {
    NotNull(samples, "samples");
    NotNull(out, "out");
    *out = samples->samples.size();
  });
}

void cit_tester_config_init(cit_tester_config* cfg) {
  if (cfg == nullptr) return;
  const cit::TesterConfig d;
  cfg->mode = CIT_MODE_BINARY;
  cfg->epsilon = d.epsilon;
  cfg->beta = d.beta;
  cfg->zeta = d.zeta;
  cfg->c_cmi = d.c_cmi;
  cfg->has_m = 0;
  cfg->m = 0;
  cfg->has_tau = 0;
  cfg->tau = 0.0;
  cfg->seed = 0;
}

cit_status cit_test_distribution(const cit_distribution* dist,
                                 const cit_tester_config* cfg, cit_verdict** out) {
  return Guard([&] {
    NotNull(dist, "dist");
    NotNull(out, "out");
    const cit::TesterConfig c = ToConfig(cfg);
    *out = new cit_verdict{cit::RunTester(dist->dist, c), c.mode};
  });
}

cit_status cit_test_samples(const cit_samples* samples,
                            const cit_tester_config* cfg, cit_verdict** out) {
  return Guard([&] {
    NotNull(samples, "samples");
    NotNull(out, "out");
    const cit::TesterConfig c = ToConfig(cfg);
    *out = new cit_verdict{cit::RunTester(samples->samples, samples->dims, c), c.mode};
  });
}

int cit_verdict_accept(const cit_verdict* v) { return v && v->verdict.accept ? 1 : 0; }
double cit_verdict_statistic(const cit_verdict* v) { return v ? v->verdict.statistic : 0.0; }
double cit_verdict_threshold(const cit_verdict* v) { return v ? v->verdict.threshold : 0.0; }
uint64_t cit_verdict_m_used(const cit_verdict* v) { return v ? v->verdict.m_used : 0; }
uint64_t cit_verdict_samples_drawn(const cit_verdict* v) {
  return v ? v->verdict.samples_drawn : 0;
}
size_t cit_verdict_bin_count(const cit_verdict* v) {
  return v ? v->verdict.per_bin.size() : 0;
}

cit_status cit_verdict_bin(const cit_verdict* v, size_t index, uint32_t* z,
                           uint64_t* sigma, double* omega, double* a) {
  return Guard([&] {
    NotNull(v, "verdict");
    cit::Require(index < v->verdict.per_bin.size(), "bin index out of range");
    const cit::BinStatistic& b = v->verdict.per_bin[index];
    if (z) *z = b.z;
    if (sigma) *sigma = b.sigma;
    if (omega) *omega = b.omega;
    if (a) *a = b.a;
  });
}

cit_status cit_verdict_to_json(const cit_verdict* v, char** out_json) {
  return Guard([&] {
    NotNull(v, "verdict");
    NotNull(out_json, "out_json");
    const cit::Verdict& r = v->verdict;
    json bins = json::array();
    for (const cit::BinStatistic& b : r.per_bin) {
      bins.push_back({{"z", b.z + 1}, {"sigma", b.sigma}, {"omega", b.omega},
                      {"A", b.a}});
    }
    const json j = {{"mode", cit::TesterModeName(v->mode)},
                    {"accept", r.accept},
                    {"statistic_A", r.statistic},
                    {"threshold_tau", r.threshold},
                    {"m_used", r.m_used},
                    {"M_drawn", r.samples_drawn},
                    {"per_bin", bins}};
    *out_json = CopyString(j.dump());
  });
}

void cit_verdict_free(cit_verdict* v) { delete v; }

cit_status cit_sample_complexity_binary(uint64_t n, double epsilon, double beta,
                                        uint64_t* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = cit::SampleComplexityBinary(n, epsilon, beta);
  });
}

cit_status cit_sample_complexity_general(uint64_t n, size_t l1, size_t l2,
                                         double epsilon, double zeta, uint64_t* m,
                                         double* full, double* simplified) {
  return Guard([&] {
    const cit::GeneralSampleComplexity r =
        cit::SampleComplexityGeneralReport(n, l1, l2, epsilon, zeta);
    if (m) *m = r.m;
    if (full) *full = r.full;
    if (simplified) *simplified = r.simplified;
  });
}

cit_status cit_calibrate(const cit_distribution* null_dist,
                         const cit_tester_config* cfg, size_t trials,
                         double* tau_out) {
  return Guard([&] {
    NotNull(null_dist, "null_dist");
    NotNull(tau_out, "tau_out");
    *tau_out = cit::CalibrateThreshold(null_dist->dist, ToConfig(cfg), trials);
  });
}

cit_status cit_calibrate_family(const cit_generate_params* null_family,
                                const cit_tester_config* cfg, size_t trials,
                                double* tau_out) {
  return Guard([&] {
    NotNull(tau_out, "tau_out");
    const cit::EnsembleSpec base = ToSpec(null_family);
    const cit::TesterConfig c = ToConfig(cfg);
    *tau_out = cit::CalibrateThreshold(
        [&](size_t trial) {
          cit::EnsembleSpec spec = base;
          spec.seed = cit::DeriveSeed(base.seed, trial);
          cit::TesterConfig tc = c;
          tc.seed = cit::DeriveSeed(c.seed, trial);
          return cit::RunTester(cit::Generate(spec).dist, tc).statistic;
        },
        trials);
  });
}

cit_status cit_power_run(const char* plan_path, const char* out_path,
                         int include_timing, char** csv_out) {
  return Guard([&] {
    NotNull(plan_path, "plan_path");
    const cit::ExperimentPlan plan = cit::LoadPlan(plan_path);
    const std::vector<cit::PowerRow> rows = cit::RunPowerExperiment(plan);
    const std::string csv = cit::PowerCsv(plan, rows, include_timing != 0);
    const std::string target =
        out_path != nullptr && *out_path != '\0' ? out_path : plan.output_path;
    if (!target.empty()) cit::WriteTextFile(target, csv);
    if (csv_out) *csv_out = CopyString(csv);
  });
}

void cit_minm_params_init(cit_minm_params* params) {
  if (params == nullptr) return;
  const cit::MinMOptions d;
  params->mode = CIT_MODE_BINARY;
  params->n = d.n;
  params->l1 = d.l1;
  params->l2 = d.l2;
  params->epsilon = d.epsilon;
  params->null_family = "yes_binary_r1";
  params->alt_family = "no_binary_r1";
  params->ensemble_m = 0;
  params->refine = 1;
  params->target_power = d.target_power;
  params->seed = 0;
  params->trials = d.trials;
  params->calibration_trials = d.calibration_trials;
  params->start_m = d.start_m;
  params->max_m = d.max_m;
}

cit_status cit_find_min_m(const cit_minm_params* params, uint64_t* m_out,
                          char** report_json) {
  return Guard([&] {
    NotNull(params, "params");
    NotNull(m_out, "m_out");
    NotNull(params->null_family, "null_family");
    NotNull(params->alt_family, "alt_family");
    cit::MinMOptions o;
    o.mode = ToMode(params->mode);
    o.n = params->n;
    o.l1 = params->l1;
    o.l2 = params->l2;
    o.epsilon = params->epsilon;
    o.pair.null_family = cit::ParseFamily(params->null_family);
    o.pair.alt_family = cit::ParseFamily(params->alt_family);
    o.pair.ensemble_m = params->ensemble_m;
    o.pair.refine = params->refine;
    o.target_power = params->target_power;
    o.seed = params->seed;
    o.trials = params->trials;
    o.calibration_trials = params->calibration_trials;
    o.start_m = params->start_m;
    o.max_m = params->max_m;
    const cit::MinMResult r = cit::FindMinM(o);
    *m_out = r.m;
    if (report_json) {
      json probes = json::array();
      for (const cit::MinMProbe& p : r.probes) {
        probes.push_back({{"m", p.m},
                          {"tau", p.tau},
                          {"accept_rate_null", p.accept_rate_null},
                          {"reject_rate_alt", p.reject_rate_alt},
                          {"passed", p.passed}});
      }
      *report_json = CopyString(json{{"m", r.m}, {"probes", probes}}.dump());
    }
  });
}

cit_status cit_poly_estimate(const char* poly_text, size_t num_vars,
                             unsigned degree, const char* fingerprint_text,
                             char** exact_out, double* value_out) {
  return Guard([&] {
    NotNull(poly_text, "poly_text");
    NotNull(fingerprint_text, "fingerprint_text");
    const cit::Polynomial<cit::Rational> q = cit::ParsePolynomial(poly_text, num_vars);
    const uint32_t d = degree ? degree : q.max_degree();
    cit::Require(d >= 1, "the polynomial has degree 0; pass an explicit degree");
    const cit::Homogeneous<cit::Rational> h = cit::Homogenize(q, d);
    const cit::Fingerprint f = cit::ParseFingerprint(fingerprint_text, num_vars);
    const cit::Rational v = cit::UnbiasedEstimate(h, f);
    if (exact_out) *exact_out = CopyString(v.get_str());
    if (value_out) *value_out = v.get_d();
  });
}

cit_status cit_flatten_grid_csv(const uint32_t* xs, const uint32_t* ys,
                                size_t count, size_t l1, size_t l2, size_t t1,
                                size_t t2, char** csv_out) {
  return Guard([&] {
    NotNull(csv_out, "csv_out");
    if (count > 0) {
      NotNull(xs, "xs");
      NotNull(ys, "ys");
    }
    std::vector<std::pair<uint32_t, uint32_t>> pairs(count);
    for (size_t i = 0; i < count; ++i) pairs[i] = {xs[i], ys[i]};
    const cit::FlatteningCoefficients k =
        cit::ImplicitFlattening(pairs, l1, l2, t1, t2);
    std::ostringstream out;
    for (size_t x = 0; x < l1; ++x) {
      for (size_t y = 0; y < l2; ++y) out << (y ? "," : "") << k.a(x, y);
      out << '\n';
    }
    *csv_out = CopyString(out.str());
  });
}

}  // extern "C"
