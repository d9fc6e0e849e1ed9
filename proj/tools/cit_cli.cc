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

// Command-line front end. Talks to the library through the C API only.
//
// Exit codes: 0 success, 2 invalid arguments or plan, 3 budget exhausted,
// 1 any other failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cit/cit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;

// Thrown to unwind out of a subcommand after a library error.
struct CliFailure {
  cit_status status;
};

int ExitCodeFor(cit_status s) {
  switch (s) {
    case CIT_OK:
      return kExitOk;
    case CIT_ERR_INVALID_ARGUMENT:
    case CIT_ERR_PARSE:
      return kExitInvalid;
    case CIT_ERR_BUDGET_EXHAUSTED:
      return kExitBudget;
    default:
      return kExitFailure;
  }
}

void Check(cit_status s) {
  if (s != CIT_OK) {
    std::fprintf(stderr, "cit: error %d: %s\n", static_cast<int>(s), cit_last_error());
    throw CliFailure{s};
  }
}

struct StringDeleter {
  void operator()(char* s) const { cit_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct DistDeleter {
  void operator()(cit_distribution* d) const { cit_distribution_free(d); }
};
using OwnedDist = std::unique_ptr<cit_distribution, DistDeleter>;

struct SamplesDeleter {
  void operator()(cit_samples* s) const { cit_samples_free(s); }
};
using OwnedSamples = std::unique_ptr<cit_samples, SamplesDeleter>;

struct VerdictDeleter {
  void operator()(cit_verdict* v) const { cit_verdict_free(v); }
};
using OwnedVerdict = std::unique_ptr<cit_verdict, VerdictDeleter>;

OwnedDist LoadDist(const std::string& path) {
  cit_distribution* d = nullptr;
  Check(cit_distribution_load(path.c_str(), &d));
  return OwnedDist(d);
}

const std::map<std::string, cit_mode> kModes = {
    {"binary", CIT_MODE_BINARY}, {"general", CIT_MODE_GENERAL}, {"cmi", CIT_MODE_CMI}};

// Tester flags shared by `test` and `calibrate`.
struct TesterFlags {
  cit_mode mode = CIT_MODE_BINARY;
  double eps = 0.5;
  double beta = 2.0;
  double zeta = 2.0;
  double c_cmi = 1.0;
  std::optional<uint64_t> m;
  std::optional<double> tau;
  uint64_t seed = 0;

  void Register(CLI::App* app, bool with_tau) {
    app->add_option("--mode", mode, "binary, general or cmi")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    app->add_option("--eps", eps, "distance parameter epsilon")->required();
    app->add_option("--m", m, "expected sample size (overrides the rule)");
    if (with_tau) app->add_option("--tau", tau, "acceptance threshold");
    app->add_option("--beta", beta, "binary sample-size constant");
    app->add_option("--zeta", zeta, "general sample-size constant");
    app->add_option("--c-cmi", c_cmi, "CMI reduction constant");
    app->add_option("--seed", seed, "random seed")->required();
  }

  cit_tester_config Config() const {
    cit_tester_config c;
    cit_tester_config_init(&c);
    c.mode = mode;
    c.epsilon = eps;
    c.beta = beta;
    c.zeta = zeta;
    c.c_cmi = c_cmi;
    c.has_m = m.has_value();
    c.m = m.value_or(0);
    c.has_tau = tau.has_value();
    c.tau = tau.value_or(0.0);
    c.seed = seed;
    return c;
  }
};

const char* ModeName(cit_mode m) {
  switch (m) {
    case CIT_MODE_GENERAL: return "general";
    case CIT_MODE_CMI: return "cmi";
    default: return "binary";
  }
}

// Family flags shared by `gen` and `calibrate --family`.
struct FamilyFlags {
  std::string family;
  uint64_t n = 10;
  uint64_t m = 1;
  double eps = 0.1;
  size_t l1 = 2;
  size_t l2 = 2;
  uint64_t seed = 0;

  cit_generate_params Params() const {
    cit_generate_params p;
    cit_generate_params_init(&p);
    p.family = family.c_str();
    p.n = n;
    p.m = m;
    p.epsilon = eps;
    p.l1 = l1;
    p.l2 = l2;
    p.seed = seed;
    return p;
  }
};

std::string Fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Parses "x,y x,y ..." (1-based) into 0-based coordinate lists.
void ParsePairs(const std::string& text, std::vector<uint32_t>* xs,
                std::vector<uint32_t>* ys) {
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const size_t comma = tok.find(',');
    unsigned long x = 0, y = 0;
    try {
      if (comma == std::string::npos) throw std::invalid_argument(tok);
      x = std::stoul(tok.substr(0, comma));
      y = std::stoul(tok.substr(comma + 1));
    } catch (const std::exception&) {
      std::fprintf(stderr, "cit: bad pair '%s' (expected x,y)\n", tok.c_str());
      throw CliFailure{CIT_ERR_INVALID_ARGUMENT};
    }
    if (x == 0 || y == 0) {
      std::fprintf(stderr, "cit: pair indices are 1-based\n");
      throw CliFailure{CIT_ERR_INVALID_ARGUMENT};
    }
    xs->push_back(static_cast<uint32_t>(x - 1));
    ys->push_back(static_cast<uint32_t>(y - 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional independence testing from samples"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cit_version()));

  // test
  CLI::App* test = app.add_subcommand("test", "run a tester on a distribution or sample file");
  TesterFlags test_flags;
  test_flags.Register(test, true);
  std::string test_dist, test_samples;
  bool test_json = false;
  auto* dist_opt = test->add_option("--dist", test_dist, "distribution file");
  auto* samples_opt = test->add_option("--samples", test_samples, "sample file");
  dist_opt->excludes(samples_opt);
  test->add_flag("--json", test_json, "emit the full verdict as JSON");
  test->callback([&] {
    if (test_dist.empty() == test_samples.empty()) {
      throw CLI::ValidationError("exactly one of --dist and --samples is required");
    }
    const cit_tester_config cfg = test_flags.Config();
    cit_verdict* raw = nullptr;
    if (!test_dist.empty()) {
      OwnedDist d = LoadDist(test_dist);
      Check(cit_test_distribution(d.get(), &cfg, &raw));
    } else {
      cit_samples* s = nullptr;
      Check(cit_samples_load(test_samples.c_str(), &s));
      OwnedSamples owned(s);
      Check(cit_test_samples(s, &cfg, &raw));
    }
    OwnedVerdict v(raw);
    if (test_json) {
      char* js = nullptr;
      Check(cit_verdict_to_json(v.get(), &js));
      OwnedString owned(js);
      std::printf("%s\n", nlohmann::json::parse(js).dump(2).c_str());
    } else {
      std::printf("%s mode=%s A=%s tau=%s m=%llu M=%llu\n",
                  cit_verdict_accept(v.get()) ? "accept" : "reject",
                  ModeName(test_flags.mode), Fmt(cit_verdict_statistic(v.get())).c_str(),
                  Fmt(cit_verdict_threshold(v.get())).c_str(),
                  static_cast<unsigned long long>(cit_verdict_m_used(v.get())),
                  static_cast<unsigned long long>(cit_verdict_samples_drawn(v.get())));
    }
  });

  // gen
  CLI::App* gen = app.add_subcommand("gen", "generate an instance of a distribution family");
  FamilyFlags gen_flags;
  std::string gen_out;
  gen->add_option("--family", gen_flags.family, "family name")->required();
  gen->add_option("--n", gen_flags.n, "number of bins");
  gen->add_option("--m", gen_flags.m, "ensemble sample parameter");
  gen->add_option("--eps", gen_flags.eps, "distance parameter");
  gen->add_option("--l1", gen_flags.l1, "X domain size");
  gen->add_option("--l2", gen_flags.l2, "Y domain size");
  gen->add_option("--seed", gen_flags.seed, "random seed")->required();
  gen->add_option("--out", gen_out, "output distribution file")->required();
  gen->callback([&] {
    const cit_generate_params p = gen_flags.Params();
    cit_distribution* raw = nullptr;
    Check(cit_distribution_generate(&p, &raw));
    OwnedDist d(raw);
    Check(cit_distribution_save(d.get(), gen_out.c_str()));
    char* js = nullptr;
    Check(cit_distribution_metadata_json(d.get(), &js));
    OwnedString owned(js);
    std::printf("%s\n", js);
  });

  // sample
  CLI::App* sample = app.add_subcommand("sample", "draw samples from a distribution file");
  std::string sample_dist, sample_out;
  std::optional<uint64_t> sample_count;
  std::optional<double> sample_m;
  uint64_t sample_seed = 0;
  sample->add_option("--dist", sample_dist, "distribution file")->required();
  auto* count_opt = sample->add_option("--count", sample_count, "exact number of samples");
  auto* pm_opt = sample->add_option("--m", sample_m, "Poisson mean of the sample size");
  count_opt->excludes(pm_opt);
  sample->add_option("--seed", sample_seed, "random seed")->required();
  sample->add_option("--out", sample_out, "output sample file")->required();
  sample->callback([&] {
    if (!sample_count && !sample_m) {
      throw CLI::ValidationError("one of --count and --m is required");
    }
    OwnedDist d = LoadDist(sample_dist);
    cit_samples* raw = nullptr;
    if (sample_count) {
      Check(cit_samples_draw_fixed(d.get(), *sample_count, sample_seed, &raw));
    } else {
      Check(cit_samples_draw_poissonized(d.get(), *sample_m, sample_seed, &raw));
    }
    OwnedSamples s(raw);
    Check(cit_samples_save(s.get(), sample_out.c_str()));
    uint64_t count = 0;
    Check(cit_samples_count(s.get(), &count));
    std::printf("samples=%llu\n", static_cast<unsigned long long>(count));
  });

  // power
  CLI::App* power = app.add_subcommand("power", "run a power experiment from a plan file");
  std::string power_plan, power_out;
  bool power_timing = false;
  power->add_option("--plan", power_plan, "plan file (key=value)")->required();
  power->add_option("--out", power_out, "CSV output (default: the plan's out key)");
  power->add_flag("--timing", power_timing,
                  "append a wall_time_s column (makes output run-dependent)");
  power->callback([&] {
    char* csv = nullptr;
    Check(cit_power_run(power_plan.c_str(), power_out.c_str(), power_timing ? 1 : 0, &csv));
    OwnedString owned(csv);
    std::fputs(csv, stdout);
  });

  // calibrate
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "calibrate tau as the 5/6 quantile under a null");
  TesterFlags cal_flags;
  cal_flags.Register(calibrate, false);
  FamilyFlags cal_family;
  std::string cal_dist;
  size_t cal_trials = 200;
  auto* cal_dist_opt = calibrate->add_option("--dist", cal_dist, "null distribution file");
  auto* cal_fam_opt =
      calibrate->add_option("--family", cal_family.family, "null family (fresh instance per trial)");
  cal_dist_opt->excludes(cal_fam_opt);
  calibrate->add_option("--n", cal_family.n, "family: number of bins");
  calibrate->add_option("--ensemble-m", cal_family.m, "family: ensemble parameter");
  calibrate->add_option("--family-eps", cal_family.eps, "family: distance parameter");
  calibrate->add_option("--l1", cal_family.l1, "family: X domain size");
  calibrate->add_option("--l2", cal_family.l2, "family: Y domain size");
  calibrate->add_option("--family-seed", cal_family.seed, "family: instance seed");
  calibrate->add_option("--trials", cal_trials, "Monte Carlo trials");
  calibrate->callback([&] {
    if (cal_dist.empty() == cal_family.family.empty()) {
      throw CLI::ValidationError("exactly one of --dist and --family is required");
    }
    const cit_tester_config cfg = cal_flags.Config();
    double tau = 0.0;
    if (!cal_dist.empty()) {
      OwnedDist d = LoadDist(cal_dist);
      Check(cit_calibrate(d.get(), &cfg, cal_trials, &tau));
    } else {
      const cit_generate_params p = cal_family.Params();
      Check(cit_calibrate_family(&p, &cfg, cal_trials, &tau));
    }
    std::printf("tau=%s trials=%zu\n", Fmt(tau).c_str(), cal_trials);
  });

  // minm
  CLI::App* minm = app.add_subcommand("minm", "search for the smallest m reaching a target power");
  cit_minm_params mp;
  cit_minm_params_init(&mp);
  std::string null_family = mp.null_family, alt_family = mp.alt_family;
  bool minm_json = false;
  minm->add_option("--mode", mp.mode, "binary, general or cmi")
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  minm->add_option("--n", mp.n, "number of bins")->required();
  minm->add_option("--eps", mp.epsilon, "distance parameter")->required();
  minm->add_option("--l1", mp.l1, "X domain size");
  minm->add_option("--l2", mp.l2, "Y domain size");
  minm->add_option("--null", null_family, "null family");
  minm->add_option("--alt", alt_family, "alternative family");
  minm->add_option("--ensemble-m", mp.ensemble_m, "ensemble parameter (0: follow the probe)");
  minm->add_option("--refine", mp.refine, "domain refinement factor");
  minm->add_option("--target", mp.target_power, "target power in (0.5, 0.95)");
  minm->add_option("--seed", mp.seed, "random seed")->required();
  minm->add_option("--trials", mp.trials, "trials per probe");
  minm->add_option("--calibration-trials", mp.calibration_trials, "calibration trials per probe");
  minm->add_option("--start-m", mp.start_m, "first probed m");
  minm->add_option("--max-m", mp.max_m, "largest m before giving up");
  minm->add_flag("--json", minm_json, "print the probe log");
  minm->callback([&] {
    mp.null_family = null_family.c_str();
    mp.alt_family = alt_family.c_str();
    uint64_t m = 0;
    char* report = nullptr;
    Check(cit_find_min_m(&mp, &m, minm_json ? &report : nullptr));
    OwnedString owned(report);
    if (minm_json) {
      std::printf("%s\n", nlohmann::json::parse(report).dump(2).c_str());
    } else {
      std::printf("m=%llu\n", static_cast<unsigned long long>(m));
    }
  });

  // poly-estimate
  CLI::App* poly = app.add_subcommand(
      "poly-estimate", "unbiased estimate of a polynomial from a fingerprint");
  std::string poly_text, poly_file, fp_text;
  size_t poly_vars = 0;
  unsigned poly_degree = 0;
  auto* pt = poly->add_option("--poly", poly_text, "polynomial text, terms separated by ';'");
  auto* pf = poly->add_option("--poly-file", poly_file, "polynomial file, one term per line");
  pt->excludes(pf);
  poly->add_option("--vars", poly_vars, "number of variables")->required();
  poly->add_option("--degree", poly_degree, "homogenization degree (0: maximum degree)");
  poly->add_option("--fingerprint", fp_text, "fingerprint as i:count pairs")->required();
  poly->callback([&] {
    std::string text = poly_text;
    if (!poly_file.empty()) {
      std::ifstream in(poly_file);
      if (!in) {
        std::fprintf(stderr, "cit: cannot read %s\n", poly_file.c_str());
        throw CliFailure{CIT_ERR_IO};
      }
      std::stringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    } else {
      for (char& c : text) {
        if (c == ';') c = '\n';
      }
    }
    char* exact = nullptr;
    double value = 0.0;
    Check(cit_poly_estimate(text.c_str(), poly_vars, poly_degree, fp_text.c_str(), &exact,
                            &value));
    OwnedString owned(exact);
    std::printf("estimate=%s value=%s\n", exact, Fmt(value).c_str());
  });

  // flatten
  CLI::App* flatten =
      app.add_subcommand("flatten", "print the flattening coefficient grid as CSV");
  std::string pairs_text;
  size_t fl_l1 = 2, fl_l2 = 2, fl_t1 = 0, fl_t2 = 0;
  flatten->add_option("--pairs", pairs_text, "1-based samples \"x,y x,y ...\"");
  flatten->add_option("--l1", fl_l1, "X domain size");
  flatten->add_option("--l2", fl_l2, "Y domain size");
  flatten->add_option("--t1", fl_t1, "samples used for the X split");
  flatten->add_option("--t2", fl_t2, "samples used for the Y split");
  flatten->callback([&] {
    std::vector<uint32_t> xs, ys;
    ParsePairs(pairs_text, &xs, &ys);
    char* csv = nullptr;
    Check(cit_flatten_grid_csv(xs.data(), ys.data(), xs.size(), fl_l1, fl_l2, fl_t1, fl_t2,
                               &csv));
    OwnedString owned(csv);
    std::fputs(csv, stdout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  } catch (const CliFailure& f) {
    return ExitCodeFor(f.status);
  }
  return kExitOk;
}
