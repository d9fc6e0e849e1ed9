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

#include "cit/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "cit/error.h"
#include "cit/rng.h"

namespace cit {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitList(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void BadPlan(const std::string& what) {
  Fail(ErrorCode::kParse, "invalid plan: " + what);
}

uint64_t ToUint(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    BadPlan(key + " expects a nonnegative integer, got '" + v + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    BadPlan(key + " is out of range: " + v);
  }
}

double ToDouble(const std::string& key, const std::string& v) {
  size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    BadPlan(key + " expects a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(d)) {
    BadPlan(key + " expects a number, got '" + v + "'");
  }
  return d;
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments MeanVar(const std::vector<double>& v) {
  Moments r;
  if (v.empty()) return r;
  for (double x : v) r.mean += x;
  r.mean /= static_cast<double>(v.size());
  if (v.size() < 2) return r;
  for (double x : v) r.var += (x - r.mean) * (x - r.mean);
  r.var /= static_cast<double>(v.size() - 1);
  return r;
}

size_t ResolveThreads(size_t threads) {
  if (threads > 0) return threads;
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace

void ParallelFor(size_t count, size_t threads,
                 const std::function<void(size_t)>& fn) {
  const size_t workers = std::min(ResolveThreads(threads), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ExperimentPlan ParsePlan(const std::string& text) {
  ExperimentPlan plan;
  std::vector<uint64_t> ns{100};
  std::vector<size_t> l1s{2}, l2s{2};
  std::vector<double> epss{0.5};
  std::vector<std::optional<uint64_t>> ms{std::nullopt};
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  std::map<std::string, size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      BadPlan("line " + std::to_string(line_no) + " is not key = value");
    }
    const std::string key = Trim(t.substr(0, eq));
    const std::string value = Trim(t.substr(eq + 1));
    if (seen.count(key)) BadPlan("duplicate key '" + key + "'");
    seen[key] = line_no;
    const std::vector<std::string> items = SplitList(value);
    if (items.empty()) BadPlan("key '" + key + "' has no value");
    if (key == "n") {
      ns.clear();
      for (const auto& s : items) ns.push_back(ToUint(key, s));
    } else if (key == "l1") {
      l1s.clear();
      for (const auto& s : items) l1s.push_back(ToUint(key, s));
    } else if (key == "l2") {
      l2s.clear();
      for (const auto& s : items) l2s.push_back(ToUint(key, s));
    } else if (key == "eps") {
      epss.clear();
      for (const auto& s : items) epss.push_back(ToDouble(key, s));
    } else if (key == "m") {
      ms.clear();
      for (const auto& s : items) {
        ms.push_back(s == "auto" ? std::nullopt
                                 : std::optional<uint64_t>(ToUint(key, s)));
      }
    } else if (key == "trials") {
      plan.options.trials = ToUint(key, value);
    } else if (key == "mode") {
      try {
        plan.options.mode = ParseTesterMode(value);
      } catch (const Error& e) {
        BadPlan(e.what());
      }
    } else if (key == "null" || key == "alt") {
      Family f;
      try {
        f = ParseFamily(value);
      } catch (const Error& e) {
        BadPlan(e.what());
      }
      (key == "null" ? plan.pair.null_family : plan.pair.alt_family) = f;
    } else if (key == "seed") {
      plan.master_seed = ToUint(key, value);
    } else if (key == "out") {
      plan.output_path = value;
    } else if (key == "beta") {
      plan.options.beta = ToDouble(key, value);
    } else if (key == "zeta") {
      plan.options.zeta = ToDouble(key, value);
    } else if (key == "tau") {
      plan.options.tau = ToDouble(key, value);
    } else if (key == "calibrate") {
      plan.options.calibration_trials = ToUint(key, value);
    } else if (key == "ensemble_m") {
      plan.pair.ensemble_m = value == "auto" ? 0 : ToUint(key, value);
    } else if (key == "refine") {
      plan.pair.refine = ToUint(key, value);
    } else if (key == "max_m") {
      plan.options.max_m = ToUint(key, value);
    } else if (key == "threads") {
      plan.options.threads = ToUint(key, value);
    } else if (key == "time_budget_s") {
      plan.options.time_budget_s = ToDouble(key, value);
    } else {
      BadPlan("unknown key '" + key + "'");
    }
  }
  for (uint64_t n : ns)
    for (size_t l1 : l1s)
      for (size_t l2 : l2s)
        for (double eps : epss)
          for (const auto& m : ms) plan.grid.push_back(PowerCell{n, l1, l2, eps, m});
  ValidatePlan(plan);
  return plan;
}

ExperimentPlan LoadPlan(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open plan file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParsePlan(ss.str());
}

void ValidatePlan(const ExperimentPlan& plan) {
  if (plan.grid.empty()) BadPlan("the grid is empty");
  if (plan.options.trials < kMinPlanTrials) BadPlan("trials must be at least 50");
  const size_t cal = plan.options.calibration_trials;
  if (cal != 0 && cal < kMinCalibrationTrials) {
    BadPlan("calibrate must be 0 or at least 100");
  }
  if (plan.options.beta <= 0.0 || plan.options.zeta <= 0.0) {
    BadPlan("beta and zeta must be positive");
  }
  if (plan.pair.refine < 1) BadPlan("refine must be at least 1");
  if (plan.options.time_budget_s < 0.0) BadPlan("time_budget_s must be >= 0");
  for (const PowerCell& c : plan.grid) {
    if (c.n < 1 || c.l1 < 1 || c.l2 < 1) BadPlan("n, l1 and l2 must be positive");
    if (!(c.epsilon > 0.0 && c.epsilon <= 1.0)) BadPlan("eps must lie in (0, 1]");
  }
}

JointDistribution DrawCellInstance(Family family, const PowerCell& cell,
                                   const PairSpec& pair, uint64_t seed) {
  EnsembleSpec spec;
  spec.family = family;
  spec.n = cell.n;
  spec.m = pair.ensemble_m ? pair.ensemble_m : std::max<uint64_t>(1, cell.n / 4);
  spec.epsilon = cell.epsilon;
  spec.l1 = cell.l1;
  spec.l2 = cell.l2;
  spec.seed = seed;
  Instance inst = Generate(spec);
  if (pair.refine > 1) return Refine(inst.dist, pair.refine, pair.refine);
  return std::move(inst.dist);
}

PowerRow RunPowerCell(const PowerCell& cell, const PairSpec& pair,
                      const PowerOptions& options, uint64_t cell_seed,
                      double time_allowance_s) {
  const auto start = Clock::now();
  PowerRow row;
  row.cell = cell;
  row.dims = Dims{cell.l1, cell.l2, cell.n};
  row.trials_requested = options.trials;
  const auto skip = [&](const std::string& why) {
    row.skipped = true;
    row.status = "skipped: " + why;
    row.trials_run = 0;
    row.wall_time_s = Seconds(start);
    return row;
  };
  TesterConfig cfg;
  cfg.mode = options.mode;
  cfg.epsilon = cell.epsilon;
  cfg.beta = options.beta;
  cfg.zeta = options.zeta;
  try {
    cfg.Validate();
    const JointDistribution probe =
        DrawCellInstance(pair.null_family, cell, pair, DeriveSeed(cell_seed, 0, 0));
    row.dims = probe.dims();
    row.m_used = cell.m ? *cell.m : PlannedSampleSize(row.dims, cfg);
  } catch (const Error& e) {
    return skip(e.what());
  }
  if (row.m_used > options.max_m) return skip("m exceeds max_m");
  cfg.m_override = row.m_used;

  const size_t threads = ResolveThreads(options.threads);
  auto statistic = [&](Family family, uint64_t inst_stream, uint64_t test_stream,
                       size_t t) {
    const JointDistribution p =
        DrawCellInstance(family, cell, pair, DeriveSeed(cell_seed, inst_stream, t));
    TesterConfig c = cfg;
    c.seed = DeriveSeed(cell_seed, test_stream, t);
    return RunTester(p, c).statistic;
  };

  try {
    if (options.tau) {
      row.tau = *options.tau;
    } else if (options.calibration_trials > 0) {
      std::vector<double> null_stats(options.calibration_trials);
      ParallelFor(null_stats.size(), threads, [&](size_t t) {
        null_stats[t] = statistic(pair.null_family, 4, 5, t);
      });
      row.tau = CalibrateThreshold([&](size_t t) { return null_stats[t]; },
                                   null_stats.size());
    } else {
      row.tau = DefaultThreshold(row.dims, row.m_used, cfg);
    }

    std::vector<double> a_null(options.trials), a_alt(options.trials);
    const size_t chunk = std::max<size_t>(threads * 4, 8);
    size_t done = 0;
    while (done < options.trials) {
      const size_t end = std::min(options.trials, done + chunk);
      ParallelFor(end - done, threads, [&](size_t i) {
        const size_t t = done + i;
        a_null[t] = statistic(pair.null_family, 0, 1, t);
        a_alt[t] = statistic(pair.alt_family, 2, 3, t);
      });
      done = end;
      if (time_allowance_s > 0.0 && done < options.trials &&
          Seconds(start) > time_allowance_s) {
        row.status = "reduced";
        break;
      }
    }
    a_null.resize(done);
    a_alt.resize(done);
    row.trials_run = done;
    size_t accepts = 0, rejects = 0;
    for (size_t t = 0; t < done; ++t) {
      if (a_null[t] <= row.tau) ++accepts;
      if (a_alt[t] > row.tau) ++rejects;
    }
    row.accept_rate_null = static_cast<double>(accepts) / static_cast<double>(done);
    row.reject_rate_alt = static_cast<double>(rejects) / static_cast<double>(done);
    const Moments mn = MeanVar(a_null), ma = MeanVar(a_alt);
    row.mean_a_null = mn.mean;
    row.var_a_null = mn.var;
    row.mean_a_alt = ma.mean;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInternal) throw;
    return skip(e.what());
  }
  row.wall_time_s = Seconds(start);
  return row;
}

std::vector<PowerRow> RunPowerExperiment(const ExperimentPlan& plan) {
  ValidatePlan(plan);
  const auto start = Clock::now();
  std::vector<PowerRow> rows;
  rows.reserve(plan.grid.size());
  for (size_t c = 0; c < plan.grid.size(); ++c) {
    double allowance = 0.0;
    if (plan.options.time_budget_s > 0.0) {
      const double left = plan.options.time_budget_s - Seconds(start);
      // Never zero: every cell still runs at least one chunk of trials.
      allowance = std::max(left, 1e-6) / static_cast<double>(plan.grid.size() - c);
    }
    rows.push_back(RunPowerCell(plan.grid[c], plan.pair, plan.options,
                                DeriveSeed(plan.master_seed, c), allowance));
  }
  return rows;
}

void WritePowerCsv(std::ostream& out, const ExperimentPlan& plan,
                   const std::vector<PowerRow>& rows, bool include_timing) {
  out << "schema_version,cell,mode,null_family,alt_family,n,l1,l2,eps,"
         "m_requested,m_used,trials_requested,trials_run,tau,accept_rate_null,"
         "reject_rate_alt,mean_A_null,mean_A_alt,var_A_null,status";
  if (include_timing) out << ",wall_time_s";
  out << '\n';
  for (size_t i = 0; i < rows.size(); ++i) {
    const PowerRow& r = rows[i];
    out << kCsvSchemaVersion << ',' << i << ',' << TesterModeName(plan.options.mode)
        << ',' << FamilyName(plan.pair.null_family) << ','
        << FamilyName(plan.pair.alt_family) << ',' << r.dims.n << ',' << r.dims.l1
        << ',' << r.dims.l2 << ',' << FormatDouble(r.cell.epsilon) << ','
        << (r.cell.m ? std::to_string(*r.cell.m) : std::string("auto")) << ','
        << r.m_used << ',' << r.trials_requested << ',' << r.trials_run << ','
        << FormatDouble(r.tau) << ',' << FormatDouble(r.accept_rate_null) << ','
        << FormatDouble(r.reject_rate_alt) << ',' << FormatDouble(r.mean_a_null)
        << ',' << FormatDouble(r.mean_a_alt) << ',' << FormatDouble(r.var_a_null)
        << ",\"" << r.status << '"';
    if (include_timing) out << ',' << FormatDouble(r.wall_time_s);
    out << '\n';
  }
}

std::string PowerCsv(const ExperimentPlan& plan, const std::vector<PowerRow>& rows,
                     bool include_timing) {
  std::ostringstream out;
  WritePowerCsv(out, plan, rows, include_timing);
  return out.str();
}

MinMResult FindMinM(const MinMOptions& options) {
  Require(options.target_power > 0.5 && options.target_power < 0.95,
          "target power must lie in (0.5, 0.95)");
  Require(options.start_m >= 1 && options.start_m <= options.max_m,
          "need 1 <= start_m <= max_m");
  Require(options.trials >= 1, "need at least one trial per probe");
  MinMResult result;
  std::map<uint64_t, bool> cache;
  auto probe = [&](uint64_t m) {
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    PairSpec pair = options.pair;
    if (pair.ensemble_m == 0) {
      const uint64_t cap = (options.n + 1) / 2 - 1;
      pair.ensemble_m = std::max<uint64_t>(1, std::min(m, cap));
    }
    PowerOptions po;
    po.mode = options.mode;
    po.trials = options.trials;
    po.calibration_trials = options.calibration_trials;
    po.threads = options.threads;
    po.max_m = options.max_m;
    const PowerCell cell{options.n, options.l1, options.l2, options.epsilon, m};
    const PowerRow row = RunPowerCell(cell, pair, po, DeriveSeed(options.seed, m));
    if (row.skipped) {
      Fail(ErrorCode::kInvalidArgument, "probe at m = " + std::to_string(m) +
                                            " could not run: " + row.status);
    }
    MinMProbe p{m, row.tau, row.accept_rate_null, row.reject_rate_alt, false};
    p.passed = p.accept_rate_null >= options.target_power &&
               p.reject_rate_alt >= options.target_power;
    result.probes.push_back(p);
    cache[m] = p.passed;
    return p.passed;
  };

  uint64_t lo = 0, hi = 0, m = options.start_m;
  while (true) {
    if (probe(m)) {
      hi = m;
      break;
    }
    lo = m;
    if (m >= options.max_m) {
      Fail(ErrorCode::kBudgetExhausted,
           "no m up to " + std::to_string(options.max_m) + " reached the target power");
    }
    m = std::min(options.max_m, 2 * m);
  }
  while (hi - lo > std::max<uint64_t>(
                       1, static_cast<uint64_t>(options.relative_tolerance *
                                                static_cast<double>(hi)))) {
    const uint64_t mid = lo + (hi - lo) / 2;
    (probe(mid) ? hi : lo) = mid;
  }
  result.m = hi;
  return result;
}

}  // namespace cit
