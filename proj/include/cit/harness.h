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

#ifndef CIT_HARNESS_H_
#define CIT_HARNESS_H_

// Experiment orchestration: power cells over (n, l1, l2, eps, m), plan files,
// CSV emission and an empirical sample-complexity search.
//
// Seeds: cell c of a plan uses cell_seed = DeriveSeed(master, c). Trial t then
// draws its null instance from DeriveSeed(cell_seed, 0, t), the null samples
// from (1, t), the alternative instance from (2, t), its samples from (3, t),
// and calibration trial t uses (4, t) and (5, t). No generator is shared.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cit/instances.h"
#include "cit/testers.h"

namespace cit {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr size_t kMinPlanTrials = 50;

struct PowerCell {
  uint64_t n = 100;
  size_t l1 = 2;
  size_t l2 = 2;
  double epsilon = 0.5;
  std::optional<uint64_t> m;  // unset: the tester's sample-size rule
};

struct PairSpec {
  Family null_family = Family::kYesBinaryR1;
  Family alt_family = Family::kNoBinaryR1;
  // Internal parameter m of the binary ensembles. 0 picks max(1, n/4).
  uint64_t ensemble_m = 0;
  // Splits every x and y into `refine` parts (binary ensembles on larger
  // alphabets).
  size_t refine = 1;
};

struct PowerOptions {
  TesterMode mode = TesterMode::kBinary;
  double beta = 2.0;
  double zeta = 2.0;
  size_t trials = 100;
  // > 0: tau is calibrated per cell from this many fresh null draws.
  size_t calibration_trials = 0;
  std::optional<double> tau;
  uint64_t max_m = uint64_t{1} << 26;  // larger m marks the cell skipped
  size_t threads = 0;                  // 0: hardware concurrency
  double time_budget_s = 0.0;          // 0: unlimited
};

struct PowerRow {
  PowerCell cell;
  Dims dims;  // shape actually tested (after refinement)
  uint64_t m_used = 0;
  size_t trials_requested = 0;
  size_t trials_run = 0;
  double tau = 0.0;
  double accept_rate_null = 0.0;
  double reject_rate_alt = 0.0;
  double mean_a_null = 0.0;
  double mean_a_alt = 0.0;
  double var_a_null = 0.0;
  bool skipped = false;
  std::string status = "ok";  // "ok", "reduced" or "skipped: <reason>"
  double wall_time_s = 0.0;
};

struct ExperimentPlan {
  std::vector<PowerCell> grid;
  PairSpec pair;
  PowerOptions options;
  uint64_t master_seed = 0;
  std::string output_path;
};

// Flat key = value text. Keys: n, l1, l2, eps, m (comma lists; m accepts
// "auto"), trials, mode, null, alt, seed, out, beta, zeta, tau, calibrate,
// ensemble_m, refine, max_m, threads, time_budget_s. The grid is the product
// of the list keys in the order n, l1, l2, eps, m.
ExperimentPlan ParsePlan(const std::string& text);
ExperimentPlan LoadPlan(const std::string& path);
void ValidatePlan(const ExperimentPlan& plan);

// Draws one instance of `family` for a cell (already refined).
JointDistribution DrawCellInstance(Family family, const PowerCell& cell,
                                   const PairSpec& pair, uint64_t seed);

PowerRow RunPowerCell(const PowerCell& cell, const PairSpec& pair,
                      const PowerOptions& options, uint64_t cell_seed,
                      double time_allowance_s = 0.0);

std::vector<PowerRow> RunPowerExperiment(const ExperimentPlan& plan);

// CSV with a fixed, versioned header. Wall time is appended only when
// include_timing is set, so the default output is reproducible byte for byte.
void WritePowerCsv(std::ostream& out, const ExperimentPlan& plan,
                   const std::vector<PowerRow>& rows, bool include_timing);
std::string PowerCsv(const ExperimentPlan& plan, const std::vector<PowerRow>& rows,
                     bool include_timing);

struct MinMOptions {
  TesterMode mode = TesterMode::kBinary;
  uint64_t n = 100;
  size_t l1 = 2;  // random families only
  size_t l2 = 2;
  double epsilon = 0.5;
  PairSpec pair;
  // When pair.ensemble_m is 0 the binary ensembles follow the probe:
  // ensemble_m = min(m, ceil(n/2) - 1).
  double target_power = 2.0 / 3.0;
  uint64_t seed = 0;
  size_t trials = 200;
  size_t calibration_trials = 200;
  uint64_t start_m = 8;
  uint64_t max_m = uint64_t{1} << 22;
  double relative_tolerance = 0.05;  // bisection stops at hi - lo <= tol * hi
  size_t threads = 0;
};

struct MinMProbe {
  uint64_t m = 0;
  double tau = 0.0;
  double accept_rate_null = 0.0;
  double reject_rate_alt = 0.0;
  bool passed = false;
};

struct MinMResult {
  uint64_t m = 0;
  std::vector<MinMProbe> probes;  // in evaluation order
};

// Doubling from start_m until a probe passes, then bisection. Throws
// kBudgetExhausted when no m <= max_m passes.
MinMResult FindMinM(const MinMOptions& options);

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written to per-index slots by fn, so scheduling never changes the output.
void ParallelFor(size_t count, size_t threads, const std::function<void(size_t)>& fn);

}  // namespace cit

#endif  // CIT_HARNESS_H_
