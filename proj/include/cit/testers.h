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

#ifndef CIT_TESTERS_H_
#define CIT_TESTERS_H_

// Conditional-independence testers: the binary collision-style tester, the
// general flattened tester, and the CMI wrapper, with their sample-size rules
// and a Monte Carlo threshold calibrator.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cit/dist_core.h"

namespace cit {

enum class TesterMode { kBinary, kGeneral, kCmi };

std::string TesterModeName(TesterMode mode);
TesterMode ParseTesterMode(const std::string& name);

struct TesterConfig {
  double epsilon = 0.5;
  double beta = 2.0;
  double zeta = 2.0;
  double c_cmi = 1.0;
  std::optional<uint64_t> m_override;
  std::optional<double> tau_override;
  uint64_t seed = 0;
  TesterMode mode = TesterMode::kBinary;

  // Throws kInvalidArgument when epsilon is outside (0, 1] or a constant is
  // not positive. CMI mode checks its own epsilon range instead.
  void Validate() const;
};

struct BinStatistic {
  uint32_t z = 0;
  uint64_t sigma = 0;
  double omega = 1.0;
  double a = 0.0;
};

struct Verdict {
  bool accept = true;
  double statistic = 0.0;  // A
  double threshold = 0.0;  // tau
  uint64_t m_used = 0;
  uint64_t samples_drawn = 0;  // M
  std::vector<BinStatistic> per_bin;  // bins that reached the estimator
};

// beta * max(sqrt(n)/e^2, min(n^{7/8}/e, n^{6/7}/e^{8/7})), e = eps_prime.
double SampleComplexityBinaryRaw(double n, double eps_prime, double beta);
// Ceiling of the rule above with eps' = eps / sqrt(l1 l2).
uint64_t SampleComplexityBinary(uint64_t n, double epsilon, double beta,
                                size_t l1 = 2, size_t l2 = 2);

struct GeneralSampleComplexity {
  double full = 0.0;        // zeta * four-way max of mins
  double simplified = 0.0;  // zeta * the simplified five-term max
  uint64_t m = 0;           // ceil(full)
};

// l1 and l2 are swapped internally so that l1 >= l2.
GeneralSampleComplexity SampleComplexityGeneralReport(uint64_t n, size_t l1,
                                                      size_t l2, double epsilon,
                                                      double zeta);
uint64_t SampleComplexityGeneral(uint64_t n, size_t l1, size_t l2,
                                 double epsilon, double zeta);

// eps' = c eps / log2(1/eps), for eps in (0, 1/2).
double CmiEpsilonPrime(double epsilon, double c_cmi);

// Sample budget m the tester would use for p's shape under cfg.
uint64_t PlannedSampleSize(const Dims& dims, const TesterConfig& cfg);
double DefaultThreshold(const Dims& dims, uint64_t m, const TesterConfig& cfg);

// Distribution mode draws M ~ Poisson(m) samples (as independent per-cell
// Poisson counts). Fixed-sample mode uses the supplied samples in order: the
// first m_override of them when set, otherwise all of them.
Verdict TestBinary(const JointDistribution& p, const TesterConfig& cfg);
Verdict TestBinary(std::span<const SampleTriple> samples, const Dims& dims,
                   const TesterConfig& cfg);
Verdict TestGeneral(const JointDistribution& p, const TesterConfig& cfg);
Verdict TestGeneral(std::span<const SampleTriple> samples, const Dims& dims,
                    const TesterConfig& cfg);
// cfg.epsilon is the CMI gap; the binary tester runs at CmiEpsilonPrime.
Verdict TestCmi(const JointDistribution& p, const TesterConfig& cfg);
Verdict TestCmi(std::span<const SampleTriple> samples, const Dims& dims,
                const TesterConfig& cfg);

// Dispatch on cfg.mode.
Verdict RunTester(const JointDistribution& p, const TesterConfig& cfg);
Verdict RunTester(std::span<const SampleTriple> samples, const Dims& dims,
                  const TesterConfig& cfg);

inline constexpr double kThresholdFloor = 1e-9;
inline constexpr size_t kMinCalibrationTrials = 100;

// Smallest observed null statistic that at most floor(trials/6) of the null
// draws exceed. A zero quantile is lifted to kThresholdFloor.
double CalibrateThreshold(const std::function<double(size_t trial)>& null_statistic,
                          size_t trials);

// Runs the tester configured by cfg on `null_dist` with per-trial seeds
// DeriveSeed(cfg.seed, trial).
double CalibrateThreshold(const JointDistribution& null_dist,
                          const TesterConfig& cfg, size_t trials);

}  // namespace cit

#endif  // CIT_TESTERS_H_
