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

#include "cit/testers.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cit/error.h"
#include "cit/flattening.h"
#include "cit/polynomial.h"
#include "cit/rng.h"

namespace cit {
namespace {

constexpr size_t kMaxBinaryAlphabet = 8;

// Stream counters under cfg.seed.
constexpr uint64_t kDrawStream = 0;
constexpr uint64_t kShuffleStream = 1;

using Pair = std::pair<uint32_t, uint32_t>;

// Samples regrouped by bin, each bin in its original order.
struct BinnedSamples {
  std::vector<std::vector<Pair>> bins;
  uint64_t total = 0;
};

struct TesterInput {
  // Exactly one of these is populated.
  std::vector<uint32_t> cell_counts;  // indexed like JointDistribution
  BinnedSamples binned;
  bool from_counts = false;
  uint64_t m_used = 0;
  uint64_t drawn = 0;
};

void CheckDims(const Dims& dims) {
  Require(dims.l1 >= 1 && dims.l2 >= 1 && dims.n >= 1,
          "dimensions must be positive");
}

TesterInput DrawInput(const JointDistribution& p, uint64_t m, uint64_t seed) {
  TesterInput in;
  in.from_counts = true;
  in.m_used = m;
  in.cell_counts = SamplePoissonizedCounts(p, static_cast<double>(m),
                                           DeriveSeed(seed, kDrawStream));
  for (uint32_t c : in.cell_counts) in.drawn += c;
  return in;
}

TesterInput FixedInput(std::span<const SampleTriple> samples, const Dims& dims,
                       const TesterConfig& cfg) {
  TesterInput in;
  uint64_t use = samples.size();
  if (cfg.m_override) {
    if (samples.size() < *cfg.m_override) {
      Fail(ErrorCode::kInsufficientSamples,
           "sample file holds " + std::to_string(samples.size()) +
               " samples but m = " + std::to_string(*cfg.m_override) +
               " were requested");
    }
    use = *cfg.m_override;
  }
  in.m_used = use;
  in.drawn = use;
  in.binned.bins.resize(dims.n);
  for (uint64_t k = 0; k < use; ++k) {
    const SampleTriple& s = samples[k];
    if (s.x >= dims.l1 || s.y >= dims.l2 || s.z >= dims.n) {
      Fail(ErrorCode::kInvalidArgument,
           "sample " + std::to_string(k + 1) + " is outside the declared dims");
    }
    in.binned.bins[s.z].emplace_back(s.x, s.y);
  }
  in.binned.total = use;
  return in;
}

Fingerprint2D CountsOfBin(const TesterInput& in, const Dims& dims, size_t z) {
  Fingerprint2D f(dims.l1, dims.l2);
  if (in.from_counts) {
    const size_t base = z * dims.cells_per_bin();
    for (size_t c = 0; c < dims.cells_per_bin(); ++c)
      f.counts[c] = in.cell_counts[base + c];
  } else {
    for (const auto& [x, y] : in.binned.bins[z]) ++f.at(x, y);
  }
  return f;
}

uint64_t BinSize(const TesterInput& in, const Dims& dims, size_t z) {
  if (!in.from_counts) return in.binned.bins[z].size();
  uint64_t s = 0;
  const size_t base = z * dims.cells_per_bin();
  for (size_t c = 0; c < dims.cells_per_bin(); ++c) s += in.cell_counts[base + c];
  return s;
}

// The ordered sample sequence of bin z. Count-based inputs are expanded and
// shuffled, which has the same law as an i.i.d. sequence given the counts.
std::vector<Pair> SequenceOfBin(const TesterInput& in, const Dims& dims,
                                size_t z, uint64_t seed) {
  if (!in.from_counts) return in.binned.bins[z];
  std::vector<Pair> seq;
  const size_t base = z * dims.cells_per_bin();
  for (size_t c = 0; c < dims.cells_per_bin(); ++c) {
    const auto x = static_cast<uint32_t>(c / dims.l2);
    const auto y = static_cast<uint32_t>(c % dims.l2);
    seq.insert(seq.end(), in.cell_counts[base + c], Pair{x, y});
  }
  Rng rng = MakeRng(DeriveSeed(seed, kShuffleStream, z));
  std::shuffle(seq.begin(), seq.end(), rng);
  return seq;
}

Verdict Finish(Verdict v, const Dims& dims, const TesterInput& in,
               const TesterConfig& cfg) {
  v.m_used = in.m_used;
  v.samples_drawn = in.drawn;
  v.threshold = cfg.tau_override ? *cfg.tau_override
                                 : DefaultThreshold(dims, in.m_used, cfg);
  // Bins are visited in increasing z, so this sum has a fixed order.
  v.statistic = 0.0;
  for (const BinStatistic& b : v.per_bin) v.statistic += b.a;
  v.accept = v.statistic <= v.threshold;
  return v;
}

Verdict BinaryCore(const TesterInput& in, const Dims& dims,
                   const TesterConfig& cfg) {
  Require(dims.l1 <= kMaxBinaryAlphabet && dims.l2 <= kMaxBinaryAlphabet,
          "the binary tester supports alphabets of at most 8 symbols");
  Verdict v;
  for (size_t z = 0; z < dims.n; ++z) {
    if (BinSize(in, dims, z) < 4) continue;
    const Fingerprint2D f = CountsOfBin(in, dims, z);
    const uint64_t sigma = f.total();
    const double phi = L2Estimate(f);
    v.per_bin.push_back(BinStatistic{static_cast<uint32_t>(z), sigma, 1.0,
                                     static_cast<double>(sigma) * phi});
  }
  return Finish(std::move(v), dims, in, cfg);
}

Verdict GeneralCore(const TesterInput& in, const Dims& dims,
                    const TesterConfig& cfg) {
  Verdict v;
  for (size_t z = 0; z < dims.n; ++z) {
    const uint64_t size = BinSize(in, dims, z);
    if (size < 4) continue;
    const std::vector<Pair> seq = SequenceOfBin(in, dims, z, cfg.seed);
    const uint64_t big_n = 4 + 4 * ((size - 4) / 4);
    const uint64_t t = (big_n - 4) / 4;
    const uint64_t t1 = std::min<uint64_t>(t, dims.l1);
    const uint64_t t2 = std::min<uint64_t>(t, dims.l2);
    const uint64_t sigma = 2 * t + 4;
    const std::span<const Pair> all(seq);
    const FlatteningCoefficients coeffs =
        ImplicitFlattening(all.first(t1 + t2), dims.l1, dims.l2, t1, t2);
    Fingerprint2D f(dims.l1, dims.l2);
    for (const auto& [x, y] : all.subspan(t1 + t2, sigma)) ++f.at(x, y);
    const double phi = L2EstimateWith<double>(
        f, [&coeffs](size_t x, size_t y) { return coeffs.weight(x, y); });
    const double s = static_cast<double>(sigma);
    const double omega =
        std::sqrt(std::min<double>(s, static_cast<double>(dims.l1)) *
                  std::min<double>(s, static_cast<double>(dims.l2)));
    v.per_bin.push_back(
        BinStatistic{static_cast<uint32_t>(z), sigma, omega, s * omega * phi});
  }
  return Finish(std::move(v), dims, in, cfg);
}

void RequireBinaryShape(const Dims& dims) {
  Require(dims.l1 == 2 && dims.l2 == 2, "the CMI tester needs binary X and Y");
}

TesterConfig CmiInnerConfig(const TesterConfig& cfg) {
  TesterConfig inner = cfg;
  inner.epsilon = CmiEpsilonPrime(cfg.epsilon, cfg.c_cmi);
  inner.mode = TesterMode::kBinary;
  inner.Validate();
  return inner;
}

}  // namespace

std::string TesterModeName(TesterMode mode) {
  switch (mode) {
    case TesterMode::kBinary:
      return "binary";
    case TesterMode::kGeneral:
      return "general";
    case TesterMode::kCmi:
      return "cmi";
  }
  return "unknown";
}

TesterMode ParseTesterMode(const std::string& name) {
  if (name == "binary") return TesterMode::kBinary;
  if (name == "general") return TesterMode::kGeneral;
  if (name == "cmi") return TesterMode::kCmi;
  Fail(ErrorCode::kInvalidArgument, "unknown tester mode: " + name);
}

void TesterConfig::Validate() const {
  if (mode == TesterMode::kCmi) {
    Require(epsilon > 0.0 && epsilon < 0.5, "CMI epsilon must lie in (0, 1/2)");
    Require(c_cmi > 0.0, "c_cmi must be positive");
  } else {
    Require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
  }
  Require(beta > 0.0 && std::isfinite(beta), "beta must be positive");
  Require(zeta > 0.0 && std::isfinite(zeta), "zeta must be positive");
  if (tau_override) Require(std::isfinite(*tau_override), "tau must be finite");
}

double SampleComplexityBinaryRaw(double n, double eps_prime, double beta) {
  Require(n >= 1.0, "n must be at least 1");
  Require(eps_prime > 0.0, "epsilon must be positive");
  const double e = eps_prime;
  const double low = std::sqrt(n) / (e * e);
  const double mid = std::min(std::pow(n, 7.0 / 8.0) / e,
                              std::pow(n, 6.0 / 7.0) / std::pow(e, 8.0 / 7.0));
  return beta * std::max(low, mid);
}

uint64_t SampleComplexityBinary(uint64_t n, double epsilon, double beta,
                                size_t l1, size_t l2) {
  Require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
  const double eps_prime =
      epsilon / std::sqrt(static_cast<double>(l1) * static_cast<double>(l2));
  return static_cast<uint64_t>(
      std::ceil(SampleComplexityBinaryRaw(static_cast<double>(n), eps_prime, beta)));
}

GeneralSampleComplexity SampleComplexityGeneralReport(uint64_t n_in, size_t l1_in,
                                                      size_t l2_in, double epsilon,
                                                      double zeta) {
  Require(n_in >= 1 && l1_in >= 1 && l2_in >= 1, "dimensions must be positive");
  Require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
  const double n = static_cast<double>(n_in);
  const double a = static_cast<double>(std::max(l1_in, l2_in));
  const double b = static_cast<double>(std::min(l1_in, l2_in));
  const double e = epsilon;
  using std::pow;
  using std::sqrt;
  const double m1 = std::min({pow(n, 7.0 / 8) * pow(a * b, 0.25) / e,
                              pow(n, 6.0 / 7) * pow(a * b, 2.0 / 7) / pow(e, 8.0 / 7),
                              n * sqrt(a * b) / e});
  const double m2 = std::min({pow(n, 0.75) * sqrt(a * b) / e,
                              a * a * b * b / pow(e, 4),
                              n * sqrt(a) * pow(b, 1.5) / e});
  const double m3 = std::min({pow(n, 2.0 / 3) * pow(a, 2.0 / 3) * pow(b, 1.0 / 3) /
                                  pow(e, 4.0 / 3),
                              a * b / pow(e, 4), sqrt(n) * a * sqrt(b) / (e * e),
                              n * pow(a, 1.5) * sqrt(b) / e});
  const double m4 = std::min(sqrt(n * a * b) / (e * e), a * b / pow(e, 4));
  GeneralSampleComplexity r;
  r.full = zeta * std::max({m1, m2, m3, m4});
  r.simplified =
      zeta * std::max({std::min(pow(n, 7.0 / 8) * pow(a * b, 0.25) / e,
                                pow(n, 6.0 / 7) * pow(a * b, 2.0 / 7) / pow(e, 8.0 / 7)),
                       pow(n, 0.75) * sqrt(a * b) / e,
                       pow(n, 2.0 / 3) * pow(a, 2.0 / 3) * pow(b, 1.0 / 3) /
                           pow(e, 4.0 / 3),
                       sqrt(n * a * b) / (e * e)});
  r.m = static_cast<uint64_t>(std::ceil(r.full));
  return r;
}

uint64_t SampleComplexityGeneral(uint64_t n, size_t l1, size_t l2,
                                 double epsilon, double zeta) {
  return SampleComplexityGeneralReport(n, l1, l2, epsilon, zeta).m;
}

double CmiEpsilonPrime(double epsilon, double c_cmi) {
  Require(epsilon > 0.0 && epsilon < 0.5, "CMI epsilon must lie in (0, 1/2)");
  return c_cmi * epsilon / std::log2(1.0 / epsilon);
}

uint64_t PlannedSampleSize(const Dims& dims, const TesterConfig& cfg) {
  if (cfg.m_override) return *cfg.m_override;
  switch (cfg.mode) {
    case TesterMode::kBinary:
      return SampleComplexityBinary(dims.n, cfg.epsilon, cfg.beta, dims.l1,
                                    dims.l2);
    case TesterMode::kGeneral:
      return SampleComplexityGeneral(dims.n, dims.l1, dims.l2, cfg.epsilon,
                                     cfg.zeta);
    case TesterMode::kCmi:
      return SampleComplexityBinary(dims.n, CmiEpsilonPrime(cfg.epsilon, cfg.c_cmi),
                                    cfg.beta, dims.l1, dims.l2);
  }
  return 0;
}

double DefaultThreshold(const Dims& dims, uint64_t m, const TesterConfig& cfg) {
  const double root =
      std::sqrt(static_cast<double>(std::min<uint64_t>(dims.n, m)));
  if (cfg.mode == TesterMode::kGeneral) return std::pow(cfg.zeta, 0.25) * root;
  return cfg.zeta * root;
}

Verdict TestBinary(const JointDistribution& p, const TesterConfig& cfg) {
  cfg.Validate();
  CheckDims(p.dims());
  return BinaryCore(DrawInput(p, PlannedSampleSize(p.dims(), cfg), cfg.seed),
                    p.dims(), cfg);
}

Verdict TestBinary(std::span<const SampleTriple> samples, const Dims& dims,
                   const TesterConfig& cfg) {
  cfg.Validate();
  CheckDims(dims);
  return BinaryCore(FixedInput(samples, dims, cfg), dims, cfg);
}

Verdict TestGeneral(const JointDistribution& p, const TesterConfig& cfg) {
  cfg.Validate();
  CheckDims(p.dims());
  return GeneralCore(DrawInput(p, PlannedSampleSize(p.dims(), cfg), cfg.seed),
                     p.dims(), cfg);
}

Verdict TestGeneral(std::span<const SampleTriple> samples, const Dims& dims,
                    const TesterConfig& cfg) {
  cfg.Validate();
  CheckDims(dims);
  return GeneralCore(FixedInput(samples, dims, cfg), dims, cfg);
}

Verdict TestCmi(const JointDistribution& p, const TesterConfig& cfg) {
  TesterConfig c = cfg;
  c.mode = TesterMode::kCmi;
  c.Validate();
  RequireBinaryShape(p.dims());
  return TestBinary(p, CmiInnerConfig(c));
}

Verdict TestCmi(std::span<const SampleTriple> samples, const Dims& dims,
                const TesterConfig& cfg) {
  TesterConfig c = cfg;
  c.mode = TesterMode::kCmi;
  c.Validate();
  RequireBinaryShape(dims);
  return TestBinary(samples, dims, CmiInnerConfig(c));
}

Verdict RunTester(const JointDistribution& p, const TesterConfig& cfg) {
  switch (cfg.mode) {
    case TesterMode::kBinary:
      return TestBinary(p, cfg);
    case TesterMode::kGeneral:
      return TestGeneral(p, cfg);
    case TesterMode::kCmi:
      return TestCmi(p, cfg);
  }
  Fail(ErrorCode::kInternal, "unhandled tester mode");
}

Verdict RunTester(std::span<const SampleTriple> samples, const Dims& dims,
                  const TesterConfig& cfg) {
  switch (cfg.mode) {
    case TesterMode::kBinary:
      return TestBinary(samples, dims, cfg);
    case TesterMode::kGeneral:
      return TestGeneral(samples, dims, cfg);
    case TesterMode::kCmi:
      return TestCmi(samples, dims, cfg);
  }
  Fail(ErrorCode::kInternal, "unhandled tester mode");
}

double CalibrateThreshold(const std::function<double(size_t trial)>& null_statistic,
                          size_t trials) {
  Require(trials >= kMinCalibrationTrials,
          "calibration needs at least 100 null trials");
  std::vector<double> stats(trials);
  for (size_t t = 0; t < trials; ++t) {
    stats[t] = null_statistic(t);
    if (!std::isfinite(stats[t])) {
      Fail(ErrorCode::kInvalidArgument,
           "null generator produced a non-finite statistic");
    }
  }
  std::sort(stats.begin(), stats.end());
  const size_t allowed = trials / 6;
  const double tau = stats[trials - 1 - allowed];
  return tau == 0.0 ? kThresholdFloor : tau;
}

double CalibrateThreshold(const JointDistribution& null_dist,
                          const TesterConfig& cfg, size_t trials) {
  return CalibrateThreshold(
      [&](size_t trial) {
        TesterConfig c = cfg;
        c.seed = DeriveSeed(cfg.seed, trial);
        return RunTester(null_dist, c).statistic;
      },
      trials);
}

}  // namespace cit
