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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cit/dist_core.h"
#include "cit/error.h"
#include "cit/instances.h"
#include "cit/rng.h"

namespace cit {
namespace {

TesterConfig Config(TesterMode mode, uint64_t seed = 1) {
  TesterConfig cfg;
  cfg.mode = mode;
  cfg.seed = seed;
  return cfg;
}

TEST(SampleComplexityTest, BinaryFormulaExamples) {
  EXPECT_EQ(std::ceil(SampleComplexityBinaryRaw(256, 1.0, 1.0)), 116.0);
  EXPECT_EQ(std::ceil(SampleComplexityBinaryRaw(16, 0.1, 1.0)), 400.0);
}

TEST(SampleComplexityTest, BinaryLinearInBeta) {
  EXPECT_DOUBLE_EQ(SampleComplexityBinaryRaw(500, 0.3, 4.0),
                   2 * SampleComplexityBinaryRaw(500, 0.3, 2.0));
}

TEST(SampleComplexityTest, BinaryUsesRescaledEpsilon) {
  // Binary X and Y: eps' = eps / 2.
  EXPECT_EQ(SampleComplexityBinary(256, 1.0, 1.0),
            static_cast<uint64_t>(std::ceil(SampleComplexityBinaryRaw(256, 0.5, 1.0))));
}

TEST(SampleComplexityTest, GeneralMatchesBinaryUpToConstants) {
  for (uint64_t n : {10, 100, 1000, 10000, 100000}) {
    for (double eps : {0.1, 0.3, 0.9}) {
      const double ratio = static_cast<double>(SampleComplexityGeneral(n, 2, 2, eps, 1.0)) /
                           SampleComplexityBinaryRaw(n, eps, 1.0);
      EXPECT_GT(ratio, 0.1) << n << " " << eps;
      EXPECT_LT(ratio, 10.0) << n << " " << eps;
    }
  }
}

TEST(SampleComplexityTest, GeneralSingleBinShape) {
  for (size_t l1 : {4, 16, 64}) {
    for (double eps : {0.05, 0.2, 0.8}) {
      const double a = static_cast<double>(l1), b = 3.0;
      const double expect = std::max(std::pow(a, 2.0 / 3) * std::pow(b, 1.0 / 3) /
                                         std::pow(eps, 4.0 / 3),
                                     std::sqrt(a * b) / (eps * eps));
      const double got = SampleComplexityGeneralReport(1, l1, 3, eps, 1.0).full;
      EXPECT_GT(got / expect, 0.1);
      EXPECT_LT(got / expect, 10.0);
    }
  }
}

TEST(SampleComplexityTest, GeneralSquareDomainExponent) {
  // l1 = l2 = n with constant eps grows as n^{7/4}.
  const double lo = SampleComplexityGeneralReport(100, 100, 100, 0.5, 1.0).full;
  const double hi = SampleComplexityGeneralReport(10000, 10000, 10000, 0.5, 1.0).full;
  EXPECT_NEAR(std::log(hi / lo) / std::log(100.0), 1.75, 0.05);
}

TEST(SampleComplexityTest, FullAndSimplifiedWithinConstants) {
  for (uint64_t n : {1, 10, 1000, 100000})
    for (size_t l1 : {2, 8, 64})
      for (size_t l2 : {2, 5})
        for (double eps : {0.05, 0.5}) {
          const GeneralSampleComplexity r = SampleComplexityGeneralReport(n, l1, l2, eps, 2.0);
          EXPECT_LE(r.full, 4 * r.simplified);
          EXPECT_GE(r.full, r.simplified / 4);
        }
}

TEST(SampleComplexityTest, GeneralSwapsDomains) {
  EXPECT_EQ(SampleComplexityGeneral(50, 3, 9, 0.2, 1.0),
            SampleComplexityGeneral(50, 9, 3, 0.2, 1.0));
}

TEST(CmiEpsilonPrimeTest, Example) {
  EXPECT_DOUBLE_EQ(CmiEpsilonPrime(0.25, 1.0), 0.125);
  EXPECT_THROW(CmiEpsilonPrime(0.5, 1.0), Error);
}

TEST(TestBinaryTest, SmallBinsContributeNothing) {
  const Dims dims{2, 2, 3};
  const std::vector<SampleTriple> s = {{0, 0, 0}, {1, 1, 0}, {0, 1, 0}, {1, 0, 1},
                                       {1, 1, 2}, {0, 0, 2}, {1, 1, 1}};
  const Verdict v = TestBinary(s, dims, Config(TesterMode::kBinary));
  EXPECT_EQ(v.statistic, 0.0);
  EXPECT_TRUE(v.accept);
  EXPECT_TRUE(v.per_bin.empty());
  EXPECT_EQ(v.m_used, 7u);
}

TEST(TestBinaryTest, OneSamplePerCell) {
  const Dims dims{2, 2, 2};
  const std::vector<SampleTriple> s = {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}};
  const Verdict v = TestBinary(s, dims, Config(TesterMode::kBinary));
  EXPECT_NEAR(v.statistic, -4.0 / 3.0, 1e-15);
  EXPECT_TRUE(v.accept);
  ASSERT_EQ(v.per_bin.size(), 1u);
  EXPECT_EQ(v.per_bin[0].z, 1u);
  EXPECT_EQ(v.per_bin[0].sigma, 4u);
  EXPECT_DOUBLE_EQ(v.threshold, 2.0 * std::sqrt(2.0));
}

TEST(TestBinaryTest, ThresholdOverrideAndDirection) {
  const Dims dims{2, 2, 1};
  // Perfectly correlated samples push A up.
  std::vector<SampleTriple> s;
  for (int k = 0; k < 20; ++k) s.push_back({uint32_t(k % 2), uint32_t(k % 2), 0});
  TesterConfig cfg = Config(TesterMode::kBinary);
  const Verdict v = TestBinary(s, dims, cfg);
  EXPECT_GT(v.statistic, 0.0);
  cfg.tau_override = v.statistic;
  EXPECT_TRUE(TestBinary(s, dims, cfg).accept);
  cfg.tau_override = v.statistic - 1e-9;
  EXPECT_FALSE(TestBinary(s, dims, cfg).accept);
}

TEST(TestBinaryTest, FixedModeUsesPrefix) {
  const Dims dims{2, 2, 1};
  const std::vector<SampleTriple> s(10, SampleTriple{0, 0, 0});
  TesterConfig cfg = Config(TesterMode::kBinary);
  cfg.m_override = 6;
  EXPECT_EQ(TestBinary(s, dims, cfg).m_used, 6u);
  cfg.m_override = 11;
  try {
    TestBinary(s, dims, cfg);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSamples);
  }
}

TEST(TestBinaryTest, RejectsOutOfRangeSamples) {
  const std::vector<SampleTriple> s = {{2, 0, 0}};
  EXPECT_THROW(TestBinary(s, Dims{2, 2, 1}, Config(TesterMode::kBinary)), Error);
}

TEST(TestBinaryTest, RejectsWideAlphabets) {
  const JointDistribution p = GenRandomCi(9, 2, 3, 1).dist;
  EXPECT_THROW(TestBinary(p, Config(TesterMode::kBinary)), Error);
}

TEST(TestBinaryTest, DeterministicGivenSeed) {
  const JointDistribution p = GenRandomFar(2, 2, 40, 0.3, 2).dist;
  const TesterConfig cfg = Config(TesterMode::kBinary, 99);
  const Verdict a = TestBinary(p, cfg), b = TestBinary(p, cfg);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.samples_drawn, b.samples_drawn);
}

TEST(TestBinaryTest, NullMeanIsZero) {
  const JointDistribution p = GenRandomCi(2, 2, 30, 5).dist;
  TesterConfig cfg = Config(TesterMode::kBinary);
  cfg.m_override = 300;
  const int reps = 2000;
  double s1 = 0, s2 = 0;
  for (int r = 0; r < reps; ++r) {
    cfg.seed = DeriveSeed(6, r);
    const double a = TestBinary(p, cfg).statistic;
    s1 += a;
    s2 += a * a;
  }
  const double mean = s1 / reps, se = std::sqrt((s2 / reps - mean * mean) / reps);
  EXPECT_LT(std::fabs(mean), 4 * se);
}

TEST(TestBinaryTest, CiInstanceAcceptedAtCalibratedThreshold) {
  const JointDistribution p = GenRandomCi(2, 2, 50, 8).dist;
  TesterConfig cfg = Config(TesterMode::kBinary, 3);
  cfg.m_override = 400;
  cfg.tau_override = CalibrateThreshold(p, cfg, 300);
  int accepted = 0;
  for (int r = 0; r < 300; ++r) {
    cfg.seed = DeriveSeed(1000, r);
    accepted += TestBinary(p, cfg).accept;
  }
  EXPECT_GE(accepted, 0.6 * 300);
}

TEST(TestGeneralTest, SmallBinsContributeNothing) {
  const std::vector<SampleTriple> s = {{0, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  const Verdict v = TestGeneral(s, Dims{3, 3, 1}, Config(TesterMode::kGeneral));
  EXPECT_EQ(v.statistic, 0.0);
  EXPECT_TRUE(v.accept);
}

TEST(TestGeneralTest, SevenSamplesUseOneBlock) {
  for (size_t l : {2, 3, 6}) {
    std::vector<SampleTriple> s;
    for (uint32_t k = 0; k < 7; ++k) s.push_back({k % 2, (k / 2) % 2, 0});
    const Verdict v = TestGeneral(s, Dims{l, l, 1}, Config(TesterMode::kGeneral));
    ASSERT_EQ(v.per_bin.size(), 1u);
    EXPECT_EQ(v.per_bin[0].sigma, 4u);
    EXPECT_DOUBLE_EQ(v.per_bin[0].omega, static_cast<double>(std::min<size_t>(4, l)));
    // No flattening, so the first four samples (one per cell) are estimated.
    EXPECT_NEAR(v.per_bin[0].a, 4.0 * v.per_bin[0].omega * (-1.0 / 3.0), 1e-12);
  }
}

TEST(TestGeneralTest, ZeroExpectedSamplesAcceptsEverything) {
  TesterConfig cfg = Config(TesterMode::kGeneral);
  cfg.m_override = 0;
  const Verdict v = TestGeneral(GenRandomFar(3, 3, 5, 0.2, 1).dist, cfg);
  EXPECT_TRUE(v.accept);
  EXPECT_EQ(v.samples_drawn, 0u);
}

TEST(TestGeneralTest, ThresholdUsesFourthRootOfZeta) {
  TesterConfig cfg = Config(TesterMode::kGeneral);
  cfg.zeta = 16;
  cfg.m_override = 1000;
  const Verdict v = TestGeneral(GenRandomCi(3, 3, 25, 1).dist, cfg);
  EXPECT_DOUBLE_EQ(v.threshold, 2.0 * 5.0);
}

TEST(TestGeneralTest, AgreesWithBinaryOnCiInstances) {
  int agree = 0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    const JointDistribution p = GenRandomCi(2, 2, 20, DeriveSeed(40, r)).dist;
    const std::vector<SampleTriple> s = SamplePoissonized(p, 200.0, DeriveSeed(41, r));
    const TesterConfig b = Config(TesterMode::kBinary, r);
    const TesterConfig g = Config(TesterMode::kGeneral, r);
    agree += TestBinary(s, p.dims(), b).accept == TestGeneral(s, p.dims(), g).accept;
  }
  EXPECT_GE(agree, 0.9 * reps);
}

TEST(TestCmiTest, UsesReducedEpsilon) {
  const JointDistribution p = GenRandomCi(2, 2, 30, 2).dist;
  TesterConfig cmi = Config(TesterMode::kCmi, 4);
  cmi.epsilon = 0.25;
  TesterConfig bin = Config(TesterMode::kBinary, 4);
  bin.epsilon = 0.125;
  const Verdict a = TestCmi(p, cmi), b = TestBinary(p, bin);
  EXPECT_EQ(a.m_used, b.m_used);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(PlannedSampleSize(p.dims(), cmi), b.m_used);
}

TEST(TestCmiTest, RequiresBinaryShapeAndRange) {
  TesterConfig cfg = Config(TesterMode::kCmi);
  cfg.epsilon = 0.2;
  EXPECT_THROW(TestCmi(GenRandomCi(3, 2, 5, 1).dist, cfg), Error);
  cfg.epsilon = 0.6;
  EXPECT_THROW(TestCmi(GenRandomCi(2, 2, 5, 1).dist, cfg), Error);
}

TEST(TestCmiTest, CiInstanceAcceptedAtCalibratedThreshold) {
  const JointDistribution p = GenRandomCi(2, 2, 20, 12).dist;
  TesterConfig cfg = Config(TesterMode::kCmi, 7);
  cfg.epsilon = 0.25;
  cfg.m_override = 500;
  cfg.tau_override = CalibrateThreshold(p, cfg, 300);
  int accepted = 0;
  for (int r = 0; r < 300; ++r) {
    cfg.seed = DeriveSeed(2000, r);
    accepted += TestCmi(p, cfg).accept;
  }
  EXPECT_GE(accepted, 0.6 * 300);
}

TEST(CalibrateThresholdTest, ZeroNullGivesFloor) {
  EXPECT_EQ(CalibrateThreshold([](size_t) { return 0.0; }, 200), kThresholdFloor);
}

TEST(CalibrateThresholdTest, QuantileIndex) {
  // With 120 trials, 20 statistics may exceed tau.
  const double tau = CalibrateThreshold([](size_t t) { return static_cast<double>(t); }, 120);
  EXPECT_EQ(tau, 99.0);
}

TEST(CalibrateThresholdTest, RejectsTooFewTrialsAndNonFinite) {
  EXPECT_THROW(CalibrateThreshold([](size_t) { return 1.0; }, 50), Error);
  EXPECT_THROW(CalibrateThreshold([](size_t) { return NAN; }, 100), Error);
}

double NullTau(uint64_t n, size_t trials) {
  const JointDistribution p = GenRandomCi(2, 2, n, DeriveSeed(50, n)).dist;
  TesterConfig cfg = Config(TesterMode::kBinary, 51);
  cfg.m_override = 20 * n;
  return CalibrateThreshold(p, cfg, trials);
}

TEST(CalibrateThresholdTest, ScalesWithRootN) {
  std::vector<double> x, y;
  for (uint64_t n : {50, 200, 800}) {
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(std::log(NullTau(n, 600)));
  }
  const double slope = (y[2] - y[0]) / (x[2] - x[0]);
  EXPECT_NEAR(slope, 0.5, 0.1);
}

TEST(CalibrateThresholdTest, StableUnderMoreTrials) {
  const double a = NullTau(100, 1000), b = NullTau(100, 2000);
  EXPECT_LT(std::fabs(a - b) / b, 0.1);
}

}  // namespace
}  // namespace cit
