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

#ifndef CIT_INSTANCES_H_
#define CIT_INSTANCES_H_

// Instance generators: random CI and far families, the moment-matched yes/no
// ensembles for binary X and Y, the uniformity-testing reduction and the
// large-alphabet (X, W) ensemble. Every generator is a pure function of its
// EnsembleSpec; bin z draws from the counter stream DeriveSeed(seed, 0, z).

#include <cstdint>
#include <string>
#include <vector>

#include "cit/dist_core.h"
#include "cit/polynomial.h"
#include "cit/rational.h"

namespace cit {

enum class Family {
  kYesBinaryR1,
  kNoBinaryR1,
  kYesBinaryR2,
  kNoBinaryR2,
  kPaninskiYes,
  kPaninskiNo,
  kNnnD0,
  kNnnD1,
  kRandomCi,
  kRandomFar,
};

std::string FamilyName(Family f);
Family ParseFamily(const std::string& name);
// True for the families that are exactly conditionally independent.
bool FamilyIsCi(Family f);

struct EnsembleSpec {
  Family family = Family::kRandomCi;
  uint64_t n = 1;      // |Z| (for the reduction: N / 4 blocks)
  uint64_t m = 1;      // sample-budget parameter of the binary ensembles
  double epsilon = 0.1;
  size_t l1 = 2;       // random families only
  size_t l2 = 2;
  uint64_t seed = 0;
};

// Which construction produced a bin.
enum class SliceKind : uint8_t {
  kHeavy,    // mass 1/m, uniform slice
  kAnchor,   // the unit-mass uniform bin of the second regime
  kY1,
  kY2,
  kN1,
  kN2,
  kN3,
  kOther,
};

struct InstanceMetadata {
  double raw_mass = 1.0;              // total mass before normalization
  double normalization_factor = 1.0;  // 1 / raw_mass
  double raw_ci_proxy = 0.0;          // proxy distance of the pseudo-distribution
  double ci_proxy = 0.0;              // proxy distance after normalization
  uint64_t heavy_bins = 0;
  uint64_t heavy_set_size = 0;        // |A_z| = |B_z| for the (X, W) ensemble
  std::vector<SliceKind> slice_kinds;  // per bin, binary ensembles only
};

struct Instance {
  JointDistribution dist;  // normalized
  InstanceMetadata meta;
};

Instance Generate(const EnsembleSpec& spec);

// The fixed 2x2 conditional slices of the binary ensembles.
Table SliceMatrix(SliceKind kind);
// Same entries as exact rationals, row-major.
std::vector<Rational> RationalSliceMatrix(SliceKind kind);

// Binary ensembles. The first regime needs 1 <= m < n / 2; the second adds
// an anchor bin at z = n - 1 and makes each other bin heavy w.p. 1/2.
Instance GenBinaryEnsemble(const EnsembleSpec& spec);

// Perturbed or uniform distribution on [N] with pairs (2i, 2i+1) carrying
// ((1 +- 2 eps) / N, (1 -+ 2 eps) / N), mapped block-wise onto
// {0,1}^2 x [N/4]: elements 4k..4k+3 become cells (0,0), (0,1), (1,0), (1,1)
// of bin k. Needs N divisible by 4 and eps in (0, 1/2].
Instance PaninskiReduction(uint64_t big_n, double epsilon, bool perturbed,
                           uint64_t seed);

// X' = (X, W) encoded as x' = 2x + w, so l1 = 2n, l2 = n, |Z| = n. The heavy
// sets have size floor(n^{3/4}). Needs n >= 16.
Instance GenNnn(uint64_t n, bool far, uint64_t seed);

Instance GenRandomCi(size_t l1, size_t l2, uint64_t n, uint64_t seed);
// Every slice sits at TV distance eps from the product of its marginals, so
// the proxy distance is eps.
Instance GenRandomFar(size_t l1, size_t l2, uint64_t n, double epsilon,
                      uint64_t seed);

// Splits every x into fx equal parts and every y into fy. Preserves
// conditional independence and every slice's distance to its product.
JointDistribution Refine(const JointDistribution& p, size_t fx, size_t fy);

struct MomentEntry {
  Monomial monomial;  // over the four cells (0,0), (0,1), (1,0), (1,1)
  Rational yes_side;
  Rational no_side;
};

struct MomentMatchReport {
  std::vector<MomentEntry> entries;  // every monomial of degree <= max_degree + 1
  uint32_t max_degree = 3;
  size_t low_degree_checked = 0;
  size_t low_degree_mismatches = 0;
  size_t next_degree_checked = 0;
  size_t next_degree_mismatches = 0;

  bool passed() const {
    return low_degree_mismatches == 0 && next_degree_mismatches > 0;
  }
};

// Compares E[R] under the yes mixture (Y1, Y2 w.p. 1/2 each) with the no
// mixture (N1, N2 w.p. 1/8, N3 w.p. 3/4) in exact arithmetic.
MomentMatchReport MomentMatchCheck(uint32_t max_degree = 3);

// All exponent vectors over `num_vars` variables with total degree exactly d.
std::vector<Monomial> MonomialsOfDegree(size_t num_vars, uint32_t d);

}  // namespace cit

#endif  // CIT_INSTANCES_H_
