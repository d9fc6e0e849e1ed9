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

#ifndef CIT_DIST_CORE_H_
#define CIT_DIST_CORE_H_

// Discrete distributions over X x Y x Z, their conditional decomposition,
// distances, conditional mutual information and seeded samplers.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cit {

inline constexpr double kNormalizationTolerance = 1e-12;

struct Dims {
  size_t l1 = 0;  // |X|
  size_t l2 = 0;  // |Y|
  size_t n = 0;   // |Z|

  size_t cells_per_bin() const { return l1 * l2; }
  size_t size() const { return l1 * l2 * n; }
  bool operator==(const Dims&) const = default;
};

// Dense row-major l1 x l2 table of reals.
class Table {
 public:
  Table() = default;
  Table(size_t rows, size_t cols, double fill = 0.0);
  Table(size_t rows, size_t cols, std::vector<double> values);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double operator()(size_t i, size_t j) const { return v_[i * cols_ + j]; }
  double& operator()(size_t i, size_t j) { return v_[i * cols_ + j]; }
  std::span<const double> values() const { return v_; }

  double sum() const;
  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> v_;
};

// The conditional distribution p_z of (X, Y) given Z = z, with its weight
// p_Z(z). When the weight is zero the table is uniform by convention.
struct ConditionalSlice {
  double weight = 0.0;
  Table table;
};

struct SampleTriple {
  uint32_t x = 0;
  uint32_t y = 0;
  uint32_t z = 0;

  bool operator==(const SampleTriple&) const = default;
};

// Probability tensor p(x, y, z), stored bin-major so that each conditional
// slice is contiguous. The bin-weight cache is always derived from the mass.
class JointDistribution {
 public:
  // Throws if any entry is negative or non-finite. `mass` is indexed by
  // Index(x, y, z). Pseudo-distributions (total mass != 1) are permitted and
  // flagged through normalized().
  JointDistribution(Dims dims, std::vector<double> mass);

  static JointDistribution FromSlices(std::span<const ConditionalSlice> slices);

  const Dims& dims() const { return dims_; }
  size_t Index(size_t x, size_t y, size_t z) const {
    return (z * dims_.l1 + x) * dims_.l2 + y;
  }
  double operator()(size_t x, size_t y, size_t z) const {
    return mass_[Index(x, y, z)];
  }
  std::span<const double> mass() const { return mass_; }
  std::span<const double> bin_mass(size_t z) const {
    return std::span<const double>(mass_).subspan(z * dims_.cells_per_bin(),
                                                  dims_.cells_per_bin());
  }

  double bin_weight(size_t z) const { return bin_weight_[z]; }
  std::span<const double> bin_weights() const { return bin_weight_; }
  double total_mass() const { return total_; }
  bool normalized() const;

  ConditionalSlice slice(size_t z) const;

  // Divides by the total mass.
  JointDistribution Normalized() const;

 private:
  Dims dims_;
  std::vector<double> mass_;
  std::vector<double> bin_weight_;
  double total_ = 0.0;
};

// Half the l1 distance between two same-shaped nonnegative tables.
double TvDistance(std::span<const double> p, std::span<const double> q);
double TvDistance(const Table& p, const Table& q);
double TvDistance(const JointDistribution& p, const JointDistribution& q);

double L2DistanceSquared(std::span<const double> p, std::span<const double> q);

// q_z = p_{z,X} (x) p_{z,Y}, same weight.
ConditionalSlice ProductOfConditionalMarginals(const ConditionalSlice& s);
Table ProductOfMarginals(const Table& t);

// q(x, y, z) = p_Z(z) q_z(x, y). Always conditionally independent with
// q_Z = p_Z.
JointDistribution MixtureQ(const JointDistribution& p);

// d_TV(p, MixtureQ(p)); lies in [d_TV(p, CI), 4 d_TV(p, CI)].
double CiDistanceProxy(const JointDistribution& p);

// 2 |p00 p11 - p01 p10| for a 2x2 slice table.
double BinarySliceTvViaCovariance(const Table& t);

// True when every slice equals the outer product of its marginals within
// `tolerance` (absolute, per cell of the conditional table).
bool IsConditionallyIndependent(const JointDistribution& p,
                                double tolerance = 1e-12);

// I(X;Y|Z) in bits.
double ConditionalMutualInformation(const JointDistribution& p);

// Marginal distribution of Z.
std::vector<double> ZMarginal(const JointDistribution& p);

std::vector<SampleTriple> SampleFixed(const JointDistribution& p, size_t count,
                                      uint64_t seed);

// Draws M ~ Poisson(m) and then M i.i.d. samples.
std::vector<SampleTriple> SamplePoissonized(const JointDistribution& p,
                                            double m, uint64_t seed);

// Poissonized draw expressed as independent per-cell counts
// count(x, y, z) ~ Poisson(m p(x, y, z)), indexed like the mass tensor. Has the
// same law as the cell histogram of SamplePoissonized.
std::vector<uint32_t> SamplePoissonizedCounts(const JointDistribution& p,
                                              double m, uint64_t seed);

}  // namespace cit

#endif  // CIT_DIST_CORE_H_
