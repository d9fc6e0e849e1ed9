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

#ifndef CIT_FLATTENING_H_
#define CIT_FLATTENING_H_

// Split distributions and the implicit two-marginal flattening that turns a
// bivariate table into a lower-norm one without changing TV distances. Only
// the coefficient grid is ever built; the split domain stays implicit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cit/dist_core.h"
#include "cit/error.h"
#include "cit/rational.h"

namespace cit {

// a_i = 1 + (multiplicity of i in the flattening multiset).
struct SplitSpec {
  std::vector<uint64_t> a;

  static SplitSpec FromMultiset(size_t n, std::span<const uint32_t> multiset);
  size_t domain_size() const;  // n + |S|
};

// p_S over the split domain: element i becomes a_i consecutive copies of mass
// p_i / a_i.
std::vector<double> SplitDistribution(std::span<const double> p,
                                      const SplitSpec& spec);

// Per-cell split counts with 1 + a_xy = (1 + b_x)(1 + c_y). The dense grid is
// kept only for tables of at most kDenseGridLimit cells.
class FlatteningCoefficients {
 public:
  static constexpr size_t kDenseGridLimit = 4096;

  FlatteningCoefficients(std::vector<uint64_t> b, std::vector<uint64_t> c);
  static FlatteningCoefficients Zero(size_t l1, size_t l2);

  size_t l1() const { return b_.size(); }
  size_t l2() const { return c_.size(); }
  const std::vector<uint64_t>& row_counts() const { return b_; }
  const std::vector<uint64_t>& col_counts() const { return c_; }
  bool has_dense_grid() const { return !grid_.empty(); }

  uint64_t a(size_t x, size_t y) const {
    if (!grid_.empty()) return grid_[x * c_.size() + y];
    return (1 + b_[x]) * (1 + c_[y]) - 1;
  }
  double weight(size_t x, size_t y) const {
    return 1.0 / static_cast<double>(1 + a(x, y));
  }
  std::vector<double> WeightGrid() const;
  std::vector<Rational> RationalWeightGrid() const;

  // (l1 + sum b)(l2 + sum c), the size of the split domain.
  uint64_t split_domain_size() const;

 private:
  std::vector<uint64_t> b_;
  std::vector<uint64_t> c_;
  std::vector<uint64_t> grid_;
};

// b counts the x-coordinates of the first t1 samples, c the y-coordinates of
// the next t2. Indices are 0-based.
FlatteningCoefficients ImplicitFlattening(
    std::span<const std::pair<uint32_t, uint32_t>> flatten_samples, size_t l1,
    size_t l2, size_t t1, size_t t2);

// sum_xy (p_xy - p_x p_y)^2 / (1 + a_xy) for a normalized row-major table;
// equals ||p_T - q_T||_2^2 of the split bivariate distribution.
template <class T>
T RescaledL2Value(std::span<const T> table, const FlatteningCoefficients& k) {
  const size_t l1 = k.l1(), l2 = k.l2();
  Require(table.size() == l1 * l2, "table shape does not match coefficients");
  std::vector<T> row(l1, T(0)), col(l2, T(0));
  for (size_t x = 0; x < l1; ++x)
    for (size_t y = 0; y < l2; ++y) {
      row[x] += table[x * l2 + y];
      col[y] += table[x * l2 + y];
    }
  T total(0);
  for (size_t x = 0; x < l1; ++x)
    for (size_t y = 0; y < l2; ++y) {
      const T delta = table[x * l2 + y] - row[x] * col[y];
      total += delta * delta / FromInteger<T>(static_cast<int64_t>(1 + k.a(x, y)));
    }
  return total;
}

double RescaledL2Value(const Table& p, const FlatteningCoefficients& k);

// The split bivariate distribution p_T itself, row-major over
// (l1 + sum b) x (l2 + sum c). Intended for verification on small tables.
Table MaterializeSplitTable(const Table& p, const FlatteningCoefficients& k);

}  // namespace cit

#endif  // CIT_FLATTENING_H_
