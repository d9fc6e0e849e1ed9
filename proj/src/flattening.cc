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

#include "cit/flattening.h"

#include <numeric>

namespace cit {

SplitSpec SplitSpec::FromMultiset(size_t n, std::span<const uint32_t> multiset) {
  SplitSpec spec;
  spec.a.assign(n, 1);
  for (uint32_t i : multiset) {
    Require(i < n, "flattening multiset element out of range");
    ++spec.a[i];
  }
  return spec;
}

size_t SplitSpec::domain_size() const {
  return std::accumulate(a.begin(), a.end(), size_t{0});
}

std::vector<double> SplitDistribution(std::span<const double> p,
                                      const SplitSpec& spec) {
  Require(p.size() == spec.a.size(), "split spec dimension mismatch");
  std::vector<double> out;
  out.reserve(spec.domain_size());
  for (size_t i = 0; i < p.size(); ++i) {
    Require(spec.a[i] >= 1, "split multiplicities must be at least 1");
    const double share = p[i] / static_cast<double>(spec.a[i]);
    out.insert(out.end(), spec.a[i], share);
  }
  return out;
}

FlatteningCoefficients::FlatteningCoefficients(std::vector<uint64_t> b,
                                               std::vector<uint64_t> c)
    : b_(std::move(b)), c_(std::move(c)) {
  Require(!b_.empty() && !c_.empty(), "flattening needs l1, l2 >= 1");
  if (b_.size() * c_.size() <= kDenseGridLimit) {
    grid_.resize(b_.size() * c_.size());
    for (size_t x = 0; x < b_.size(); ++x)
      for (size_t y = 0; y < c_.size(); ++y)
        grid_[x * c_.size() + y] = (1 + b_[x]) * (1 + c_[y]) - 1;
  }
}

FlatteningCoefficients FlatteningCoefficients::Zero(size_t l1, size_t l2) {
  return FlatteningCoefficients(std::vector<uint64_t>(l1, 0),
                                std::vector<uint64_t>(l2, 0));
}

std::vector<double> FlatteningCoefficients::WeightGrid() const {
  std::vector<double> w(l1() * l2());
  for (size_t x = 0; x < l1(); ++x)
    for (size_t y = 0; y < l2(); ++y) w[x * l2() + y] = weight(x, y);
  return w;
}

std::vector<Rational> FlatteningCoefficients::RationalWeightGrid() const {
  std::vector<Rational> w(l1() * l2());
  for (size_t x = 0; x < l1(); ++x)
    for (size_t y = 0; y < l2(); ++y)
      w[x * l2() + y] = Frac(1, static_cast<long>(1 + a(x, y)));
  return w;
}

uint64_t FlatteningCoefficients::split_domain_size() const {
  const uint64_t rows = l1() + std::accumulate(b_.begin(), b_.end(), uint64_t{0});
  const uint64_t cols = l2() + std::accumulate(c_.begin(), c_.end(), uint64_t{0});
  return rows * cols;
}

FlatteningCoefficients ImplicitFlattening(
    std::span<const std::pair<uint32_t, uint32_t>> flatten_samples, size_t l1,
    size_t l2, size_t t1, size_t t2) {
  if (flatten_samples.size() < t1 + t2) {
    Fail(ErrorCode::kInsufficientSamples,
         "implicit flattening needs at least t1 + t2 samples");
  }
  std::vector<uint64_t> b(l1, 0), c(l2, 0);
  for (size_t k = 0; k < t1; ++k) {
    const uint32_t x = flatten_samples[k].first;
    Require(x < l1, "flattening sample x out of range");
    ++b[x];
  }
  for (size_t k = t1; k < t1 + t2; ++k) {
    const uint32_t y = flatten_samples[k].second;
    Require(y < l2, "flattening sample y out of range");
    ++c[y];
  }
  return FlatteningCoefficients(std::move(b), std::move(c));
}

double RescaledL2Value(const Table& p, const FlatteningCoefficients& k) {
  Require(p.rows() == k.l1() && p.cols() == k.l2(),
          "table shape does not match coefficients");
  return RescaledL2Value<double>(p.values(), k);
}

Table MaterializeSplitTable(const Table& p, const FlatteningCoefficients& k) {
  Require(p.rows() == k.l1() && p.cols() == k.l2(),
          "table shape does not match coefficients");
  const auto& b = k.row_counts();
  const auto& c = k.col_counts();
  std::vector<size_t> row_start(k.l1() + 1, 0), col_start(k.l2() + 1, 0);
  for (size_t x = 0; x < k.l1(); ++x) row_start[x + 1] = row_start[x] + 1 + b[x];
  for (size_t y = 0; y < k.l2(); ++y) col_start[y + 1] = col_start[y] + 1 + c[y];
  Table out(row_start.back(), col_start.back());
  for (size_t x = 0; x < k.l1(); ++x)
    for (size_t y = 0; y < k.l2(); ++y) {
      const double share = p(x, y) / static_cast<double>(1 + k.a(x, y));
      for (size_t r = row_start[x]; r < row_start[x + 1]; ++r)
        for (size_t s = col_start[y]; s < col_start[y + 1]; ++s) out(r, s) = share;
    }
  return out;
}

}  // namespace cit
