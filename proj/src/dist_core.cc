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

#include "cit/dist_core.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "cit/error.h"
#include "cit/rng.h"

namespace cit {

Table::Table(size_t rows, size_t cols, double fill)
    : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

Table::Table(size_t rows, size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), v_(std::move(values)) {
  Require(v_.size() == rows * cols, "table size does not match its shape");
}

double Table::sum() const { return std::accumulate(v_.begin(), v_.end(), 0.0); }

std::vector<double> Table::row_sums() const {
  std::vector<double> r(rows_, 0.0);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j);
  return r;
}

std::vector<double> Table::col_sums() const {
  std::vector<double> c(cols_, 0.0);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) c[j] += (*this)(i, j);
  return c;
}

JointDistribution::JointDistribution(Dims dims, std::vector<double> mass)
    : dims_(dims), mass_(std::move(mass)) {
  Require(dims_.l1 > 0 && dims_.l2 > 0 && dims_.n > 0,
          "distribution dimensions must be positive");
  Require(mass_.size() == dims_.size(),
          "mass tensor size does not match dimensions");
  for (double v : mass_) {
    Require(std::isfinite(v) && v >= 0.0,
            "distribution entries must be finite and nonnegative");
  }
  bin_weight_.assign(dims_.n, 0.0);
  const size_t k = dims_.cells_per_bin();
  for (size_t z = 0; z < dims_.n; ++z) {
    double w = 0.0;
    for (size_t c = 0; c < k; ++c) w += mass_[z * k + c];
    bin_weight_[z] = w;
  }
  total_ = std::accumulate(bin_weight_.begin(), bin_weight_.end(), 0.0);
}

JointDistribution JointDistribution::FromSlices(
    std::span<const ConditionalSlice> slices) {
  Require(!slices.empty(), "at least one slice is required");
  const Dims dims{slices[0].table.rows(), slices[0].table.cols(), slices.size()};
  std::vector<double> mass;
  mass.reserve(dims.size());
  for (const ConditionalSlice& s : slices) {
    Require(s.table.rows() == dims.l1 && s.table.cols() == dims.l2,
            "all slices must share a shape");
    for (double v : s.table.values()) mass.push_back(s.weight * v);
  }
  return JointDistribution(dims, std::move(mass));
}

bool JointDistribution::normalized() const {
  return std::abs(total_ - 1.0) <= kNormalizationTolerance;
}

ConditionalSlice JointDistribution::slice(size_t z) const {
  Require(z < dims_.n, "bin index out of range");
  ConditionalSlice s;
  s.weight = bin_weight_[z];
  const size_t k = dims_.cells_per_bin();
  std::vector<double> v(k);
  if (s.weight > 0.0) {
    for (size_t c = 0; c < k; ++c) v[c] = mass_[z * k + c] / s.weight;
  } else {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(k));
  }
  s.table = Table(dims_.l1, dims_.l2, std::move(v));
  return s;
}

JointDistribution JointDistribution::Normalized() const {
  Require(total_ > 0.0, "cannot normalize a zero-mass distribution");
  std::vector<double> m(mass_.size());
  for (size_t i = 0; i < m.size(); ++i) m[i] = mass_[i] / total_;
  return JointDistribution(dims_, std::move(m));
}

double TvDistance(std::span<const double> p, std::span<const double> q) {
  Require(p.size() == q.size(), "tv_distance: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double TvDistance(const Table& p, const Table& q) {
  Require(p.rows() == q.rows() && p.cols() == q.cols(),
          "tv_distance: shape mismatch");
  return TvDistance(p.values(), q.values());
}

double TvDistance(const JointDistribution& p, const JointDistribution& q) {
  Require(p.dims() == q.dims(), "tv_distance: shape mismatch");
  return TvDistance(p.mass(), q.mass());
}

double L2DistanceSquared(std::span<const double> p, std::span<const double> q) {
  Require(p.size() == q.size(), "l2 distance: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += (p[i] - q[i]) * (p[i] - q[i]);
  return s;
}

Table ProductOfMarginals(const Table& t) {
  const std::vector<double> r = t.row_sums();
  const std::vector<double> c = t.col_sums();
  Table q(t.rows(), t.cols());
  for (size_t i = 0; i < t.rows(); ++i)
    for (size_t j = 0; j < t.cols(); ++j) q(i, j) = r[i] * c[j];
  return q;
}

ConditionalSlice ProductOfConditionalMarginals(const ConditionalSlice& s) {
  return ConditionalSlice{s.weight, ProductOfMarginals(s.table)};
}

JointDistribution MixtureQ(const JointDistribution& p) {
  const Dims& d = p.dims();
  std::vector<double> q(d.size(), 0.0);
  for (size_t z = 0; z < d.n; ++z) {
    const double w = p.bin_weight(z);
    if (w == 0.0) continue;
    const Table prod = ProductOfMarginals(p.slice(z).table);
    for (size_t x = 0; x < d.l1; ++x)
      for (size_t y = 0; y < d.l2; ++y) q[p.Index(x, y, z)] = w * prod(x, y);
  }
  return JointDistribution(d, std::move(q));
}

double CiDistanceProxy(const JointDistribution& p) {
  // Per-bin evaluation equals TvDistance(p, MixtureQ(p)) since q_Z = p_Z.
  double d = 0.0;
  for (size_t z = 0; z < p.dims().n; ++z) {
    const double w = p.bin_weight(z);
    if (w == 0.0) continue;
    const Table t = p.slice(z).table;
    d += w * TvDistance(t, ProductOfMarginals(t));
  }
  return d;
}

double BinarySliceTvViaCovariance(const Table& t) {
  Require(t.rows() == 2 && t.cols() == 2,
          "covariance form needs a 2x2 slice");
  return 2.0 * std::abs(t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0));
}

bool IsConditionallyIndependent(const JointDistribution& p, double tolerance) {
  for (size_t z = 0; z < p.dims().n; ++z) {
    if (p.bin_weight(z) == 0.0) continue;
    const Table t = p.slice(z).table;
    const Table q = ProductOfMarginals(t);
    for (size_t i = 0; i < t.values().size(); ++i) {
      if (std::abs(t.values()[i] - q.values()[i]) > tolerance) return false;
    }
  }
  return true;
}

double ConditionalMutualInformation(const JointDistribution& p) {
  double cmi = 0.0;
  for (size_t z = 0; z < p.dims().n; ++z) {
    const double w = p.bin_weight(z);
    if (w == 0.0) continue;
    const Table t = p.slice(z).table;
    const std::vector<double> r = t.row_sums();
    const std::vector<double> c = t.col_sums();
    double kl = 0.0;
    for (size_t i = 0; i < t.rows(); ++i) {
      for (size_t j = 0; j < t.cols(); ++j) {
        const double v = t(i, j);
        if (v > 0.0) kl += v * std::log2(v / (r[i] * c[j]));
      }
    }
    cmi += w * kl;
  }
  return std::max(cmi, 0.0);
}

std::vector<double> ZMarginal(const JointDistribution& p) {
  return std::vector<double>(p.bin_weights().begin(), p.bin_weights().end());
}

namespace {

void RequireNormalized(const JointDistribution& p) {
  if (!p.normalized()) {
    Fail(ErrorCode::kUnnormalized,
         "sampling requires a normalized distribution (total mass " +
             std::to_string(p.total_mass()) + ")");
  }
}

std::vector<SampleTriple> DrawIid(const JointDistribution& p, size_t count,
                                  Rng& rng) {
  std::vector<SampleTriple> out;
  if (count == 0) return out;
  out.reserve(count);
  std::discrete_distribution<size_t> cell(p.mass().begin(), p.mass().end());
  const size_t k = p.dims().cells_per_bin();
  const size_t l2 = p.dims().l2;
  for (size_t s = 0; s < count; ++s) {
    const size_t c = cell(rng);
    const size_t z = c / k;
    const size_t r = c % k;
    out.push_back(SampleTriple{static_cast<uint32_t>(r / l2),
                               static_cast<uint32_t>(r % l2),
                               static_cast<uint32_t>(z)});
  }
  return out;
}

}  // namespace

std::vector<SampleTriple> SampleFixed(const JointDistribution& p, size_t count,
                                      uint64_t seed) {
  RequireNormalized(p);
  Rng rng = MakeRng(seed);
  return DrawIid(p, count, rng);
}

std::vector<SampleTriple> SamplePoissonized(const JointDistribution& p,
                                            double m, uint64_t seed) {
  Require(m > 0.0, "Poissonized sampling needs m > 0");
  RequireNormalized(p);
  Rng rng = MakeRng(seed);
  std::poisson_distribution<uint64_t> draw_m(m);
  const size_t count = static_cast<size_t>(draw_m(rng));
  return DrawIid(p, count, rng);
}

std::vector<uint32_t> SamplePoissonizedCounts(const JointDistribution& p,
                                              double m, uint64_t seed) {
  Require(m >= 0.0, "Poissonized sampling needs m >= 0");
  RequireNormalized(p);
  Rng rng = MakeRng(seed);
  std::vector<uint32_t> counts(p.mass().size(), 0);
  if (m == 0.0) return counts;
  for (size_t i = 0; i < counts.size(); ++i) {
    const double lambda = m * p.mass()[i];
    if (lambda <= 0.0) continue;
    std::poisson_distribution<uint32_t> draw(lambda);
    counts[i] = draw(rng);
  }
  return counts;
}

}  // namespace cit
