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

#include "cit/instances.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "cit/error.h"
#include "cit/rng.h"

namespace cit {
namespace {

constexpr uint64_t kBinStream = 0;
constexpr uint64_t kHashStream = 1;
constexpr int kMaxFarResamples = 100;
// Dense storage cap for the (X, W) ensemble: 2 n^3 cells.
constexpr uint64_t kMaxNnnCells = uint64_t{1} << 24;

Rng BinRng(uint64_t seed, uint64_t z) {
  return MakeRng(DeriveSeed(seed, kBinStream, z));
}

double Uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

Instance Finalize(JointDistribution raw, InstanceMetadata meta) {
  meta.raw_mass = raw.total_mass();
  Require(meta.raw_mass > 0.0, "generated distribution has zero mass");
  meta.normalization_factor = 1.0 / meta.raw_mass;
  meta.raw_ci_proxy = CiDistanceProxy(raw);
  JointDistribution dist = raw.Normalized();
  meta.ci_proxy = CiDistanceProxy(dist);
  return Instance{std::move(dist), std::move(meta)};
}

void RequireEpsilon(double eps) {
  Require(eps > 0.0 && eps <= 1.0, "epsilon must lie in (0, 1]");
}

bool IsSecondRegime(Family f) {
  return f == Family::kYesBinaryR2 || f == Family::kNoBinaryR2;
}

bool IsNoFamily(Family f) {
  return f == Family::kNoBinaryR1 || f == Family::kNoBinaryR2;
}

Rational Cents(long v) { return Frac(v, 100); }

void AppendSlice(std::vector<double>& mass, double weight, const Table& t) {
  for (double v : t.values()) mass.push_back(weight * v);
}

// Normalized positive vector with entries within a factor 3 of each other.
std::vector<double> NearUniform(size_t k, Rng& rng) {
  std::vector<double> v(k);
  for (double& e : v) e = 0.5 + Uniform01(rng);
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& e : v) e /= s;
  return v;
}

std::vector<double> RandomSimplexPoint(size_t k, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(k);
  double s = 0.0;
  for (double& e : v) {
    e = expo(rng) + 1e-3;  // bounded away from 0
    s += e;
  }
  for (double& e : v) e /= s;
  return v;
}

void CollectMonomials(size_t var, size_t num_vars, uint32_t remaining,
                      Monomial& current, std::vector<Monomial>& out) {
  if (var + 1 == num_vars) {
    Monomial m = current;
    if (remaining > 0) m.emplace_back(static_cast<uint32_t>(var), remaining);
    out.push_back(std::move(m));
    return;
  }
  for (uint32_t e = 0; e <= remaining; ++e) {
    if (e > 0) current.emplace_back(static_cast<uint32_t>(var), e);
    CollectMonomials(var + 1, num_vars, remaining - e, current, out);
    if (e > 0) current.pop_back();
  }
}

Rational MonomialValue(const Monomial& m, const std::vector<Rational>& p) {
  Rational v(1);
  for (const auto& [i, e] : m)
    for (uint32_t k = 0; k < e; ++k) v *= p[i];
  return v;
}

}  // namespace

std::string FamilyName(Family f) {
  switch (f) {
    case Family::kYesBinaryR1: return "yes_binary_r1";
    case Family::kNoBinaryR1: return "no_binary_r1";
    case Family::kYesBinaryR2: return "yes_binary_r2";
    case Family::kNoBinaryR2: return "no_binary_r2";
    case Family::kPaninskiYes: return "paninski_yes";
    case Family::kPaninskiNo: return "paninski_no";
    case Family::kNnnD0: return "nnn_d0";
    case Family::kNnnD1: return "nnn_d1";
    case Family::kRandomCi: return "random_ci";
    case Family::kRandomFar: return "random_far";
  }
  return "unknown";
}

Family ParseFamily(const std::string& name) {
  for (Family f : {Family::kYesBinaryR1, Family::kNoBinaryR1, Family::kYesBinaryR2,
                   Family::kNoBinaryR2, Family::kPaninskiYes, Family::kPaninskiNo,
                   Family::kNnnD0, Family::kNnnD1, Family::kRandomCi,
                   Family::kRandomFar}) {
    if (FamilyName(f) == name) return f;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown instance family: " + name);
}

bool FamilyIsCi(Family f) {
  switch (f) {
    case Family::kYesBinaryR1:
    case Family::kYesBinaryR2:
    case Family::kPaninskiYes:
    case Family::kNnnD0:
    case Family::kRandomCi:
      return true;
    default:
      return false;
  }
}

std::vector<Rational> RationalSliceMatrix(SliceKind kind) {
  switch (kind) {
    case SliceKind::kY1: return {Cents(16), Cents(24), Cents(24), Cents(36)};
    case SliceKind::kY2: return {Cents(36), Cents(24), Cents(24), Cents(16)};
    case SliceKind::kN1: return {Cents(6), Cents(24), Cents(24), Cents(46)};
    case SliceKind::kN2: return {Cents(46), Cents(24), Cents(24), Cents(6)};
    case SliceKind::kN3: return {Cents(26), Cents(24), Cents(24), Cents(26)};
    case SliceKind::kHeavy:
    case SliceKind::kAnchor:
      return std::vector<Rational>(4, Frac(1, 4));
    case SliceKind::kOther:
      break;
  }
  Fail(ErrorCode::kInvalidArgument, "slice kind has no fixed matrix");
}

Table SliceMatrix(SliceKind kind) {
  std::vector<double> v;
  for (const Rational& r : RationalSliceMatrix(kind)) v.push_back(r.get_d());
  return Table(2, 2, std::move(v));
}

Instance GenBinaryEnsemble(const EnsembleSpec& spec) {
  const Family f = spec.family;
  Require(f == Family::kYesBinaryR1 || f == Family::kNoBinaryR1 ||
              IsSecondRegime(f),
          "not a binary ensemble family");
  RequireEpsilon(spec.epsilon);
  const bool second = IsSecondRegime(f);
  const uint64_t n = spec.n, m = spec.m;
  Require(n >= 2, "binary ensembles need n >= 2");
  Require(m >= 1 && 2 * m < n, "binary ensembles need 1 <= m < n/2");
  const double heavy_prob =
      second ? 0.5 : static_cast<double>(m) / static_cast<double>(n);
  const double heavy_mass = 1.0 / static_cast<double>(m);
  const double light_mass = spec.epsilon / static_cast<double>(n);
  const Table uniform(2, 2, 0.25);

  InstanceMetadata meta;
  std::vector<double> mass;
  mass.reserve(4 * n);
  for (uint64_t z = 0; z < n; ++z) {
    if (second && z + 1 == n) {
      AppendSlice(mass, 1.0, uniform);
      meta.slice_kinds.push_back(SliceKind::kAnchor);
      continue;
    }
    Rng rng = BinRng(spec.seed, z);
    if (Uniform01(rng) < heavy_prob) {
      AppendSlice(mass, heavy_mass, uniform);
      meta.slice_kinds.push_back(SliceKind::kHeavy);
      ++meta.heavy_bins;
      continue;
    }
    const double u = Uniform01(rng);
    SliceKind kind;
    if (IsNoFamily(f)) {
      kind = u < 0.125 ? SliceKind::kN1 : (u < 0.25 ? SliceKind::kN2 : SliceKind::kN3);
    } else {
      kind = u < 0.5 ? SliceKind::kY1 : SliceKind::kY2;
    }
    AppendSlice(mass, light_mass, SliceMatrix(kind));
    meta.slice_kinds.push_back(kind);
  }
  return Finalize(JointDistribution(Dims{2, 2, n}, std::move(mass)),
                  std::move(meta));
}

Instance PaninskiReduction(uint64_t big_n, double epsilon, bool perturbed,
                           uint64_t seed) {
  Require(big_n >= 4 && big_n % 4 == 0, "N must be a positive multiple of 4");
  Require(epsilon > 0.0 && epsilon <= 0.5, "epsilon must lie in (0, 1/2]");
  const uint64_t n = big_n / 4;
  const double base = 1.0 / static_cast<double>(big_n);
  std::vector<double> mass(big_n, base);
  InstanceMetadata meta;
  meta.slice_kinds.assign(n, SliceKind::kOther);
  if (perturbed) {
    for (uint64_t k = 0; k < n; ++k) {
      Rng rng = BinRng(seed, k);
      // Block k holds the pairs (4k, 4k+1) and (4k+2, 4k+3), i.e. the two
      // rows of bin k.
      for (uint64_t pair = 0; pair < 2; ++pair) {
        const double sign = (rng() & 1) ? 1.0 : -1.0;
        mass[4 * k + 2 * pair] = (1.0 + 2.0 * epsilon * sign) * base;
        mass[4 * k + 2 * pair + 1] = (1.0 - 2.0 * epsilon * sign) * base;
      }
    }
  }
  // Element e = 4k + 2x + y lands on cell (x, y) of bin k, which is exactly the
  // bin-major layout of JointDistribution.
  return Finalize(JointDistribution(Dims{2, 2, n}, std::move(mass)),
                  std::move(meta));
}

Instance GenNnn(uint64_t n, bool far, uint64_t seed) {
  Require(n >= 16, "the (X, W) ensemble needs n >= 16");
  Require(2 * n * n * n <= kMaxNnnCells,
          "n too large for dense storage of the (X, W) ensemble");
  // k = floor(n^{3/4}) computed exactly: largest k with k^4 <= n^3.
  uint64_t k = static_cast<uint64_t>(std::pow(static_cast<double>(n), 0.75));
  const uint64_t n3 = n * n * n;
  while ((k + 1) * (k + 1) * (k + 1) * (k + 1) <= n3) ++k;
  while (k * k * k * k > n3) --k;

  const Dims dims{2 * n, n, n};
  std::vector<double> mass(dims.size(), 0.0);
  const double heavy = 1.0 / (2.0 * static_cast<double>(k));
  const double light = 1.0 / (2.0 * static_cast<double>(n - k));
  const double pz = 1.0 / static_cast<double>(n);
  const uint64_t hash_seed = DeriveSeed(seed, kHashStream);
  std::vector<uint32_t> order(n);
  std::vector<char> in_a(n), in_b(n);
  for (uint64_t z = 0; z < n; ++z) {
    Rng rng = BinRng(seed, z);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(in_a.begin(), in_a.end(), 0);
    for (uint64_t i = 0; i < k; ++i) in_a[order[i]] = 1;
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(in_b.begin(), in_b.end(), 0);
    for (uint64_t i = 0; i < k; ++i) in_b[order[i]] = 1;

    for (uint64_t x = 0; x < n; ++x) {
      const double px = in_a[x] ? heavy : light;
      for (uint64_t y = 0; y < n; ++y) {
        const double cell = pz * px * (in_b[y] ? heavy : light);
        const size_t i0 = (z * dims.l1 + 2 * x) * dims.l2 + y;
        const size_t i1 = (z * dims.l1 + 2 * x + 1) * dims.l2 + y;
        if (!far || in_a[x] || in_b[y]) {
          mass[i0] = mass[i1] = 0.5 * cell;
        } else {
          const uint64_t bit = DeriveSeed(hash_seed, (x * n + y) * n + z) & 1;
          (bit ? mass[i1] : mass[i0]) = cell;
        }
      }
    }
  }
  InstanceMetadata meta;
  meta.heavy_set_size = k;
  return Finalize(JointDistribution(dims, std::move(mass)), std::move(meta));
}

Instance GenRandomCi(size_t l1, size_t l2, uint64_t n, uint64_t seed) {
  Require(l1 >= 1 && l2 >= 1 && n >= 1, "dimensions must be positive");
  std::vector<double> weights(n);
  std::vector<double> mass;
  mass.reserve(l1 * l2 * n);
  std::exponential_distribution<double> expo(1.0);
  for (uint64_t z = 0; z < n; ++z) {
    Rng rng = BinRng(seed, z);
    const double w = expo(rng) + 1e-3;
    const std::vector<double> u = RandomSimplexPoint(l1, rng);
    const std::vector<double> v = RandomSimplexPoint(l2, rng);
    for (size_t x = 0; x < l1; ++x)
      for (size_t y = 0; y < l2; ++y) mass.push_back(w * u[x] * v[y]);
  }
  return Finalize(JointDistribution(Dims{l1, l2, n}, std::move(mass)), {});
}

Instance GenRandomFar(size_t l1, size_t l2, uint64_t n, double epsilon,
                      uint64_t seed) {
  Require(l1 >= 2 && l2 >= 2 && n >= 1,
          "far instances need l1, l2 >= 2 and n >= 1");
  RequireEpsilon(epsilon);
  std::vector<double> mass;
  mass.reserve(l1 * l2 * n);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> h(l1 * l2), slice(l1 * l2);
  for (uint64_t z = 0; z < n; ++z) {
    Rng rng = BinRng(seed, z);
    const double w = expo(rng) + 1e-3;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxFarResamples && !ok; ++attempt) {
      const std::vector<double> u = NearUniform(l1, rng);
      const std::vector<double> v = NearUniform(l2, rng);
      for (double& e : h) e = gauss(rng);
      // Double centering keeps both marginals of u (x) v + t H.
      std::vector<double> rm(l1, 0.0), cm(l2, 0.0);
      double gm = 0.0;
      for (size_t x = 0; x < l1; ++x)
        for (size_t y = 0; y < l2; ++y) {
          rm[x] += h[x * l2 + y] / static_cast<double>(l2);
          cm[y] += h[x * l2 + y] / static_cast<double>(l1);
          gm += h[x * l2 + y] / static_cast<double>(l1 * l2);
        }
      double abs_sum = 0.0;
      for (size_t x = 0; x < l1; ++x)
        for (size_t y = 0; y < l2; ++y) {
          double& e = h[x * l2 + y];
          e = e - rm[x] - cm[y] + gm;
          abs_sum += std::abs(e);
        }
      if (abs_sum < 1e-9) continue;
      // Tiny upward nudge so rounding cannot leave the distance below eps.
      const double t = 2.0 * epsilon / abs_sum * (1.0 + 1e-9);
      ok = true;
      for (size_t x = 0; x < l1 && ok; ++x)
        for (size_t y = 0; y < l2; ++y) {
          slice[x * l2 + y] = u[x] * v[y] + t * h[x * l2 + y];
          if (slice[x * l2 + y] < 0.0) {
            ok = false;
            break;
          }
        }
    }
    if (!ok) {
      Fail(ErrorCode::kInvalidArgument,
           "cannot reach the target distance after 100 resamples");
    }
    for (double e : slice) mass.push_back(w * e);
  }
  return Finalize(JointDistribution(Dims{l1, l2, n}, std::move(mass)), {});
}

JointDistribution Refine(const JointDistribution& p, size_t fx, size_t fy) {
  Require(fx >= 1 && fy >= 1, "refinement factors must be positive");
  const Dims& d = p.dims();
  const Dims out{d.l1 * fx, d.l2 * fy, d.n};
  std::vector<double> mass(out.size());
  const double share = 1.0 / static_cast<double>(fx * fy);
  for (size_t z = 0; z < d.n; ++z)
    for (size_t x = 0; x < out.l1; ++x)
      for (size_t y = 0; y < out.l2; ++y)
        mass[(z * out.l1 + x) * out.l2 + y] = p(x / fx, y / fy, z) * share;
  return JointDistribution(out, std::move(mass));
}

Instance Generate(const EnsembleSpec& spec) {
  switch (spec.family) {
    case Family::kYesBinaryR1:
    case Family::kNoBinaryR1:
    case Family::kYesBinaryR2:
    case Family::kNoBinaryR2:
      return GenBinaryEnsemble(spec);
    case Family::kPaninskiYes:
    case Family::kPaninskiNo:
      Require(spec.n >= 1, "n must be positive");
      return PaninskiReduction(4 * spec.n, spec.epsilon,
                               spec.family == Family::kPaninskiNo, spec.seed);
    case Family::kNnnD0:
    case Family::kNnnD1:
      return GenNnn(spec.n, spec.family == Family::kNnnD1, spec.seed);
    case Family::kRandomCi:
      return GenRandomCi(spec.l1, spec.l2, spec.n, spec.seed);
    case Family::kRandomFar:
      return GenRandomFar(spec.l1, spec.l2, spec.n, spec.epsilon, spec.seed);
  }
  Fail(ErrorCode::kInternal, "unhandled family");
}

std::vector<Monomial> MonomialsOfDegree(size_t num_vars, uint32_t d) {
  Require(num_vars >= 1, "need at least one variable");
  std::vector<Monomial> out;
  Monomial current;
  CollectMonomials(0, num_vars, d, current, out);
  return out;
}

MomentMatchReport MomentMatchCheck(uint32_t max_degree) {
  const std::vector<Rational> y1 = RationalSliceMatrix(SliceKind::kY1);
  const std::vector<Rational> y2 = RationalSliceMatrix(SliceKind::kY2);
  const std::vector<Rational> n1 = RationalSliceMatrix(SliceKind::kN1);
  const std::vector<Rational> n2 = RationalSliceMatrix(SliceKind::kN2);
  const std::vector<Rational> n3 = RationalSliceMatrix(SliceKind::kN3);
  MomentMatchReport r;
  r.max_degree = max_degree;
  for (uint32_t d = 0; d <= max_degree + 1; ++d) {
    for (Monomial& mono : MonomialsOfDegree(4, d)) {
      MomentEntry e;
      e.yes_side = Frac(1, 2) * MonomialValue(mono, y1) +
                   Frac(1, 2) * MonomialValue(mono, y2);
      e.no_side = Frac(1, 8) * MonomialValue(mono, n1) +
                  Frac(1, 8) * MonomialValue(mono, n2) +
                  Frac(3, 4) * MonomialValue(mono, n3);
      const bool equal = e.yes_side == e.no_side;
      if (d <= max_degree) {
        ++r.low_degree_checked;
        if (!equal) ++r.low_degree_mismatches;
      } else {
        ++r.next_degree_checked;
        if (!equal) ++r.next_degree_mismatches;
      }
      e.monomial = std::move(mono);
      r.entries.push_back(std::move(e));
    }
  }
  return r;
}

}  // namespace cit
