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

#ifndef CIT_POLYNOMIAL_H_
#define CIT_POLYNOMIAL_H_

// Homogeneous polynomials of a distribution's probabilities, the unique
// symmetric unbiased estimator computed from a fingerprint, exact second
// moments, and an enumeration oracle.
//
// Everything numeric is templated on the scalar: double on the production
// path, Rational on the exact path. Both instantiate the same code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cit/error.h"
#include "cit/rational.h"

namespace cit {

// Sparse exponent vector: (variable index, exponent) pairs sorted by index,
// exponents strictly positive.
using Monomial = std::vector<std::pair<uint32_t, uint32_t>>;

uint32_t MonomialDegree(const Monomial& m);
// True when s <= alpha componentwise.
bool Divides(const Monomial& s, const Monomial& alpha);
Monomial MonomialProduct(const Monomial& a, const Monomial& b);
// All s <= alpha componentwise (including the empty monomial and alpha).
std::vector<Monomial> SubMonomials(const Monomial& alpha);

struct Fingerprint {
  std::vector<uint64_t> counts;

  uint64_t total() const;
  size_t size() const { return counts.size(); }
  bool operator==(const Fingerprint&) const = default;
  auto operator<=>(const Fingerprint&) const = default;
};

// Count grid of samples over an l1 x l2 table, row-major.
struct Fingerprint2D {
  size_t l1 = 0;
  size_t l2 = 0;
  std::vector<uint64_t> counts;

  Fingerprint2D() = default;
  Fingerprint2D(size_t rows, size_t cols)
      : l1(rows), l2(cols), counts(rows * cols, 0) {}

  uint64_t total() const;
  uint64_t& at(size_t i, size_t j) { return counts[i * l2 + j]; }
  uint64_t at(size_t i, size_t j) const { return counts[i * l2 + j]; }
};

template <class T>
class Polynomial {
 public:
  explicit Polynomial(size_t num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial Constant(size_t num_vars, const T& c) {
    Polynomial p(num_vars);
    p.AddTerm({}, c);
    return p;
  }
  static Polynomial Variable(size_t num_vars, uint32_t i, const T& c = T(1)) {
    Require(i < num_vars, "variable index out of range");
    Polynomial p(num_vars);
    p.AddTerm({{i, 1}}, c);
    return p;
  }

  size_t num_vars() const { return num_vars_; }
  const std::map<Monomial, T>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void AddTerm(const Monomial& m, const T& c) {
    for (const auto& [i, e] : m) {
      Require(i < num_vars_, "monomial variable index out of range");
      Require(e > 0, "monomial exponents must be positive");
    }
    Require(std::is_sorted(m.begin(), m.end()),
            "monomial must be in canonical order");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != T(0)) terms_.emplace(m, c);
      return;
    }
    it->second += c;
    if (it->second == T(0)) terms_.erase(it);
  }

  uint32_t max_degree() const {
    uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, MonomialDegree(m));
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    Require(o.num_vars_ == num_vars_, "polynomial variable count mismatch");
    for (const auto& [m, c] : o.terms_) AddTerm(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    Require(o.num_vars_ == num_vars_, "polynomial variable count mismatch");
    for (const auto& [m, c] : o.terms_) AddTerm(m, T(-c));
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    return a += b;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    return a -= b;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Require(a.num_vars_ == b.num_vars_, "polynomial variable count mismatch");
    Polynomial r(a.num_vars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_)
        r.AddTerm(MonomialProduct(ma, mb), T(ca * cb));
    return r;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  T Evaluate(std::span<const T> x) const {
    Require(x.size() == num_vars_, "evaluation point has wrong dimension");
    T total(0);
    for (const auto& [m, c] : terms_) {
      T v = c;
      for (const auto& [i, e] : m)
        for (uint32_t k = 0; k < e; ++k) v *= x[i];
      total += v;
    }
    return total;
  }

  // Q+: every coefficient replaced by its absolute value.
  Polynomial Abs() const {
    Polynomial r(num_vars_);
    for (const auto& [m, c] : terms_) r.AddTerm(m, AbsValue(c));
    return r;
  }

  // Value at x of the mixed partial derivative d^{|s|} / dX^s.
  T DerivativeAt(const Monomial& s, std::span<const T> x) const {
    T total(0);
    for (const auto& [alpha, c] : terms_) {
      if (!Divides(s, alpha)) continue;
      T v = c;
      size_t si = 0;
      for (const auto& [i, e] : alpha) {
        uint32_t take = 0;
        if (si < s.size() && s[si].first == i) take = s[si++].second;
        for (uint32_t k = 0; k < take; ++k) v *= FromInteger<T>(e - k);
        for (uint32_t k = take; k < e; ++k) v *= x[i];
      }
      total += v;
    }
    return total;
  }

 private:
  size_t num_vars_;
  std::map<Monomial, T> terms_;
};

// A polynomial whose monomials all have total degree exactly `degree`.
template <class T>
class Homogeneous {
 public:
  Homogeneous(Polynomial<T> poly, uint32_t degree)
      : poly_(std::move(poly)), degree_(degree) {
    Require(degree_ >= 1, "homogeneous degree must be at least 1");
    for (const auto& [m, c] : poly_.terms()) {
      Require(MonomialDegree(m) == degree_,
              "polynomial is not homogeneous of the stated degree");
    }
  }

  const Polynomial<T>& poly() const { return poly_; }
  uint32_t degree() const { return degree_; }
  size_t num_vars() const { return poly_.num_vars(); }
  T Evaluate(std::span<const T> p) const { return poly_.Evaluate(p); }

 private:
  Polynomial<T> poly_;
  uint32_t degree_;
};

using HomogeneousPolynomial = Homogeneous<double>;
using RationalHomogeneousPolynomial = Homogeneous<Rational>;

// (X_1 + ... + X_n)^k.
template <class T>
Polynomial<T> SimplexPower(size_t num_vars, uint32_t k) {
  Polynomial<T> sum(num_vars);
  for (uint32_t i = 0; i < num_vars; ++i)
    sum += Polynomial<T>::Variable(num_vars, i);
  Polynomial<T> r = Polynomial<T>::Constant(num_vars, T(1));
  for (uint32_t e = 0; e < k; ++e) r = r * sum;
  return r;
}

// Multiplies each monomial of degree d' < d by (sum X_i)^{d - d'}; the result
// agrees with q on the probability simplex.
template <class T>
Homogeneous<T> Homogenize(const Polynomial<T>& q, uint32_t d) {
  Require(q.max_degree() <= d, "homogenize: a monomial exceeds the target degree");
  std::vector<Polynomial<T>> powers;
  Polynomial<T> out(q.num_vars());
  for (const auto& [m, c] : q.terms()) {
    const uint32_t gap = d - MonomialDegree(m);
    while (powers.size() <= gap)
      powers.push_back(SimplexPower<T>(q.num_vars(), powers.size()));
    Polynomial<T> mono(q.num_vars());
    mono.AddTerm(m, c);
    out += mono * powers[gap];
  }
  return Homogeneous<T>(std::move(out), d);
}

// U_N Q(f) = sum_alpha c_alpha prod_i (Phi_i)_{alpha_i} / (N)_d, with (x)_k
// the falling factorial; the ratio chain never forms a raw factorial.
template <class T>
T UnbiasedEstimate(const Homogeneous<T>& q, const Fingerprint& f) {
  Require(f.size() == q.num_vars(), "fingerprint dimension mismatch");
  const uint64_t n_samples = f.total();
  if (n_samples < q.degree()) {
    Fail(ErrorCode::kInsufficientSamples,
         "no unbiased estimator exists with fewer samples than the degree");
  }
  T total(0);
  for (const auto& [alpha, c] : q.poly().terms()) {
    T v = c;
    uint64_t pos = 0;
    for (const auto& [i, e] : alpha) {
      const uint64_t phi = f.counts[i];
      if (phi < e) {
        v = T(0);
        break;
      }
      for (uint32_t k = 0; k < e; ++k, ++pos) {
        v *= FromInteger<T>(static_cast<int64_t>(phi - k));
        v /= FromInteger<T>(static_cast<int64_t>(n_samples - pos));
      }
    }
    total += v;
  }
  return total;
}

template <class T>
struct MomentReport {
  T value{};            // Q(p)
  T expected_square{};  // E[(U_N Q)^2]
  T variance{};         // expected_square - value^2
  T variance_bound{};   // sum_{h>=1} (N-h)!/N! sum_{|s|=h} p^s (d^s Q)^2 / s!
  std::vector<T> t_terms;  // T_h for h = 0..d
};

namespace internal {

template <class T>
T PowerOf(std::span<const T> p, const Monomial& s) {
  T v(1);
  for (const auto& [i, e] : s)
    for (uint32_t k = 0; k < e; ++k) v *= p[i];
  return v;
}

template <class T>
T InverseFactorialProduct(const Monomial& s) {
  T v(1);
  for (const auto& [i, e] : s)
    for (uint32_t k = 2; k <= e; ++k) v /= FromInteger<T>(k);
  return v;
}

// (a)! / (a - k)! for integers, zero if it passes through 0.
template <class T>
T Falling(int64_t a, int64_t k) {
  T v(1);
  for (int64_t j = 0; j < k; ++j) v *= FromInteger<T>(a - j);
  return v;
}

template <class T>
std::set<Monomial> DerivativeSupport(const Homogeneous<T>& q) {
  std::set<Monomial> out;
  for (const auto& [alpha, c] : q.poly().terms())
    for (Monomial& s : SubMonomials(alpha)) out.insert(std::move(s));
  return out;
}

}  // namespace internal

// Exact second moment of U_N Q under N i.i.d. draws from p, split into the
// per-order terms T_h.
template <class T>
MomentReport<T> ExpectedSquare(const Homogeneous<T>& q, std::span<const T> p,
                               uint64_t n_samples) {
  Require(p.size() == q.num_vars(), "distribution dimension mismatch");
  const int64_t d = q.degree();
  const int64_t big_n = static_cast<int64_t>(n_samples);
  if (big_n < d) {
    Fail(ErrorCode::kInsufficientSamples,
         "no unbiased estimator exists with fewer samples than the degree");
  }
  MomentReport<T> r;
  r.value = q.Evaluate(p);
  r.t_terms.assign(d + 1, T(0));
  std::vector<T> bound_terms(d + 1, T(0));
  // (N - d)! / N!
  const T lead = T(1) / internal::Falling<T>(big_n, d);
  for (const Monomial& s : internal::DerivativeSupport(q)) {
    const int64_t h = MonomialDegree(s);
    const T deriv = q.poly().DerivativeAt(s, p);
    if (deriv == T(0)) continue;
    const T base = internal::PowerOf(p, s) * deriv * deriv *
                   internal::InverseFactorialProduct<T>(s);
    // (N-d)!^2 / (N! (N-2d+h)!) = (N-d)!/N! * (N-d)!/(N-2d+h)!
    r.t_terms[h] += base * lead * internal::Falling<T>(big_n - d, d - h);
    bound_terms[h] += base / internal::Falling<T>(big_n, h);
  }
  r.expected_square = T(0);
  for (const T& t : r.t_terms) r.expected_square += t;
  r.variance = r.expected_square - r.value * r.value;
  r.variance_bound = T(0);
  for (int64_t h = 1; h <= d; ++h) r.variance_bound += bound_terms[h];
  return r;
}

// Envelope for sum_{h>=g} T_h: (N-g)!/N! * 2^d * Q+(p) * max_{|s|>=g} |d^s Q(p)|.
// (N-g)!/N! stands in for the 1/N^g rate; it dominates (N-h)!/N! for h >= g.
template <class T>
T TailTermBound(const Homogeneous<T>& q, std::span<const T> p,
                uint64_t n_samples, uint32_t g) {
  Require(g <= q.degree(), "tail bound order must not exceed the degree");
  Require(n_samples >= q.degree(), "tail bound needs N >= degree");
  T max_deriv(0);
  for (const Monomial& s : internal::DerivativeSupport(q)) {
    if (MonomialDegree(s) < g) continue;
    const T v = AbsValue(T(q.poly().DerivativeAt(s, p)));
    if (v > max_deriv) max_deriv = v;
  }
  T scale = T(1) / internal::Falling<T>(static_cast<int64_t>(n_samples), g);
  for (uint32_t k = 0; k < q.degree(); ++k) scale *= FromInteger<T>(2);
  return scale * q.poly().Abs().Evaluate(p) * max_deriv;
}

// Q(X) = sum_{ij} Delta_ij(X)^2 with
// Delta_ij = X_ij X_{-i,-j} - X_{-i,j} X_{i,-j}; variable index i * l2 + j.
template <class T>
Homogeneous<T> L2DiffPolynomial(size_t l1, size_t l2) {
  Require(l1 >= 2 && l2 >= 2, "l2 difference polynomial needs l1, l2 >= 2");
  const size_t nv = l1 * l2;
  auto var = [&](size_t i, size_t j) {
    return Polynomial<T>::Variable(nv, static_cast<uint32_t>(i * l2 + j));
  };
  Polynomial<T> q(nv);
  for (size_t i = 0; i < l1; ++i) {
    for (size_t j = 0; j < l2; ++j) {
      Polynomial<T> off_both(nv), off_row(nv), off_col(nv);
      for (size_t a = 0; a < l1; ++a) {
        if (a == i) continue;
        off_row += var(a, j);
        for (size_t b = 0; b < l2; ++b)
          if (b != j) off_both += var(a, b);
      }
      for (size_t b = 0; b < l2; ++b)
        if (b != j) off_col += var(i, b);
      const Polynomial<T> delta = var(i, j) * off_both - off_row * off_col;
      q += delta * delta;
    }
  }
  return Homogeneous<T>(std::move(q), 4);
}

// U_N of sum_ij c_ij Delta_ij^2 in count form:
//   (N-4)!/N! * sum_ij c_ij [ F(a) F(d) + F(b) F(c) - 2 a b c d ],
// where a = Phi_ij, d = Phi_{-i,-j}, b = Phi_{-i,j}, c = Phi_{i,-j} and
// F(x) = x (x - 1). Runs in O(l1 l2) from the marginal counts.
// `weight(i, j)` supplies c_ij, so a rank-1 weight grid need not be stored.
template <class T, class WeightFn>
T L2EstimateWith(const Fingerprint2D& f, WeightFn&& weight) {
  const uint64_t n_samples = f.total();
  if (n_samples < 4) {
    Fail(ErrorCode::kInsufficientSamples, "the l2 estimator needs N >= 4");
  }
  std::vector<int64_t> row(f.l1, 0), col(f.l2, 0);
  for (size_t i = 0; i < f.l1; ++i)
    for (size_t j = 0; j < f.l2; ++j) {
      row[i] += static_cast<int64_t>(f.at(i, j));
      col[j] += static_cast<int64_t>(f.at(i, j));
    }
  const int64_t big_n = static_cast<int64_t>(n_samples);
  const T n0 = FromInteger<T>(big_n), n1 = FromInteger<T>(big_n - 1),
          n2 = FromInteger<T>(big_n - 2), n3 = FromInteger<T>(big_n - 3);
  T total(0);
  for (size_t i = 0; i < f.l1; ++i) {
    for (size_t j = 0; j < f.l2; ++j) {
      const int64_t a = static_cast<int64_t>(f.at(i, j));
      const int64_t c = row[i] - a;
      const int64_t b = col[j] - a;
      const int64_t d = big_n - row[i] - col[j] + a;
      // Each product divided factor by factor by N (N-1) (N-2) (N-3).
      const T t1 = FromInteger<T>(a) / n0 * FromInteger<T>(a - 1) / n1 *
                   FromInteger<T>(d) / n2 * FromInteger<T>(d - 1) / n3;
      const T t2 = FromInteger<T>(b) / n0 * FromInteger<T>(b - 1) / n1 *
                   FromInteger<T>(c) / n2 * FromInteger<T>(c - 1) / n3;
      const T t3 = FromInteger<T>(a) / n0 * FromInteger<T>(b) / n1 *
                   FromInteger<T>(c) / n2 * FromInteger<T>(d) / n3;
      total += T(weight(i, j)) * (t1 + t2 - FromInteger<T>(2) * t3);
    }
  }
  return total;
}

template <class T>
T L2Estimate(const Fingerprint2D& f, std::span<const T> weights) {
  Require(weights.size() == f.l1 * f.l2, "weight grid shape mismatch");
  return L2EstimateWith<T>(
      f, [&](size_t i, size_t j) -> const T& { return weights[i * f.l2 + j]; });
}

// Unit-weight convenience form: unbiased for ||p - p_X (x) p_Y||_2^2.
double L2Estimate(const Fingerprint2D& f);

template <class T>
struct OracleResult {
  T mean{};
  T second_moment{};
  T variance{};
};

// Exact E and Var of estimator(fingerprint) over all n^N ordered N-tuples of
// i.i.d. draws from p. Throws kBudgetExhausted if n^N exceeds `budget`.
template <class Estimator>
OracleResult<Rational> OracleMomentsOf(std::span<const Rational> p,
                                       uint64_t n_samples,
                                       Estimator&& estimator,
                                       uint64_t budget = 10'000'000) {
  const size_t n = p.size();
  Require(n >= 1, "oracle needs a nonempty support");
  uint64_t tuples = 1;
  for (uint64_t k = 0; k < n_samples; ++k) {
    if (tuples > budget / n) {
      Fail(ErrorCode::kBudgetExhausted, "oracle enumeration budget exceeded");
    }
    tuples *= n;
  }
  std::map<std::vector<uint64_t>, Rational> memo;
  std::vector<size_t> tuple(n_samples, 0);
  OracleResult<Rational> r;
  r.mean = 0;
  r.second_moment = 0;
  Fingerprint f;
  f.counts.assign(n, 0);
  for (uint64_t t = 0; t < tuples; ++t) {
    std::fill(f.counts.begin(), f.counts.end(), 0);
    Rational prob(1);
    for (size_t s : tuple) {
      ++f.counts[s];
      prob *= p[s];
    }
    auto it = memo.find(f.counts);
    if (it == memo.end()) it = memo.emplace(f.counts, estimator(f)).first;
    const Rational& v = it->second;
    r.mean += prob * v;
    r.second_moment += prob * v * v;
    for (size_t k = 0; k < n_samples; ++k) {  // odometer increment
      if (++tuple[k] < n) break;
      tuple[k] = 0;
    }
  }
  r.variance = r.second_moment - r.mean * r.mean;
  return r;
}

inline OracleResult<Rational> OracleMoments(
    const RationalHomogeneousPolynomial& q, std::span<const Rational> p,
    uint64_t n_samples, uint64_t budget = 10'000'000) {
  Require(p.size() == q.num_vars(), "distribution dimension mismatch");
  return OracleMomentsOf(
      p, n_samples,
      [&q](const Fingerprint& f) { return UnbiasedEstimate(q, f); }, budget);
}

// Text format, one term per line: "c : i1^e1 i2^e2 ..." with 1-based variable
// indices and c an integer, fraction or decimal. Blank lines and lines
// starting with '#' are ignored; a term without variables is a constant.
Polynomial<Rational> ParsePolynomial(const std::string& text, size_t num_vars);
std::string FormatPolynomial(const Polynomial<Rational>& q);

// "i:count" pairs separated by whitespace or commas, 1-based indices.
Fingerprint ParseFingerprint(const std::string& text, size_t num_vars);

template <class T>
Polynomial<double> ToDoublePolynomial(const Polynomial<T>& q) {
  Polynomial<double> r(q.num_vars());
  for (const auto& [m, c] : q.terms()) r.AddTerm(m, ToDouble(c));
  return r;
}

}  // namespace cit

#endif  // CIT_POLYNOMIAL_H_
