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

#include "cit/polynomial.h"

#include <cctype>
#include <sstream>

namespace cit {

uint32_t MonomialDegree(const Monomial& m) {
  uint32_t d = 0;
  for (const auto& [i, e] : m) d += e;
  return d;
}

bool Divides(const Monomial& s, const Monomial& alpha) {
  size_t ai = 0;
  for (const auto& [i, e] : s) {
    while (ai < alpha.size() && alpha[ai].first < i) ++ai;
    if (ai == alpha.size() || alpha[ai].first != i || alpha[ai].second < e)
      return false;
  }
  return true;
}

Monomial MonomialProduct(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

std::vector<Monomial> SubMonomials(const Monomial& alpha) {
  std::vector<Monomial> out{Monomial{}};
  for (const auto& [i, e] : alpha) {
    const size_t existing = out.size();
    for (size_t k = 0; k < existing; ++k) {
      for (uint32_t take = 1; take <= e; ++take) {
        Monomial m = out[k];
        m.emplace_back(i, take);
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

uint64_t Fingerprint::total() const {
  uint64_t t = 0;
  for (uint64_t c : counts) t += c;
  return t;
}

uint64_t Fingerprint2D::total() const {
  uint64_t t = 0;
  for (uint64_t c : counts) t += c;
  return t;
}

double L2Estimate(const Fingerprint2D& f) {
  const std::vector<double> ones(f.l1 * f.l2, 1.0);
  return L2Estimate<double>(f, ones);
}

namespace {

std::string Trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

uint64_t ParseUnsigned(const std::string& s, const char* what) {
  if (s.empty() ||
      !std::all_of(s.begin(), s.end(),
                   [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
    Fail(ErrorCode::kParse, std::string("expected a nonnegative integer for ") +
                                what + ", got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    Fail(ErrorCode::kParse, std::string(what) + " out of range: " + s);
  }
}

}  // namespace

Rational ParseRational(const std::string& raw) {
  const std::string text = Trim(raw);
  if (text.empty()) Fail(ErrorCode::kParse, "empty rational literal");
  if (text.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(text, 10) != 0 || r.get_den() == 0) {
      Fail(ErrorCode::kParse, "malformed fraction: " + text);
    }
    r.canonicalize();
    return r;
  }
  // Decimal with optional exponent: [+-]digits[.digits][(e|E)[+-]digits].
  size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  std::string digits;
  int64_t scale = 0;
  bool seen_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits += text[pos++];
    seen_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits += text[pos++];
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) Fail(ErrorCode::kParse, "malformed number: " + text);
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-'))
      exp_negative = text[pos++] == '-';
    const std::string exp_text = text.substr(pos);
    const auto e = static_cast<int64_t>(ParseUnsigned(exp_text, "exponent"));
    if (e > 10000) Fail(ErrorCode::kParse, "exponent too large: " + text);
    scale += exp_negative ? -e : e;
    pos = text.size();
  }
  if (pos != text.size()) Fail(ErrorCode::kParse, "malformed number: " + text);
  mpz_class numerator(digits, 10);
  mpz_class ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10,
                static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale < 0 ? Rational(numerator, ten_power)
                         : Rational(numerator * ten_power);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

Polynomial<Rational> ParsePolynomial(const std::string& text, size_t num_vars) {
  Polynomial<Rational> q(num_vars);
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const size_t colon = line.find(':');
    const std::string where = "polynomial line " + std::to_string(line_no);
    if (colon == std::string::npos) {
      Fail(ErrorCode::kParse, where + ": missing ':' separator");
    }
    const Rational coeff = ParseRational(line.substr(0, colon));
    std::map<uint32_t, uint32_t> exps;
    std::istringstream vars(line.substr(colon + 1));
    std::string token;
    while (vars >> token) {
      const size_t caret = token.find('^');
      const uint64_t index = ParseUnsigned(token.substr(0, caret), "variable index");
      const uint64_t e = caret == std::string::npos
                             ? 1
                             : ParseUnsigned(token.substr(caret + 1), "exponent");
      if (index < 1 || index > num_vars) {
        Fail(ErrorCode::kParse, where + ": variable index out of range");
      }
      if (e == 0) continue;
      exps[static_cast<uint32_t>(index - 1)] += static_cast<uint32_t>(e);
    }
    q.AddTerm(Monomial(exps.begin(), exps.end()), coeff);
  }
  return q;
}

std::string FormatPolynomial(const Polynomial<Rational>& q) {
  std::ostringstream out;
  for (const auto& [m, c] : q.terms()) {
    out << c.get_str() << " :";
    for (const auto& [i, e] : m) {
      out << ' ' << (i + 1);
      if (e != 1) out << '^' << e;
    }
    out << '\n';
  }
  return out.str();
}

Fingerprint ParseFingerprint(const std::string& text, size_t num_vars) {
  Fingerprint f;
  f.counts.assign(num_vars, 0);
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::string token;
  while (in >> token) {
    const size_t colon = token.find(':');
    if (colon == std::string::npos) {
      Fail(ErrorCode::kParse, "fingerprint entry '" + token + "' is not i:count");
    }
    const uint64_t index = ParseUnsigned(token.substr(0, colon), "fingerprint index");
    const uint64_t count = ParseUnsigned(token.substr(colon + 1), "fingerprint count");
    if (index < 1 || index > num_vars) {
      Fail(ErrorCode::kParse, "fingerprint index out of range: " + token);
    }
    f.counts[index - 1] += count;
  }
  return f;
}

}  // namespace cit
