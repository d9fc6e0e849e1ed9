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

#ifndef CIT_RATIONAL_H_
#define CIT_RATIONAL_H_

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

namespace cit {

// Exact arithmetic for the brute-force oracles.
using Rational = mpq_class;

// num/den in lowest terms. The two-argument mpq_class constructor does not
// reduce, and comparisons assume reduced operands.
inline Rational Frac(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

template <class T>
T FromInteger(int64_t v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(static_cast<long>(v));
  } else {
    return static_cast<T>(v);
  }
}

template <class T>
T AbsValue(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(abs(v));
  } else {
    return std::abs(v);
  }
}

template <class T>
double ToDouble(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return v.get_d();
  } else {
    return static_cast<double>(v);
  }
}

// Parses "a", "-a", "a/b" or a decimal literal such as "0.125" exactly.
Rational ParseRational(const std::string& text);

}  // namespace cit

#endif  // CIT_RATIONAL_H_
