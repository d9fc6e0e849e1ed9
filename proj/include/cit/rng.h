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

#ifndef CIT_RNG_H_
#define CIT_RNG_H_

#include <cstdint>
#include <random>

namespace cit {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent child seeds so that no
// generator state is shared between trials or bins.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter scheme: child(seed, a, b, ...) = Mix64(Mix64(seed ^ Mix64(a)) ^ Mix64(b)) ...
// Stream identity is the path of counters, so results do not depend on the
// order in which trials are scheduled.
constexpr uint64_t DeriveSeed(uint64_t seed, uint64_t counter) {
  return Mix64(seed ^ Mix64(counter + 0x632be59bd9b4e019ULL));
}

constexpr uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b) {
  return DeriveSeed(DeriveSeed(seed, a), b);
}

inline Rng MakeRng(uint64_t seed) { return Rng(Mix64(seed)); }

}  // namespace cit

#endif  // CIT_RNG_H_
