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

#include "cit/io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cit/error.h"

namespace cit {
namespace {

Dims ParseHeader(std::istream& in, size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream h(line);
    std::string tag;
    Dims d;
    h >> tag >> d.l1 >> d.l2 >> d.n;
    if (tag != "#dims" || h.fail() || d.l1 == 0 || d.l2 == 0 || d.n == 0) {
      Fail(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                  ": expected header '#dims l1 l2 n'");
    }
    return d;
  }
  Fail(ErrorCode::kParse, "missing '#dims l1 l2 n' header");
}

[[noreturn]] void BadLine(size_t line_no, const std::string& what) {
  Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

bool Skippable(const std::string& line) {
  const size_t b = line.find_first_not_of(" \t\r");
  return b == std::string::npos || line[b] == '#';
}

size_t CheckIndex(long long v, size_t bound, size_t line_no, const char* name) {
  if (v < 1 || static_cast<unsigned long long>(v) > bound) {
    BadLine(line_no, std::string(name) + " index out of range");
  }
  return static_cast<size_t>(v - 1);
}

}  // namespace

std::string FormatDistribution(const JointDistribution& p) {
  const Dims& d = p.dims();
  std::string out = "#dims " + std::to_string(d.l1) + " " + std::to_string(d.l2) +
                    " " + std::to_string(d.n) + "\n";
  char buf[64];
  for (size_t z = 0; z < d.n; ++z)
    for (size_t x = 0; x < d.l1; ++x)
      for (size_t y = 0; y < d.l2; ++y) {
        const double v = p(x, y, z);
        if (v == 0.0) continue;
        std::snprintf(buf, sizeof(buf), "%zu\t%zu\t%zu\t%.17g\n", x + 1, y + 1,
                      z + 1, v);
        out += buf;
      }
  return out;
}

JointDistribution ParseDistribution(const std::string& text) {
  std::istringstream in(text);
  size_t line_no = 0;
  const Dims d = ParseHeader(in, line_no);
  std::vector<double> mass(d.size(), 0.0);
  std::vector<char> seen(d.size(), 0);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (Skippable(line)) continue;
    std::istringstream row(line);
    long long i = 0, j = 0, z = 0;
    double prob = 0.0;
    row >> i >> j >> z >> prob;
    std::string extra;
    if (row.fail() || (row >> extra)) BadLine(line_no, "expected 'i j z prob'");
    const size_t x = CheckIndex(i, d.l1, line_no, "i");
    const size_t y = CheckIndex(j, d.l2, line_no, "j");
    const size_t zz = CheckIndex(z, d.n, line_no, "z");
    const size_t idx = (zz * d.l1 + x) * d.l2 + y;
    if (seen[idx]) BadLine(line_no, "duplicate cell");
    seen[idx] = 1;
    if (!(prob >= 0.0)) BadLine(line_no, "probability must be nonnegative");
    mass[idx] = prob;
  }
  return JointDistribution(d, std::move(mass));
}

std::string FormatSamples(const Dims& dims, const std::vector<SampleTriple>& samples) {
  std::string out = "#dims " + std::to_string(dims.l1) + " " +
                    std::to_string(dims.l2) + " " + std::to_string(dims.n) + "\n";
  out.reserve(out.size() + samples.size() * 12);
  for (const SampleTriple& s : samples) {
    out += std::to_string(s.x + 1);
    out += '\t';
    out += std::to_string(s.y + 1);
    out += '\t';
    out += std::to_string(s.z + 1);
    out += '\n';
  }
  return out;
}

SampleSet ParseSamples(const std::string& text) {
  std::istringstream in(text);
  size_t line_no = 0;
  SampleSet set;
  set.dims = ParseHeader(in, line_no);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (Skippable(line)) continue;
    std::istringstream row(line);
    long long x = 0, y = 0, z = 0;
    row >> x >> y >> z;
    std::string extra;
    if (row.fail() || (row >> extra)) BadLine(line_no, "expected 'x y z'");
    set.samples.push_back(SampleTriple{
        static_cast<uint32_t>(CheckIndex(x, set.dims.l1, line_no, "x")),
        static_cast<uint32_t>(CheckIndex(y, set.dims.l2, line_no, "y")),
        static_cast<uint32_t>(CheckIndex(z, set.dims.n, line_no, "z"))});
  }
  return set;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  out << text;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace cit
