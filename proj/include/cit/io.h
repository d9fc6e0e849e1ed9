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

#ifndef CIT_IO_H_
#define CIT_IO_H_

// Text formats. Both start with "#dims l1 l2 n". Distribution files then list
// "i<TAB>j<TAB>z<TAB>prob" for the nonzero cells; sample files list
// "x<TAB>y<TAB>z". Indices are 1-based on disk and 0-based in memory.

#include <string>
#include <vector>

#include "cit/dist_core.h"

namespace cit {

std::string FormatDistribution(const JointDistribution& p);
JointDistribution ParseDistribution(const std::string& text);

struct SampleSet {
  Dims dims;
  std::vector<SampleTriple> samples;
};

std::string FormatSamples(const Dims& dims, const std::vector<SampleTriple>& samples);
SampleSet ParseSamples(const std::string& text);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace cit

#endif  // CIT_IO_H_
