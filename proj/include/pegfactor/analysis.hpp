// Copyright 2026 The pegfactor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "pegfactor/multiplier.hpp"
#include "pegfactor/sampler.hpp"

namespace pegfactor {

// Number of differing spins; throws std::invalid_argument when the two
// states do not cover the same variables.
int hamming(const SpinState& a, const SpinState& b);

struct ExcitationMap {
  int m = 0, n = 0;
  int num_reads = 0;
  std::vector<int> cells;  // n x m, row major: reads whose cell violates the CFA
  int clean_reads = 0;     // reads where every cell holds

  int at(int i, int j) const { return cells[size_t(i) * m + j]; }
};

// Only decision roles are checked; ancillae never decide satisfaction.
// `pins` completes samples that were drawn from a reduced model.
ExcitationMap excitation_map(const SampleSet& s, const MultiplierLayout& layout, const VarMap& vm,
                             const SpinState& pins = {});

struct ChainStat {
  std::string name;
  int breaks = 0;  // reads with at least one broken link
  double frequency = 0;
};
std::vector<ChainStat> chain_break_stats(const SampleSet& s, const std::vector<std::vector<Var>>& chains,
                                         const std::vector<std::string>& names = {}, const SpinState& pins = {});

// One line per anneal run, in the shape of the result tables.
struct ReportRow {
  std::string size;  // "4x4"
  uint64_t input = 0;
  std::string phase;
  double tp = 0, sp = 0;
  double min_pf = 0;
  int zeros = 0;
  int delta_ham = -1;
};

struct IrvTrace;
std::string format_report_table(const std::vector<ReportRow>& rows);
std::string format_irv_table(const IrvTrace& t, const std::string& size, uint64_t input);
std::string report_csv(const std::vector<ReportRow>& rows);

}  // namespace pegfactor
