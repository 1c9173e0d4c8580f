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

#include "pegfactor/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "pegfactor/strategy.hpp"

namespace pegfactor {

int hamming(const SpinState& a, const SpinState& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming: states cover different variables");
  int d = 0;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first) throw std::invalid_argument("hamming: states cover different variables");
    d += ia->second != ib->second;
  }
  return d;
}

namespace {

// Summation noise on a zero energy prints as -0.000 or 1e-13; reports show 0.
double clean(double e) { return std::abs(e) < 1e-9 ? 0.0 : e; }

SpinState completed(const SampleSet& s, size_t k, const SpinState& pins) {
  SpinState st = s.state(k);
  for (auto& [v, z] : pins) st.emplace(v, z);
  return st;
}

}  // namespace

ExcitationMap excitation_map(const SampleSet& s, const MultiplierLayout& layout, const VarMap& vm,
                             const SpinState& pins) {
  ExcitationMap em;
  em.m = layout.m;
  em.n = layout.n;
  em.num_reads = s.num_reads;
  em.cells.assign(size_t(layout.m) * layout.n, 0);
  const auto names = cfa_var_names(true);
  const auto table = cfa_truth_table(true);
  for (size_t k = 0; k < s.samples.size(); ++k) {
    const SpinState st = completed(s, k, pins);
    const int occ = s.samples[k].occurrences;
    bool clean = true;
    for (int i = 0; i < layout.n; ++i)
      for (int j = 0; j < layout.m; ++j) {
        size_t x = 0;
        for (size_t r = 0; r < names.size(); ++r)
          if (st.at(vm.at(signal_name(names[r], i, j))) > 0) x |= size_t(1) << r;
        if (!table[x]) {
          em.cells[size_t(i) * layout.m + j] += occ;
          clean = false;
        }
      }
    if (clean) em.clean_reads += occ;
  }
  return em;
}

std::vector<ChainStat> chain_break_stats(const SampleSet& s, const std::vector<std::vector<Var>>& chains,
                                         const std::vector<std::string>& names, const SpinState& pins) {
  std::vector<ChainStat> out(chains.size());
  for (size_t c = 0; c < chains.size(); ++c) out[c].name = c < names.size() ? names[c] : "chain " + std::to_string(c);
  for (size_t k = 0; k < s.samples.size(); ++k) {
    const SpinState st = completed(s, k, pins);
    for (size_t c = 0; c < chains.size(); ++c)
      for (size_t l = 0; l + 1 < chains[c].size(); ++l)
        if (st.at(chains[c][l]) != st.at(chains[c][l + 1])) {
          out[c].breaks += s.samples[k].occurrences;
          break;
        }
  }
  for (auto& c : out) c.frequency = s.num_reads ? double(c.breaks) / s.num_reads : 0.0;
  return out;
}

std::string format_report_table(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-8s %-14s %-8s %7s %6s %10s %8s %6s\n", "Size", "Input N", "phase", "T_p", "S_p",
                "min(P_F)", "#(P_F=0)", "dHAM");
  os << buf;
  for (auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-8s %-14llu %-8s %7.1f %6.2f %10.3f %8d %6s\n", r.size.c_str(),
                  (unsigned long long)r.input, r.phase.c_str(), r.tp, r.sp, clean(r.min_pf), r.zeros,
                  r.delta_ham < 0 ? "-" : std::to_string(r.delta_ham).c_str());
    os << buf;
  }
  return os.str();
}

std::string format_irv_table(const IrvTrace& t, const std::string& size, uint64_t input) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-8s %-14s %5s %7s %6s %10s %12s %6s %6s %8s %8s\n", "Size", "Input N", "iter", "T_p",
                "S_p", "min(P_F)", "min(P_F)new", "dHAM", "HAM", "HAMnew", "#(P_F=0)");
  os << buf;
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("-"); };
  for (auto& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%-8s %-14llu %5d %7.1f %6.2f %10.3f %12.3f %6s %6s %8s %8d%s\n", size.c_str(),
                  (unsigned long long)input, r.iteration, r.tp, r.sp, clean(r.min_pf), clean(r.min_pf_new),
                  r.delta_ham < 0 ? "-" : std::to_string(r.delta_ham).c_str(), opt(r.ham).c_str(),
                  opt(r.ham_new).c_str(), r.zeros, r.accepted ? " *" : "");
    os << buf;
  }
  os << "outcome: " << t.outcome() << " after " << t.iterations << " iteration(s)";
  if (t.solved) os << ", " << t.decoded.A << " x " << t.decoded.B << " = " << t.decoded.P;
  os << "\n";
  return os.str();
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << "size,input,phase,tp,sp,min_pf,zeros,delta_ham\n";
  for (auto& r : rows)
    os << r.size << ',' << r.input << ',' << r.phase << ',' << r.tp << ',' << r.sp << ',' << clean(r.min_pf) << ','
       << r.zeros << ',' << r.delta_ham << '\n';
  return os.str();
}

}  // namespace pegfactor
