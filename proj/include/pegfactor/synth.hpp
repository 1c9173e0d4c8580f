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

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pegfactor/ising.hpp"

namespace pegfactor {

// A coefficient of a gadget: a bias (b empty) or the coupling between a and b.
struct ThetaId {
  std::string a, b;
  bool is_bias() const { return b.empty(); }
  bool operator==(const ThetaId&) const = default;
};

// Sum of two coefficients must stay in `range` so that overlaid copies of
// the gadget remain programmable.
struct SharingConstraint {
  enum Kind { bias_sum, coupling_sum } kind = bias_sum;
  ThetaId first, second;
  Interval range;
};

// Local variable indices: decision variables first, then ancillae.
struct GadgetSpec {
  std::string name;
  std::vector<std::string> decision_vars;
  std::vector<std::string> ancilla_vars;
  std::vector<uint8_t> truth_table;  // bit k of the index is decision var k
  std::vector<Edge> edges;           // local indices
  std::vector<SharingConstraint> sharing;
  RangeSpec ranges = RangeSpec::pegasus();
  std::map<std::string, Var> layout;  // optional physical placement
  std::string placement_note;

  int num_vars() const { return int(decision_vars.size() + ancilla_vars.size()); }
  int var_index(const std::string& name) const;
  void check() const;  // throws std::invalid_argument
};

using BoolFn = std::function<bool(const std::vector<bool>&)>;
std::vector<uint8_t> truth_table_of(int num_inputs, const BoolFn& f);

// Decision variable order: in2, in1, enable, c_in, c_out, out (+ enable_out).
std::vector<std::string> cfa_var_names(bool virtual_chain);
std::vector<uint8_t> cfa_truth_table(bool virtual_chain);
bool cfa_holds(bool in2, bool in1, bool enable, bool c_in, bool c_out, bool out);

struct VerificationReport {
  bool valid = false;
  double gap = 0;
  int num_first_excited = 0;
  int num_satisfying = 0;
  std::vector<int> witness_table;  // per decision row: ancilla assignment, -1 when falsifying
  std::string reason;
};

// Exhaustive check; `pf` is over local indices 0..n-1.
VerificationReport verify_penalty(const IsingModel& pf, const GadgetSpec& spec, bool reverse_order = false);

enum class SynthObjective { max_gap, max_gap_then_min_first_excited };

// How witness tables are explored when exhaustive enumeration is too large.
//   greedy: random restarts, each improved one row at a time.
//   branch_and_bound: rows are fixed one by one; the LP optimum of a partial
//     table bounds every completion, so weak branches are cut.  Complete when
//     it runs to the end.
enum class WitnessSearch { automatic, exhaustive, greedy, branch_and_bound };

struct SynthOptions {
  SynthObjective objective = SynthObjective::max_gap;
  WitnessSearch search = WitnessSearch::automatic;
  double min_gap = 1e-3;  // gaps below this count as infeasible
  uint64_t seed = 1;
  double time_budget_s = 30.0;
  long max_lp_solves = 1000000;
  double gap_cap = 8.0;         // upper bound on g, keeps the LP bounded
  double target_gap = -1;       // stop early once reached (<= 0: run the full budget)
  double epsilon = 1.0 / 12;  // rational margin keeps LP vertices on a grid that snaps exactly
  long exhaustive_limit = 4096;  // witness tables enumerated exhaustively up to this count
  std::vector<int> initial_witness;  // optional warm start, one entry per satisfying row
  bool verbose = false;
};

struct SynthResult {
  bool ok = false;
  IsingModel pf;  // local indices
  VerificationReport report;
  std::vector<int> witness;  // per satisfying row
  long lp_solves = 0;
  double best_soft = 0;
  std::string diagnostics;
};

class SynthesisError : public std::runtime_error {
 public:
  SynthesisError(const std::string& what, SynthResult r) : std::runtime_error(what), result(std::move(r)) {}
  SynthResult result;
};

// Throws SynthesisError when no witness table with positive gap is found.
SynthResult synthesize(const GadgetSpec& spec, const SynthOptions& opt = {});

// Lower-level access for tools and tests: best gap for one fixed witness table.
struct WitnessSolve {
  bool feasible = false;  // gap > 0
  double gap = 0;
  double soft = 0;        // max (g - L) when witness rows may float in [0, L]
  std::vector<double> theta;
};
WitnessSolve solve_witness(const GadgetSpec& spec, const std::vector<int>& witness, double gap_cap = 8.0,
                           bool soft = false);

// Builds the local-index model from a parameter vector (offset, biases, couplings in edge order).
IsingModel model_from_theta(const GadgetSpec& spec, const std::vector<double>& theta);

// Places a local-index pf onto the spec's physical layout.
IsingModel place(const IsingModel& local_pf, const GadgetSpec& spec);

}  // namespace pegfactor
