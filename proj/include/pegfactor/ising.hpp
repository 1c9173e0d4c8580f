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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pegfactor {

using Var = int;
using Edge = std::pair<Var, Var>;  // always stored with first < second

inline Edge make_edge(Var a, Var b) { return a < b ? Edge{a, b} : Edge{b, a}; }

struct Interval {
  double lo = 0, hi = 0;
  bool contains(double v, double tol = 1e-9) const { return v >= lo - tol && v <= hi + tol; }
  bool operator==(const Interval&) const = default;
};

struct RangeSpec {
  Interval bias{-4, 4};
  Interval coupling{-2, 1};

  static RangeSpec pegasus() { return {{-4, 4}, {-2, 1}}; }
  static RangeSpec chimera() { return {{-2, 2}, {-1, 1}}; }
  bool operator==(const RangeSpec&) const = default;
};

// Spins are +1 / -1; true <-> +1.
using SpinState = std::map<Var, int>;

inline int spin(bool b) { return b ? 1 : -1; }

struct IsingModel {
  double offset = 0;
  std::map<Var, double> biases;
  std::map<Edge, double> couplings;
  RangeSpec ranges;
  std::optional<double> gap_hint;

  void add_bias(Var v, double x) { biases[v] += x; }
  void add_coupling(Var a, Var b, double x);
  std::vector<Var> variables() const;  // sorted, includes zero-bias coupling endpoints
  bool operator==(const IsingModel&) const = default;
};

// Throws std::out_of_range naming the first uncovered variable.
double energy(const IsingModel& m, const SpinState& s);

IsingModel sum(const std::vector<IsingModel>& models);

struct FixResult {
  IsingModel model;
  double scale = 1.0;
};
FixResult fix_variables(const IsingModel& m, const SpinState& assignment);

struct RangeViolation {
  enum Kind { bias, coupling } kind;
  Edge where;  // for a bias only `first` is meaningful
  double value;
};
std::vector<RangeViolation> validate_ranges(const IsingModel& m, const RangeSpec& r);
inline std::vector<RangeViolation> validate_ranges(const IsingModel& m) { return validate_ranges(m, m.ranges); }

// Equivalence penalty sum_k c * (1 - z_k z_{k+1}); at c = 2 each broken link costs 4.
IsingModel chain_penalty(const std::vector<Var>& path, double strength = 2.0);

// Remap variable ids; the map must be injective on the model's variables.
IsingModel relabel(const IsingModel& m, const std::map<Var, Var>& to);

// Dense evaluation helper used by the sampler: variables indexed 0..n-1.
struct DenseIsing {
  std::vector<Var> vars;
  std::map<Var, int> index;
  double offset = 0;
  std::vector<double> h;
  // adjacency in CSR form
  std::vector<int> adj_start, adj_to;
  std::vector<double> adj_w;
  // couplings in model order
  std::vector<int> edge_a, edge_b;
  std::vector<double> edge_w;

  explicit DenseIsing(const IsingModel& m);
  double energy(const std::vector<signed char>& z) const;
  // Energy change of flipping spin i.
  double delta(const std::vector<signed char>& z, int i) const {
    double f = h[i];
    for (int k = adj_start[i]; k < adj_start[i + 1]; ++k) f += adj_w[k] * z[adj_to[k]];
    return -2.0 * z[i] * f;
  }
};

}  // namespace pegfactor
