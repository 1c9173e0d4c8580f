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
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pegfactor/ising.hpp"
#include "pegfactor/synth.hpp"
#include "pegfactor/topology.hpp"

namespace pegfactor {

// A qubit named relative to some tile: (row offset, col offset, slot 0..7).
struct Site {
  int drow = 0, dcol = 0, slot = 0;
  bool operator==(const Site&) const = default;
  bool operator<(const Site& o) const {
    return std::tie(drow, dcol, slot) < std::tie(o.drow, o.dcol, o.slot);
  }
};

// Where each CFA role sits relative to the cell's tile in the V4 layout.
// Own tile: V0 in1, V1 in2, V2 a0, V3 a1, H0 enable, H1 c_in, H2 a2, H3 a3.
// c_out and enable_out are H1, H0 of the 45 degree neighbour; out is V1 of
// the 120 degree neighbour.
std::map<std::string, Site> v4_cfa_sites();

// CFA with the virtual enable chain over the V4 sites.  Edges are the
// couplers of `profile` among the 11 qubits; sharing constraints cover the
// three shared qubits and the one coupler seen by two neighbouring cells.
GadgetSpec v4_cfa_spec(const CouplerProfile& profile = CouplerProfile::idealized());
// Same construction for any site map; ancillae are the roles a0, a1, ...
// Without the virtual chain enable_out is dropped and the plain CFA is used.
GadgetSpec cfa_spec_from_sites(const std::string& name, const std::map<std::string, Site>& sites, bool virtual_chain,
                               const CouplerProfile& profile = CouplerProfile::idealized());

struct Gadget {
  GadgetSpec spec;
  IsingModel pf;  // local indices
  std::map<std::string, Site> sites;
  std::vector<int> witness_table;  // per decision row, -1 when falsifying
  double gap = 0;
  int num_first_excited = 0;
};

struct GadgetLibrary {
  std::map<std::string, Gadget> gadgets;
  const Gadget& at(const std::string& name) const;
};

// Library compiled into the binary (data/gadgets_v4.json).
const GadgetLibrary& builtin_gadgets();
// Re-verifies every gadget; throws std::runtime_error on a bad entry.
GadgetLibrary gadget_library_from_json(const std::string& text);
std::string gadget_library_to_json(const GadgetLibrary& lib);
// Packs a synthesis result as a library entry.
Gadget make_gadget(const GadgetSpec& spec, const std::map<std::string, Site>& sites, const SynthResult& r);

enum class MultiplierVersion { v1, v2, v3, v4 };
MultiplierVersion parse_version(const std::string& s);
std::string version_name(MultiplierVersion v);

struct Cell {
  int i = 0, j = 0;          // row i adds A * b_i; column j handles a_j
  int tile_row = 0, tile_col = 0;  // footprint-local tile of the cell
  std::string gadget;
};

// A role of one cell, e.g. c_out of cell (1, 2).
struct RoleRef {
  std::string role;
  int i = 0, j = 0;
  bool operator==(const RoleRef&) const = default;
};

struct Share {
  RoleRef a, b;  // both roles live on one physical qubit
};

struct MultiplierLayout {
  MultiplierVersion version = MultiplierVersion::v4;
  int m = 0, n = 0;  // bits of A (columns) and of B (rows)
  int foot_rows = 0, foot_cols = 0;
  std::vector<Cell> cells;  // row major
  std::vector<Share> shares;
  // Footprint-local qubit paths joined by equivalence chains.
  std::vector<std::string> chain_names;
  std::vector<std::vector<Site>> physical_chains;
  // Role pairs kept equal inside the gadget formula.
  std::vector<std::pair<RoleRef, RoleRef>> virtual_chains;
  std::map<std::string, Site> sites;  // role -> site relative to the cell tile

  const Cell& cell(int i, int j) const { return cells[size_t(i) * m + j]; }
  Site site(const RoleRef& r) const;  // footprint-local
};

// Only V4 is built; other versions throw std::logic_error.
MultiplierLayout build_layout(MultiplierVersion version, int m, int n);

// Logical signal name -> physical qubit.  Names: "in1(i,j)", "c_out(i,j)",
// "a0(i,j)", ... and the word bits "A3", "B0", "P5".
struct VarMap {
  std::map<std::string, Var> signals;
  Var at(const std::string& name) const;
  bool has(const std::string& name) const { return signals.count(name) > 0; }
};

std::string signal_name(const std::string& role, int i, int j);

struct Composed {
  IsingModel model;
  VarMap varmap;
  Offset at;
  std::vector<std::vector<Var>> chains;  // physical chains, same order as the layout
};

// Sums translated gadget penalties and chain penalties.  Without an explicit
// offset the first clean region is used.  Throws std::runtime_error when no
// clean region exists, when the chosen one touches faults, or when a summed
// coefficient leaves the hardware range.
Composed compose(const MultiplierLayout& layout, const GadgetLibrary& lib, const Topology& topo,
                 std::optional<Offset> at = std::nullopt, double chain_strength = 2.0);

// Every coupler the composed model relies on, in footprint-local flat ids of `topo`.
std::vector<Edge> required_couplers(const MultiplierLayout& layout, const GadgetLibrary& lib, const Topology& topo);

// Runs the circuit for A * B and fills every qubit, ancillae included.
SpinState witness_state(uint64_t A, uint64_t B, const MultiplierLayout& layout, const Composed& c,
                        const GadgetLibrary& lib);

enum class InitMode { fix, flux_clamp, flux_soft };
InitMode parse_init_mode(const std::string& s);
std::string init_mode_name(InitMode m);

inline constexpr double kFluxUnit = 1.4303846404537006e-05;  // phi0

struct PreparedProblem {
  IsingModel model;  // what the sampler sees
  SpinState pins;    // product bits and boundary zeros
  InitMode mode = InitMode::flux_clamp;
  double scale = 1.0;  // from fix_variables
  double lambda = 100.0;
  uint64_t target = 0;
  int m = 0, n = 0;
  VarMap varmap;
  std::vector<std::vector<Var>> chains;

  // Hardware flux value per pinned qubit.
  std::map<Var, double> flux_biases() const;
  // Adds the pinned values back when the sampler did not carry them.
  SpinState complete(const SpinState& s) const;
};

PreparedProblem initialize_output(const Composed& c, const MultiplierLayout& layout, uint64_t N, InitMode mode,
                                  double lambda = 100.0);

struct Decoded {
  uint64_t A = 0, B = 0, P = 0;
  bool ok = false;
};
// Chains are read by majority (ties go to the first qubit).  ok when A*B
// equals the target, or equals P when no target is given.
Decoded decode_factors(const SpinState& s, const VarMap& vm, int m, int n,
                       std::optional<uint64_t> target = std::nullopt);

}  // namespace pegfactor
