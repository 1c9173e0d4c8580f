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

#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pegfactor/ising.hpp"

namespace pegfactor {

enum class Side { vertical = 0, horizontal = 1 };

struct QubitId {
  int tile_row = 0, tile_col = 0;
  Side side = Side::vertical;
  int index = 0;  // 0..3
  bool operator==(const QubitId&) const = default;
};

// Slot of a qubit inside its tile: 0..3 vertical, 4..7 horizontal.
inline int slot_of(Side s, int index) { return (s == Side::horizontal ? 4 : 0) + index; }
std::string slot_name(int slot);  // "V0".."H3"
int parse_slot(const std::string& name);

// Inter-tile directions of the idealized lattice.  Tiles are indexed along two
// lattice axes: 90 degrees is one row down, 45 degrees is one column right.
// The other directions are the lattice vectors closest to their drawn angle.
enum class Direction { d0, d45, d90, d120, d150 };
int angle_of(Direction d);
Direction direction_from_angle(int angle);  // throws on unknown angles
std::pair<int, int> tile_offset(Direction d);

struct CouplerProfile {
  std::string name;
  struct Rule {
    Direction dir;
    std::vector<std::pair<int, int>> pairs;  // (slot in T, slot in T + offset)
  };
  std::vector<Rule> rules;

  // Couplers used by the V4 multiplier.  Pairing assumptions are documented
  // in the README.
  static CouplerProfile idealized();
  // Same-index pairs in every direction; handy for tests.
  static CouplerProfile uniform();
  bool enabled(Direction d) const;
};

class Topology {
 public:
  Topology() = default;

  int tiles_rows() const { return rows_; }
  int tiles_cols() const { return cols_; }
  const std::string& profile_name() const { return profile_; }

  Var flat(const QubitId& q) const;
  QubitId qubit(Var flat) const;
  bool in_grid(int tile_row, int tile_col) const { return tile_row >= 0 && tile_col >= 0 && tile_row < rows_ && tile_col < cols_; }
  // Same qubit moved by whole tiles; nullopt when it leaves the grid.
  std::optional<Var> translate(Var q, int drow, int dcol) const;

  const std::vector<Var>& qubits() const { return qubits_; }
  const std::vector<Edge>& couplers() const { return couplers_; }
  const std::set<Var>& faulty_qubits() const { return faulty_qubits_; }
  const std::set<Edge>& faulty_couplers() const { return faulty_couplers_; }

  bool has_qubit(Var q) const;
  bool has_coupler_raw(Var a, Var b) const;  // ignores faults
  bool qubit_usable(Var q) const;
  bool has_coupler(Var a, Var b) const;      // present and usable
  std::vector<Var> usable_neighbors(Var q) const;
  int usable_degree(Var q) const { return int(usable_neighbors(q).size()); }
  size_t usable_coupler_count() const;

  friend Topology build_pegasus(int rows, int cols, const CouplerProfile& profile);
  friend Topology apply_fault_mask(const Topology& t, const std::set<Var>& fq, const std::set<Edge>& fc);
  friend Topology topology_from_lists(int rows, int cols, std::vector<Var> qubits, std::vector<Edge> couplers,
                                      std::set<Var> fq, std::set<Edge> fc, std::string profile);

 private:
  void index();

  int rows_ = 0, cols_ = 0;
  std::string profile_;
  std::vector<Var> qubits_;
  std::vector<Edge> couplers_;
  std::set<Var> faulty_qubits_;
  std::set<Edge> faulty_couplers_;
  std::unordered_set<Var> qubit_set_;
  std::unordered_set<long long> coupler_set_;
  std::vector<std::vector<Var>> adj_;  // indexed by flat id when dense
};

Topology build_pegasus(int rows, int cols, const CouplerProfile& profile = CouplerProfile::idealized());

// Throws std::invalid_argument naming the first unknown qubit or coupler.
Topology apply_fault_mask(const Topology& t, const std::set<Var>& faulty_qubits, const std::set<Edge>& faulty_couplers);

// Imported graphs (e.g. a real coupler list).  Qubit ids must be < 8*rows*cols
// when rows/cols are given so that tile queries stay meaningful.
Topology topology_from_lists(int rows, int cols, std::vector<Var> qubits, std::vector<Edge> couplers,
                             std::set<Var> faulty_qubits = {}, std::set<Edge> faulty_couplers = {},
                             std::string profile = "imported");

// Equivalence chain along `path`; every consecutive pair must be a usable coupler.
IsingModel chain_penalty(const Topology& t, const std::vector<Var>& path, double strength = 2.0);

struct Offset {
  int row = 0, col = 0;
  bool operator==(const Offset&) const = default;
};

// Tile window of the footprint translated by an offset is clean when every
// qubit inside is usable, every coupler between two of its qubits is usable,
// and every required coupler (given for offset (0,0)) exists after translation.
bool region_clean(const Topology& t, int foot_rows, int foot_cols, const std::vector<Edge>& required, Offset at);
std::optional<Offset> find_clean_region(const Topology& t, int foot_rows, int foot_cols,
                                        const std::vector<Edge>& required = {});

}  // namespace pegfactor
