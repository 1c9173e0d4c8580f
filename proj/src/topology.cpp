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

#include "pegfactor/topology.hpp"

#include <algorithm>
#include <stdexcept>

namespace pegfactor {

namespace {

constexpr int kV1 = 1, kH0 = 4, kH1 = 5;

long long key(Var a, Var b) {
  const Edge e = make_edge(a, b);
  return (static_cast<long long>(e.first) << 32) | static_cast<unsigned>(e.second);
}

// Complete bipartite between the two sides plus the pairs (0,1), (2,3) on each side.
bool intra_tile(int s, int t) {
  if (s == t) return false;
  if ((s < 4) != (t < 4)) return true;
  return (s & ~1) == (t & ~1);
}

}  // namespace

std::string slot_name(int slot) {
  if (slot < 0 || slot > 7) throw std::out_of_range("slot " + std::to_string(slot));
  return std::string(slot < 4 ? "V" : "H") + char('0' + slot % 4);
}

int parse_slot(const std::string& name) {
  if (name.size() != 2 || (name[0] != 'V' && name[0] != 'H') || name[1] < '0' || name[1] > '3')
    throw std::invalid_argument("bad slot name '" + name + "'");
  return slot_of(name[0] == 'H' ? Side::horizontal : Side::vertical, name[1] - '0');
}

int angle_of(Direction d) {
  switch (d) {
    case Direction::d0: return 0;
    case Direction::d45: return 45;
    case Direction::d90: return 90;
    case Direction::d120: return 120;
    case Direction::d150: return 150;
  }
  return -1;
}

Direction direction_from_angle(int angle) {
  switch (angle) {
    case 0: return Direction::d0;
    case 45: return Direction::d45;
    case 90: return Direction::d90;
    case 120: return Direction::d120;
    case 150: return Direction::d150;
  }
  throw std::invalid_argument("no inter-tile direction at " + std::to_string(angle) + " degrees");
}

std::pair<int, int> tile_offset(Direction d) {
  switch (d) {
    case Direction::d0: return {1, -3};
    case Direction::d45: return {0, 1};
    case Direction::d90: return {1, 0};
    case Direction::d120: return {1, -1};
    case Direction::d150: return {1, -2};
  }
  return {0, 0};
}

// The multiplier cell at tile T reaches the carry and enable qubits (H1, H0)
// of T+45 and the in2 qubit (V1) of T+120, and the in1 qubit (V0) runs down a
// 90 degree chain.  Two pairs are left out to keep every degree at 15 or less:
// H0 to H0 at 45 degrees (no direct enable link, hence the virtual chain) and
// H1 to V1 at 120 degrees.
CouplerProfile CouplerProfile::idealized() {
  CouplerProfile p;
  p.name = "idealized";
  Rule r45{Direction::d45, {}}, r120{Direction::d120, {}};
  for (int s = 0; s < 8; ++s) {
    r45.pairs.emplace_back(s, kH1);
    if (s != kH0) r45.pairs.emplace_back(s, kH0);
    if (s != kH1) r120.pairs.emplace_back(s, kV1);
  }
  p.rules = {r45, Rule{Direction::d90, {{0, 0}}}, r120};
  return p;
}

CouplerProfile CouplerProfile::uniform() {
  CouplerProfile p;
  p.name = "uniform";
  for (Direction d : {Direction::d0, Direction::d45, Direction::d90, Direction::d120, Direction::d150}) {
    Rule r{d, {}};
    for (int s = 0; s < 8; ++s) r.pairs.emplace_back(s, s);
    p.rules.push_back(r);
  }
  return p;
}

bool CouplerProfile::enabled(Direction d) const {
  return std::any_of(rules.begin(), rules.end(), [d](const Rule& r) { return r.dir == d && !r.pairs.empty(); });
}

Var Topology::flat(const QubitId& q) const {
  return ((q.tile_row * cols_ + q.tile_col) * 2 + static_cast<int>(q.side)) * 4 + q.index;
}

QubitId Topology::qubit(Var f) const {
  QubitId q;
  q.index = f % 4;
  q.side = static_cast<Side>((f / 4) % 2);
  const int tile = f / 8;
  q.tile_row = cols_ > 0 ? tile / cols_ : 0;
  q.tile_col = cols_ > 0 ? tile % cols_ : tile;
  return q;
}

std::optional<Var> Topology::translate(Var v, int drow, int dcol) const {
  QubitId q = qubit(v);
  q.tile_row += drow;
  q.tile_col += dcol;
  if (!in_grid(q.tile_row, q.tile_col)) return std::nullopt;
  return flat(q);
}

bool Topology::has_qubit(Var q) const { return qubit_set_.count(q) > 0; }

bool Topology::has_coupler_raw(Var a, Var b) const { return a != b && coupler_set_.count(key(a, b)) > 0; }

bool Topology::qubit_usable(Var q) const { return has_qubit(q) && !faulty_qubits_.count(q); }

bool Topology::has_coupler(Var a, Var b) const {
  return has_coupler_raw(a, b) && qubit_usable(a) && qubit_usable(b) && !faulty_couplers_.count(make_edge(a, b));
}

std::vector<Var> Topology::usable_neighbors(Var q) const {
  std::vector<Var> out;
  if (!qubit_usable(q) || q >= Var(adj_.size())) return out;
  for (Var n : adj_[q])
    if (has_coupler(q, n)) out.push_back(n);
  return out;
}

size_t Topology::usable_coupler_count() const {
  size_t n = 0;
  for (auto& e : couplers_)
    if (has_coupler(e.first, e.second)) ++n;
  return n;
}

void Topology::index() {
  std::sort(qubits_.begin(), qubits_.end());
  qubits_.erase(std::unique(qubits_.begin(), qubits_.end()), qubits_.end());
  std::sort(couplers_.begin(), couplers_.end());
  couplers_.erase(std::unique(couplers_.begin(), couplers_.end()), couplers_.end());
  qubit_set_ = {qubits_.begin(), qubits_.end()};
  coupler_set_.clear();
  Var top = qubits_.empty() ? 0 : qubits_.back() + 1;
  adj_.assign(top, {});
  for (auto& e : couplers_) {
    if (!qubit_set_.count(e.first) || !qubit_set_.count(e.second))
      throw std::invalid_argument("coupler (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                                  ") touches an unknown qubit");
    coupler_set_.insert(key(e.first, e.second));
    adj_[e.first].push_back(e.second);
    adj_[e.second].push_back(e.first);
  }
}

Topology build_pegasus(int rows, int cols, const CouplerProfile& profile) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("topology needs at least one tile row and column");
  Topology t;
  t.rows_ = rows;
  t.cols_ = cols;
  t.profile_ = profile.name;
  auto at = [&](int r, int c, int slot) {
    return t.flat(QubitId{r, c, slot < 4 ? Side::vertical : Side::horizontal, slot % 4});
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      for (int s = 0; s < 8; ++s) t.qubits_.push_back(at(r, c, s));
      for (int s = 0; s < 8; ++s)
        for (int u = s + 1; u < 8; ++u)
          if (intra_tile(s, u)) t.couplers_.push_back(make_edge(at(r, c, s), at(r, c, u)));
      for (auto& rule : profile.rules) {
        auto [dr, dc] = tile_offset(rule.dir);
        if (!t.in_grid(r + dr, c + dc)) continue;
        for (auto [s, u] : rule.pairs) t.couplers_.push_back(make_edge(at(r, c, s), at(r + dr, c + dc, u)));
      }
    }
  t.index();
  return t;
}

Topology apply_fault_mask(const Topology& t, const std::set<Var>& fq, const std::set<Edge>& fc) {
  for (Var q : fq)
    if (!t.has_qubit(q)) throw std::invalid_argument("fault mask names unknown qubit " + std::to_string(q));
  for (auto& e : fc)
    if (!t.has_coupler_raw(e.first, e.second))
      throw std::invalid_argument("fault mask names unknown coupler (" + std::to_string(e.first) + "," +
                                  std::to_string(e.second) + ")");
  Topology out = t;
  out.faulty_qubits_.insert(fq.begin(), fq.end());
  for (auto& e : fc) out.faulty_couplers_.insert(make_edge(e.first, e.second));
  return out;
}

Topology topology_from_lists(int rows, int cols, std::vector<Var> qubits, std::vector<Edge> couplers,
                             std::set<Var> fq, std::set<Edge> fc, std::string profile) {
  Topology t;
  t.rows_ = rows;
  t.cols_ = cols;
  t.profile_ = std::move(profile);
  for (Var q : qubits) {
    if (q < 0) throw std::invalid_argument("negative qubit id " + std::to_string(q));
    if (rows > 0 && cols > 0 && q >= 8 * rows * cols)
      throw std::invalid_argument("qubit id " + std::to_string(q) + " lies outside the tile grid");
  }
  t.qubits_ = std::move(qubits);
  for (auto& e : couplers) t.couplers_.push_back(make_edge(e.first, e.second));
  t.index();
  return apply_fault_mask(t, fq, fc);
}

IsingModel chain_penalty(const Topology& t, const std::vector<Var>& path, double strength) {
  for (size_t k = 0; k + 1 < path.size(); ++k)
    if (!t.has_coupler(path[k], path[k + 1]))
      throw std::invalid_argument("chain link (" + std::to_string(path[k]) + "," + std::to_string(path[k + 1]) +
                                  ") is not a usable coupler");
  return chain_penalty(path, strength);
}

bool region_clean(const Topology& t, int foot_rows, int foot_cols, const std::vector<Edge>& required, Offset at) {
  if (at.row < 0 || at.col < 0 || at.row + foot_rows > t.tiles_rows() || at.col + foot_cols > t.tiles_cols())
    return false;
  auto inside = [&](Var q) {
    const QubitId id = t.qubit(q);
    return id.tile_row >= at.row && id.tile_row < at.row + foot_rows && id.tile_col >= at.col &&
           id.tile_col < at.col + foot_cols;
  };
  for (int r = at.row; r < at.row + foot_rows; ++r)
    for (int c = at.col; c < at.col + foot_cols; ++c)
      for (int s = 0; s < 8; ++s) {
        const Var q = t.flat(QubitId{r, c, s < 4 ? Side::vertical : Side::horizontal, s % 4});
        if (!t.qubit_usable(q)) return false;
      }
  for (auto& e : t.faulty_couplers())
    if (inside(e.first) && inside(e.second)) return false;
  for (auto& e : required) {
    auto a = t.translate(e.first, at.row, at.col), b = t.translate(e.second, at.row, at.col);
    if (!a || !b || !t.has_coupler(*a, *b)) return false;
  }
  return true;
}

std::optional<Offset> find_clean_region(const Topology& t, int foot_rows, int foot_cols, const std::vector<Edge>& required) {
  for (int r = 0; r + foot_rows <= t.tiles_rows(); ++r)
    for (int c = 0; c + foot_cols <= t.tiles_cols(); ++c)
      if (region_clean(t, foot_rows, foot_cols, required, {r, c})) return Offset{r, c};
  return std::nullopt;
}

}  // namespace pegfactor
