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

#include <random>
#include <set>

#include "doctest.h"
#include "pegfactor/io.hpp"
#include "pegfactor/topology.hpp"

using namespace pegfactor;

namespace {

Var at(const Topology& t, int r, int c, int slot) {
  return t.flat(QubitId{r, c, slot < 4 ? Side::vertical : Side::horizontal, slot % 4});
}

// Clean windows from scratch: no faulty qubit in any window tile, no faulty coupler inside.
std::vector<Offset> scan_clean(const Topology& t, int fr, int fc) {
  std::vector<Offset> out;
  for (int r = 0; r + fr <= t.tiles_rows(); ++r)
    for (int c = 0; c + fc <= t.tiles_cols(); ++c) {
      bool ok = true;
      for (Var q : t.faulty_qubits()) {
        auto id = t.qubit(q);
        ok = ok && !(id.tile_row >= r && id.tile_row < r + fr && id.tile_col >= c && id.tile_col < c + fc);
      }
      for (auto& e : t.faulty_couplers()) {
        auto a = t.qubit(e.first), b = t.qubit(e.second);
        auto in = [&](const QubitId& x) {
          return x.tile_row >= r && x.tile_row < r + fr && x.tile_col >= c && x.tile_col < c + fc;
        };
        ok = ok && !(in(a) && in(b));
      }
      if (ok) out.push_back({r, c});
    }
  return out;
}

}  // namespace

TEST_CASE("topology: slot names and directions") {
  for (int s = 0; s < 8; ++s) CHECK(parse_slot(slot_name(s)) == s);
  CHECK(slot_name(0) == "V0");
  CHECK(slot_name(5) == "H1");
  CHECK_THROWS(parse_slot("X9"));
  for (int a : {0, 45, 90, 120, 150}) CHECK(angle_of(direction_from_angle(a)) == a);
  CHECK_THROWS(direction_from_angle(30));
}

TEST_CASE("topology: flat ids are stable and bijective") {
  Topology t = build_pegasus(3, 4);
  std::set<Var> seen;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c)
      for (int s = 0; s < 8; ++s) {
        QubitId id{r, c, s < 4 ? Side::vertical : Side::horizontal, s % 4};
        Var q = t.flat(id);
        CHECK(q == ((r * 4 + c) * 2 + (s < 4 ? 0 : 1)) * 4 + s % 4);
        CHECK(t.qubit(q) == id);
        seen.insert(q);
      }
  CHECK(seen.size() == 96);
}

TEST_CASE("topology: single tile") {
  Topology t = build_pegasus(1, 1);
  CHECK(t.qubits().size() == 8);
  CHECK(t.couplers().size() == 20);
  int bip = 0;
  for (auto& e : t.couplers()) bip += (t.qubit(e.first).side != t.qubit(e.second).side);
  CHECK(bip == 16);
  CHECK(t.has_coupler(at(t, 0, 0, 0), at(t, 0, 0, 1)));
  CHECK(t.has_coupler(at(t, 0, 0, 2), at(t, 0, 0, 3)));
  CHECK_FALSE(t.has_coupler(at(t, 0, 0, 1), at(t, 0, 0, 2)));
  CHECK(t.has_coupler(at(t, 0, 0, 4), at(t, 0, 0, 5)));
}

TEST_CASE("topology: inter-tile couplers follow the profile rules exactly") {
  for (auto profile : {CouplerProfile::idealized(), CouplerProfile::uniform()}) {
    Topology t = build_pegasus(4, 5, profile);
    std::set<Edge> expect;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 5; ++c)
        for (auto& rule : profile.rules) {
          auto [dr, dc] = tile_offset(rule.dir);
          if (r + dr < 0 || r + dr >= 4 || c + dc < 0 || c + dc >= 5) continue;
          for (auto [s, u] : rule.pairs) expect.insert(make_edge(at(t, r, c, s), at(t, r + dr, c + dc, u)));
        }
    std::set<Edge> got;
    for (auto& e : t.couplers()) {
      auto a = t.qubit(e.first), b = t.qubit(e.second);
      CHECK(t.has_qubit(e.first));
      CHECK(t.has_qubit(e.second));
      if (a.tile_row != b.tile_row || a.tile_col != b.tile_col) got.insert(e);
    }
    CHECK(got == expect);
  }
}

TEST_CASE("topology: 45 degree couplers of a 2x2 grid") {
  Topology t = build_pegasus(2, 2);
  auto [dr, dc] = tile_offset(Direction::d45);
  for (auto& rule : CouplerProfile::idealized().rules)
    if (rule.dir == Direction::d45)
      for (auto [s, u] : rule.pairs)
        for (int r = 0; r < 2; ++r)
          CHECK(t.has_coupler(at(t, r, 0, s), at(t, r + dr, 0 + dc, u)));
}

TEST_CASE("topology: 16x16 size and degree bound") {
  Topology t = build_pegasus(16, 16);
  CHECK(t.qubits().size() == 2048);
  CHECK(t.qubits().size() <= 5760);
  int maxdeg = 0;
  for (Var q : t.qubits()) maxdeg = std::max(maxdeg, t.usable_degree(q));
  CHECK(maxdeg <= 15);
  CHECK(maxdeg == 15);
  Topology again = build_pegasus(16, 16);
  CHECK(again.couplers() == t.couplers());
}

TEST_CASE("topology: fault masks") {
  Topology t = build_pegasus(16, 16);
  Var q = -1;
  for (Var x : t.qubits())
    if (t.usable_degree(x) == 15) {
      q = x;
      break;
    }
  REQUIRE(q >= 0);
  const size_t before = t.usable_coupler_count();
  Topology m = apply_fault_mask(t, {q}, {});
  CHECK(before - m.usable_coupler_count() == 15);
  CHECK(m.usable_degree(q) == 0);
  for (Var nb : t.usable_neighbors(q)) CHECK_FALSE(m.has_coupler(q, nb));

  Topology same = apply_fault_mask(t, {}, {});
  CHECK(same.usable_coupler_count() == before);

  CHECK_THROWS_WITH(apply_fault_mask(t, {999999}, {}), doctest::Contains("999999"));
  CHECK_THROWS(apply_fault_mask(t, {}, {{0, 2047}}));
}

TEST_CASE("topology: random 1% mask matches a brute recount") {
  Topology t = build_pegasus(16, 16);
  std::mt19937_64 rng(99);
  std::bernoulli_distribution pick(0.01);
  std::set<Var> fq;
  std::set<Edge> fc;
  for (Var q : t.qubits())
    if (pick(rng)) fq.insert(q);
  for (auto& e : t.couplers())
    if (pick(rng)) fc.insert(e);
  Topology m = apply_fault_mask(t, fq, fc);
  size_t count = 0;
  for (auto& e : t.couplers())
    if (!fq.count(e.first) && !fq.count(e.second) && !fc.count(e)) ++count;
  CHECK(m.usable_coupler_count() == count);
}

TEST_CASE("topology: clean regions") {
  Topology t = build_pegasus(6, 6);
  CHECK(find_clean_region(t, 3, 4) == Offset{0, 0});
  CHECK_FALSE(find_clean_region(t, 7, 1));
  std::set<Var> all(t.qubits().begin(), t.qubits().end());
  CHECK_FALSE(find_clean_region(apply_fault_mask(t, all, {}), 1, 1));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int fr = 1 + rng() % 3, fcl = 1 + rng() % 3;
    const int wr = rng() % (6 - fr + 1), wc = rng() % (6 - fcl + 1);
    std::set<Var> fq;
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c)
        if (r < wr || r >= wr + fr || c < wc || c >= wc + fcl) fq.insert(at(t, r, c, rng() % 8));
    Topology m = apply_fault_mask(t, fq, {});
    auto oracle = scan_clean(m, fr, fcl);
    REQUIRE(oracle.size() == 1);
    CHECK(find_clean_region(m, fr, fcl) == oracle[0]);
    CHECK(oracle[0] == Offset{wr, wc});
  }
}

TEST_CASE("topology: faulty coupler inside a window blocks it, required couplers are checked") {
  Topology t = build_pegasus(2, 3);
  Edge e = make_edge(at(t, 0, 0, 0), at(t, 0, 0, 4));
  Topology m = apply_fault_mask(t, {}, {e});
  CHECK(find_clean_region(m, 2, 2) == Offset{0, 1});
  // A required 45 degree coupler cannot be translated past the right edge.
  Edge req = make_edge(at(t, 0, 0, 0), at(t, 0, 1, 5));
  CHECK(region_clean(t, 1, 2, {req}, {0, 0}));
  CHECK(region_clean(t, 1, 1, {req}, {1, 1}));
  CHECK_FALSE(region_clean(t, 1, 1, {req}, {0, 2}));
  CHECK_FALSE(region_clean(m, 1, 1, {req}, {0, 0}));
}

TEST_CASE("topology: chain penalty needs usable couplers") {
  Topology t = build_pegasus(2, 2);
  CHECK_NOTHROW(chain_penalty(t, {at(t, 0, 0, 0), at(t, 1, 0, 0)}));
  CHECK_THROWS(chain_penalty(t, {at(t, 0, 0, 0), at(t, 1, 1, 7)}));
}

TEST_CASE("topology: json round trip") {
  Topology t = apply_fault_mask(build_pegasus(3, 3), {5}, {});
  Topology back = topology_from_json(json::parse(to_json(t).dump()));
  CHECK(back.couplers() == t.couplers());
  CHECK(back.qubits() == t.qubits());
  CHECK(back.faulty_qubits() == t.faulty_qubits());
  CHECK(back.usable_coupler_count() == t.usable_coupler_count());
}
