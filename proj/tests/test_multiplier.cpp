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

#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "pegfactor/multiplier.hpp"
#include "pegfactor/sampler.hpp"

using namespace pegfactor;

namespace {

struct Built {
  MultiplierLayout layout;
  Composed c;
};

Built make(int m, int n) {
  Built b;
  b.layout = build_layout(MultiplierVersion::v4, m, n);
  b.c = compose(b.layout, builtin_gadgets(), build_pegasus(16, 16));
  return b;
}

SpinState restrict_to_model(const IsingModel& m, const SpinState& s) {
  SpinState r;
  for (Var v : m.variables()) r[v] = s.at(v);
  return r;
}

}  // namespace

TEST_CASE("multiplier: V4 cell sites") {
  auto sites = v4_cfa_sites();
  CHECK(sites.size() == 11);
  std::set<Site> distinct;
  for (auto& [_, s] : sites) distinct.insert(s);
  CHECK(distinct.size() == 11);
  GadgetSpec spec = v4_cfa_spec();
  CHECK(spec.decision_vars.size() == 7);
  CHECK(spec.ancilla_vars.size() == 4);
  CHECK(spec.edges.size() == 43);
  CHECK_NOTHROW(spec.check());
}

TEST_CASE("multiplier: layout sizes") {
  auto L = build_layout(MultiplierVersion::v4, 4, 4);
  CHECK(L.cells.size() == 16);
  CHECK(L.foot_rows == 5);
  CHECK(L.foot_cols == 6);
  CHECK_THROWS(build_layout(MultiplierVersion::v1, 4, 4));
  CHECK_THROWS(build_layout(MultiplierVersion::v4, 1, 4));
  CHECK(parse_version("v4") == MultiplierVersion::v4);
  CHECK_THROWS(parse_version("v9"));
}

TEST_CASE("multiplier: shares are exactly the coinciding sites") {
  // Independent walker: two roles share iff their footprint sites coincide.
  for (auto [m, n] : {std::pair{3, 3}, {4, 4}, {5, 3}, {2, 6}}) {
    auto L = build_layout(MultiplierVersion::v4, m, n);
    std::map<Site, std::vector<RoleRef>> at;
    for (auto& c : L.cells)
      for (auto& [role, _] : L.sites) at[L.site({role, c.i, c.j})].push_back({role, c.i, c.j});
    std::set<std::pair<std::string, std::string>> expect, got;
    auto key = [](const RoleRef& r) { return r.role + "(" + std::to_string(r.i) + "," + std::to_string(r.j) + ")"; };
    for (auto& [_, rs] : at) {
      CHECK(rs.size() <= 2);
      if (rs.size() == 2) expect.insert(std::minmax(key(rs[0]), key(rs[1])));
    }
    for (auto& s : L.shares) got.insert(std::minmax(key(s.a), key(s.b)));
    CHECK(got == expect);
    CHECK(L.shares.size() == size_t(2 * (m - 1) * n + (m - 1) * (n - 1)));
    for (auto& [site, _] : at) {
      CHECK(site.drow >= 0);
      CHECK(site.drow < L.foot_rows);
      CHECK(site.dcol >= 0);
      CHECK(site.dcol < L.foot_cols);
    }
  }
}

TEST_CASE("multiplier: composed model respects ranges and existing couplers") {
  Topology t = build_pegasus(16, 16);
  auto b = make(4, 4);
  CHECK(validate_ranges(b.c.model, RangeSpec::pegasus()).empty());
  for (auto& [e, _] : b.c.model.couplings) CHECK(t.has_coupler(e.first, e.second));
  CHECK(b.c.at == Offset{0, 0});
}

TEST_CASE("multiplier: witness energy is zero and decodes (2x2)") {
  auto b = make(2, 2);
  for (uint64_t A = 0; A < 4; ++A)
    for (uint64_t B = 0; B < 4; ++B) {
      SpinState s = witness_state(A, B, b.layout, b.c, builtin_gadgets());
      CHECK(std::abs(energy(b.c.model, restrict_to_model(b.c.model, s))) < 1e-6);
      auto d = decode_factors(s, b.c.varmap, 2, 2);
      CHECK(d.A == A);
      CHECK(d.B == B);
      CHECK(d.P == A * B);
      CHECK(d.ok);
    }
}

TEST_CASE("multiplier: 3x3 witness of 5 x 7") {
  auto b = make(3, 3);
  SpinState s = witness_state(5, 7, b.layout, b.c, builtin_gadgets());
  CHECK(std::abs(energy(b.c.model, restrict_to_model(b.c.model, s))) < 1e-6);
  auto d = decode_factors(s, b.c.varmap, 3, 3, 35);
  CHECK(d.P == 35);
  CHECK(d.ok);
  SpinState zero = witness_state(0, 6, b.layout, b.c, builtin_gadgets());
  CHECK(decode_factors(zero, b.c.varmap, 3, 3).P == 0);
  CHECK_THROWS(witness_state(8, 1, b.layout, b.c, builtin_gadgets()));
}

TEST_CASE("multiplier: random 4x4 witnesses") {
  auto b = make(4, 4);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    const uint64_t A = rng() % 16, B = rng() % 16;
    SpinState s = witness_state(A, B, b.layout, b.c, builtin_gadgets());
    CHECK(std::abs(energy(b.c.model, restrict_to_model(b.c.model, s))) < 1e-6);
    CHECK(decode_factors(s, b.c.varmap, 4, 4).P == A * B);
  }
}

TEST_CASE("multiplier: broken enable equivalence costs at least the gap") {
  const Gadget& g = builtin_gadgets().at("cfa_v4");
  const int en = g.spec.var_index("enable"), eo = g.spec.var_index("enable_out");
  const int n = g.spec.num_vars();
  double best = 1e300;
  for (uint32_t st = 0; st < (1u << n); ++st) {
    if (((st >> en) & 1) == ((st >> eo) & 1)) continue;
    SpinState s;
    for (int v = 0; v < n; ++v) s[v] = (st >> v) & 1 ? 1 : -1;
    best = std::min(best, energy(g.pf, s));
  }
  CHECK(best >= g.gap - 1e-6);
}

TEST_CASE("multiplier: output pins for 35 on 4x4") {
  auto b = make(4, 4);
  auto p = initialize_output(b.c, b.layout, 35, InitMode::flux_clamp);
  std::string bits;
  for (int k = 7; k >= 0; --k) bits += p.pins.at(b.c.varmap.at("P" + std::to_string(k))) > 0 ? '1' : '0';
  CHECK(bits == "00100011");
  CHECK(p.pins.size() == 8 + 4 + 4);
  for (auto& [v, f] : p.flux_biases()) CHECK(std::abs(f) == doctest::Approx(1000 * kFluxUnit));
  CHECK_THROWS(initialize_output(b.c, b.layout, 256, InitMode::fix));
}

TEST_CASE("multiplier: fix mode keeps the witness at zero") {
  auto b = make(3, 3);
  auto p = initialize_output(b.c, b.layout, 35, InitMode::fix);
  CHECK(p.scale <= 1.0);
  CHECK(validate_ranges(p.model).empty());
  SpinState s = witness_state(5, 7, b.layout, b.c, builtin_gadgets());
  SpinState free;
  for (Var v : p.model.variables()) free[v] = s.at(v);
  for (auto& [v, _] : p.pins) CHECK_FALSE(p.model.biases.count(v));
  CHECK(std::abs(energy(p.model, free)) < 1e-6);
}

TEST_CASE("multiplier: flux-soft penalizes pin violations by 2 lambda") {
  auto b = make(3, 3);
  auto p = initialize_output(b.c, b.layout, 35, InitMode::flux_soft, 10.0);
  SpinState s = restrict_to_model(p.model, witness_state(5, 7, b.layout, b.c, builtin_gadgets()));
  CHECK(std::abs(energy(p.model, s)) < 1e-6);
  const Var p0 = b.c.varmap.at("P0");
  const double base = energy(b.c.model, restrict_to_model(b.c.model, s));
  s[p0] = -s[p0];
  const double flipped = energy(b.c.model, restrict_to_model(b.c.model, s));
  CHECK(energy(p.model, s) == doctest::Approx(flipped - base + 20.0));
}

TEST_CASE("multiplier: decode") {
  auto b = make(3, 3);
  SpinState down;
  for (auto& [_, q] : b.c.varmap.signals) down[q] = -1;
  auto d = decode_factors(down, b.c.varmap, 3, 3, 35);
  CHECK(d.A == 0);
  CHECK(d.B == 0);
  CHECK(d.P == 0);
  CHECK_FALSE(d.ok);
  CHECK(decode_factors(down, b.c.varmap, 3, 3, 0).ok);
  SpinState s = witness_state(5, 7, b.layout, b.c, builtin_gadgets());
  s[b.c.varmap.at("P1")] = -s[b.c.varmap.at("P1")];
  CHECK_FALSE(decode_factors(s, b.c.varmap, 3, 3).ok);
}

TEST_CASE("multiplier: gadget library round trip and rejection") {
  const GadgetLibrary& lib = builtin_gadgets();
  auto back = gadget_library_from_json(gadget_library_to_json(lib));
  CHECK(back.at("cfa_v4").pf == lib.at("cfa_v4").pf);
  CHECK(back.at("cfa_v4").witness_table == lib.at("cfa_v4").witness_table);
  std::string text = gadget_library_to_json(lib);
  auto pos = text.find("\"gap\"");
  REQUIRE(pos != std::string::npos);
  std::string bad = text;
  bad.replace(pos, 5, "\"gap\": 3.5, \"old_gap\"");
  CHECK_THROWS(gadget_library_from_json(bad));
  CHECK_THROWS(lib.at("nope"));
}

TEST_CASE("multiplier: placement fails on a faulty grid") {
  auto L = build_layout(MultiplierVersion::v4, 3, 3);
  Topology t = build_pegasus(4, 5);
  std::set<Var> fq = {t.flat(QubitId{2, 2, Side::vertical, 0})};
  CHECK_THROWS(compose(L, builtin_gadgets(), apply_fault_mask(t, fq, {})));
  CHECK_THROWS(compose(L, builtin_gadgets(), build_pegasus(3, 5)));
  Topology big = apply_fault_mask(build_pegasus(8, 8), fq, {});
  auto c = compose(L, builtin_gadgets(), big);
  CHECK(region_clean(big, L.foot_rows, L.foot_cols, required_couplers(L, builtin_gadgets(), big), c.at));
  for (auto& [_, q] : c.varmap.signals) CHECK_FALSE(fq.count(q));
}
