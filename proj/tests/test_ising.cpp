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

#include "doctest.h"
#include "pegfactor/ising.hpp"
#include "pegfactor/io.hpp"

using namespace pegfactor;

namespace {

IsingModel random_model(std::mt19937_64& rng, int n, double density = 0.5) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::bernoulli_distribution keep(density);
  IsingModel m;
  m.offset = u(rng);
  for (int i = 0; i < n; ++i) m.biases[i] = u(rng);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (keep(rng)) m.add_coupling(i, j, u(rng));
  return m;
}

SpinState random_state(std::mt19937_64& rng, int n) {
  SpinState s;
  for (int i = 0; i < n; ++i) s[i] = (rng() & 1) ? 1 : -1;
  return s;
}

}  // namespace

TEST_CASE("ising: zero model has zero energy") {
  IsingModel m;
  m.biases[3] = 0;
  m.add_coupling(3, 5, 0);
  CHECK(energy(m, {{3, 1}, {5, -1}}) == 0.0);
}

TEST_CASE("ising: single chain link") {
  IsingModel m = chain_penalty({0, 1});
  CHECK(energy(m, {{0, 1}, {1, 1}}) == 0.0);
  CHECK(energy(m, {{0, -1}, {1, -1}}) == 0.0);
  CHECK(energy(m, {{0, 1}, {1, -1}}) == 4.0);
}

TEST_CASE("ising: energy matches term-by-term recomputation") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    IsingModel m = random_model(rng, 10);
    SpinState s = random_state(rng, 10);
    double e = m.offset;
    for (auto& [v, h] : m.biases) e += h * s[v];
    for (auto& [k, j] : m.couplings) e += j * s[k.first] * s[k.second];
    CHECK(energy(m, s) == doctest::Approx(e).epsilon(1e-12));
    DenseIsing d(m);
    std::vector<signed char> z;
    for (Var v : d.vars) z.push_back(static_cast<signed char>(s[v]));
    CHECK(d.energy(z) == energy(m, s));
  }
}

TEST_CASE("ising: missing variable names it") {
  IsingModel m;
  m.biases[42] = 1;
  CHECK_THROWS_WITH_AS(energy(m, {}), doctest::Contains("42"), std::out_of_range);
}

TEST_CASE("ising: sum is pointwise and linear in energy") {
  IsingModel a = chain_penalty({0, 1}), b = chain_penalty({1, 2});
  CHECK(sum({a}) == a);
  IsingModel s = sum({a, b});
  CHECK(s.offset == 4.0);
  CHECK(s.biases.at(1) == 0.0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    IsingModel x = random_model(rng, 8), y = random_model(rng, 8);
    x.gap_hint = 2;
    y.gap_hint = 1.5;
    SpinState st = random_state(rng, 8);
    IsingModel z = sum({x, y});
    CHECK(energy(z, st) == doctest::Approx(energy(x, st) + energy(y, st)).epsilon(1e-12));
    CHECK(*z.gap_hint == 1.5);
  }
}

TEST_CASE("ising: fix_variables worked example") {
  // P = 2 + 4 x1 + x2 + x1 x2 with x2 = +1 gives 3 + 5 x1, rescaled by 4/5.
  IsingModel p;
  p.offset = 2;
  p.biases = {{1, 4}, {2, 1}};
  p.add_coupling(1, 2, 1);
  auto r = fix_variables(p, {{2, 1}});
  CHECK(std::abs(r.scale - 0.8) < 1e-12);
  CHECK(std::abs(r.model.offset - 12.0 / 5.0) < 1e-12);
  CHECK(std::abs(r.model.biases.at(1) - 4.0) < 1e-12);
  CHECK(r.model.biases.size() == 1);
  CHECK(r.model.couplings.empty());
}

TEST_CASE("ising: fix nothing is the identity") {
  std::mt19937_64 rng(5);
  IsingModel m = random_model(rng, 6);
  auto r = fix_variables(m, {});
  CHECK(r.scale == 1.0);
  CHECK(r.model == m);
}

TEST_CASE("ising: fix_variables preserves every completion up to the scale") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    IsingModel m = random_model(rng, 12, 0.6);
    for (auto& [v, h] : m.biases) h *= 4;  // push some reduced biases out of range
    SpinState fixed;
    for (int v = 0; v < 12; ++v)
      if (rng() % 3 == 0) fixed[v] = (rng() & 1) ? 1 : -1;
    auto r = fix_variables(m, fixed);
    CHECK(r.scale <= 1.0);
    CHECK(validate_ranges(r.model).empty());
    std::vector<int> free;
    for (int v = 0; v < 12; ++v)
      if (!fixed.count(v)) free.push_back(v);
    for (uint32_t bits = 0; bits < (1u << free.size()); ++bits) {
      SpinState full = fixed, part;
      for (size_t k = 0; k < free.size(); ++k) full[free[k]] = part[free[k]] = (bits >> k) & 1 ? 1 : -1;
      for (Var v : r.model.variables()) CHECK(part.count(v));
      CHECK(energy(r.model, part) == doctest::Approx(r.scale * energy(m, full)).epsilon(1e-10));
    }
  }
}

TEST_CASE("ising: validate_ranges") {
  IsingModel m;
  m.biases[0] = 3.9;
  m.add_coupling(0, 1, -2);
  CHECK(validate_ranges(m).empty());
  m.biases[0] = 4.5;
  auto v = validate_ranges(m);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == RangeViolation::bias);
  CHECK(v[0].value == 4.5);
  m.biases[0] = 0;
  m.couplings[make_edge(0, 1)] = 1.5;
  CHECK(validate_ranges(m).size() == 1);
  CHECK(validate_ranges(m, RangeSpec::chimera()).size() == 1);
}

TEST_CASE("ising: chain penalties") {
  for (int k = 1; k <= 6; ++k) {
    std::vector<Var> path;
    for (int i = 0; i <= k; ++i) path.push_back(10 + i);
    IsingModel c = chain_penalty(path, 2.0);
    SpinState s;
    for (Var v : path) s[v] = -1;
    CHECK(energy(c, s) == 0.0);
    for (int broken = 1; broken <= k; ++broken) {
      // Flip a suffix so that exactly one link breaks, then alternate to break more.
      SpinState t;
      for (int i = 0; i <= k; ++i) t[path[i]] = (i < broken && i % 2 == 1) ? 1 : -1;
      int links = 0;
      for (int i = 0; i < k; ++i) links += t[path[i]] != t[path[i + 1]];
      CHECK(energy(c, t) == 4.0 * links);
    }
  }
  IsingModel half = chain_penalty({0, 1}, 0.5);
  CHECK(energy(half, {{0, 1}, {1, -1}}) == 1.0);
  CHECK_THROWS(chain_penalty({0, 1}, 2.5));
  CHECK_THROWS(chain_penalty({0, 1}, 0));
}

TEST_CASE("ising: json round trip is bit exact") {
  std::mt19937_64 rng(23);
  IsingModel m = random_model(rng, 9);
  m.gap_hint = 1.0 / 3.0;
  IsingModel back = model_from_json(json::parse(to_json(m).dump()));
  CHECK(back == m);
}

TEST_CASE("ising: relabel") {
  IsingModel m = chain_penalty({0, 1});
  IsingModel r = relabel(m, {{0, 7}, {1, 3}});
  CHECK(r.couplings.count(make_edge(3, 7)) == 1);
  CHECK_THROWS(relabel(m, {{0, 7}}));
}
