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

#include <cstdlib>
#include <random>

#include "doctest.h"
#include "pegfactor/analysis.hpp"
#include "pegfactor/multiplier.hpp"
#include "pegfactor/sampler.hpp"

using namespace pegfactor;

namespace {

IsingModel glass(uint64_t seed, int n, double density = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::bernoulli_distribution keep(density);
  IsingModel m;
  for (int i = 0; i < n; ++i) m.biases[i] = 0.3 * u(rng);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (keep(rng)) m.add_coupling(i, j, u(rng) < 0 ? -1.0 : 1.0);
  return m;
}

// Second enumerator: plain binary counting with direct energy evaluation.
double naive_min(const IsingModel& m, int n, int* count) {
  double best = 1e300;
  *count = 0;
  for (uint32_t st = 0; st < (1u << n); ++st) {
    SpinState s;
    for (int v = 0; v < n; ++v) s[v] = (st >> v) & 1 ? 1 : -1;
    const double e = energy(m, s);
    if (e < best - 1e-9) {
      best = e;
      *count = 1;
    } else if (std::abs(e - best) <= 1e-9) {
      ++*count;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("sampler: temperature map") {
  CHECK(temperature(1.0) == 0.0);
  CHECK(temperature(0.05) == doctest::Approx(0.95 / 0.05));
  CHECK(temperature(0.0) == doctest::Approx(1.0 / 0.05));
  CHECK(temperature(0.5, 2.0) == doctest::Approx(2.0));
  double prev = 1e300;
  for (int k = 0; k <= 1000; ++k) {
    const double t = temperature(k / 1000.0);
    CHECK(t <= prev);
    prev = t;
  }
}

TEST_CASE("sampler: sweep schedule lengths") {
  AnnealSchedule f;
  f.ta_us = 10;
  f.tp_us = 100;
  f.sp = 0.4;
  f.sweeps_per_us = 10;
  auto s = sweep_schedule(f);
  CHECK(s.size() == 40 + 1000 + 60);
  for (size_t k = 40; k < 1040; ++k) CHECK(s[k] == doctest::Approx(0.4));
  for (size_t k = 1; k < 40; ++k) CHECK(s[k] >= s[k - 1]);
  AnnealSchedule r = f;
  r.direction = AnnealSchedule::reverse;
  auto rs = sweep_schedule(r);
  CHECK(rs.size() == 60 + 1000 + 60);
  CHECK(rs.front() > 0.4);
  r.sp = 1.0;
  r.tp_us = 0;
  CHECK(sweep_schedule(r).empty());
  AnnealSchedule bad = f;
  bad.sp = 1.5;
  CHECK_THROWS(bad.check());
  bad = f;
  bad.tp_us = -1;
  CHECK_THROWS(bad.check());
}

TEST_CASE("sampler: brute force ground states") {
  auto g = brute_force_ground_states(chain_penalty({0, 1}));
  CHECK(g.energy == 0.0);
  CHECK(g.states.size() == 2);
  for (auto& s : g.states) CHECK(s.at(0) == s.at(1));

  for (uint64_t seed = 1; seed <= 5; ++seed) {
    IsingModel m = glass(seed, 12, 0.5);
    int count = 0;
    const double e = naive_min(m, 12, &count);
    auto b = brute_force_ground_states(m);
    CHECK(b.energy == doctest::Approx(e).epsilon(1e-12));
    CHECK(int(b.states.size()) == count);
  }
  CHECK_THROWS(brute_force_ground_states(glass(1, 30), 24));
}

TEST_CASE("sampler: CFA gadget has 16 ground core assignments") {
  const Gadget& g = builtin_gadgets().at("cfa_v4");
  auto b = brute_force_ground_states(g.pf);
  CHECK(std::abs(b.energy) < 1e-6);
  std::set<std::vector<int>> cores;
  for (auto& s : b.states) {
    std::vector<int> core;
    for (size_t k = 0; k < g.spec.decision_vars.size(); ++k) core.push_back(s.at(int(k)));
    cores.insert(core);
  }
  CHECK(cores.size() == 16);
}

TEST_CASE("sampler: brute force respects pins") {
  IsingModel m = chain_penalty({0, 1, 2});
  auto b = brute_force_ground_states(m, 24, {{0, 1}});
  REQUIRE(b.states.size() == 1);
  CHECK(b.states[0].at(2) == 1);
}

TEST_CASE("sampler: forward anneal is deterministic and self-consistent") {
  IsingModel m = glass(3, 40);
  AnnealSchedule s;
  s.tp_us = 2;
  s.sp = 0.4;
  auto a = forward_anneal(m, s, 64, 5);
  auto b = forward_anneal(m, s, 64, 5);
  REQUIRE(a.samples.size() == b.samples.size());
  for (size_t k = 0; k < a.samples.size(); ++k) {
    CHECK(a.samples[k].spins == b.samples[k].spins);
    CHECK(a.samples[k].energy == b.samples[k].energy);
    CHECK(a.samples[k].occurrences == b.samples[k].occurrences);
  }
  int total = 0;
  for (size_t k = 0; k < a.samples.size(); ++k) {
    total += a.samples[k].occurrences;
    CHECK(a.samples[k].energy == energy(m, a.state(k)));
    if (k) CHECK(a.samples[k - 1].energy <= a.samples[k].energy);
  }
  CHECK(total == 64);
}

TEST_CASE("sampler: thread count does not change results") {
  IsingModel m = glass(9, 30);
  AnnealSchedule s;
  auto a = forward_anneal(m, s, 40, 77);
  setenv("PEGFACTOR_THREADS", "1", 1);
  auto b = forward_anneal(m, s, 40, 77);
  unsetenv("PEGFACTOR_THREADS");
  REQUIRE(a.samples.size() == b.samples.size());
  for (size_t k = 0; k < a.samples.size(); ++k) CHECK(a.samples[k].spins == b.samples[k].spins);
}

TEST_CASE("sampler: final states are single-flip local minima") {
  IsingModel m = glass(4, 50);
  AnnealSchedule s;
  s.ta_us = 1;
  auto set = forward_anneal(m, s, 50, 1);
  for (size_t k = 0; k < set.samples.size(); ++k) {
    SpinState st = set.state(k);
    const double e = energy(m, st);
    for (auto& [v, z] : st) {
      SpinState f = st;
      f[v] = -z;
      CHECK(energy(m, f) >= e - 1e-9);
    }
  }
}

TEST_CASE("sampler: pinned qubits never flip") {
  IsingModel m = glass(6, 20);
  SpinState pins = {{0, 1}, {5, -1}, {7, 1}};
  auto set = forward_anneal(m, AnnealSchedule{}, 100, 3, pins);
  for (size_t k = 0; k < set.samples.size(); ++k) {
    SpinState st = set.state(k);
    for (auto& [v, z] : pins) CHECK(st.at(v) == z);
    CHECK(set.samples[k].energy == energy(m, st));
  }
  AnnealSchedule r;
  r.direction = AnnealSchedule::reverse;
  r.sp = 0.2;
  SpinState init;
  for (int v = 0; v < 20; ++v) init[v] = 1;
  init[5] = -1;
  auto rs = reverse_anneal(m, init, r, 30, 3, pins);
  for (size_t k = 0; k < rs.samples.size(); ++k)
    for (auto& [v, z] : pins) CHECK(rs.state(k).at(v) == z);
}

TEST_CASE("sampler: reverse with no excursion returns the start") {
  IsingModel m = glass(2, 25);
  SpinState init;
  std::mt19937_64 rng(1);
  for (int v = 0; v < 25; ++v) init[v] = (rng() & 1) ? 1 : -1;
  AnnealSchedule r;
  r.direction = AnnealSchedule::reverse;
  r.sp = 1.0;
  r.tp_us = 0;
  auto set = reverse_anneal(m, init, r, 10, 1);
  REQUIRE(set.samples.size() == 1);
  CHECK(set.samples[0].occurrences == 10);
  CHECK(set.state(0) == init);
}

TEST_CASE("sampler: longer pauses wander further from the start") {
  IsingModel m = glass(12, 60, 0.15);
  AnnealSchedule f;
  auto base = forward_anneal(m, f, 1, 2);
  SpinState init = base.state(0);
  double prev = -1;
  for (double tp : {0.0, 0.5, 2.0, 8.0}) {
    AnnealSchedule r;
    r.direction = AnnealSchedule::reverse;
    r.sp = 0.6;
    r.ta_us = 1;
    r.tp_us = tp;
    auto set = reverse_anneal(m, init, r, 300, 9);
    double mean = 0;
    for (size_t k = 0; k < set.samples.size(); ++k) mean += double(set.samples[k].occurrences) * hamming(init, set.state(k));
    mean /= set.num_reads;
    CHECK(mean > prev);
    prev = mean;
  }
}

TEST_CASE("sampler: reverse from a witness mostly stays at zero") {
  auto L = build_layout(MultiplierVersion::v4, 3, 3);
  auto c = compose(L, builtin_gadgets(), build_pegasus(16, 16));
  auto p = initialize_output(c, L, 35, InitMode::flux_clamp);
  SpinState w = witness_state(5, 7, L, c, builtin_gadgets());
  SpinState start;
  for (Var v : p.model.variables()) start[v] = w.at(v);
  AnnealSchedule r;
  r.direction = AnnealSchedule::reverse;
  r.sp = 0.9;
  r.ta_us = 1;
  auto set = reverse_anneal(p.model, start, r, 200, 4, p.pins);
  CHECK(set.count_at_most(1e-9) >= 150);
}

TEST_CASE("sampler: read seeds differ per read") {
  CHECK(read_seed(1, 0) != read_seed(1, 1));
  CHECK(read_seed(1, 0) != read_seed(2, 0));
  CHECK(read_seed(5, 3) == read_seed(5, 3));
}
