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

#include "pegfactor/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>

namespace pegfactor {

void AnnealSchedule::check() const {
  if (!(sp >= 0 && sp <= 1)) throw std::invalid_argument("pause point must lie in [0, 1]");
  if (!(ta_us >= 0) || !(tp_us >= 0)) throw std::invalid_argument("anneal and pause times must be non-negative");
  if (!(sweeps_per_us > 0)) throw std::invalid_argument("sweeps per microsecond must be positive");
  if (!(kappa >= 0) || !(s_floor > 0 && s_floor <= 1)) throw std::invalid_argument("bad temperature parameters");
}

double temperature(double s, double kappa, double s_floor) {
  s = std::clamp(s, 0.0, 1.0);
  return kappa * (1.0 - s) / std::max(s, s_floor);
}

std::vector<double> sweep_schedule(const AnnealSchedule& sc) {
  sc.check();
  auto count = [&](double us) { return int(std::lround(us * sc.sweeps_per_us)); };
  std::vector<double> s;
  if (sc.direction == AnnealSchedule::reverse && sc.sp >= 1.0) return s;
  const int down = count(sc.direction == AnnealSchedule::forward ? sc.sp * sc.ta_us : (1 - sc.sp) * sc.ta_us);
  const int pause = count(sc.tp_us);
  const int up = count((1 - sc.sp) * sc.ta_us);
  for (int k = 0; k < down; ++k)
    s.push_back(sc.direction == AnnealSchedule::forward ? sc.sp * (k + 1) / down : 1 - (1 - sc.sp) * (k + 1) / down);
  s.insert(s.end(), pause, sc.sp);
  for (int k = 0; k < up; ++k) s.push_back(sc.sp + (1 - sc.sp) * (k + 1) / up);
  return s;
}

SpinState SampleSet::state(size_t k) const {
  SpinState s;
  for (size_t i = 0; i < vars.size(); ++i) s[vars[i]] = samples.at(k).spins[i];
  return s;
}

double SampleSet::min_energy() const {
  if (samples.empty()) throw std::logic_error("empty sample set");
  return samples.front().energy;
}

int SampleSet::count_at_most(double e) const {
  int c = 0;
  for (auto& s : samples)
    if (s.energy <= e) c += s.occurrences;
  return c;
}

std::vector<Var> sampler_vars(const IsingModel& m, const SpinState& pins) {
  std::vector<Var> v = m.variables();
  for (auto& [q, _] : pins) v.push_back(q);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

namespace {

// Model padded with the pinned variables so the dense index covers them.
DenseIsing dense_with(const IsingModel& m, const SpinState& pins) {
  IsingModel p = m;
  for (auto& [q, _] : pins) p.biases.emplace(q, 0.0);
  return DenseIsing(p);
}

std::vector<char> pinned_mask(const DenseIsing& d, const SpinState& pins, std::vector<signed char>* z = nullptr) {
  std::vector<char> mask(d.vars.size(), 0);
  for (auto& [q, v] : pins) {
    if (v != 1 && v != -1) throw std::invalid_argument("pin value must be +1 or -1");
    const int i = d.index.at(q);
    mask[i] = 1;
    if (z) (*z)[i] = static_cast<signed char>(v);
  }
  return mask;
}

uint64_t splitmix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Anneal {
  const DenseIsing& d;
  const std::vector<char>& pinned;
  const std::vector<double>& s;
  const AnnealSchedule& sc;

  void sweep(std::vector<signed char>& z, double tau, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (size_t i = 0; i < z.size(); ++i) {
      if (pinned[i]) continue;
      const double de = d.delta(z, int(i));
      bool take;
      if (tau <= 0) take = de < 0;
      else take = de <= 0 || u(rng) < std::exp(-de / tau);
      if (take) z[i] = static_cast<signed char>(-z[i]);
    }
  }
  // Zero-temperature sweeps until no single flip lowers the energy.
  void quench(std::vector<signed char>& z) const {
    for (int round = 0; round < 100000; ++round) {
      bool moved = false;
      for (size_t i = 0; i < z.size(); ++i)
        if (!pinned[i] && d.delta(z, int(i)) < 0) {
          z[i] = static_cast<signed char>(-z[i]);
          moved = true;
        }
      if (!moved) return;
    }
  }
  void run(std::vector<signed char>& z, std::mt19937_64& rng) const {
    for (double si : s) sweep(z, temperature(si, sc.kappa, sc.s_floor), rng);
    quench(z);
  }
};

template <class Init>
SampleSet anneal(const IsingModel& m, const AnnealSchedule& sc, int num_reads, uint64_t seed, const SpinState& pins,
                 Init init) {
  if (num_reads < 0) throw std::invalid_argument("negative read count");
  const DenseIsing d = dense_with(m, pins);
  std::vector<signed char> base(d.vars.size(), -1);
  const auto pinned = pinned_mask(d, pins, &base);
  const auto s = sweep_schedule(sc);
  const bool idle = sc.direction == AnnealSchedule::reverse && s.empty();
  Anneal a{d, pinned, s, sc};

  std::vector<std::vector<signed char>> out(num_reads);
  auto work = [&](int first, int step) {
    for (int r = first; r < num_reads; r += step) {
      std::mt19937_64 rng(read_seed(seed, r));
      std::vector<signed char> z = base;
      init(z, pinned, rng);
      if (!idle) a.run(z, rng);
      out[r] = std::move(z);
    }
  };
  const int nt = std::max(1, std::min(worker_threads(), num_reads));
  if (nt == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work, t, nt);
    for (auto& th : pool) th.join();
  }

  SampleSet ss;
  ss.vars = d.vars;
  ss.schedule = sc;
  ss.seed = seed;
  ss.num_reads = num_reads;
  std::map<std::vector<signed char>, size_t> seen;
  for (int r = 0; r < num_reads; ++r) {
    auto [it, fresh] = seen.emplace(out[r], ss.samples.size());
    if (fresh) ss.samples.push_back(Sample{out[r], d.energy(out[r]), 1, r});
    else ++ss.samples[it->second].occurrences;
  }
  std::sort(ss.samples.begin(), ss.samples.end(), [](const Sample& x, const Sample& y) {
    return x.energy != y.energy ? x.energy < y.energy : x.first_read < y.first_read;
  });
  return ss;
}

}  // namespace

uint64_t read_seed(uint64_t seed, uint64_t read) { return splitmix(splitmix(seed) ^ splitmix(read + 0x51ed2701ULL)); }

int worker_threads() {
  if (const char* e = std::getenv("PEGFACTOR_THREADS")) {
    const int n = std::atoi(e);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SampleSet forward_anneal(const IsingModel& m, const AnnealSchedule& sched, int num_reads, uint64_t seed,
                         const SpinState& pins) {
  if (sched.direction != AnnealSchedule::forward) throw std::invalid_argument("forward_anneal needs a forward schedule");
  return anneal(m, sched, num_reads, seed, pins,
                [](std::vector<signed char>& z, const std::vector<char>& pinned, std::mt19937_64& rng) {
                  for (size_t i = 0; i < z.size(); ++i)
                    if (!pinned[i]) z[i] = (rng() >> 63) ? 1 : -1;
                });
}

SampleSet reverse_anneal(const IsingModel& m, const SpinState& initial, const AnnealSchedule& sched, int num_reads,
                         uint64_t seed, const SpinState& pins) {
  if (sched.direction != AnnealSchedule::reverse) throw std::invalid_argument("reverse_anneal needs a reverse schedule");
  const auto vars = sampler_vars(m, pins);
  std::vector<signed char> start(vars.size());
  for (size_t i = 0; i < vars.size(); ++i) {
    auto it = initial.find(vars[i]);
    if (it == initial.end()) throw std::invalid_argument("initial state misses variable " + std::to_string(vars[i]));
    start[i] = static_cast<signed char>(it->second);
  }
  return anneal(m, sched, num_reads, seed, pins,
                [&](std::vector<signed char>& z, const std::vector<char>& pinned, std::mt19937_64&) {
                  for (size_t i = 0; i < z.size(); ++i)
                    if (!pinned[i]) z[i] = start[i];
                });
}

GroundStates brute_force_ground_states(const IsingModel& m, int cap, const SpinState& pins, double tol) {
  const DenseIsing d = dense_with(m, pins);
  std::vector<signed char> z(d.vars.size(), -1);
  const auto pinned = pinned_mask(d, pins, &z);
  std::vector<int> free;
  for (size_t i = 0; i < z.size(); ++i)
    if (!pinned[i]) free.push_back(int(i));
  if (int(free.size()) > cap)
    throw std::invalid_argument("brute force over " + std::to_string(free.size()) + " free variables exceeds the cap of " +
                                std::to_string(cap));
  // Gray-code walk with incremental energies; candidates are re-evaluated exactly.
  const double slack = 1e-6;
  double e = d.energy(z), best = e;
  std::vector<std::vector<signed char>> cand{z};
  const uint64_t total = uint64_t(1) << free.size();
  for (uint64_t k = 1; k < total; ++k) {
    const int bit = __builtin_ctzll(k);
    const int i = free[bit];
    e += d.delta(z, i);
    z[i] = static_cast<signed char>(-z[i]);
    if (e < best - slack) {
      best = e;
      cand.clear();
    }
    if (e <= best + slack) {
      best = std::min(best, e);
      cand.push_back(z);
    }
  }
  GroundStates g;
  g.energy = std::numeric_limits<double>::infinity();
  for (auto& c : cand) g.energy = std::min(g.energy, d.energy(c));
  for (auto& c : cand)
    if (d.energy(c) <= g.energy + tol) {
      SpinState s;
      for (size_t i = 0; i < c.size(); ++i) s[d.vars[i]] = c[i];
      g.states.push_back(std::move(s));
    }
  return g;
}

}  // namespace pegfactor
