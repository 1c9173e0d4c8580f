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
#include <string>
#include <vector>

#include "pegfactor/ising.hpp"

namespace pegfactor {

// Classical stand-in for the anneal: Metropolis at temperature tau(s).
struct AnnealSchedule {
  enum Direction { forward, reverse } direction = forward;
  double ta_us = 100.0;  // ramp time; slow ramps help single-flip dynamics more than pauses
  double tp_us = 0.0;   // pause length
  double sp = 0.5;      // pause point (forward) or turning point (reverse)
  double sweeps_per_us = 10.0;
  double kappa = 1.0;
  double s_floor = 0.05;

  void check() const;  // throws std::invalid_argument
};

// kappa (1 - s) / max(s, s_floor)
double temperature(double s, double kappa = 1.0, double s_floor = 0.05);

// Anneal fraction of every sweep, in order.  Ramps are sampled at the end of
// each sweep interval so forward and reverse runs both finish at s = 1.
std::vector<double> sweep_schedule(const AnnealSchedule& sched);

struct Sample {
  std::vector<signed char> spins;  // aligned with SampleSet::vars
  double energy = 0;
  int occurrences = 0;
  int first_read = 0;  // lowest read index that produced this state
};

struct SampleSet {
  std::vector<Var> vars;
  std::vector<Sample> samples;  // sorted by energy, then first_read
  AnnealSchedule schedule;
  uint64_t seed = 0;
  int num_reads = 0;

  SpinState state(size_t k) const;
  double min_energy() const;
  int count_at_most(double e) const;  // occurrences with energy <= e
};

// Model variables plus pins, in the order the sampler stores them.
std::vector<Var> sampler_vars(const IsingModel& m, const SpinState& pins);

struct GroundStates {
  double energy = 0;
  std::vector<SpinState> states;
};
// Exact minima; pinned variables stay fixed.  Throws std::invalid_argument
// above `cap` free variables.
GroundStates brute_force_ground_states(const IsingModel& m, int cap = 24, const SpinState& pins = {},
                                       double tol = 1e-9);

// Seed of read r; reads are independent so any thread layout gives the same set.
uint64_t read_seed(uint64_t seed, uint64_t read);

// PEGFACTOR_THREADS when set, otherwise the hardware count.
int worker_threads();

SampleSet forward_anneal(const IsingModel& m, const AnnealSchedule& sched, int num_reads, uint64_t seed,
                         const SpinState& pins = {});
// With sp = 1 there is no excursion and every read returns `initial`.
SampleSet reverse_anneal(const IsingModel& m, const SpinState& initial, const AnnealSchedule& sched, int num_reads,
                         uint64_t seed, const SpinState& pins = {});

}  // namespace pegfactor
