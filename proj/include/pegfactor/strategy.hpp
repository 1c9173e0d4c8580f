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
#include <optional>
#include <string>
#include <vector>

#include "pegfactor/multiplier.hpp"
#include "pegfactor/sampler.hpp"

namespace pegfactor {

// Pins the sampler must hold fixed: only flux-clamp hands them over.
SpinState sampler_pins(const PreparedProblem& p);

// Energy at most 1e-9 and the decoded factors multiply to the target.
bool is_verified_ground(const PreparedProblem& p, const SpinState& s, double energy);

// One candidate anchor with the schedule that produced it.
struct Candidate {
  SpinState state;
  double energy = 0;
  double sp = 0, tp = 0;
  long order = 0;  // production order, earlier is smaller
};

enum class AnchorPolicy {
  later_pause,    // lowest energy, ties go to the later pause point
  global_lowest,  // lowest energy, ties go to the earliest candidate
};

// offset in [0, 1): 0 picks the lowest energy; larger values pick the lowest
// candidate at or above lowest + offset * (reference - lowest).
const Candidate& select_anchor(const std::vector<Candidate>& c, AnchorPolicy policy, double offset = 0.0,
                               std::optional<double> reference = std::nullopt);

// Lowest-energy sample of a set as a candidate.
Candidate best_of(const SampleSet& s, long order);

struct Attempt {
  std::string phase;  // "forward", "reverse"
  double tp = 0, sp = 0;
  double min_energy = 0;
  int zeros = 0;       // occurrences with energy <= 1e-9
  int delta_ham = -1;  // reverse: distance from the start state to this attempt's best
  bool solved = false;
};

struct FtrConfig {
  std::vector<double> forward_sp = {0.33, 0.34, 0.35, 0.36, 0.37, 0.38, 0.39, 0.40};
  double forward_ta_us = 10, forward_tp_us = 100;
  std::vector<double> reverse_sp = {0.46, 0.44, 0.42, 0.40, 0.38, 0.36};
  double reverse_ta_us = 10, reverse_tp_us = 100;
  int reads = 1000;
  uint64_t seed = 1;
  AnnealSchedule base;  // sweeps_per_us and temperature parameters
};

struct FtrOutcome {
  bool solved = false;
  std::vector<Attempt> attempts;
  Candidate best;  // after completion with the pins
  Decoded decoded;
};

FtrOutcome forward_then_reverse(const PreparedProblem& p, const FtrConfig& cfg);

struct IrvConfig {
  enum Variant { original, long_pause } variant = original;
  std::vector<double> pause_set = {1, 10, 30, 50, 100};
  std::vector<double> sp_set = {0.46, 0.45, 0.44, 0.43, 0.42, 0.41, 0.40, 0.39, 0.38, 0.37, 0.36, 0.35, 0.34, 0.33};
  int max_iterations = 8;
  int reads_per_attempt = 100;
  int initial_reads = 1000;
  double ta_us = 10;  // reverse ramp
  AnnealSchedule initial_forward;  // no pause
  double anchor_offset = 0.0;
  uint64_t seed = 1;

  static IrvConfig defaults(Variant v);
};

struct IrvRow {
  int iteration = 0;
  double tp = 0, sp = 0;
  double min_pf = 0;      // anchor energy
  double min_pf_new = 0;  // best energy of the attempt
  int delta_ham = -1;     // anchor to the attempt's best
  std::optional<int> ham, ham_new;  // distances to a known solution
  int zeros = 0;
  bool accepted = false;
};

struct IrvTrace {
  std::vector<IrvRow> rows;
  std::vector<double> anchor_energies;  // one per accepted iteration, iteration 0 first
  bool solved = false;
  int iterations = 0;
  Candidate final_state;
  Decoded decoded;
  std::string outcome() const { return solved ? "solved" : "exhausted"; }
};

// `reference` is an optional known solution for the HAM columns.
IrvTrace irv_run(const PreparedProblem& p, const IrvConfig& cfg, const std::optional<SpinState>& reference = {});

}  // namespace pegfactor
