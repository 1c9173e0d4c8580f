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

#include "pegfactor/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pegfactor/analysis.hpp"

namespace pegfactor {

namespace {

constexpr double kGroundTol = 1e-9;
// Energies closer than this are equal; sums of gadget terms carry rounding noise.
constexpr double kEnergyTol = 1e-9;

uint64_t derive(uint64_t seed, uint64_t a, uint64_t b) { return read_seed(read_seed(seed, a), b); }

SpinState restrict_to(const SpinState& s, const SpinState& keys) {
  SpinState out;
  for (auto& [v, _] : keys) out[v] = s.at(v);
  return out;
}

// First verified ground state of a set, if any.
std::optional<Candidate> find_ground(const PreparedProblem& p, const SampleSet& s, double sp, double tp, long order) {
  for (size_t k = 0; k < s.samples.size() && s.samples[k].energy <= kGroundTol; ++k) {
    SpinState st = p.complete(s.state(k));
    if (is_verified_ground(p, st, s.samples[k].energy)) return Candidate{st, s.samples[k].energy, sp, tp, order};
  }
  return std::nullopt;
}

AnnealSchedule schedule(const AnnealSchedule& base, AnnealSchedule::Direction d, double ta, double tp, double sp) {
  AnnealSchedule s = base;
  s.direction = d;
  s.ta_us = ta;
  s.tp_us = tp;
  s.sp = sp;
  return s;
}

}  // namespace

SpinState sampler_pins(const PreparedProblem& p) { return p.mode == InitMode::flux_clamp ? p.pins : SpinState{}; }

bool is_verified_ground(const PreparedProblem& p, const SpinState& s, double energy) {
  if (energy > kGroundTol) return false;
  return decode_factors(p.complete(s), p.varmap, p.m, p.n, p.target).ok;
}

const Candidate& select_anchor(const std::vector<Candidate>& c, AnchorPolicy policy, double offset,
                               std::optional<double> reference) {
  if (c.empty()) throw std::invalid_argument("select_anchor: no candidates");
  if (offset < 0 || offset >= 1) throw std::invalid_argument("anchor offset must lie in [0, 1)");
  double lowest = c.front().energy;
  for (auto& x : c) lowest = std::min(lowest, x.energy);
  double floor = lowest;
  if (offset > 0 && reference && *reference > lowest) floor = lowest + offset * (*reference - lowest);
  auto better = [&](const Candidate& a, const Candidate& b) {  // a preferred over b
    if (std::abs(a.energy - b.energy) > kEnergyTol) return a.energy < b.energy;
    if (policy == AnchorPolicy::later_pause && a.sp != b.sp) return a.sp > b.sp;
    return a.order < b.order;
  };
  const Candidate* best = nullptr;
  for (auto& x : c)
    if (x.energy >= floor - 1e-12 && (!best || better(x, *best))) best = &x;
  return *best;
}

Candidate best_of(const SampleSet& s, long order) {
  if (s.samples.empty()) throw std::invalid_argument("best_of: empty sample set");
  return Candidate{s.state(0), s.samples[0].energy, s.schedule.sp, s.schedule.tp_us, order};
}

FtrOutcome forward_then_reverse(const PreparedProblem& p, const FtrConfig& cfg) {
  FtrOutcome out;
  const SpinState pins = sampler_pins(p);
  auto fsp = cfg.forward_sp;
  std::sort(fsp.begin(), fsp.end());
  auto rsp = cfg.reverse_sp;
  std::sort(rsp.rbegin(), rsp.rend());
  std::optional<Candidate> best;
  long order = 0;
  auto finish = [&](const Candidate& c) {
    out.solved = true;
    out.best = c;
    out.decoded = decode_factors(c.state, p.varmap, p.m, p.n, p.target);
    out.attempts.back().solved = true;
  };
  for (size_t k = 0; k < fsp.size(); ++k) {
    auto sc = schedule(cfg.base, AnnealSchedule::forward, cfg.forward_ta_us, cfg.forward_tp_us, fsp[k]);
    SampleSet s = forward_anneal(p.model, sc, cfg.reads, derive(cfg.seed, 0, k), pins);
    out.attempts.push_back({"forward", sc.tp_us, sc.sp, s.min_energy(), s.count_at_most(kGroundTol), -1, false});
    if (auto g = find_ground(p, s, sc.sp, sc.tp_us, order)) {
      finish(*g);
      return out;
    }
    Candidate c = best_of(s, order++);
    c.state = p.complete(c.state);
    // Ascending pause points: a tie goes to the later one.
    if (!best || c.energy <= best->energy + kEnergyTol) best = c;
  }
  if (!best) return out;
  out.best = *best;
  for (size_t k = 0; k < rsp.size(); ++k) {
    auto sc = schedule(cfg.base, AnnealSchedule::reverse, cfg.reverse_ta_us, cfg.reverse_tp_us, rsp[k]);
    SampleSet s = reverse_anneal(p.model, best->state, sc, cfg.reads, derive(cfg.seed, 1, k), pins);
    Candidate c = best_of(s, order++);
    c.state = p.complete(c.state);
    out.attempts.push_back(
        {"reverse", sc.tp_us, sc.sp, s.min_energy(), s.count_at_most(kGroundTol), hamming(best->state, c.state), false});
    if (auto g = find_ground(p, s, sc.sp, sc.tp_us, order)) {
      finish(*g);
      return out;
    }
    if (c.energy < out.best.energy - kEnergyTol) out.best = c;
  }
  out.decoded = decode_factors(out.best.state, p.varmap, p.m, p.n, p.target);
  return out;
}

IrvConfig IrvConfig::defaults(Variant v) {
  IrvConfig c;
  c.variant = v;
  if (v == long_pause) c.pause_set = {100, 200};
  c.initial_forward.direction = AnnealSchedule::forward;
  c.initial_forward.tp_us = 0;
  return c;
}

IrvTrace irv_run(const PreparedProblem& p, const IrvConfig& cfg, const std::optional<SpinState>& reference) {
  if (cfg.pause_set.empty() || cfg.sp_set.empty()) throw std::invalid_argument("IRV needs pause lengths and pause points");
  IrvTrace t;
  const SpinState pins = sampler_pins(p);
  auto ham_ref = [&](const SpinState& s) -> std::optional<int> {
    if (!reference) return std::nullopt;
    return hamming(restrict_to(*reference, s), s);
  };
  long order = 0;

  // Iteration 0: plain forward anneal, no pause.
  AnnealSchedule fw = cfg.initial_forward;
  fw.direction = AnnealSchedule::forward;
  fw.tp_us = 0;
  SampleSet s0 = forward_anneal(p.model, fw, cfg.initial_reads, derive(cfg.seed, 0, 0), pins);
  Candidate anchor = best_of(s0, order++);
  anchor.state = p.complete(anchor.state);
  IrvRow r0;
  r0.iteration = 0;
  r0.tp = 0;
  r0.sp = fw.sp;
  r0.min_pf = r0.min_pf_new = anchor.energy;
  r0.ham = r0.ham_new = ham_ref(anchor.state);
  r0.zeros = s0.count_at_most(kGroundTol);
  r0.accepted = true;
  t.rows.push_back(r0);
  t.anchor_energies.push_back(anchor.energy);
  t.final_state = anchor;
  if (auto g = find_ground(p, s0, fw.sp, 0, order)) {
    t.solved = true;
    t.final_state = *g;
    t.decoded = decode_factors(g->state, p.varmap, p.m, p.n, p.target);
    return t;
  }

  std::vector<double> pauses = cfg.pause_set;
  std::sort(pauses.begin(), pauses.end());
  int reads = cfg.reads_per_attempt;
  for (int it = 1; it <= cfg.max_iterations && !t.solved; ++it) {
    t.iterations = it;
    bool accepted = false;
    long attempt = 0;
    for (size_t a = 0; a < pauses.size() && !accepted; ++a)
      for (size_t b = 0; b < cfg.sp_set.size() && !accepted; ++b) {
        auto sc = schedule(cfg.initial_forward, AnnealSchedule::reverse, cfg.ta_us, pauses[a], cfg.sp_set[b]);
        SampleSet s = reverse_anneal(p.model, anchor.state, sc, reads, derive(cfg.seed, it, attempt++), pins);
        Candidate best = best_of(s, order++);
        best.state = p.complete(best.state);
        IrvRow row;
        row.iteration = it;
        row.tp = sc.tp_us;
        row.sp = sc.sp;
        row.min_pf = anchor.energy;
        row.min_pf_new = best.energy;
        row.delta_ham = hamming(anchor.state, best.state);
        row.ham = ham_ref(anchor.state);
        row.ham_new = ham_ref(best.state);
        row.zeros = s.count_at_most(kGroundTol);
        if (best.energy < anchor.energy - kEnergyTol) {
          // Lower-energy space of this attempt; the sweep stops here.
          accepted = row.accepted = true;
          t.rows.push_back(row);
          if (auto g = find_ground(p, s, sc.sp, sc.tp_us, order)) {
            t.solved = true;
            t.final_state = *g;
            t.anchor_energies.push_back(g->energy);
            break;
          }
          std::vector<Candidate> lower;
          for (size_t k = 0; k < s.samples.size() && s.samples[k].energy < anchor.energy - kEnergyTol; ++k)
            lower.push_back(Candidate{p.complete(s.state(k)), s.samples[k].energy, sc.sp, sc.tp_us, order++});
          if (cfg.variant == IrvConfig::original) {
            anchor = select_anchor(lower, AnchorPolicy::later_pause, cfg.anchor_offset, anchor.energy);
          } else {
            lower.push_back(anchor);
            anchor = select_anchor(lower, AnchorPolicy::global_lowest);
          }
          t.anchor_energies.push_back(anchor.energy);
          t.final_state = anchor;
        } else {
          t.rows.push_back(row);
        }
      }
    if (!accepted) {
      // Sweep exhausted: escalate and keep the anchor.
      if (cfg.variant == IrvConfig::original) pauses.push_back(pauses.back() * 2);
      else reads *= 2;
    }
  }
  t.decoded = decode_factors(t.final_state.state, p.varmap, p.m, p.n, p.target);
  if (t.solved && !t.decoded.ok) throw std::logic_error("IRV reported a solution that does not factor the target");
  return t;
}

}  // namespace pegfactor
