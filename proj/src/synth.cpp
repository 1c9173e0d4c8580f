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

#include "pegfactor/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "pegfactor/lp.hpp"

namespace pegfactor {

int GadgetSpec::var_index(const std::string& name) const {
  for (size_t i = 0; i < decision_vars.size(); ++i)
    if (decision_vars[i] == name) return int(i);
  for (size_t i = 0; i < ancilla_vars.size(); ++i)
    if (ancilla_vars[i] == name) return int(decision_vars.size() + i);
  return -1;
}

void GadgetSpec::check() const {
  const int n = num_vars();
  if (n > 16) throw std::invalid_argument("gadget '" + name + "' has more than 16 variables");
  if (truth_table.size() != (size_t(1) << decision_vars.size()))
    throw std::invalid_argument("gadget '" + name + "': truth table size does not match decision variables");
  std::set<std::string> names;
  for (auto& s : decision_vars) names.insert(s);
  for (auto& s : ancilla_vars) names.insert(s);
  if (int(names.size()) != n) throw std::invalid_argument("gadget '" + name + "': duplicate variable names");
  std::set<Edge> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
      throw std::invalid_argument("gadget '" + name + "': bad edge");
    if (!seen.insert(make_edge(a, b)).second) throw std::invalid_argument("gadget '" + name + "': duplicate edge");
  }
  if (!layout.empty()) {
    std::set<Var> img;
    for (auto& [k, q] : layout) {
      if (var_index(k) < 0) throw std::invalid_argument("gadget '" + name + "': layout names unknown variable " + k);
      img.insert(q);
    }
    if (img.size() != layout.size()) throw std::invalid_argument("gadget '" + name + "': layout is not injective");
  }
  for (auto& sc : sharing) {
    for (const ThetaId* t : {&sc.first, &sc.second}) {
      if (var_index(t->a) < 0 || (!t->is_bias() && var_index(t->b) < 0))
        throw std::invalid_argument("gadget '" + name + "': sharing constraint names unknown variable");
      if (!t->is_bias()) {
        Edge e = make_edge(var_index(t->a), var_index(t->b));
        if (!seen.count(e)) throw std::invalid_argument("gadget '" + name + "': sharing constraint on missing edge");
      }
    }
  }
}

std::vector<uint8_t> truth_table_of(int k, const BoolFn& f) {
  std::vector<uint8_t> tt(size_t(1) << k);
  std::vector<bool> x(k);
  for (size_t idx = 0; idx < tt.size(); ++idx) {
    for (int i = 0; i < k; ++i) x[i] = (idx >> i) & 1;
    tt[idx] = f(x) ? 1 : 0;
  }
  return tt;
}

bool cfa_holds(bool in2, bool in1, bool enable, bool c_in, bool c_out, bool out) {
  const bool e = enable && in1;
  const bool carry = (c_in && (e || in2)) || (e && in2);
  return c_out == carry && out == (e ^ in2 ^ c_in);
}

std::vector<std::string> cfa_var_names(bool virtual_chain) {
  std::vector<std::string> v{"in2", "in1", "enable", "c_in", "c_out", "out"};
  if (virtual_chain) v.push_back("enable_out");
  return v;
}

std::vector<uint8_t> cfa_truth_table(bool virtual_chain) {
  return truth_table_of(virtual_chain ? 7 : 6, [&](const std::vector<bool>& x) {
    bool ok = cfa_holds(x[0], x[1], x[2], x[3], x[4], x[5]);
    if (virtual_chain) ok = ok && (x[2] == x[6]);
    return ok;
  });
}

namespace {

constexpr double kEqTol = 1e-6;

// Per-state feature vectors (1, z_i, z_i z_j) so that energy = feat . theta.
struct Features {
  int n = 0, nd = 0, na = 0, np = 0;
  std::vector<double> f;  // (1<<n) x np
  explicit Features(const GadgetSpec& s) {
    nd = int(s.decision_vars.size());
    na = int(s.ancilla_vars.size());
    n = nd + na;
    np = 1 + n + int(s.edges.size());
    f.resize((size_t(1) << n) * np);
    for (size_t st = 0; st < (size_t(1) << n); ++st) {
      double* r = &f[st * np];
      r[0] = 1;
      for (int i = 0; i < n; ++i) r[1 + i] = (st >> i) & 1 ? 1.0 : -1.0;
      for (size_t e = 0; e < s.edges.size(); ++e) r[1 + n + e] = r[1 + s.edges[e].first] * r[1 + s.edges[e].second];
    }
  }
  const double* row(size_t st) const { return &f[st * np]; }
  double energy(size_t st, const std::vector<double>& th) const {
    const double* r = row(st);
    double e = 0;
    for (int k = 0; k < np; ++k) e += r[k] * th[k];
    return e;
  }
};

int theta_index(const GadgetSpec& s, const ThetaId& t) {
  const int n = s.num_vars();
  if (t.is_bias()) return 1 + s.var_index(t.a);
  Edge e = make_edge(s.var_index(t.a), s.var_index(t.b));
  for (size_t k = 0; k < s.edges.size(); ++k)
    if (make_edge(s.edges[k].first, s.edges[k].second) == e) return 1 + n + int(k);
  return -1;
}

// One persistent LP per search.  Rows are created lazily for the states that
// matter; witness choices and mode switches only move row bounds, so every
// evaluation re-optimizes from the previous basis.
class Engine {
 public:
  static constexpr double kOff = 1e3;  // bound used to switch a row off

  Engine(const GadgetSpec& s, double gap_cap) : spec_(s), F_(s) {
    for (int x = 0; x < int(s.truth_table.size()); ++x) (s.truth_table[x] ? sat_ : unsat_).push_back(x);
    const int np = F_.np;
    lp_.add_var(-Lp::inf, Lp::inf);  // offset
    for (int i = 0; i < F_.n; ++i) lp_.add_var(s.ranges.bias.lo, s.ranges.bias.hi);
    for (size_t e = 0; e < s.edges.size(); ++e) lp_.add_var(s.ranges.coupling.lo, s.ranges.coupling.hi);
    gi_ = lp_.add_var(0.0, gap_cap, 1.0);
    li_ = lp_.add_var(0.0, Lp::inf, -1.0);
    (void)np;
    lcap_row_ = lp_.add_row({{li_, 1.0}}, -Lp::inf, 0.0);
    gmin_row_ = lp_.add_row({{gi_, 1.0}}, 0.0, Lp::inf);
    for (auto& sc : s.sharing) {
      int a = theta_index(s, sc.first), b = theta_index(s, sc.second);
      Lp::Coefs c{{a, 1.0}, {b, 1.0}};
      if (a == b) c = {{a, 2.0}};
      lp_.add_row(c, sc.range.lo, sc.range.hi);
    }
    wit_.assign(size_t(1) << F_.nd, -1);
    forced_.assign(size_t(1) << F_.nd, 0);
    // A cheap starting cut per decision row.
    for (int x = 0; x < (1 << F_.nd); ++x) ensure_cut(size_t(x));
  }

  const std::vector<int>& sat() const { return sat_; }
  int ancilla_count() const { return 1 << F_.na; }
  const Features& features() const { return F_; }
  long solves = 0;

  struct Answer {
    bool ok = false;
    double value = 0, gap = 0, lslack = 0;
    std::vector<double> theta;
  };

  void set_witness(const std::vector<int>& w) {
    for (size_t k = 0; k < sat_.size(); ++k) {
      const int x = sat_[k];
      if (wit_[x] == w[k]) continue;
      if (wit_[x] >= 0) lp_.set_row_bounds(wit_row_.at(state(x, wit_[x])), -Lp::inf, kOff);
      wit_[x] = w[k];
      if (w[k] < 0) continue;  // row left open
      const size_t st = state(x, w[k]);
      ensure_cut(st);
      auto it = wit_row_.find(st);
      if (it == wit_row_.end()) {
        auto c = coef(st);
        c.push_back({li_, -1.0});
        wit_row_[st] = lp_.add_row(c, -Lp::inf, 0.0);
      } else {
        lp_.set_row_bounds(it->second, -Lp::inf, 0.0);
      }
    }
  }

  void set_soft(bool soft) { lp_.set_row_bounds(lcap_row_, -Lp::inf, soft ? kOff : 0.0); }

  // Objective-two helpers: pin g and lift chosen falsifying rows by eps.
  void pin_gap(double g) { lp_.set_row_bounds(gmin_row_, g, Lp::inf); }
  void set_forced(int x, bool on, double eps) {
    forced_[x] = on ? eps : 0.0;
    for (auto& [st, row] : cut_row_)
      if (int(st & ((size_t(1) << F_.nd) - 1)) == x) lp_.set_row_bounds(row, forced_[x], Lp::inf);
  }

  Answer solve() {
    ++solves;
    const int nd = F_.nd, np = F_.np;
    const size_t A = size_t(1) << F_.na;
    Answer ans;
    for (int round = 0; round < 500; ++round) {
      LpResult r = lp_.solve();
      if (r.status != LpStatus::optimal) return ans;
      std::vector<double> th(r.x.begin(), r.x.begin() + np);
      const double g = r.x[gi_];
      int added = 0;
      for (int x = 0; x < (1 << nd); ++x) {
        const double thr = spec_.truth_table[x] ? 0.0 : g + forced_[x];
        double best = std::numeric_limits<double>::infinity();
        size_t besta = 0;
        for (size_t a = 0; a < A; ++a) {
          double e = F_.energy(state(x, int(a)), th);
          if (e < best) {
            best = e;
            besta = a;
          }
        }
        if (best < thr - 1e-9 && ensure_cut(state(x, int(besta)))) ++added;
      }
      if (!added) {
        ans.ok = true;
        ans.value = r.objective;
        ans.gap = g;
        ans.lslack = r.x[li_];
        ans.theta = std::move(th);
        return ans;
      }
    }
    return ans;
  }

 private:
  size_t state(int x, int a) const { return size_t(x) | (size_t(a) << F_.nd); }

  Lp::Coefs coef(size_t st) const {
    Lp::Coefs c;
    const double* r = F_.row(st);
    for (int k = 0; k < F_.np; ++k)
      if (r[k] != 0.0) c.push_back({k, r[k]});
    return c;
  }

  bool ensure_cut(size_t st) {
    if (cut_row_.count(st)) return false;
    const int x = int(st & ((size_t(1) << F_.nd) - 1));
    auto c = coef(st);
    if (spec_.truth_table[x]) {
      cut_row_[st] = lp_.add_row(c, 0.0, Lp::inf);
    } else {
      c.push_back({gi_, -1.0});
      cut_row_[st] = lp_.add_row(c, forced_[x], Lp::inf);
    }
    return true;
  }

  const GadgetSpec& spec_;
  Features F_;
  std::vector<int> sat_, unsat_;
  Lp lp_;
  int gi_ = -1, li_ = -1, lcap_row_ = -1, gmin_row_ = -1;
  std::map<size_t, int> cut_row_, wit_row_;
  std::vector<int> wit_;
  std::vector<double> forced_;
};

std::vector<double> row_minima(const GadgetSpec& spec, const std::vector<double>& th) {
  Features F(spec);
  std::vector<double> m(size_t(1) << F.nd, std::numeric_limits<double>::infinity());
  for (size_t st = 0; st < (size_t(1) << F.n); ++st) {
    double& v = m[st & ((size_t(1) << F.nd) - 1)];
    v = std::min(v, F.energy(st, th));
  }
  return m;
}

// Round each coefficient to a nearby small-denominator rational.
double snap(double v) {
  for (int q = 1; q <= 96; ++q) {
    double p = std::round(v * q);
    if (std::abs(p / q - v) < 1e-7) return p / q;
  }
  return v;
}

}  // namespace

IsingModel model_from_theta(const GadgetSpec& spec, const std::vector<double>& th) {
  IsingModel m;
  m.ranges = spec.ranges;
  const int n = spec.num_vars();
  m.offset = th[0];
  for (int i = 0; i < n; ++i) m.biases[i] = th[1 + i];
  for (size_t e = 0; e < spec.edges.size(); ++e)
    m.couplings[make_edge(spec.edges[e].first, spec.edges[e].second)] = th[1 + n + e];
  return m;
}

IsingModel place(const IsingModel& pf, const GadgetSpec& spec) {
  std::map<Var, Var> to;
  for (int i = 0; i < spec.num_vars(); ++i) {
    const std::string& nm = i < int(spec.decision_vars.size()) ? spec.decision_vars[i]
                                                                : spec.ancilla_vars[i - spec.decision_vars.size()];
    auto it = spec.layout.find(nm);
    if (it == spec.layout.end()) throw std::invalid_argument("gadget '" + spec.name + "' has no placement for " + nm);
    to[i] = it->second;
  }
  return relabel(pf, to);
}

VerificationReport verify_penalty(const IsingModel& pf, const GadgetSpec& spec, bool reverse_order) {
  VerificationReport rep;
  const int nd = int(spec.decision_vars.size()), na = int(spec.ancilla_vars.size()), n = nd + na;
  for (Var v : pf.variables())
    if (v < 0 || v >= n) {
      rep.reason = "penalty function variable " + std::to_string(v) + " is not part of the gadget";
      throw std::invalid_argument(rep.reason);
    }
  // Direct evaluation keeps this independent from the synthesis features.
  std::vector<double> h(n, 0.0);
  for (auto& [v, x] : pf.biases) h[v] += x;
  std::vector<std::tuple<int, int, double>> J;
  for (auto& [e, x] : pf.couplings) J.emplace_back(e.first, e.second, x);

  const size_t X = size_t(1) << nd, A = size_t(1) << na;
  std::vector<double> rowmin(X, std::numeric_limits<double>::infinity());
  rep.witness_table.assign(X, -1);
  std::vector<int> z(n);
  for (size_t k = 0; k < X * A; ++k) {
    const size_t st = reverse_order ? X * A - 1 - k : k;
    for (int i = 0; i < n; ++i) z[i] = (st >> i) & 1 ? 1 : -1;
    double e = pf.offset;
    for (int i = 0; i < n; ++i) e += h[i] * z[i];
    for (auto& [a, b, x] : J) e += x * z[a] * z[b];
    const size_t x = st & (X - 1);
    if (e < rowmin[x]) rowmin[x] = e;
  }
  double gap = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (size_t x = 0; x < X; ++x) {
    if (spec.truth_table[x]) {
      ++rep.num_satisfying;
      if (std::abs(rowmin[x]) > kEqTol) {
        ok = false;
        if (rep.reason.empty()) {
          std::ostringstream os;
          os << "satisfying row " << x << " has minimum " << rowmin[x];
          rep.reason = os.str();
        }
      }
    } else {
      gap = std::min(gap, rowmin[x]);
    }
  }
  // Ancilla witnesses: first zero-energy ancilla assignment per satisfying row.
  for (size_t x = 0; x < X; ++x) {
    if (!spec.truth_table[x]) continue;
    for (size_t a = 0; a < A; ++a) {
      const size_t st = x | (a << nd);
      double e = pf.offset;
      for (int i = 0; i < n; ++i) e += h[i] * ((st >> i) & 1 ? 1 : -1);
      for (auto& [u, v, w] : J) e += w * ((st >> u) & 1 ? 1 : -1) * ((st >> v) & 1 ? 1 : -1);
      if (std::abs(e - rowmin[x]) <= kEqTol) {
        rep.witness_table[x] = int(a);
        break;
      }
    }
  }
  if (rep.num_satisfying == 0) {
    rep.reason = "contradiction: no satisfying assignment";
    return rep;
  }
  if (std::isinf(gap)) {
    // Tautology: any positive number is a valid gap, report 0 separation.
    rep.gap = 0;
    rep.valid = ok;
    return rep;
  }
  rep.gap = gap;
  for (size_t x = 0; x < X; ++x)
    if (!spec.truth_table[x] && std::abs(rowmin[x] - gap) <= kEqTol) ++rep.num_first_excited;
  if (ok && gap <= kEqTol) {
    ok = false;
    rep.reason = "falsifying assignments reach energy " + std::to_string(gap);
  }
  if (ok && pf.gap_hint && gap < *pf.gap_hint - kEqTol) {
    ok = false;
    rep.reason = "gap below the stated hint";
  }
  rep.valid = ok;
  return rep;
}

WitnessSolve solve_witness(const GadgetSpec& spec, const std::vector<int>& witness, double gap_cap, bool soft) {
  Engine eng(spec, gap_cap);
  eng.set_witness(witness);
  eng.set_soft(soft);
  auto a = eng.solve();
  WitnessSolve w;
  if (!a.ok) return w;
  w.gap = a.gap;
  w.soft = a.value;
  w.feasible = !soft && a.gap > 1e-7;
  w.theta = std::move(a.theta);
  return w;
}

// Feasible tables rank by gap (offset by 1000), others by the soft separation.
struct Scored {
  double score = -1;
  double gap = 0;
  std::vector<double> theta;
};

template <class Eval, class Consider, class Reached, class Budget>
void greedy_search(Engine& eng, const SynthOptions& opt, std::mt19937_64& rng, Eval evaluate, Consider consider,
                   Reached reached, Budget out_of_budget, const std::vector<int>& best_w) {
  (void)opt;
  const int ns = int(eng.sat().size());
  const int A = eng.ancilla_count();
  std::vector<int> order(ns);
  std::iota(order.begin(), order.end(), 0);
  bool first = true;
  while (!reached() && !out_of_budget()) {
    std::vector<int> w(ns);
    if (first && !best_w.empty()) {
      w = best_w;
    } else {
      for (auto& v : w) v = int(rng() % A);
    }
    first = false;
    Scored cur = evaluate(w);
    consider(w, cur);
    bool improved = true;
    while (improved && !reached() && !out_of_budget()) {
      improved = false;
      std::shuffle(order.begin(), order.end(), rng);
      for (int r : order) {
        const int keep = w[r];
        int choice = keep;
        Scored pick = cur;
        for (int a = 0; a < A; ++a) {
          if (a == keep) continue;
          w[r] = a;
          Scored s = evaluate(w);
          if (s.score > pick.score + 1e-9) {
            pick = std::move(s);
            choice = a;
          }
          if (out_of_budget()) break;
        }
        w[r] = choice;
        if (choice != keep) {
          cur = std::move(pick);
          consider(w, cur);
          improved = true;
        }
        if (reached() || out_of_budget()) break;
      }
    }
  }
}

// Depth-first search over partial witness tables.  Each node keeps, per open
// row, the ancilla values that have not been refuted yet; refutations are
// inherited by the whole subtree because bounds only shrink.
template <class Consider, class Reached, class Budget, class Incumbent>
void branch_and_bound(Engine& eng, const SynthOptions& opt, Consider consider, Reached reached, Budget out_of_budget,
                      Incumbent incumbent) {
  const int ns = int(eng.sat().size());
  const int A = eng.ancilla_count();
  const Features& F = eng.features();
  std::vector<int> w(ns, -1);
  std::vector<std::vector<int>> alive(ns);
  for (auto& v : alive)
    for (int a = 0; a < A; ++a) v.push_back(a);

  auto threshold = [&] { return std::max(opt.min_gap, incumbent() + 1e-6); };

  // Completes the table from the LP point when every open row already has a
  // zero-energy ancilla assignment.
  auto try_complete = [&](const std::vector<double>& th) {
    std::vector<int> full = w;
    for (int k = 0; k < ns; ++k) {
      if (full[k] >= 0) continue;
      const int x = eng.sat()[k];
      double bestv = std::numeric_limits<double>::infinity();
      int besta = -1;
      for (int a = 0; a < A; ++a) {
        double e = F.energy(size_t(x) | (size_t(a) << F.nd), th);
        if (e < bestv) {
          bestv = e;
          besta = a;
        }
      }
      if (bestv > 1e-7) return false;
      full[k] = besta;
    }
    eng.set_witness(full);
    eng.set_soft(false);
    auto r = eng.solve();
    eng.set_witness(w);
    if (r.ok && r.gap >= opt.min_gap) {
      Scored s;
      s.score = 1000.0 + r.gap;
      s.gap = r.gap;
      s.theta = r.theta;
      consider(full, std::move(s));
    }
    return true;
  };

  int deepest = -1;
  std::function<void(int)> dfs = [&](int depth) {
    if (reached() || out_of_budget()) return;
    eng.set_witness(w);
    eng.set_soft(false);
    auto here = eng.solve();
    if (!here.ok || here.gap < threshold()) return;
    if (opt.verbose && depth > deepest) {
      deepest = depth;
      std::fprintf(stderr, "[bnb] depth %d gap bound %.4f lp=%ld\n", depth, here.gap, eng.solves);
    }
    if (try_complete(here.theta)) return;
    if (depth == ns) return;
    int r = -1;
    for (int k = 0; k < ns; ++k)
      if (w[k] < 0 && (r < 0 || alive[k].size() < alive[r].size())) r = k;
    std::vector<std::pair<double, int>> kids;
    for (int a : alive[r]) {
      w[r] = a;
      eng.set_witness(w);
      auto s = eng.solve();
      if (s.ok && s.gap >= threshold()) kids.push_back({s.gap, a});
      if (out_of_budget()) break;
    }
    w[r] = -1;
    std::stable_sort(kids.begin(), kids.end(), [](auto& p, auto& q) { return p.first > q.first; });
    auto saved = alive;
    alive[r].clear();
    for (auto& [g, a] : kids) alive[r].push_back(a);
    for (auto& [g, a] : kids) {
      if (g < threshold()) break;
      w[r] = a;
      dfs(depth + 1);
      w[r] = -1;
      if (reached() || out_of_budget()) break;
    }
    alive = std::move(saved);
  };
  dfs(0);
}

SynthResult synthesize(const GadgetSpec& spec, const SynthOptions& opt) {
  spec.check();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  Engine eng(spec, opt.gap_cap);
  const int ns = int(eng.sat().size());
  if (ns == 0) throw SynthesisError("gadget '" + spec.name + "' is a contradiction", {});
  const int A = eng.ancilla_count();
  std::mt19937_64 rng(opt.seed);

  auto evaluate = [&](const std::vector<int>& w) {
    Scored s;
    eng.set_witness(w);
    eng.set_soft(false);
    auto hard = eng.solve();
    if (hard.ok && hard.gap >= opt.min_gap) {
      s.score = 1000.0 + hard.gap;
      s.gap = hard.gap;
      s.theta = std::move(hard.theta);
      return s;
    }
    eng.set_soft(true);
    auto sf = eng.solve();
    s.score = sf.ok ? sf.value : -1.0;
    return s;
  };
  auto out_of_budget = [&] {
    return elapsed() > opt.time_budget_s || eng.solves >= opt.max_lp_solves;
  };

  std::vector<int> best_w;
  Scored best;
  auto consider = [&](const std::vector<int>& w, Scored s) {
    if (s.score > best.score + 1e-9) {
      best = std::move(s);
      best_w = w;
      if (opt.verbose) std::fprintf(stderr, "[synth] %.1fs lp=%ld score=%.6f\n", elapsed(), eng.solves, best.score);
    }
  };
  auto reached = [&] { return opt.target_gap > 0 && best.score >= 1000.0 + opt.target_gap - 1e-7; };

  if (!opt.initial_witness.empty()) {
    if (int(opt.initial_witness.size()) != ns)
      throw std::invalid_argument("initial witness table has the wrong number of rows");
    consider(opt.initial_witness, evaluate(opt.initial_witness));
  }

  double total = 1;
  for (int k = 0; k < ns && total <= double(opt.exhaustive_limit); ++k) total *= A;
  WitnessSearch mode = opt.search;
  if (mode == WitnessSearch::automatic)
    mode = total <= double(opt.exhaustive_limit) ? WitnessSearch::exhaustive : WitnessSearch::branch_and_bound;

  if (reached()) {
  } else if (mode == WitnessSearch::exhaustive) {
    std::vector<int> w(ns, 0);
    while (true) {
      consider(w, evaluate(w));
      if (reached() || out_of_budget()) break;
      int k = 0;
      while (k < ns && ++w[k] == A) w[k++] = 0;
      if (k == ns) break;
    }
  } else if (mode == WitnessSearch::branch_and_bound) {
    branch_and_bound(eng, opt, consider, reached, out_of_budget, [&] { return best.score - 1000.0; });
  } else {
    greedy_search(eng, opt, rng, evaluate, consider, reached, out_of_budget, best_w);
  }

  SynthResult res;
  res.lp_solves = eng.solves;
  res.best_soft = best.score;
  res.witness = best_w;
  if (best.score < 1000.0) {
    std::ostringstream os;
    os << "no witness table with positive gap after " << eng.solves << " LP solves (best soft separation "
       << best.score << ")";
    res.diagnostics = os.str();
    throw SynthesisError(res.diagnostics, res);
  }

  std::vector<double> theta = best.theta;
  double gap = best.gap;
  if (opt.objective == SynthObjective::max_gap_then_min_first_excited) {
    // Lift first-excited rows one at a time with the gap pinned.
    eng.set_witness(best_w);
    eng.set_soft(false);
    eng.pin_gap(std::max(0.0, gap - 1e-9));
    auto rep0 = verify_penalty(model_from_theta(spec, theta), spec);
    std::vector<double> rowmin = row_minima(spec, theta);
    for (size_t x = 0; x < spec.truth_table.size() && !out_of_budget(); ++x) {
      if (spec.truth_table[x] || std::abs(rowmin[x] - gap) > kEqTol) continue;
      eng.set_forced(int(x), true, opt.epsilon);
      auto a = eng.solve();
      if (a.ok && a.gap >= gap - 1e-7) {
        theta = a.theta;
        rowmin = row_minima(spec, theta);
      } else {
        eng.set_forced(int(x), false, opt.epsilon);
      }
    }
    auto rep1 = verify_penalty(model_from_theta(spec, theta), spec);
    if (!rep1.valid || rep1.num_first_excited > rep0.num_first_excited) theta = best.theta;
  }

  std::vector<double> snapped(theta);
  for (auto& v : snapped) v = snap(v);
  IsingModel pf = model_from_theta(spec, theta);
  auto rep = verify_penalty(pf, spec);
  IsingModel pfs = model_from_theta(spec, snapped);
  auto reps = verify_penalty(pfs, spec);
  bool sharing_ok = true;
  for (auto& sc : spec.sharing) {
    double v = snapped[theta_index(spec, sc.first)] + snapped[theta_index(spec, sc.second)];
    sharing_ok = sharing_ok && sc.range.contains(v);
  }
  if (reps.valid && sharing_ok && validate_ranges(pfs).empty() && reps.gap >= rep.gap - 1e-6 &&
      reps.num_first_excited <= rep.num_first_excited) {
    pf = pfs;
    rep = reps;
  }
  pf.gap_hint = rep.gap;
  res.pf = pf;
  res.report = rep;
  res.ok = rep.valid;
  res.lp_solves = eng.solves;
  if (!rep.valid) {
    res.diagnostics = "internal: LP solution failed verification: " + rep.reason;
    throw SynthesisError(res.diagnostics, res);
  }
  return res;
}

}  // namespace pegfactor
