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

#include "pegfactor/ising.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pegfactor {

void IsingModel::add_coupling(Var a, Var b, double x) {
  if (a == b) throw std::invalid_argument("self coupling on variable " + std::to_string(a));
  couplings[make_edge(a, b)] += x;
}

std::vector<Var> IsingModel::variables() const {
  std::set<Var> s;
  for (auto& [v, _] : biases) s.insert(v);
  for (auto& [e, _] : couplings) {
    s.insert(e.first);
    s.insert(e.second);
  }
  return {s.begin(), s.end()};
}

static int lookup(const SpinState& s, Var v) {
  auto it = s.find(v);
  if (it == s.end()) throw std::out_of_range("state does not cover variable " + std::to_string(v));
  return it->second;
}

double energy(const IsingModel& m, const SpinState& s) {
  double e = m.offset;
  for (auto& [v, h] : m.biases) e += h * lookup(s, v);
  for (auto& [uv, j] : m.couplings) e += j * lookup(s, uv.first) * lookup(s, uv.second);
  return e;
}

IsingModel sum(const std::vector<IsingModel>& models) {
  IsingModel out;
  if (!models.empty()) out.ranges = models.front().ranges;
  for (const auto& m : models) {
    out.offset += m.offset;
    for (auto& [v, h] : m.biases) out.biases[v] += h;
    for (auto& [e, j] : m.couplings) out.couplings[e] += j;
    if (m.gap_hint) out.gap_hint = out.gap_hint ? std::min(*out.gap_hint, *m.gap_hint) : *m.gap_hint;
  }
  return out;
}

FixResult fix_variables(const IsingModel& m, const SpinState& a) {
  IsingModel r;
  r.ranges = m.ranges;
  r.gap_hint = m.gap_hint;
  r.offset = m.offset;
  for (auto& [v, h] : m.biases) {
    auto it = a.find(v);
    if (it == a.end()) r.biases[v] += h;
    else r.offset += h * it->second;
  }
  for (auto& [e, j] : m.couplings) {
    auto i1 = a.find(e.first), i2 = a.find(e.second);
    if (i1 != a.end() && i2 != a.end()) r.offset += j * i1->second * i2->second;
    else if (i1 != a.end()) r.biases[e.second] += j * i1->second;
    else if (i2 != a.end()) r.biases[e.first] += j * i2->second;
    else r.couplings[e] += j;
  }
  // Largest s <= 1 bringing every coefficient back in range.
  double s = 1.0;
  auto shrink = [&](double v, const Interval& iv) {
    if (v > iv.hi && v > 0) s = std::min(s, iv.hi / v);
    if (v < iv.lo && v < 0) s = std::min(s, iv.lo / v);
  };
  for (auto& [v, h] : r.biases) shrink(h, r.ranges.bias);
  for (auto& [e, j] : r.couplings) shrink(j, r.ranges.coupling);
  if (s < 1.0) {
    r.offset *= s;
    for (auto& [v, h] : r.biases) h *= s;
    for (auto& [e, j] : r.couplings) j *= s;
    if (r.gap_hint) *r.gap_hint *= s;
  }
  return {std::move(r), s};
}

std::vector<RangeViolation> validate_ranges(const IsingModel& m, const RangeSpec& r) {
  std::vector<RangeViolation> out;
  for (auto& [v, h] : m.biases)
    if (!r.bias.contains(h)) out.push_back({RangeViolation::bias, {v, v}, h});
  for (auto& [e, j] : m.couplings)
    if (!r.coupling.contains(j)) out.push_back({RangeViolation::coupling, e, j});
  return out;
}

IsingModel chain_penalty(const std::vector<Var>& path, double strength) {
  IsingModel m;
  if (!(strength > 0) || strength > -m.ranges.coupling.lo + 1e-12)
    throw std::invalid_argument("chain strength must lie in (0, " + std::to_string(-m.ranges.coupling.lo) + "]");
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    m.offset += strength;
    m.add_coupling(path[k], path[k + 1], -strength);
  }
  for (Var v : path) m.biases.emplace(v, 0.0);
  return m;
}

IsingModel relabel(const IsingModel& m, const std::map<Var, Var>& to) {
  auto map = [&](Var v) {
    auto it = to.find(v);
    if (it == to.end()) throw std::out_of_range("relabel: no image for variable " + std::to_string(v));
    return it->second;
  };
  IsingModel r;
  r.offset = m.offset;
  r.ranges = m.ranges;
  r.gap_hint = m.gap_hint;
  for (auto& [v, h] : m.biases) r.biases[map(v)] += h;
  for (auto& [e, j] : m.couplings) r.add_coupling(map(e.first), map(e.second), j);
  return r;
}

DenseIsing::DenseIsing(const IsingModel& m) {
  vars = m.variables();
  for (int i = 0; i < int(vars.size()); ++i) index[vars[i]] = i;
  const int n = int(vars.size());
  offset = m.offset;
  h.assign(n, 0.0);
  for (auto& [v, x] : m.biases) h[index[v]] += x;
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (auto& [e, j] : m.couplings) {
    int a = index[e.first], b = index[e.second];
    edge_a.push_back(a);
    edge_b.push_back(b);
    edge_w.push_back(j);
    if (j == 0.0) continue;
    adj[a].push_back({b, j});
    adj[b].push_back({a, j});
  }
  adj_start.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    adj_start[i + 1] = adj_start[i] + int(adj[i].size());
    for (auto [t, w] : adj[i]) {
      adj_to.push_back(t);
      adj_w.push_back(w);
    }
  }
}

double DenseIsing::energy(const std::vector<signed char>& z) const {
  // Same summation order as pegfactor::energy so both agree bit for bit.
  double e = offset;
  for (size_t i = 0; i < h.size(); ++i) e += h[i] * z[i];
  for (size_t k = 0; k < edge_w.size(); ++k) e += edge_w[k] * z[edge_a[k]] * z[edge_b[k]];
  return e;
}

}  // namespace pegfactor
