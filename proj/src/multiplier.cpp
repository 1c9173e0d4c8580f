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

#include "pegfactor/multiplier.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "pegfactor/gadget_data.hpp"

namespace pegfactor {

namespace {

using json = nlohmann::json;

const std::string& role_name(const GadgetSpec& g, int v) {
  const int nd = int(g.decision_vars.size());
  return v < nd ? g.decision_vars[v] : g.ancilla_vars[v - nd];
}

Var flat_at(const Topology& t, int row, int col, int slot) {
  return t.flat(QubitId{row, col, slot < 4 ? Side::vertical : Side::horizontal, slot % 4});
}

Site parse_site(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("site must be [drow, dcol, slot]");
  return Site{j[0].get<int>(), j[1].get<int>(), parse_slot(j[2].get<std::string>())};
}

}  // namespace

GadgetSpec cfa_spec_from_sites(const std::string& name, const std::map<std::string, Site>& sites, bool virtual_chain,
                               const CouplerProfile& profile) {
  GadgetSpec g;
  g.name = name;
  g.decision_vars = cfa_var_names(virtual_chain);
  for (auto& [role, _] : sites)
    if (role.size() == 2 && role[0] == 'a') g.ancilla_vars.push_back(role);
  g.truth_table = cfa_truth_table(virtual_chain);
  int lo_r = 0, hi_r = 0, lo_c = 0, hi_c = 0;
  for (auto& [role, s] : sites) {
    if (!virtual_chain && role == "enable_out") continue;
    lo_r = std::min(lo_r, s.drow), hi_r = std::max(hi_r, s.drow);
    lo_c = std::min(lo_c, s.dcol), hi_c = std::max(hi_c, s.dcol);
  }
  // A small grid holding every site is enough to read off the couplers.
  Topology t = build_pegasus(hi_r - lo_r + 1, hi_c - lo_c + 1, profile);
  std::vector<Var> q;
  for (int k = 0; k < g.num_vars(); ++k) {
    const std::string& role = role_name(g, k);
    auto it = sites.find(role);
    if (it == sites.end()) throw std::invalid_argument("gadget sites miss role " + role);
    q.push_back(flat_at(t, it->second.drow - lo_r, it->second.dcol - lo_c, it->second.slot));
    g.layout[role] = q.back();
  }
  for (int a = 0; a < g.num_vars(); ++a)
    for (int b = a + 1; b < g.num_vars(); ++b)
      if (q[a] == q[b]) throw std::invalid_argument("two gadget roles share one site");
      else if (t.has_coupler_raw(q[a], q[b])) g.edges.push_back({a, b});

  auto bias = [&](const char* x, const char* y) {
    g.sharing.push_back({SharingConstraint::bias_sum, {x, ""}, {y, ""}, g.ranges.bias});
  };
  bias("c_in", "c_out");
  if (virtual_chain) bias("enable", "enable_out");
  bias("in2", "out");
  auto edge = [&](const char* x, const char* y) {
    return std::count(g.edges.begin(), g.edges.end(), make_edge(g.var_index(x), g.var_index(y))) > 0;
  };
  // The c_out / enable_out coupler is the c_in / enable coupler of the next cell.
  if (virtual_chain && edge("c_in", "enable") && edge("c_out", "enable_out"))
    g.sharing.push_back(
        {SharingConstraint::coupling_sum, {"c_in", "enable"}, {"c_out", "enable_out"}, g.ranges.coupling});
  g.placement_note =
      "own tile V0 in1, V1 in2, V2 a0, V3 a1, H0 enable, H1 c_in, H2 a2, H3 a3; c_out and enable_out on H1, H0 of "
      "the 45 degree tile; out on V1 of the 120 degree tile";
  g.check();
  return g;
}

namespace {

std::string site_slot(const Site& s) { return slot_name(s.slot); }

void check_gadget(const Gadget& g) {
  auto rep = verify_penalty(g.pf, g.spec);
  if (!rep.valid) throw std::runtime_error("gadget '" + g.spec.name + "' fails verification: " + rep.reason);
  if (std::abs(rep.gap - g.gap) > 1e-6)
    throw std::runtime_error("gadget '" + g.spec.name + "' stored gap " + std::to_string(g.gap) + " but verifies at " +
                             std::to_string(rep.gap));
  if (!validate_ranges(g.pf, g.spec.ranges).empty())
    throw std::runtime_error("gadget '" + g.spec.name + "' has coefficients outside the hardware range");
  for (auto& [e, _] : g.pf.couplings)
    if (!std::count(g.spec.edges.begin(), g.spec.edges.end(), e))
      throw std::runtime_error("gadget '" + g.spec.name + "' uses a coupler missing from its layout");
  auto theta = [&](const ThetaId& t) {
    const int a = g.spec.var_index(t.a);
    if (t.is_bias()) {
      auto it = g.pf.biases.find(a);
      return it == g.pf.biases.end() ? 0.0 : it->second;
    }
    auto it = g.pf.couplings.find(make_edge(a, g.spec.var_index(t.b)));
    return it == g.pf.couplings.end() ? 0.0 : it->second;
  };
  for (auto& sc : g.spec.sharing)
    if (!sc.range.contains(theta(sc.first) + theta(sc.second)))
      throw std::runtime_error("gadget '" + g.spec.name + "' breaks sharing constraint " + sc.first.a + "+" +
                               sc.second.a);
  // Each satisfying row needs its witness to reach zero.
  for (size_t x = 0; x < g.spec.truth_table.size(); ++x) {
    if (!g.spec.truth_table[x]) continue;
    if (x >= g.witness_table.size() || g.witness_table[x] < 0)
      throw std::runtime_error("gadget '" + g.spec.name + "' has no witness for row " + std::to_string(x));
    SpinState s;
    const size_t st = x | (size_t(g.witness_table[x]) << g.spec.decision_vars.size());
    for (int v = 0; v < g.spec.num_vars(); ++v) s[v] = (st >> v) & 1 ? 1 : -1;
    if (std::abs(energy(g.pf, s)) > 1e-6)
      throw std::runtime_error("gadget '" + g.spec.name + "' witness for row " + std::to_string(x) +
                               " is not a ground state");
  }
}

}  // namespace

std::map<std::string, Site> v4_cfa_sites() {
  return {
      {"in1", {0, 0, 0}},        {"in2", {0, 0, 1}},    {"a0", {0, 0, 2}},         {"a1", {0, 0, 3}},
      {"enable", {0, 0, 4}},     {"c_in", {0, 0, 5}},   {"a2", {0, 0, 6}},         {"a3", {0, 0, 7}},
      {"enable_out", {0, 1, 4}}, {"c_out", {0, 1, 5}},  {"out", {1, -1, 1}},
  };
}

GadgetSpec v4_cfa_spec(const CouplerProfile& profile) {
  return cfa_spec_from_sites("cfa_v4", v4_cfa_sites(), true, profile);
}

const Gadget& GadgetLibrary::at(const std::string& name) const {
  auto it = gadgets.find(name);
  if (it == gadgets.end()) throw std::out_of_range("gadget library has no entry '" + name + "'");
  return it->second;
}

Gadget make_gadget(const GadgetSpec& spec, const std::map<std::string, Site>& sites, const SynthResult& r) {
  Gadget g;
  g.spec = spec;
  g.pf = r.pf;
  g.sites = sites;
  g.witness_table = r.report.witness_table;
  g.gap = r.report.gap;
  g.num_first_excited = r.report.num_first_excited;
  return g;
}

std::string gadget_library_to_json(const GadgetLibrary& lib) {
  json out;
  out["format"] = "pegfactor-gadgets/1";
  out["gadgets"] = json::array();
  for (auto& [name, g] : lib.gadgets) {
    json e;
    e["name"] = name;
    e["kind"] = "cfa_virtual";
    e["profile"] = "idealized";
    e["placement_note"] = g.spec.placement_note;
    json sites = json::object();
    for (auto& [role, s] : g.sites) sites[role] = json::array({s.drow, s.dcol, site_slot(s)});
    e["sites"] = sites;
    e["gap"] = g.gap;
    e["num_first_excited"] = g.num_first_excited;
    e["offset"] = g.pf.offset;
    json b = json::object();
    for (auto& [v, x] : g.pf.biases) b[role_name(g.spec, v)] = x;
    e["biases"] = b;
    json c = json::array();
    for (auto& [uv, x] : g.pf.couplings) c.push_back(json::array({role_name(g.spec, uv.first), role_name(g.spec, uv.second), x}));
    e["couplings"] = c;
    e["witness_table"] = g.witness_table;
    out["gadgets"].push_back(e);
  }
  return out.dump(1) + "\n";
}

GadgetLibrary gadget_library_from_json(const std::string& text) {
  GadgetLibrary lib;
  const json in = json::parse(text);
  for (auto& e : in.at("gadgets")) {
    const std::string name = e.at("name").get<std::string>();
    if (e.at("kind").get<std::string>() != "cfa_virtual")
      throw std::runtime_error("gadget '" + name + "': only cfa_virtual entries are supported");
    if (e.value("profile", std::string("idealized")) != "idealized")
      throw std::runtime_error("gadget '" + name + "': unknown coupler profile");
    Gadget g;
    for (auto& [role, s] : e.at("sites").items()) g.sites[role] = parse_site(s);
    g.spec = cfa_spec_from_sites(name, g.sites, true, CouplerProfile::idealized());
    g.pf.offset = e.at("offset").get<double>();
    for (auto& [role, x] : e.at("biases").items()) g.pf.biases[g.spec.var_index(role)] = x.get<double>();
    for (auto& c : e.at("couplings"))
      g.pf.add_coupling(g.spec.var_index(c.at(0).get<std::string>()), g.spec.var_index(c.at(1).get<std::string>()),
                        c.at(2).get<double>());
    g.gap = e.at("gap").get<double>();
    g.pf.gap_hint = g.gap;
    g.num_first_excited = e.at("num_first_excited").get<int>();
    g.witness_table = e.at("witness_table").get<std::vector<int>>();
    check_gadget(g);
    lib.gadgets[name] = std::move(g);
  }
  return lib;
}

const GadgetLibrary& builtin_gadgets() {
  static const GadgetLibrary lib = gadget_library_from_json(kBuiltinGadgetsJson);
  return lib;
}

MultiplierVersion parse_version(const std::string& s) {
  std::string t = s;
  std::transform(t.begin(), t.end(), t.begin(), ::tolower);
  if (t == "v1") return MultiplierVersion::v1;
  if (t == "v2") return MultiplierVersion::v2;
  if (t == "v3") return MultiplierVersion::v3;
  if (t == "v4") return MultiplierVersion::v4;
  throw std::invalid_argument("unknown multiplier version '" + s + "'");
}

std::string version_name(MultiplierVersion v) { return "v" + std::to_string(int(v) + 1); }

Site MultiplierLayout::site(const RoleRef& r) const {
  const Cell& c = cell(r.i, r.j);
  auto it = sites.find(r.role);
  if (it == sites.end()) throw std::out_of_range("layout has no role " + r.role);
  return Site{c.tile_row + it->second.drow, c.tile_col + it->second.dcol, it->second.slot};
}

// Cell (i, j) sits on tile (i, j + 1): carries run along 45 degrees (one
// column right), the partial sum drops along 120 degrees, in1 runs down the
// 90 degree column.  One spare column on each side holds the out qubits of
// column 0 and the carry qubits of the last column; one spare row holds the
// outs of the last row.
MultiplierLayout build_layout(MultiplierVersion version, int m, int n) {
  if (version != MultiplierVersion::v4)
    throw std::logic_error("multiplier version " + version_name(version) + " is not implemented; use v4");
  if (m < 2 || n < 2) throw std::invalid_argument("multiplier needs at least 2x2 bits");
  if (m + n > 62) throw std::invalid_argument("product wider than 62 bits");
  MultiplierLayout L;
  L.version = version;
  L.m = m;
  L.n = n;
  L.foot_rows = n + 1;
  L.foot_cols = m + 2;
  L.sites = v4_cfa_sites();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) L.cells.push_back(Cell{i, j, i, j + 1, "cfa_v4"});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < m; ++j) {
      L.shares.push_back({{"c_out", i, j}, {"c_in", i, j + 1}});
      L.shares.push_back({{"enable_out", i, j}, {"enable", i, j + 1}});
      L.virtual_chains.push_back({{"enable", i, j}, {"enable_out", i, j}});
    }
  for (int i = 0; i < n; ++i) L.virtual_chains.push_back({{"enable", i, m - 1}, {"enable_out", i, m - 1}});
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 1; j < m; ++j) L.shares.push_back({{"out", i, j}, {"in2", i + 1, j - 1}});
  for (int j = 0; j < m; ++j) {
    std::vector<Site> path;
    for (int i = 0; i < n; ++i) path.push_back(L.site({"in1", i, j}));
    L.chain_names.push_back("in1 column " + std::to_string(j));
    L.physical_chains.push_back(path);
  }
  // The row's final carry enters the next row as in2 of its last cell.  The
  // direct 120 degree coupler is missing from the profile, so the chain hops
  // through V2 of the carry tile.
  for (int i = 0; i + 1 < n; ++i) {
    Site c = L.site({"c_out", i, m - 1});
    L.chain_names.push_back("carry row " + std::to_string(i));
    L.physical_chains.push_back({c, Site{c.drow, c.dcol, 2}, L.site({"in2", i + 1, m - 1})});
  }
  return L;
}

std::string signal_name(const std::string& role, int i, int j) {
  return role + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

Var VarMap::at(const std::string& name) const {
  auto it = signals.find(name);
  if (it == signals.end()) throw std::out_of_range("no signal named " + name);
  return it->second;
}

std::vector<Edge> required_couplers(const MultiplierLayout& layout, const GadgetLibrary& lib, const Topology& topo) {
  std::set<Edge> req;
  auto q = [&](const Site& s) { return flat_at(topo, s.drow, s.dcol, s.slot); };
  for (auto& c : layout.cells) {
    const Gadget& g = lib.at(c.gadget);
    for (auto& [e, _] : g.pf.couplings) {
      const std::string& a = role_name(g.spec, e.first);
      const std::string& b = role_name(g.spec, e.second);
      req.insert(make_edge(q(layout.site({a, c.i, c.j})), q(layout.site({b, c.i, c.j}))));
    }
  }
  for (auto& path : layout.physical_chains)
    for (size_t k = 0; k + 1 < path.size(); ++k) req.insert(make_edge(q(path[k]), q(path[k + 1])));
  return {req.begin(), req.end()};
}

Composed compose(const MultiplierLayout& layout, const GadgetLibrary& lib, const Topology& topo,
                 std::optional<Offset> at, double chain_strength) {
  if (layout.foot_rows > topo.tiles_rows() || layout.foot_cols > topo.tiles_cols())
    throw std::runtime_error("multiplier footprint " + std::to_string(layout.foot_rows) + "x" +
                             std::to_string(layout.foot_cols) + " tiles does not fit the " +
                             std::to_string(topo.tiles_rows()) + "x" + std::to_string(topo.tiles_cols()) + " grid");
  const auto req = required_couplers(layout, lib, topo);
  if (!at) {
    at = find_clean_region(topo, layout.foot_rows, layout.foot_cols, req);
    if (!at) throw std::runtime_error("no fault-free region fits the multiplier");
  } else if (!region_clean(topo, layout.foot_rows, layout.foot_cols, req, *at)) {
    throw std::runtime_error("placement at tile (" + std::to_string(at->row) + "," + std::to_string(at->col) +
                             ") touches faulty or missing hardware");
  }
  Composed out;
  out.at = *at;
  auto q = [&](const Site& s) { return flat_at(topo, s.drow + at->row, s.dcol + at->col, s.slot); };
  std::vector<IsingModel> parts;
  for (auto& c : layout.cells) {
    const Gadget& g = lib.at(c.gadget);
    std::map<Var, Var> to;
    for (int v = 0; v < g.spec.num_vars(); ++v) {
      const std::string& role = role_name(g.spec, v);
      to[v] = q(layout.site({role, c.i, c.j}));
      out.varmap.signals[signal_name(role, c.i, c.j)] = to[v];
    }
    IsingModel pf = relabel(g.pf, to);
    pf.ranges = g.spec.ranges;
    parts.push_back(std::move(pf));
  }
  for (auto& path : layout.physical_chains) {
    std::vector<Var> p;
    for (auto& s : path) p.push_back(q(s));
    parts.push_back(chain_penalty(topo, p, chain_strength));
    out.chains.push_back(p);
  }
  out.model = sum(parts);
  out.model.ranges = parts.front().ranges;
  if (auto bad = validate_ranges(out.model); !bad.empty())
    throw std::runtime_error("composed model leaves the hardware range at variable " +
                             std::to_string(bad.front().where.first) + " (value " +
                             std::to_string(bad.front().value) + ")");
  const int m = layout.m, n = layout.n;
  for (int j = 0; j < m; ++j) out.varmap.signals["A" + std::to_string(j)] = out.varmap.at(signal_name("in1", 0, j));
  for (int i = 0; i < n; ++i) out.varmap.signals["B" + std::to_string(i)] = out.varmap.at(signal_name("enable", i, 0));
  for (int k = 0; k + 1 < n; ++k) out.varmap.signals["P" + std::to_string(k)] = out.varmap.at(signal_name("out", k, 0));
  for (int j = 0; j < m; ++j)
    out.varmap.signals["P" + std::to_string(n - 1 + j)] = out.varmap.at(signal_name("out", n - 1, j));
  out.varmap.signals["P" + std::to_string(n + m - 1)] = out.varmap.at(signal_name("c_out", n - 1, m - 1));
  return out;
}

SpinState witness_state(uint64_t A, uint64_t B, const MultiplierLayout& layout, const Composed& c,
                        const GadgetLibrary& lib) {
  const int m = layout.m, n = layout.n;
  if (A >> m || B >> n) throw std::invalid_argument("operand does not fit the multiplier");
  SpinState s;
  auto put = [&](const std::string& role, int i, int j, bool v) {
    const Var q = c.varmap.at(signal_name(role, i, j));
    auto [it, fresh] = s.emplace(q, spin(v));
    if (!fresh && it->second != spin(v))
      throw std::logic_error("witness assigns two values to qubit " + std::to_string(q) + " (" + role + ")");
  };
  std::vector<std::vector<bool>> out(n, std::vector<bool>(m)), cout(n, std::vector<bool>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const bool in1 = (A >> j) & 1, en = (B >> i) & 1;
      const bool in2 = i == 0 ? false : (j + 1 < m ? out[i - 1][j + 1] : cout[i - 1][m - 1]);
      const bool cin = j == 0 ? false : cout[i][j - 1];
      const bool p = en && in1;
      cout[i][j] = (cin && (p || in2)) || (p && in2);
      out[i][j] = p ^ in2 ^ cin;
      const Gadget& g = lib.at(layout.cell(i, j).gadget);
      const bool vals[7] = {in2, in1, en, cin, cout[i][j], out[i][j], en};
      size_t x = 0;
      for (int k = 0; k < 7; ++k) {
        put(g.spec.decision_vars[k], i, j, vals[k]);
        if (vals[k]) x |= size_t(1) << k;
      }
      const int w = g.witness_table.at(x);
      if (w < 0) throw std::logic_error("circuit row is not satisfying in the gadget truth table");
      for (size_t k = 0; k < g.spec.ancilla_vars.size(); ++k) put(g.spec.ancilla_vars[k], i, j, (w >> k) & 1);
    }
  for (auto& path : c.chains)
    for (size_t k = 1; k < path.size(); ++k) s[path[k]] = s.at(path.front());
  return s;
}

InitMode parse_init_mode(const std::string& s) {
  if (s == "fix") return InitMode::fix;
  if (s == "flux-clamp") return InitMode::flux_clamp;
  if (s == "flux-soft") return InitMode::flux_soft;
  throw std::invalid_argument("unknown initialization mode '" + s + "' (fix, flux-clamp, flux-soft)");
}

std::string init_mode_name(InitMode m) {
  switch (m) {
    case InitMode::fix: return "fix";
    case InitMode::flux_clamp: return "flux-clamp";
    case InitMode::flux_soft: return "flux-soft";
  }
  return "?";
}

std::map<Var, double> PreparedProblem::flux_biases() const {
  std::map<Var, double> f;
  for (auto& [v, z] : pins) f[v] = 1000.0 * kFluxUnit * z;
  return f;
}

SpinState PreparedProblem::complete(const SpinState& s) const {
  SpinState out = s;
  for (auto& [v, z] : pins) out.emplace(v, z);
  return out;
}

PreparedProblem initialize_output(const Composed& c, const MultiplierLayout& layout, uint64_t N, InitMode mode,
                                  double lambda) {
  const int m = layout.m, n = layout.n;
  if (N >> (m + n)) throw std::invalid_argument("target " + std::to_string(N) + " needs more than " +
                                                std::to_string(m + n) + " product bits");
  PreparedProblem p;
  p.mode = mode;
  p.lambda = lambda;
  p.target = N;
  p.m = m;
  p.n = n;
  p.varmap = c.varmap;
  p.chains = c.chains;
  for (int k = 0; k < m + n; ++k) p.pins[c.varmap.at("P" + std::to_string(k))] = spin((N >> k) & 1);
  for (int i = 0; i < n; ++i) p.pins[c.varmap.at(signal_name("c_in", i, 0))] = -1;
  for (int j = 0; j < m; ++j) p.pins[c.varmap.at(signal_name("in2", 0, j))] = -1;
  switch (mode) {
    case InitMode::fix: {
      auto r = fix_variables(c.model, p.pins);
      p.model = std::move(r.model);
      p.scale = r.scale;
      break;
    }
    case InitMode::flux_clamp:
      p.model = c.model;
      break;
    case InitMode::flux_soft:
      // lambda * (1 - s z): zero when the qubit agrees with its pin.
      p.model = c.model;
      for (auto& [v, z] : p.pins) {
        p.model.offset += lambda;
        p.model.add_bias(v, -lambda * z);
      }
      break;
  }
  return p;
}

Decoded decode_factors(const SpinState& s, const VarMap& vm, int m, int n, std::optional<uint64_t> target) {
  auto majority = [&](const std::vector<Var>& qs) {
    int sum = 0;
    for (Var q : qs) sum += s.at(q);
    return sum == 0 ? s.at(qs.front()) > 0 : sum > 0;
  };
  Decoded d;
  for (int j = 0; j < m; ++j) {
    std::vector<Var> qs;
    for (int i = 0; i < n; ++i) qs.push_back(vm.at(signal_name("in1", i, j)));
    if (majority(qs)) d.A |= uint64_t(1) << j;
  }
  for (int i = 0; i < n; ++i) {
    std::vector<Var> qs;
    for (int j = 0; j < m; ++j) qs.push_back(vm.at(signal_name("enable", i, j)));
    if (majority(qs)) d.B |= uint64_t(1) << i;
  }
  for (int k = 0; k < m + n; ++k)
    if (s.at(vm.at("P" + std::to_string(k))) > 0) d.P |= uint64_t(1) << k;
  d.ok = d.A * d.B == (target ? *target : d.P);
  return d;
}

}  // namespace pegfactor
