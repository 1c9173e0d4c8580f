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

#include "pegfactor/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace pegfactor {

namespace {

json interval(const Interval& i) { return json::array({i.lo, i.hi}); }
Interval interval_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json state_json(const SpinState& s) {
  json o = json::object();
  for (auto& [v, z] : s) o[std::to_string(v)] = z;
  return o;
}

SpinState state_from(const json& j) {
  SpinState s;
  for (auto& [k, v] : j.items()) s[std::stoi(k)] = v.get<int>();
  return s;
}

json candidate_json(const Candidate& c) {
  std::vector<signed char> z;
  std::vector<Var> vars;
  for (auto& [v, x] : c.state) {
    vars.push_back(v);
    z.push_back(static_cast<signed char>(x));
  }
  return {{"energy", c.energy}, {"sp", c.sp}, {"tp", c.tp}, {"vars", vars}, {"state", pack_spins(z)}};
}

json decoded_json(const Decoded& d) { return {{"A", d.A}, {"B", d.B}, {"P", d.P}, {"ok", d.ok}}; }

}  // namespace

json to_json(const IsingModel& m) {
  json j;
  j["offset"] = m.offset;
  j["ranges"] = {{"bias", interval(m.ranges.bias)}, {"coupling", interval(m.ranges.coupling)}};
  json b = json::object();
  for (auto& [v, x] : m.biases) b[std::to_string(v)] = x;
  j["biases"] = b;
  json c = json::array();
  for (auto& [e, x] : m.couplings) c.push_back(json::array({e.first, e.second, x}));
  j["couplings"] = c;
  j["gap_hint"] = m.gap_hint ? json(*m.gap_hint) : json(nullptr);
  return j;
}

IsingModel model_from_json(const json& j) {
  IsingModel m;
  m.offset = j.value("offset", 0.0);
  if (j.contains("ranges")) {
    m.ranges.bias = interval_from(j["ranges"].at("bias"));
    m.ranges.coupling = interval_from(j["ranges"].at("coupling"));
  }
  for (auto& [k, v] : j.at("biases").items()) m.biases[std::stoi(k)] = v.get<double>();
  for (auto& c : j.at("couplings")) m.add_coupling(c.at(0).get<Var>(), c.at(1).get<Var>(), c.at(2).get<double>());
  if (j.contains("gap_hint") && !j["gap_hint"].is_null()) m.gap_hint = j["gap_hint"].get<double>();
  return m;
}

json to_json(const VarMap& v) {
  json o = json::object();
  for (auto& [k, q] : v.signals) o[k] = q;
  return o;
}

VarMap varmap_from_json(const json& j) {
  VarMap v;
  for (auto& [k, q] : j.items()) v.signals[k] = q.get<Var>();
  return v;
}

json to_json(const Topology& t) {
  json j;
  j["tiles_rows"] = t.tiles_rows();
  j["tiles_cols"] = t.tiles_cols();
  j["profile"] = t.profile_name();
  j["qubits"] = t.qubits();
  json c = json::array();
  for (auto& e : t.couplers()) c.push_back(json::array({e.first, e.second}));
  j["couplers"] = c;
  j["faulty_qubits"] = std::vector<Var>(t.faulty_qubits().begin(), t.faulty_qubits().end());
  json fc = json::array();
  for (auto& e : t.faulty_couplers()) fc.push_back(json::array({e.first, e.second}));
  j["faulty_couplers"] = fc;
  return j;
}

Topology topology_from_json(const json& j) {
  auto edges = [](const json& a) {
    std::vector<Edge> out;
    for (auto& e : a) out.push_back(make_edge(e.at(0).get<Var>(), e.at(1).get<Var>()));
    return out;
  };
  auto fc = edges(j.value("faulty_couplers", json::array()));
  auto fq = j.value("faulty_qubits", std::vector<Var>{});
  return topology_from_lists(j.value("tiles_rows", 0), j.value("tiles_cols", 0), j.at("qubits").get<std::vector<Var>>(),
                             edges(j.at("couplers")), {fq.begin(), fq.end()}, {fc.begin(), fc.end()},
                             j.value("profile", std::string("imported")));
}

std::string pack_spins(const std::vector<signed char>& z) {
  static const char* hex = "0123456789abcdef";
  std::vector<int> nib((z.size() + 3) / 4, 0);
  for (size_t i = 0; i < z.size(); ++i)
    if (z[i] > 0) nib[i / 4] |= 1 << (i % 4);
  std::string out;
  for (int v : nib) out += hex[v];
  return out;
}

std::vector<signed char> unpack_spins(const std::string& h, size_t n) {
  if (h.size() != (n + 3) / 4) throw std::invalid_argument("packed state has the wrong length");
  std::vector<signed char> z(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const char c = h[i / 4];
    int val;
    if (c >= '0' && c <= '9') val = c - '0';
    else if (c >= 'a' && c <= 'f') val = c - 'a' + 10;
    else throw std::invalid_argument("bad hex digit in packed state");
    if ((val >> (i % 4)) & 1) z[i] = 1;
  }
  return z;
}

json to_json(const AnnealSchedule& s) {
  return {{"direction", s.direction == AnnealSchedule::forward ? "forward" : "reverse"},
          {"ta_us", s.ta_us},
          {"tp_us", s.tp_us},
          {"sp", s.sp},
          {"sweeps_per_us", s.sweeps_per_us},
          {"kappa", s.kappa},
          {"s_floor", s.s_floor}};
}

AnnealSchedule schedule_from_json(const json& j) {
  AnnealSchedule s;
  s.direction = j.value("direction", std::string("forward")) == "reverse" ? AnnealSchedule::reverse
                                                                            : AnnealSchedule::forward;
  s.ta_us = j.value("ta_us", s.ta_us);
  s.tp_us = j.value("tp_us", s.tp_us);
  s.sp = j.value("sp", s.sp);
  s.sweeps_per_us = j.value("sweeps_per_us", s.sweeps_per_us);
  s.kappa = j.value("kappa", s.kappa);
  s.s_floor = j.value("s_floor", s.s_floor);
  return s;
}

json to_json(const SampleSet& s) {
  json j;
  j["vars"] = s.vars;
  j["num_reads"] = s.num_reads;
  j["seed"] = s.seed;
  j["schedule"] = to_json(s.schedule);
  json rows = json::array();
  for (auto& x : s.samples)
    rows.push_back({{"state", pack_spins(x.spins)},
                    {"energy", x.energy},
                    {"occurrences", x.occurrences},
                    {"first_read", x.first_read}});
  j["samples"] = rows;
  return j;
}

SampleSet sampleset_from_json(const json& j) {
  SampleSet s;
  s.vars = j.at("vars").get<std::vector<Var>>();
  s.num_reads = j.at("num_reads").get<int>();
  s.seed = j.value("seed", uint64_t(0));
  if (j.contains("schedule")) s.schedule = schedule_from_json(j["schedule"]);
  for (auto& r : j.at("samples"))
    s.samples.push_back(Sample{unpack_spins(r.at("state").get<std::string>(), s.vars.size()),
                               r.at("energy").get<double>(), r.at("occurrences").get<int>(),
                               r.value("first_read", 0)});
  return s;
}

json to_json(const PreparedProblem& p) {
  json j;
  j["model"] = to_json(p.model);
  j["pins"] = state_json(p.pins);
  j["mode"] = init_mode_name(p.mode);
  j["scale"] = p.scale;
  j["lambda"] = p.lambda;
  j["target"] = p.target;
  j["m"] = p.m;
  j["n"] = p.n;
  j["varmap"] = to_json(p.varmap);
  j["chains"] = p.chains;
  if (p.mode != InitMode::fix) {
    json f = json::object();
    for (auto& [v, x] : p.flux_biases()) f[std::to_string(v)] = x;
    j["flux_biases"] = f;
  }
  return j;
}

PreparedProblem prepared_from_json(const json& j) {
  PreparedProblem p;
  p.model = model_from_json(j.at("model"));
  p.pins = state_from(j.at("pins"));
  p.mode = parse_init_mode(j.at("mode").get<std::string>());
  p.scale = j.value("scale", 1.0);
  p.lambda = j.value("lambda", 100.0);
  p.target = j.at("target").get<uint64_t>();
  p.m = j.at("m").get<int>();
  p.n = j.at("n").get<int>();
  p.varmap = varmap_from_json(j.at("varmap"));
  p.chains = j.value("chains", std::vector<std::vector<Var>>{});
  return p;
}

json to_json(const IrvTrace& t) {
  json rows = json::array();
  auto opt = [](const std::optional<int>& v) { return v ? json(*v) : json(nullptr); };
  for (auto& r : t.rows)
    rows.push_back({{"iteration", r.iteration},
                    {"T_p", r.tp},
                    {"S_p", r.sp},
                    {"min_PF", r.min_pf},
                    {"min_PF_new", r.min_pf_new},
                    {"delta_HAM", r.delta_ham < 0 ? json(nullptr) : json(r.delta_ham)},
                    {"HAM", opt(r.ham)},
                    {"HAM_new", opt(r.ham_new)},
                    {"zeros", r.zeros},
                    {"accepted", r.accepted}});
  return {{"rows", rows},
          {"anchor_energies", t.anchor_energies},
          {"iterations", t.iterations},
          {"outcome", t.outcome()},
          {"final", candidate_json(t.final_state)},
          {"decoded", decoded_json(t.decoded)}};
}

json to_json(const FtrOutcome& o) {
  json rows = json::array();
  for (auto& a : o.attempts)
    rows.push_back({{"phase", a.phase},
                    {"T_p", a.tp},
                    {"S_p", a.sp},
                    {"min_PF", a.min_energy},
                    {"zeros", a.zeros},
                    {"delta_HAM", a.delta_ham < 0 ? json(nullptr) : json(a.delta_ham)},
                    {"solved", a.solved}});
  return {{"attempts", rows},
          {"outcome", o.solved ? "solved" : "unsolved"},
          {"best", candidate_json(o.best)},
          {"decoded", decoded_json(o.decoded)}};
}

json to_json(const ExcitationMap& e) {
  json grid = json::array();
  for (int i = 0; i < e.n; ++i) {
    json row = json::array();
    for (int j = 0; j < e.m; ++j) row.push_back(e.at(i, j));
    grid.push_back(row);
  }
  return {{"m", e.m}, {"n", e.n}, {"num_reads", e.num_reads}, {"clean_reads", e.clean_reads}, {"cells", grid}};
}

json to_json(const std::vector<ChainStat>& c) {
  json a = json::array();
  for (auto& s : c) a.push_back({{"name", s.name}, {"breaks", s.breaks}, {"frequency", s.frequency}});
  return a;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace pegfactor
