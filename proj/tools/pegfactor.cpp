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

// pegfactor: topology, synthesis, multiplier encoding and annealing from the
// command line.  Every JSON output carries the tool version and the argument
// vector that produced it.

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "pegfactor/analysis.hpp"
#include "pegfactor/io.hpp"
#include "pegfactor/multiplier.hpp"
#include "pegfactor/sampler.hpp"
#include "pegfactor/strategy.hpp"
#include "pegfactor/synth.hpp"
#include "pegfactor/topology.hpp"

using namespace pegfactor;

namespace {

struct Global {
  uint64_t seed = 1;
  std::string out = "-";
  std::string format = "json";
  std::vector<std::string> argv;
};

Global G;

json provenance() {
  return {{"tool", kToolVersion}, {"config", {{"argv", G.argv}, {"seed", G.seed}}}};
}

void emit(json body) {
  body["provenance"] = provenance();
  write_file(G.out, dump(body));
}

void emit_text(const std::string& text) { write_file(G.out, text); }

std::pair<int, int> parse_size(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw CLI::ValidationError("--size", "expected MxN, e.g. 4x4");
  return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
}

Topology load_or_build(const std::string& path, int rows, int cols) {
  if (!path.empty()) return topology_from_json(json::parse(read_file(path)));
  return build_pegasus(rows, cols);
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string tok;
  while (ss >> tok) {
    for (auto& c : tok)
      if (c == ',') c = ' ';
    std::stringstream t(tok);
    int x;
    while (t >> x) v.push_back(x);
  }
  return v;
}

SpinState parse_assignment(const std::string& s) {
  // "12=+1,13=-1"
  SpinState a;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--assign", "expected var=+1 or var=-1");
    const int v = std::stoi(tok.substr(0, eq)), z = std::stoi(tok.substr(eq + 1));
    if (z != 1 && z != -1) throw CLI::ValidationError("--assign", "spin must be +1 or -1");
    a[v] = z;
  }
  return a;
}

SpinState state_from_json(const json& j) {
  SpinState s;
  for (auto& [k, v] : j.items()) s[std::stoi(k)] = v.get<int>();
  return s;
}

json state_to_json(const SpinState& s) {
  json o = json::object();
  for (auto& [v, z] : s) o[std::to_string(v)] = z;
  return o;
}

struct Size {
  int m = 4, n = 4;
};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) G.argv.push_back(i == 0 ? "pegfactor" : argv[i]);
  CLI::App app{"pegfactor: integer factoring as Ising models on an idealized Pegasus grid"};
  app.require_subcommand(1);
  app.add_option("--seed", G.seed, "random seed")->capture_default_str();
  app.add_option("--out", G.out, "output file, - for stdout")->capture_default_str();
  app.add_option("--format", G.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  // topo --------------------------------------------------------------------
  auto* topo = app.add_subcommand("topo", "build, load, mask and search topologies");
  topo->require_subcommand(1);
  int t_rows = 16, t_cols = 16;
  std::string t_profile = "idealized", t_in, t_qubits, t_size;
  double t_frac = 0;
  std::vector<std::string> t_couplers;
  auto* tb = topo->add_subcommand("build", "generate an idealized grid");
  tb->add_option("--rows", t_rows)->capture_default_str();
  tb->add_option("--cols", t_cols)->capture_default_str();
  tb->add_option("--profile", t_profile)->check(CLI::IsMember({"idealized", "uniform"}))->capture_default_str();
  auto* tl = topo->add_subcommand("load", "read a topology file and print a summary");
  tl->add_option("--in", t_in)->required();
  auto* tm = topo->add_subcommand("mask", "mark faulty qubits and couplers");
  tm->add_option("--in", t_in)->required();
  tm->add_option("--qubits", t_qubits, "comma separated qubit ids");
  tm->add_option("--coupler", t_couplers, "faulty coupler as a,b (repeatable)");
  tm->add_option("--random-fraction", t_frac, "additionally mask this fraction of qubits at random");
  auto* tf = topo->add_subcommand("find-region", "first fault-free placement of a multiplier");
  tf->add_option("--in", t_in, "topology file (default: fault-free 16x16)");
  tf->add_option("--size", t_size, "multiplier MxN")->required();

  tb->callback([&] {
    auto p = t_profile == "uniform" ? CouplerProfile::uniform() : CouplerProfile::idealized();
    json j = to_json(build_pegasus(t_rows, t_cols, p));
    emit(j);
  });
  tl->callback([&] {
    Topology t = topology_from_json(json::parse(read_file(t_in)));
    int maxdeg = 0;
    for (Var q : t.qubits()) maxdeg = std::max(maxdeg, t.usable_degree(q));
    emit({{"tiles_rows", t.tiles_rows()},
          {"tiles_cols", t.tiles_cols()},
          {"qubits", t.qubits().size()},
          {"couplers", t.couplers().size()},
          {"usable_couplers", t.usable_coupler_count()},
          {"faulty_qubits", t.faulty_qubits().size()},
          {"faulty_couplers", t.faulty_couplers().size()},
          {"max_usable_degree", maxdeg}});
  });
  tm->callback([&] {
    Topology t = topology_from_json(json::parse(read_file(t_in)));
    std::set<Var> fq;
    for (int q : parse_ints(t_qubits)) fq.insert(q);
    std::set<Edge> fc;
    for (auto& c : t_couplers) {
      auto v = parse_ints(c);
      if (v.size() != 2) throw CLI::ValidationError("--coupler", "expected a,b");
      fc.insert(make_edge(v[0], v[1]));
    }
    if (t_frac > 0) {
      std::mt19937_64 rng(G.seed);
      std::bernoulli_distribution pick(t_frac);
      for (Var q : t.qubits())
        if (pick(rng)) fq.insert(q);
    }
    emit(to_json(apply_fault_mask(t, fq, fc)));
  });
  tf->callback([&] {
    auto [m, n] = parse_size(t_size);
    Topology t = load_or_build(t_in, 16, 16);
    auto L = build_layout(MultiplierVersion::v4, m, n);
    auto at = find_clean_region(t, L.foot_rows, L.foot_cols, required_couplers(L, builtin_gadgets(), t));
    json j = {{"footprint", {L.foot_rows, L.foot_cols}}};
    j["offset"] = at ? json::array({at->row, at->col}) : json(nullptr);
    emit(j);
  });

  // model -------------------------------------------------------------------
  auto* model = app.add_subcommand("model", "validate, evaluate and reduce Ising models");
  model->require_subcommand(1);
  std::string m_in, m_state, m_assign;
  auto* mv = model->add_subcommand("validate", "list coefficients outside the hardware ranges");
  mv->add_option("--in", m_in)->required();
  auto* me = model->add_subcommand("energy", "energy of a spin state");
  me->add_option("--in", m_in)->required();
  me->add_option("--state", m_state, "JSON object {var: spin}")->required();
  auto* mf = model->add_subcommand("fix", "substitute spins and rescale into range");
  mf->add_option("--in", m_in)->required();
  mf->add_option("--assign", m_assign, "var=+1,var=-1,...")->required();
  auto load_model = [&] {
    json j = json::parse(read_file(m_in));
    return model_from_json(j.contains("model") ? j["model"] : j);
  };
  mv->callback([&] {
    auto m = load_model();
    json v = json::array();
    for (auto& r : validate_ranges(m))
      v.push_back({{"kind", r.kind == RangeViolation::bias ? "bias" : "coupling"},
                   {"where", {r.where.first, r.where.second}},
                   {"value", r.value}});
    emit({{"valid", v.empty()}, {"violations", v}});
  });
  me->callback([&] {
    auto m = load_model();
    emit({{"energy", energy(m, state_from_json(json::parse(read_file(m_state))))}});
  });
  mf->callback([&] {
    auto r = fix_variables(load_model(), parse_assignment(m_assign));
    emit({{"model", to_json(r.model)}, {"scale", r.scale}});
  });

  // synth -------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "synthesize a CFA penalty function on the V4 cell");
  std::string s_gadget = "cfa-virtual", s_layout = "v4", s_objective = "gap", s_search = "auto", s_witness;
  double s_budget = 60, s_target = -1;
  bool s_verbose = false;
  synth->add_option("--gadget", s_gadget)->check(CLI::IsMember({"cfa", "cfa-virtual"}))->capture_default_str();
  synth->add_option("--layout", s_layout)->check(CLI::IsMember({"v4"}))->capture_default_str();
  synth->add_option("--objective", s_objective)->check(CLI::IsMember({"gap", "gap+fe"}))->capture_default_str();
  synth->add_option("--search", s_search)
      ->check(CLI::IsMember({"auto", "exhaustive", "greedy", "bnb"}))
      ->capture_default_str();
  synth->add_option("--budget", s_budget, "seconds")->capture_default_str();
  synth->add_option("--target-gap", s_target, "stop once this gap is reached");
  double s_eps = SynthOptions{}.epsilon;
  synth->add_option("--epsilon", s_eps, "margin lifting rows off the first excited level")->capture_default_str();
  synth->add_option("--initial-witness", s_witness, "ancilla index per satisfying row, warm start");
  synth->add_flag("--verbose", s_verbose);
  synth->callback([&] {
    const bool virt = s_gadget == "cfa-virtual";
    auto sites = v4_cfa_sites();
    if (!virt) sites.erase("enable_out");
    GadgetSpec spec = cfa_spec_from_sites(virt ? "cfa_v4" : "cfa_v4_plain", sites, virt);
    SynthOptions o;
    o.objective = s_objective == "gap" ? SynthObjective::max_gap : SynthObjective::max_gap_then_min_first_excited;
    o.search = s_search == "exhaustive" ? WitnessSearch::exhaustive
               : s_search == "greedy"   ? WitnessSearch::greedy
               : s_search == "bnb"      ? WitnessSearch::branch_and_bound
                                        : WitnessSearch::automatic;
    o.seed = G.seed;
    o.time_budget_s = s_budget;
    o.target_gap = s_target;
    o.verbose = s_verbose;
    o.epsilon = s_eps;
    if (!s_witness.empty()) o.initial_witness = parse_ints(s_witness);
    SynthResult r = synthesize(spec, o);
    GadgetLibrary lib;
    lib.gadgets[spec.name] = make_gadget(spec, sites, r);
    json j = json::parse(gadget_library_to_json(lib));
    j["search"] = {{"witness", r.witness}, {"lp_solves", r.lp_solves}};
    emit(j);
    std::fprintf(stderr, "gap %.6g, first excited %d, %ld LP solves\n", r.report.gap, r.report.num_first_excited,
                 r.lp_solves);
  });

  // build / encode ----------------------------------------------------------
  std::string b_size = "4x4", b_version = "v4", b_topo;
  double b_chain = 2.0;
  auto* build = app.add_subcommand("build", "compose the multiplier model");
  build->add_option("--size", b_size, "MxN bits")->capture_default_str();
  build->add_option("--version", b_version)->capture_default_str();
  build->add_option("--topology", b_topo, "topology file (default: fault-free 16x16)");
  build->add_option("--chain-strength", b_chain)->capture_default_str();
  build->callback([&] {
    auto [m, n] = parse_size(b_size);
    auto L = build_layout(parse_version(b_version), m, n);
    Topology t = load_or_build(b_topo, 16, 16);
    Composed c = compose(L, builtin_gadgets(), t, std::nullopt, b_chain);
    json j = {{"m", m}, {"n", n}, {"version", b_version}};
    j["footprint"] = {L.foot_rows, L.foot_cols};
    j["offset"] = {c.at.row, c.at.col};
    j["qubits"] = c.model.variables().size();
    j["couplers"] = c.model.couplings.size();
    j["model"] = to_json(c.model);
    j["varmap"] = to_json(c.varmap);
    j["chains"] = c.chains;
    j["chain_names"] = L.chain_names;
    emit(j);
  });

  uint64_t e_n = 35;
  std::string e_mode = "flux-clamp";
  double e_lambda = 100;
  auto* encode = app.add_subcommand("encode", "pin the product bits of a target");
  encode->add_option("--size", b_size)->capture_default_str();
  encode->add_option("--n", e_n, "number to factor")->required();
  encode->add_option("--mode", e_mode)
      ->check(CLI::IsMember({"fix", "flux-clamp", "flux-soft"}))
      ->capture_default_str();
  encode->add_option("--lambda", e_lambda, "flux-soft strength")->capture_default_str();
  encode->add_option("--topology", b_topo);
  encode->add_option("--chain-strength", b_chain)->capture_default_str();
  encode->callback([&] {
    auto [m, n] = parse_size(b_size);
    auto L = build_layout(MultiplierVersion::v4, m, n);
    Topology t = load_or_build(b_topo, 16, 16);
    Composed c = compose(L, builtin_gadgets(), t, std::nullopt, b_chain);
    emit(to_json(initialize_output(c, L, e_n, parse_init_mode(e_mode), e_lambda)));
  });

  // solve -------------------------------------------------------------------
  std::string v_in, v_mode = "forward", v_initial;
  AnnealSchedule v_sched;
  int v_reads = 1000;
  std::vector<uint64_t> v_witness;
  auto* solve = app.add_subcommand("solve", "anneal a prepared problem");
  solve->add_option("--in", v_in, "prepared problem")->required();
  solve->add_option("--mode", v_mode)->check(CLI::IsMember({"forward", "reverse", "ftr"}))->capture_default_str();
  solve->add_option("--ta", v_sched.ta_us, "ramp time, us")->capture_default_str();
  solve->add_option("--tp", v_sched.tp_us, "pause, us")->capture_default_str();
  solve->add_option("--sp", v_sched.sp, "pause or turning point")->capture_default_str();
  solve->add_option("--reads", v_reads)->capture_default_str();
  solve->add_option("--sweeps-per-us", v_sched.sweeps_per_us)->capture_default_str();
  solve->add_option("--kappa", v_sched.kappa)->capture_default_str();
  solve->add_option("--initial", v_initial, "reverse: start state file {var: spin}");
  solve->add_option("--initial-witness", v_witness, "reverse: start from the witness of A B")->expected(2);
  solve->callback([&] {
    PreparedProblem p = prepared_from_json(json::parse(read_file(v_in)));
    if (v_mode == "ftr") {
      FtrConfig cfg;
      cfg.reads = v_reads;
      cfg.seed = G.seed;
      cfg.base = v_sched;
      auto o = forward_then_reverse(p, cfg);
      std::vector<ReportRow> rows;
      for (auto& a : o.attempts)
        rows.push_back({std::to_string(p.m) + "x" + std::to_string(p.n), p.target, a.phase, a.tp, a.sp, a.min_energy,
                        a.zeros, a.delta_ham});
      if (G.format == "csv") return emit_text(report_csv(rows));
      emit(to_json(o));
      return;
    }
    SampleSet s;
    if (v_mode == "forward") {
      v_sched.direction = AnnealSchedule::forward;
      s = forward_anneal(p.model, v_sched, v_reads, G.seed, sampler_pins(p));
    } else {
      v_sched.direction = AnnealSchedule::reverse;
      SpinState init;
      if (!v_initial.empty()) {
        init = state_from_json(json::parse(read_file(v_initial)));
      } else if (v_witness.size() == 2) {
        auto L = build_layout(MultiplierVersion::v4, p.m, p.n);
        Composed c;
        c.varmap = p.varmap;
        c.chains = p.chains;
        init = witness_state(v_witness[0], v_witness[1], L, c, builtin_gadgets());
      } else {
        throw CLI::ValidationError("--initial", "reverse mode needs --initial or --initial-witness");
      }
      s = reverse_anneal(p.model, p.complete(init), v_sched, v_reads, G.seed, sampler_pins(p));
    }
    int solved = 0;
    for (size_t k = 0; k < s.samples.size(); ++k)
      if (is_verified_ground(p, s.state(k), s.samples[k].energy)) solved += s.samples[k].occurrences;
    if (G.format == "csv") {
      return emit_text(report_csv({{std::to_string(p.m) + "x" + std::to_string(p.n), p.target, v_mode, v_sched.tp_us,
                                    v_sched.sp, s.min_energy(), s.count_at_most(1e-9), -1}}));
    }
    json j = to_json(s);
    j["target"] = p.target;
    j["m"] = p.m;
    j["n"] = p.n;
    j["verified_solutions"] = solved;
    emit(j);
  });

  // irv ---------------------------------------------------------------------
  std::string i_in, i_variant = "original";
  int i_iters = 8, i_reads = 100, i_initial_reads = 1000;
  double i_offset = 0;
  std::vector<uint64_t> i_reference;
  auto* irv = app.add_subcommand("irv", "iterated reverse annealing");
  irv->add_option("--in", i_in, "prepared problem")->required();
  irv->add_option("--variant", i_variant)->check(CLI::IsMember({"original", "long-pause"}))->capture_default_str();
  irv->add_option("--max-iters", i_iters)->capture_default_str();
  irv->add_option("--reads", i_reads, "reads per attempt")->capture_default_str();
  irv->add_option("--initial-reads", i_initial_reads)->capture_default_str();
  irv->add_option("--anchor-offset", i_offset, "0 = lowest energy anchor")->capture_default_str();
  irv->add_option("--reference", i_reference, "known factors A B for the HAM columns")->expected(2);
  irv->callback([&] {
    PreparedProblem p = prepared_from_json(json::parse(read_file(i_in)));
    IrvConfig cfg = IrvConfig::defaults(i_variant == "original" ? IrvConfig::original : IrvConfig::long_pause);
    cfg.max_iterations = i_iters;
    cfg.reads_per_attempt = i_reads;
    cfg.initial_reads = i_initial_reads;
    cfg.anchor_offset = i_offset;
    cfg.seed = G.seed;
    std::optional<SpinState> ref;
    if (i_reference.size() == 2) {
      auto L = build_layout(MultiplierVersion::v4, p.m, p.n);
      Composed c;
      c.varmap = p.varmap;
      c.chains = p.chains;
      ref = witness_state(i_reference[0], i_reference[1], L, c, builtin_gadgets());
    }
    IrvTrace t = irv_run(p, cfg, ref);
    if (G.format == "csv") {
      std::ostringstream os;
      os << "iteration,T_p,S_p,min_PF,min_PF_new,delta_HAM,HAM,HAM_new,zeros,accepted\n";
      for (auto& r : t.rows)
        os << r.iteration << ',' << r.tp << ',' << r.sp << ',' << r.min_pf << ',' << r.min_pf_new << ','
           << r.delta_ham << ',' << (r.ham ? std::to_string(*r.ham) : "") << ','
           << (r.ham_new ? std::to_string(*r.ham_new) : "") << ',' << r.zeros << ',' << r.accepted << '\n';
      return emit_text(os.str());
    }
    json j = to_json(t);
    j["variant"] = i_variant;
    j["target"] = p.target;
    j["size"] = std::to_string(p.m) + "x" + std::to_string(p.n);
    emit(j);
  });

  // verify ------------------------------------------------------------------
  std::string w_in;
  std::vector<uint64_t> w_ab;
  auto* verify = app.add_subcommand("verify", "energy and decoding of a factor pair's witness");
  verify->add_option("--in", w_in, "prepared problem")->required();
  verify->add_option("--witness", w_ab, "A B")->expected(2)->required();
  verify->callback([&] {
    PreparedProblem p = prepared_from_json(json::parse(read_file(w_in)));
    auto L = build_layout(MultiplierVersion::v4, p.m, p.n);
    Composed c;
    c.varmap = p.varmap;
    c.chains = p.chains;
    SpinState s = witness_state(w_ab[0], w_ab[1], L, c, builtin_gadgets());
    SpinState restricted;
    for (Var v : p.model.variables()) restricted[v] = s.at(v);
    const double e = energy(p.model, restricted);
    auto d = decode_factors(s, p.varmap, p.m, p.n, p.target);
    emit({{"energy", e},
          {"A", d.A},
          {"B", d.B},
          {"P", d.P},
          {"factors_target", d.ok},
          {"pins_agree", [&] {
             for (auto& [v, z] : p.pins)
               if (s.at(v) != z) return false;
             return true;
           }()}});
  });

  // report ------------------------------------------------------------------
  std::string r_in, r_problem;
  auto* report = app.add_subcommand("report", "tables from sample sets or IRV traces");
  report->add_option("--in", r_in, "output of solve or irv")->required();
  report->add_option("--problem", r_problem, "prepared problem, adds excitation and chain statistics");
  report->callback([&] {
    json in = json::parse(read_file(r_in));
    if (in.contains("rows")) {  // IRV trace
      IrvTrace t;
      for (auto& r : in["rows"]) {
        IrvRow row;
        row.iteration = r.at("iteration").get<int>();
        row.tp = r.at("T_p").get<double>();
        row.sp = r.at("S_p").get<double>();
        row.min_pf = r.at("min_PF").get<double>();
        row.min_pf_new = r.at("min_PF_new").get<double>();
        row.delta_ham = r.at("delta_HAM").is_null() ? -1 : r["delta_HAM"].get<int>();
        if (!r.at("HAM").is_null()) row.ham = r["HAM"].get<int>();
        if (!r.at("HAM_new").is_null()) row.ham_new = r["HAM_new"].get<int>();
        row.zeros = r.at("zeros").get<int>();
        row.accepted = r.at("accepted").get<bool>();
        t.rows.push_back(row);
      }
      t.solved = in.at("outcome") == "solved";
      t.iterations = in.at("iterations").get<int>();
      t.decoded.A = in["decoded"]["A"].get<uint64_t>();
      t.decoded.B = in["decoded"]["B"].get<uint64_t>();
      t.decoded.P = in["decoded"]["P"].get<uint64_t>();
      const std::string size = in.value("size", std::string("?"));
      const uint64_t target = in.value("target", uint64_t(0));
      if (G.format == "csv") {
        std::ostringstream os;
        os << "size,input,iteration,T_p,S_p,min_PF,min_PF_new,delta_HAM,zeros,accepted\n";
        for (auto& r : t.rows)
          os << size << ',' << target << ',' << r.iteration << ',' << r.tp << ',' << r.sp << ',' << r.min_pf << ','
             << r.min_pf_new << ',' << r.delta_ham << ',' << r.zeros << ',' << r.accepted << '\n';
        return emit_text(os.str());
      }
      std::cerr << format_irv_table(t, size, target);
      emit({{"kind", "irv"}, {"table", format_irv_table(t, size, target)}, {"rows", in["rows"]}});
      return;
    }
    SampleSet s = sampleset_from_json(in);
    const int m = in.value("m", 0), n = in.value("n", 0);
    const uint64_t target = in.value("target", uint64_t(0));
    ReportRow row{std::to_string(m) + "x" + std::to_string(n), target,
                  s.schedule.direction == AnnealSchedule::forward ? "forward" : "reverse",
                  s.schedule.tp_us, s.schedule.sp, s.min_energy(), s.count_at_most(1e-9), -1};
    if (G.format == "csv") return emit_text(report_csv({row}));
    json j = {{"kind", "samples"}, {"table", format_report_table({row})}};
    if (!r_problem.empty()) {
      PreparedProblem p = prepared_from_json(json::parse(read_file(r_problem)));
      auto L = build_layout(MultiplierVersion::v4, p.m, p.n);
      j["excitations"] = to_json(excitation_map(s, L, p.varmap, p.pins));
      j["chain_breaks"] = to_json(chain_break_stats(s, p.chains, L.chain_names, p.pins));
    }
    std::cerr << format_report_table({row});
    emit(j);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : 2;
  } catch (const SynthesisError& e) {
    std::cerr << "synthesis failed: " << e.what() << "\n";
    if (!e.result.witness.empty()) {
      std::cerr << "best witness:";
      for (int w : e.result.witness) std::cerr << ' ' << w;
      std::cerr << "\n";
    }
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
