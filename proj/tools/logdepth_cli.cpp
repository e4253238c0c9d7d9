// Copyright 2026 The logdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// logdepth command line: circuit inspection, the log-depth construction,
// simulation, distance numerics and the verification suites.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "logdepth/logdepth.hpp"

namespace fs = std::filesystem;
using namespace logdepth;

namespace {

struct Common {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  bool fanout = false;
  std::size_t reps = 1;
  std::string out;
};

void emit(const json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    save_json(doc, out);
    std::cout << "wrote " << out << "\n";
  }
}

json depth_json(const DepthReport& d) {
  json j;
  j["layer_count"] = d.layer_count;
  j["gate_count"] = d.gate_count;
  j["fanout_unit_cost"] = d.cost_model.fanout_unit_cost;
  json regs = json::object();
  for (const auto& [name, rd] : d.per_register) regs[name] = {{"gates", rd.gate_count}, {"active_layers", rd.active_layers}};
  j["per_register"] = std::move(regs);
  return j;
}

fs::path out_dir(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

int cmd_depth(const std::string& path, const Common& c) {
  const Circuit circ = load_circuit(path);
  // Without --fanout a FANOUT gate is charged its CNOT-tree depth.
  const auto rep = depth(circ, CostModel{c.fanout});
  std::printf("layer_count %zu\ngate_count %zu\n", rep.layer_count, rep.gate_count);
  if (!c.out.empty()) emit(depth_json(rep), c.out);
  return 0;
}

int cmd_slice(const std::string& path, const Common& c) {
  const auto pieces = slice(load_circuit(path));
  const fs::path dir = out_dir(c.out);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    save_json(write_circuit(pieces[i]), (dir / ("piece_" + std::to_string(i + 1) + ".qc")).string());
  }
  std::printf("%zu pieces written to %s\n", pieces.size(), dir.string().c_str());
  return 0;
}

int cmd_reduce(const std::string& q1, const std::string& q2, double a, double b, bool no_tests, const Common& c) {
  ReductionOptions opts;
  opts.use_fanout = c.fanout;
  opts.repetitions = c.reps;
  opts.include_tests = !no_tests;
  const auto built = build_log_depth_ci({load_circuit(q1), load_circuit(q2), a, b}, opts);
  const fs::path dir = out_dir(c.out);
  save_json(write_circuit(built.c1), (dir / "C1.qc").string());
  save_json(write_circuit(built.c2), (dir / "C2.qc").string());
  save_json(manifest_to_json(built.manifest), (dir / "manifest.json").string());
  const CostModel cm{c.fanout};
  std::printf("n %zu  width %zu  depth %zu/%zu  bound %zu  tests %zu\n", built.manifest.n, built.c1.width(),
              depth(built.c1, cm).layer_count, depth(built.c2, cm).layer_count, built.manifest.depth_bound.value(),
              built.manifest.test_count());
  std::printf("wrote C1.qc, C2.qc, manifest.json to %s\n", dir.string().c_str());
  return 0;
}

int cmd_dispatch(const std::string& q1, const std::string& q2, double a, double b, const Common& c) {
  const auto d = build_controlled_dispatch({load_circuit(q1), load_circuit(q2), a, b}, c.fanout);
  const std::size_t got = depth(d.circuit, CostModel{c.fanout}).layer_count;
  std::printf("control %u  copies %zu  depth %zu  bound %zu\n", d.control, d.copies, got, d.bound());
  emit(write_circuit(d.circuit), c.out);
  return 0;
}

int cmd_simulate(const std::string& path, const std::string& state_path, bool pure_out, const Common& c) {
  const Circuit circ = load_circuit(path);
  const std::size_t h = circ.inputs().size();
  AnyState in = state_path.empty() ? AnyState(random_pure(h, c.seed)) : load_state(state_path);
  json doc;
  if (pure_out) {
    const auto* psi = std::get_if<PureState>(&in);
    if (!psi) throw Error("simulate: --pure needs a pure input state");
    doc = write_state(apply_circuit_pure(circ, *psi));
  } else {
    doc = write_state(apply_circuit_density(circ, as_density(in)));
  }
  emit(doc, c.out);
  return 0;
}

int cmd_metric(const std::string& which, const std::string& a, const std::string& b, std::size_t restarts,
               const Common& c) {
  json doc;
  doc["metric"] = which;
  if (which == "fidelity" || which == "trace" || which == "fvdg" || which == "antisym") {
    const DensityMatrix x = as_density(load_state(a));
    if (which == "antisym") {
      doc["value"] = swap_antisym_prob(x);
    } else {
      const DensityMatrix y = as_density(load_state(b));
      if (which == "fidelity") doc["value"] = fidelity(x, y);
      if (which == "trace") doc["value"] = trace_norm(x.m - y.m);
      if (which == "fvdg") {
        const auto s = fvdg_gap(x.m, y.m);
        doc["lower_slack"] = s.lower;
        doc["upper_slack"] = s.upper;
      }
    }
  } else if (which == "fmax" || which == "diamond") {
    OptimizerConfig oc;
    oc.seed = c.seed;
    oc.restart_count = restarts;
    const ChannelPair pair(load_circuit(a), load_circuit(b));
    if (which == "fmax") {
      const auto r = max_output_fidelity(pair, oc);
      doc["value"] = r.value;
      doc["upper_bound"] = r.upper_bound;
      doc["converged"] = r.converged;
      doc["iterations"] = r.iterations;
      doc["best_restart"] = r.best_restart;
    } else {
      const auto r = diamond_norm_distance(pair, oc);
      doc["value"] = r.value;
      doc["converged"] = r.converged;
      doc["iterations"] = r.iterations;
    }
  } else {
    throw Error("metric: unknown metric \"" + which + "\" (fidelity, trace, fvdg, antisym, fmax, diamond)");
  }
  emit(doc, c.out);
  return 0;
}

int cmd_verify(const std::string& suite, std::size_t trials, std::size_t density_cap, std::size_t pure_cap,
               std::size_t restarts, const Common& c) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.trials = trials;
  cfg.seed = c.seed;
  cfg.tolerance = c.tol;
  cfg.max_density_qubits = density_cap;
  cfg.max_pure_qubits = pure_cap;
  cfg.restarts = restarts;
  const auto rep = run_suite(cfg);
  std::printf("suite %s  seed %llu  trials %zu\n", rep.suite.c_str(), static_cast<unsigned long long>(rep.seed),
              rep.trials.size());
  std::printf("%6s %14s %14s %12s\n", "trial", "measured", "bound", "slack");
  for (const auto& t : rep.trials) std::printf("%6zu %14.8g %14.8g %12.4e\n", t.index, t.measured, t.bound, t.slack);
  std::printf("%s  worst slack %.4e  tolerance %.1e  %.2fs\n", rep.pass ? "PASS" : "FAIL",
              rep.trials.empty() ? 0.0 : rep.worst_slack(), rep.tolerance, rep.wall_time_s);
  if (!c.out.empty()) {
    save_json(report_to_json(rep), c.out);
    std::printf("wrote %s\n", c.out.c_str());
  }
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logdepth: log-depth circuit pair construction and verification"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--tol", c.tol, "pass tolerance on slacks");
    s->add_flag("--fanout", c.fanout, "use unit-depth FANOUT gates");
    s->add_option("--reps", c.reps, "parallel repetitions")->check(CLI::PositiveNumber);
    s->add_option("--out", c.out, "output file or directory");
  };

  std::string circ, q1, q2, state, metric, a, b, suite = "lemma1";
  double ta = 1.0, tb = 0.5, qa = 2.0, qb = 0.0;
  bool pure_out = false, no_tests = false;
  std::size_t trials = 0, density_cap = 8, pure_cap = 18, restarts = 8;

  auto* sd = app.add_subcommand("depth", "layer and gate counts");
  sd->add_option("circuit", circ, "circuit file")->required();
  add_common(sd);

  auto* ss = app.add_subcommand("slice", "one piece per gate");
  ss->add_option("circuit", circ, "circuit file")->required();
  add_common(ss);

  auto* sr = app.add_subcommand("reduce-ci", "build the log-depth circuit pair");
  sr->add_option("--q1", q1, "first circuit")->required();
  sr->add_option("--q2", q2, "second circuit")->required();
  sr->add_option("-a", ta, "completeness threshold");
  sr->add_option("-b", tb, "soundness threshold");
  sr->add_flag("--no-tests", no_tests, "omit the swap tests");
  add_common(sr);

  auto* sq = app.add_subcommand("dispatch-qcd", "controlled choice of Q1 or Q2");
  sq->add_option("--q1", q1, "circuit run on control 0")->required();
  sq->add_option("--q2", q2, "circuit run on control 1")->required();
  sq->add_option("-a", qa, "upper threshold");
  sq->add_option("-b", qb, "lower threshold");
  add_common(sq);

  auto* sm = app.add_subcommand("simulate", "apply a circuit to a state");
  sm->add_option("circuit", circ, "circuit file")->required();
  sm->add_option("--state", state, "input state file (default: random pure from --seed)");
  sm->add_flag("--pure", pure_out, "return the full pre-trace pure state");
  add_common(sm);

  auto* sx = app.add_subcommand("metric", "distances between states or circuits");
  sx->add_option("metric", metric, "fidelity | trace | fvdg | antisym | fmax | diamond")->required();
  sx->add_option("first", a, "state or circuit file")->required();
  sx->add_option("second", b, "state or circuit file");
  sx->add_option("--restarts", restarts, "optimizer restarts")->check(CLI::PositiveNumber);
  add_common(sx);

  auto* sv = app.add_subcommand("verify", "run a verification suite");
  sv->add_option("--suite", suite, "suite name")->required();
  sv->add_option("--trials", trials, "trial count (0: suite default)");
  sv->add_option("--max-density-qubits", density_cap, "cap for density-matrix instances");
  sv->add_option("--max-pure-qubits", pure_cap, "cap for pure-state instances");
  sv->add_option("--restarts", restarts, "optimizer restarts")->check(CLI::PositiveNumber);
  add_common(sv);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sd) return cmd_depth(circ, c);
    if (*ss) return cmd_slice(circ, c);
    if (*sr) return cmd_reduce(q1, q2, ta, tb, no_tests, c);
    if (*sq) return cmd_dispatch(q1, q2, qa, qb, c);
    if (*sm) return cmd_simulate(circ, state, pure_out, c);
    if (*sx) return cmd_metric(metric, a, b, restarts, c);
    if (*sv) return cmd_verify(suite, trials, density_cap, pure_cap, restarts, c);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
