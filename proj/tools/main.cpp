// gfblind command-line interface. Everything flows through the C API of
// libgfblind; the CLI itself only parses flags, assembles experiment specs
// and formats terminal output.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gfblind.h"
#include "json.hpp"

namespace {

using nlohmann::json;

int fail_with(const std::string& context) {
  std::cerr << "error: " << context << ": " << gfb_last_error() << "\n";
  return 2;
}

std::vector<int> parse_int_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw CLI::ValidationError("cannot open " + path);
  std::vector<int> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find('#');
    std::istringstream ss(pos == std::string::npos ? line : line.substr(0, pos));
    int v;
    while (ss >> v) out.push_back(v);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw CLI::ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GraphFlags {
  std::string file;
  bool directed = false;
  std::string kind = "er";
  int n = 50;
  double p = 0.1;
  int k = 4;
  double rewire = 0.2;
  int m = 2;
  int d = 5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--graph", file, "edge-list file (overrides --graph-kind)");
    cmd->add_flag("--directed", directed, "treat the edge-list file as directed");
    cmd->add_option("--graph-kind", kind,
                    "er | directed_cycle | small_world | pref_attach | random_regular");
    cmd->add_option("-n,--nodes", n, "node count for generated graphs");
    cmd->add_option("-p,--edge-prob", p, "er edge probability");
    cmd->add_option("--sw-k", k, "small-world neighbor count");
    cmd->add_option("--sw-rewire", rewire, "small-world rewiring probability");
    cmd->add_option("--pa-m", m, "preferential-attachment edges per node");
    cmd->add_option("--rr-d", d, "random-regular degree");
  }

  json to_json() const {
    if (!file.empty()) {
      json j{{"kind", "from_file"}, {"path", file}};
      if (directed) j["directed"] = true;
      return j;
    }
    json j{{"kind", kind}, {"n", n}};
    if (kind == "er") j["p"] = p;
    if (kind == "small_world") {
      j["k"] = k;
      j["rewire"] = rewire;
    }
    if (kind == "pref_attach") j["m"] = m;
    if (kind == "random_regular") j["d"] = d;
    return j;
  }

  gfb_graph* build(std::uint64_t seed) const {
    if (!file.empty()) return gfb_graph_load(file.c_str(), directed ? 1 : 0);
    double a1 = 0, a2 = 0;
    if (kind == "er") a1 = p;
    if (kind == "small_world") {
      a1 = k;
      a2 = rewire;
    }
    if (kind == "pref_attach") a1 = m;
    if (kind == "random_regular") a1 = d;
    return gfb_graph_generate(kind.c_str(), n, a1, a2, seed);
  }
};

struct SolverFlags {
  std::string solver = "rw";
  double tau = 1.0;
  double delta = -1.0;
  int reweight_iters = 3;
  int max_iters = 3000;
  double tol = 1e-7;
  double noise_eps = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--solver", solver, "l1 | n21 | rw | rwP (rwP = multi-output)");
    cmd->add_option("--tau", tau, "rank vs row-sparsity tradeoff");
    cmd->add_option("--delta", delta, "reweighting offset (<=0: automatic)");
    cmd->add_option("--reweight-iters", reweight_iters, "outer reweighting iterations");
    cmd->add_option("--max-iters", max_iters, "ADMM iteration cap");
    cmd->add_option("--tol", tol, "primal/dual tolerance");
    cmd->add_option("--noise-eps", noise_eps, "observation ball radius (0 = equality)");
  }

  json config_json() const {
    return json{{"tau", tau},           {"delta", delta},
                {"reweight_iters", reweight_iters}, {"max_iters", max_iters},
                {"tol_primal", tol},    {"tol_dual", tol},
                {"noise_eps", noise_eps}};
  }
};

int run_spec(json spec, const std::string& json_spec_path, const std::string& out_dir) {
  if (!json_spec_path.empty()) {
    json loaded = json::parse(read_file(json_spec_path));
    loaded.update(spec);  // explicit flags win over the file
    spec = loaded;
  }
  const std::string text = spec.dump();
  if (gfb_experiment_run_json(text.c_str(), out_dir.empty() ? nullptr : out_dir.c_str()) !=
      GFB_OK)
    return fail_with("experiment failed");
  std::cout << "wrote " << (out_dir.empty() ? spec.value("out", "out") : out_dir) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blind identification of graph filters"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_dir;
  std::string json_spec_path;
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--out", out_dir, "output directory or file");
  app.add_option("--json-spec", json_spec_path, "experiment spec JSON (flags override)");

  // ---- solve
  auto* solve = app.add_subcommand("solve", "solve one instance from files");
  GraphFlags solve_graph;
  SolverFlags solve_solver;
  solve_graph.attach(solve);
  solve_solver.attach(solve);
  std::string y_path, x0_path, h0_path, observed_path, shift = "adjacency";
  int filter_len = 3;
  solve->add_option("--y", y_path, "observed signal (CSV column)")->required();
  solve->add_option("-L,--filter-len", filter_len, "filter length")->required();
  solve->add_option("--shift", shift, "adjacency | laplacian");
  solve->add_option("--observed", observed_path, "file listing observed node indices");
  solve->add_option("--x0", x0_path, "ground-truth input (enables RMSE report)");
  solve->add_option("--h0", h0_path, "ground-truth coefficients");

  // ---- phase
  auto* phase = app.add_subcommand("phase", "success-rate phase diagram over (S, L)");
  GraphFlags phase_graph;
  SolverFlags phase_solver;
  phase_graph.attach(phase);
  phase_solver.attach(phase);
  int s_min = 2, s_max = 8, l_min = 2, l_max = 5, trials = 20, p_signals = 5;
  phase->add_option("--s-min", s_min);
  phase->add_option("--s-max", s_max);
  phase->add_option("--l-min", l_min);
  phase->add_option("--l-max", l_max);
  phase->add_option("--trials", trials, "trials per cell");
  phase->add_option("--p-signals", p_signals, "output signals for rwP");

  // ---- sweep
  auto* sweep = app.add_subcommand("sweep", "median error vs number of observed nodes");
  GraphFlags sweep_graph;
  sweep_graph.n = 66;
  SolverFlags sweep_solver;
  sweep_graph.attach(sweep);
  sweep_solver.attach(sweep);
  int sweep_s = 3, sweep_l = 3, sweep_trials = 50;
  double sigma = 0.01;
  std::vector<int> observed_counts;
  std::vector<std::string> sweep_solvers;
  sweep->add_option("-S,--sparsity", sweep_s);
  sweep->add_option("-L,--filter-len", sweep_l);
  sweep->add_option("--trials", sweep_trials);
  sweep->add_option("--sigma", sigma, "multiplicative noise level for noisy variants");
  sweep->add_option("--observed-counts", observed_counts, "observed node counts");
  sweep->add_option("--solvers", sweep_solvers,
                    "subset of proposed,proposed_ks,ls,am,proposed_noisy,proposed_ks_noisy");

  // ---- rho
  auto* rho = app.add_subcommand("rho", "coherence tables rho_U(k), rho_Psi(k)");
  GraphFlags rho_graph;
  rho_graph.attach(rho);
  int rho_k = 10, rho_l = 3, rho_s = 3;
  bool rho_bound = false;
  std::string rho_shift = "adjacency";
  rho->add_option("-K,--k-max", rho_k, "table depth for rho_U");
  rho->add_option("-L,--filter-len", rho_l, "basis order for rho_Psi");
  rho->add_option("-S,--sparsity", rho_s, "sparsity used for the recovery bound");
  rho->add_option("--shift", rho_shift, "adjacency | laplacian");
  rho->add_flag("--bound", rho_bound, "also print alpha, alpha1, gamma, P_rec");

  // ---- rho-correlation experiment
  auto* rhocorr = app.add_subcommand("rho-correlation",
                                     "recovery difficulty vs coherence across random graphs");
  SolverFlags rho_solver;
  rho_solver.solver = "l1";
  rho_solver.attach(rhocorr);
  int rc_graphs = 30, rc_trials = 30, rc_s = 3, rc_l = 3;
  double rc_plo = 0.05, rc_phi = 0.15;
  rhocorr->add_option("--graphs", rc_graphs, "number of random graphs");
  rhocorr->add_option("--trials", rc_trials, "problems per graph");
  rhocorr->add_option("-S,--sparsity", rc_s);
  rhocorr->add_option("-L,--filter-len", rc_l);
  rhocorr->add_option("--p-lo", rc_plo);
  rhocorr->add_option("--p-hi", rc_phi);

  // ---- epidemic
  auto* epidemic = app.add_subcommand("epidemic", "SIS outbreak source localization");
  GraphFlags ep_graph;
  SolverFlags ep_solver;
  ep_graph.attach(epidemic);
  ep_solver.attach(epidemic);
  double omega = 0.3, beta = 0.1;
  int horizon = 3, outbreaks = 500, realizations = 20;
  std::vector<int> ep_observed;
  epidemic->add_option("--omega", omega, "healing probability");
  epidemic->add_option("--beta", beta, "infection rate");
  epidemic->add_option("-T,--horizon", horizon);
  epidemic->add_option("-W,--outbreaks", outbreaks);
  epidemic->add_option("--realizations", realizations);
  epidemic->add_option("--observed-counts", ep_observed);

  // ---- identify
  auto* identify = app.add_subcommand("identify", "brute-force identifiability check");
  GraphFlags id_graph;
  id_graph.attach(identify);
  int id_l = 3, id_s = 2, id_cycle = 0;
  bool adjacent = false;
  std::string id_shift = "adjacency";
  identify->add_option("--cycle", id_cycle, "use a directed cycle of this size");
  identify->add_option("-L,--filter-len", id_l)->required();
  identify->add_option("-S,--sparsity", id_s)->required();
  identify->add_option("--shift", id_shift, "adjacency | laplacian");
  identify->add_flag("--adjacent", adjacent, "restrict supports to adjacent windows");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      json spec;
      spec["kind"] = "single_solve";
      spec["seed"] = seed;
      spec["graph"] = solve_graph.to_json();
      spec["shift"] = shift;
      spec["solver"] = solve_solver.solver;
      spec["config"] = solve_solver.config_json();
      spec["l"] = filter_len;
      spec["y_path"] = y_path;
      if (!x0_path.empty()) spec["x0_path"] = x0_path;
      if (!h0_path.empty()) spec["h0_path"] = h0_path;
      if (!observed_path.empty()) spec["observed_nodes"] = parse_int_list_file(observed_path);
      return run_spec(spec, json_spec_path, out_dir.empty() ? "solve_out" : out_dir);
    }

    if (phase->parsed()) {
      json spec;
      spec["kind"] = "phase";
      spec["seed"] = seed;
      spec["graph"] = phase_graph.to_json();
      spec["solver"] = phase_solver.solver;
      spec["p_signals"] = p_signals;
      spec["config"] = phase_solver.config_json();
      spec["trials"] = trials;
      std::vector<int> sv, lv;
      for (int s = s_min; s <= s_max; ++s) sv.push_back(s);
      for (int l = l_min; l <= l_max; ++l) lv.push_back(l);
      spec["s_values"] = sv;
      spec["l_values"] = lv;
      return run_spec(spec, json_spec_path, out_dir.empty() ? "phase_out" : out_dir);
    }

    if (sweep->parsed()) {
      json spec;
      spec["kind"] = "sampling_sweep";
      spec["seed"] = seed;
      spec["graph"] = sweep_graph.to_json();
      spec["solver"] = sweep_solver.solver;
      spec["config"] = sweep_solver.config_json();
      spec["trials"] = sweep_trials;
      spec["s"] = sweep_s;
      spec["l"] = sweep_l;
      spec["noise_sigma"] = sigma;
      if (!observed_counts.empty()) spec["observed_counts"] = observed_counts;
      if (!sweep_solvers.empty()) spec["sweep_solvers"] = sweep_solvers;
      return run_spec(spec, json_spec_path, out_dir.empty() ? "sweep_out" : out_dir);
    }

    if (rhocorr->parsed()) {
      json spec;
      spec["kind"] = "rho_correlation";
      spec["seed"] = seed;
      spec["solver"] = rho_solver.solver;
      spec["config"] = rho_solver.config_json();
      spec["n_graphs"] = rc_graphs;
      spec["trials"] = rc_trials;
      spec["s"] = rc_s;
      spec["l"] = rc_l;
      spec["p_lo"] = rc_plo;
      spec["p_hi"] = rc_phi;
      spec["graph"] = json{{"kind", "er"}, {"n", 50}};
      return run_spec(spec, json_spec_path, out_dir.empty() ? "rho_out" : out_dir);
    }

    if (epidemic->parsed()) {
      json spec;
      spec["kind"] = "epidemic";
      spec["seed"] = seed;
      spec["graph"] = ep_graph.to_json();
      spec["solver"] = ep_solver.solver;
      spec["config"] = ep_solver.config_json();
      json ep{{"omega", omega},       {"beta", beta},
              {"horizon", horizon},   {"outbreaks", outbreaks},
              {"realizations", realizations}};
      if (!ep_observed.empty()) ep["observed_counts"] = ep_observed;
      spec["epidemic"] = ep;
      return run_spec(spec, json_spec_path, out_dir.empty() ? "epidemic_out" : out_dir);
    }

    if (rho->parsed()) {
      std::unique_ptr<gfb_graph, decltype(&gfb_graph_free)> graph(rho_graph.build(seed),
                                                                  gfb_graph_free);
      if (!graph) return fail_with("graph construction failed");
      std::unique_ptr<gfb_spectrum, decltype(&gfb_spectrum_free)> spec(
          gfb_spectrum_build(graph.get(), rho_shift.c_str(), 0), gfb_spectrum_free);
      if (!spec) return fail_with("spectrum construction failed");
      std::unique_ptr<gfb_basis, decltype(&gfb_basis_free)> basis(
          gfb_basis_build(spec.get(), rho_l), gfb_basis_free);
      if (!basis) return fail_with("basis construction failed");
      std::vector<double> rho_u(rho_k), rho_psi(rho_l);
      if (gfb_coherence_profile(spec.get(), basis.get(), rho_k, rho_u.data(), rho_psi.data()) !=
          GFB_OK)
        return fail_with("coherence profile failed");
      std::ostringstream csv;
      csv << "k,rho_u,rho_psi\n";
      for (int k = 1; k <= rho_k; ++k) {
        csv << k << "," << rho_u[k - 1] << ",";
        if (k <= rho_l) csv << rho_psi[k - 1];
        csv << "\n";
      }
      if (out_dir.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream f(out_dir);
        f << csv.str();
        std::cout << "wrote " << out_dir << "\n";
      }
      if (rho_bound) {
        gfb_recovery_bound b;
        if (gfb_theorem_bound(rho_u.data(), rho_k, rho_psi.data(), rho_l, rho_s,
                              gfb_spectrum_n(spec.get()), &b) != GFB_OK)
          return fail_with("bound evaluation failed");
        std::printf("alpha=%.6g alpha1=%.6g gamma=%.6g P_rec>=%.6g%s\n", b.alpha, b.alpha1,
                    b.gamma, b.p_rec_lower, b.applicable ? "" : " (alpha < 1: not applicable)");
      }
      return 0;
    }

    if (identify->parsed()) {
      std::unique_ptr<gfb_graph, decltype(&gfb_graph_free)> graph(
          id_cycle > 0 ? gfb_graph_generate("directed_cycle", id_cycle, 0, 0, seed)
                       : id_graph.build(seed),
          gfb_graph_free);
      if (!graph) return fail_with("graph construction failed");
      std::unique_ptr<gfb_spectrum, decltype(&gfb_spectrum_free)> spec(
          gfb_spectrum_build(graph.get(), id_cycle > 0 ? "directed_cycle" : id_shift.c_str(), 0),
          gfb_spectrum_free);
      if (!spec) return fail_with("spectrum construction failed");
      int vacuous = 0;
      const int ok = gfb_check_identifiability(spec.get(), id_l, id_s,
                                               adjacent ? "adjacent" : "all", &vacuous);
      if (ok < 0) return fail_with("identifiability check failed");
      std::cout << (ok ? "identifiable" : "not identifiable")
                << (vacuous ? " (vacuously: no qualifying row set)" : "") << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
