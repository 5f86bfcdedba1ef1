#include "gfb/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

#include "gfb/io.hpp"
#include "gfb/lifting.hpp"
#include "gfb/rng.hpp"
#include "gfb/spectrum.hpp"
#include "gfb/svg.hpp"
#include "gfb/theory.hpp"
#include "json.hpp"

namespace gfb {

namespace {

using nlohmann::json;

// --------------------------------------------------------------- graphs

Graph make_er(int n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.push_back({i, j, 1.0});
  return Graph(n, std::move(edges), false);
}

Graph make_directed_cycle(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
  return Graph(n, std::move(edges), true);
}

Graph make_small_world(int n, int k, double rewire, Rng& rng) {
  require(k >= 2 && k % 2 == 0 && k < n, errc::invalid_argument,
          "small-world neighbor count must be even and < n");
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int d = 1; d <= k / 2; ++d) {
      const int j = (i + d) % n;
      adj[i][j] = adj[j][i] = true;
    }
  for (int i = 0; i < n; ++i)
    for (int d = 1; d <= k / 2; ++d) {
      const int j = (i + d) % n;
      if (!adj[i][j]) continue;
      if (rng.bernoulli(rewire)) {
        // pick a fresh endpoint for the edge (i, j)
        int trials = 0;
        while (trials++ < 4 * n) {
          const int t = static_cast<int>(rng.uniform_int(0, n - 1));
          if (t != i && !adj[i][t]) {
            adj[i][j] = adj[j][i] = false;
            adj[i][t] = adj[t][i] = true;
            break;
          }
        }
      }
    }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (adj[i][j]) edges.push_back({i, j, 1.0});
  return Graph(n, std::move(edges), false);
}

Graph make_pref_attach(int n, int m, Rng& rng) {
  require(m >= 1 && m < n, errc::invalid_argument, "pref_attach needs 1 <= m < n");
  std::vector<Edge> edges;
  std::vector<int> urn;  // nodes repeated by degree
  for (int v = 1; v < n; ++v) {
    const int want = std::min(v, m);
    std::vector<int> targets;
    int guard = 0;
    while (static_cast<int>(targets.size()) < want && guard++ < 100 * n) {
      int t;
      if (urn.empty() || rng.bernoulli(0.1)) {
        t = static_cast<int>(rng.uniform_int(0, v - 1));
      } else {
        t = urn[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(urn.size()) - 1))];
      }
      if (t != v && std::find(targets.begin(), targets.end(), t) == targets.end())
        targets.push_back(t);
    }
    for (int t : targets) {
      edges.push_back({t, v, 1.0});
      urn.push_back(t);
      urn.push_back(v);
    }
  }
  return Graph(n, std::move(edges), false);
}

Graph make_random_regular(int n, int d, Rng& rng) {
  require(d >= 1 && d < n && (n * d) % 2 == 0, errc::invalid_argument,
          "random_regular needs d < n and n*d even");
  for (int attempt = 0; attempt < 500; ++attempt) {
    std::vector<int> stubs;
    stubs.reserve(n * d);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) stubs.push_back(i);
    for (int i = static_cast<int>(stubs.size()) - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_int(0, i));
      std::swap(stubs[i], stubs[j]);
    }
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    bool ok = true;
    for (size_t k = 0; k + 1 < stubs.size() && ok; k += 2) {
      const int a = stubs[k], b = stubs[k + 1];
      if (a == b || adj[a][b]) ok = false;
      adj[a][b] = adj[b][a] = true;
    }
    if (!ok) continue;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (adj[i][j]) edges.push_back({i, j, 1.0});
    return Graph(n, std::move(edges), false);
  }
  fail(errc::invalid_argument, "random_regular: no simple matching found");
}

}  // namespace

Graph gen_graph(const GraphGenSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  if (spec.kind == "er") return make_er(spec.n, spec.p, rng);
  if (spec.kind == "directed_cycle") return make_directed_cycle(spec.n);
  if (spec.kind == "small_world") return make_small_world(spec.n, spec.k, spec.rewire, rng);
  if (spec.kind == "pref_attach") return make_pref_attach(spec.n, spec.m, rng);
  if (spec.kind == "random_regular") return make_random_regular(spec.n, spec.d, rng);
  if (spec.kind == "from_file") return load_edge_list(spec.path, spec.directed_file);
  fail(errc::invalid_argument, "unknown graph kind: " + spec.kind);
}

// ----------------------------------------------------------------- JSON

namespace {

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::phase: return "phase";
    case ExperimentKind::sampling_sweep: return "sampling_sweep";
    case ExperimentKind::rho_correlation: return "rho_correlation";
    case ExperimentKind::epidemic: return "epidemic";
    case ExperimentKind::single_solve: return "single_solve";
  }
  return "phase";
}

ExperimentKind kind_from_name(const std::string& s) {
  if (s == "phase") return ExperimentKind::phase;
  if (s == "sampling_sweep") return ExperimentKind::sampling_sweep;
  if (s == "rho_correlation") return ExperimentKind::rho_correlation;
  if (s == "epidemic") return ExperimentKind::epidemic;
  if (s == "single_solve") return ExperimentKind::single_solve;
  fail(errc::invalid_argument, "unknown experiment kind: " + s);
}

json graph_to_json(const GraphGenSpec& g) {
  json j{{"kind", g.kind}};
  if (g.n) j["n"] = g.n;
  if (g.p != 0) j["p"] = g.p;
  if (g.k) j["k"] = g.k;
  if (g.rewire != 0) j["rewire"] = g.rewire;
  if (g.m) j["m"] = g.m;
  if (g.d) j["d"] = g.d;
  if (!g.path.empty()) j["path"] = g.path;
  if (g.directed_file) j["directed"] = true;
  return j;
}

GraphGenSpec graph_from_json(const json& j) {
  GraphGenSpec g;
  g.kind = j.value("kind", "er");
  g.n = j.value("n", 0);
  g.p = j.value("p", 0.0);
  g.k = j.value("k", 0);
  g.rewire = j.value("rewire", 0.0);
  g.m = j.value("m", 0);
  g.d = j.value("d", 0);
  g.path = j.value("path", "");
  g.directed_file = j.value("directed", false);
  return g;
}

}  // namespace

ExperimentSpec parse_spec_json(const std::string& json_text) {
  json j = json::parse(json_text);
  ExperimentSpec s;
  s.kind = kind_from_name(j.value("kind", "phase"));
  s.master_seed = j.value("seed", 1ull);
  s.out_dir = j.value("out", "out");
  if (j.contains("graph")) s.graph = graph_from_json(j["graph"]);
  s.shift = j.value("shift", "adjacency");
  s.solver = j.value("solver", "rw");
  s.p_signals = j.value("p_signals", s.solver == "rwP" ? 5 : 1);
  s.multi_shared_support = j.value("multi_shared_support", true);
  s.trials = j.value("trials", 20);
  if (j.contains("config")) {
    const json& c = j["config"];
    s.config.tau = c.value("tau", s.config.tau);
    s.config.delta = c.value("delta", s.config.delta);
    s.config.reweight_iters = c.value("reweight_iters", s.config.reweight_iters);
    s.config.admm_penalty = c.value("admm_penalty", s.config.admm_penalty);
    s.config.max_iters = c.value("max_iters", s.config.max_iters);
    s.config.tol_primal = c.value("tol_primal", s.config.tol_primal);
    s.config.tol_dual = c.value("tol_dual", s.config.tol_dual);
    s.config.noise_eps = c.value("noise_eps", s.config.noise_eps);
    s.config.am_max_outer = c.value("am_max_outer", s.config.am_max_outer);
  }
  if (j.contains("s_values")) s.s_values = j["s_values"].get<std::vector<int>>();
  if (j.contains("l_values")) s.l_values = j["l_values"].get<std::vector<int>>();
  if (j.contains("observed_counts"))
    s.observed_counts = j["observed_counts"].get<std::vector<int>>();
  s.s = j.value("s", s.s);
  s.l = j.value("l", s.l);
  s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
  if (j.contains("sweep_solvers"))
    s.sweep_solvers = j["sweep_solvers"].get<std::vector<std::string>>();
  s.n_graphs = j.value("n_graphs", s.n_graphs);
  s.p_lo = j.value("p_lo", s.p_lo);
  s.p_hi = j.value("p_hi", s.p_hi);
  if (j.contains("epidemic")) {
    const json& e = j["epidemic"];
    s.epidemic.omega = e.value("omega", s.epidemic.omega);
    s.epidemic.beta = e.value("beta", s.epidemic.beta);
    s.epidemic.horizon = e.value("horizon", s.epidemic.horizon);
    s.epidemic.outbreaks = e.value("outbreaks", s.epidemic.outbreaks);
    if (e.contains("s_choices")) s.epidemic.s_choices = e["s_choices"].get<std::vector<int>>();
    if (e.contains("observed_counts"))
      s.epidemic.observed_counts = e["observed_counts"].get<std::vector<int>>();
    if (e.contains("q_modes"))
      s.epidemic.q_modes = e["q_modes"].get<std::vector<std::string>>();
    s.epidemic.realizations = e.value("realizations", s.epidemic.realizations);
    s.epidemic.upsilon_lo = e.value("upsilon_lo", s.epidemic.upsilon_lo);
    s.epidemic.upsilon_hi = e.value("upsilon_hi", s.epidemic.upsilon_hi);
    s.epidemic.p0_lo = e.value("p0_lo", s.epidemic.p0_lo);
    s.epidemic.p0_hi = e.value("p0_hi", s.epidemic.p0_hi);
  }
  s.y_path = j.value("y_path", "");
  s.x0_path = j.value("x0_path", "");
  s.h0_path = j.value("h0_path", "");
  if (j.contains("observed_nodes"))
    s.observed_nodes = j["observed_nodes"].get<std::vector<int>>();
  s.threads = j.value("threads", 0);
  return s;
}

std::string spec_to_json(const ExperimentSpec& s) {
  json j;
  j["kind"] = kind_name(s.kind);
  j["seed"] = s.master_seed;
  j["out"] = s.out_dir;
  j["graph"] = graph_to_json(s.graph);
  j["shift"] = s.shift;
  j["solver"] = s.solver;
  j["p_signals"] = s.p_signals;
  j["multi_shared_support"] = s.multi_shared_support;
  j["trials"] = s.trials;
  j["config"] = {{"tau", s.config.tau},
                 {"delta", s.config.delta},
                 {"reweight_iters", s.config.reweight_iters},
                 {"admm_penalty", s.config.admm_penalty},
                 {"max_iters", s.config.max_iters},
                 {"tol_primal", s.config.tol_primal},
                 {"tol_dual", s.config.tol_dual},
                 {"noise_eps", s.config.noise_eps},
                 {"am_max_outer", s.config.am_max_outer}};
  j["s_values"] = s.s_values;
  j["l_values"] = s.l_values;
  j["observed_counts"] = s.observed_counts;
  j["s"] = s.s;
  j["l"] = s.l;
  j["noise_sigma"] = s.noise_sigma;
  j["sweep_solvers"] = s.sweep_solvers;
  j["n_graphs"] = s.n_graphs;
  j["p_lo"] = s.p_lo;
  j["p_hi"] = s.p_hi;
  j["epidemic"] = {{"omega", s.epidemic.omega},
                   {"beta", s.epidemic.beta},
                   {"horizon", s.epidemic.horizon},
                   {"outbreaks", s.epidemic.outbreaks},
                   {"s_choices", s.epidemic.s_choices},
                   {"observed_counts", s.epidemic.observed_counts},
                   {"q_modes", s.epidemic.q_modes},
                   {"realizations", s.epidemic.realizations},
                   {"upsilon_lo", s.epidemic.upsilon_lo},
                   {"upsilon_hi", s.epidemic.upsilon_hi},
                   {"p0_lo", s.epidemic.p0_lo},
                   {"p0_hi", s.epidemic.p0_hi}};
  if (!s.y_path.empty()) j["y_path"] = s.y_path;
  if (!s.x0_path.empty()) j["x0_path"] = s.x0_path;
  if (!s.h0_path.empty()) j["h0_path"] = s.h0_path;
  if (!s.observed_nodes.empty()) j["observed_nodes"] = s.observed_nodes;
  return j.dump(2);
}

// ------------------------------------------------------------ utilities

namespace {

void parallel_for(int n_tasks, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n_tasks));
  if (threads == 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n_tasks) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

ShiftSpectrum build_spectrum(const Graph& graph, const std::string& shift) {
  if (shift == "laplacian") return ShiftSpectrum::build(graph, ShiftKind::laplacian);
  return ShiftSpectrum::build(graph, ShiftKind::adjacency);
}

struct SignalDraw {
  std::vector<int> support;
  Eigen::VectorXd x0;  // first signal
  std::vector<Eigen::VectorXd> xs;
  Eigen::VectorXd h0;
};

/// x0 has a uniformly random S-subset support with unit-norm Gaussian
/// values; h0 is unit-norm Gaussian. Extra signals share the support.
SignalDraw draw_signals(Rng& rng, int n, int s, int len, int p_signals) {
  SignalDraw d;
  d.support = rng.sample_without_replacement(n, s);
  d.h0 = rng.normal_vec(len);
  d.h0 /= d.h0.norm();
  for (int p = 0; p < p_signals; ++p) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int idx : d.support) x(idx) = rng.normal();
    x /= x.norm();
    d.xs.push_back(std::move(x));
  }
  d.x0 = d.xs.front();
  return d;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void sort_records(std::vector<TrialRecord>& records) {
  std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tie(a.solver, a.graph_id, a.s, a.l, a.p_signals, a.observed, a.q, a.trial) <
           std::tie(b.solver, b.graph_id, b.s, b.l, b.p_signals, b.observed, b.q, b.trial);
  });
}

// --------------------------------------------------------------- phase

ExperimentResult run_phase(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.spec = spec;
  const int p_signals = spec.solver == "rwP" ? std::max(2, spec.p_signals) : 1;
  struct Cell {
    int s, l, trial;
  };
  std::vector<Cell> tasks;
  for (int s : spec.s_values)
    for (int l : spec.l_values)
      for (int t = 0; t < spec.trials; ++t) tasks.push_back({s, l, t});
  result.records.resize(tasks.size());

  parallel_for(static_cast<int>(tasks.size()), spec.threads, [&](int ti) {
    const auto [s, l, trial] = tasks[ti];
    const std::uint64_t seed = derive_seed(spec.master_seed, 101, s, l, p_signals, trial);
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed);
    const Graph graph = gen_graph(spec.graph, derive_seed(seed, 7));
    const ShiftSpectrum spectrum = build_spectrum(graph, spec.shift);
    const int n = spectrum.n();
    const FilterBasis basis(spectrum, l);
    const LiftedOperator op(spectrum, basis);
    SignalDraw d = draw_signals(rng, n, s, l, p_signals);

    SolverConfig cfg = spec.config;
    cfg.rng_seed = seed;
    TrialRecord rec;
    rec.solver = spec.solver;
    rec.s = s;
    rec.l = l;
    rec.p_signals = p_signals;
    rec.observed = n;
    rec.trial = trial;
    rec.seed = seed;
    if (p_signals == 1) {
      const Eigen::VectorXcd y = op.forward(Eigen::MatrixXd(d.x0 * d.h0.transpose()));
      LiftedSolution sol;
      if (spec.solver == "l1")
        sol = solve_l1(op, y, cfg);
      else if (spec.solver == "n21")
        sol = solve_nuclear_l21(op, y, cfg);
      else
        sol = solve_reweighted(op, y, cfg);
      rec.rmse = rmse(sol.x_hat, sol.h_hat, d.x0, d.h0);
      rec.status = sol.status;
    } else {
      MultiOutputProblem prob;
      prob.shared_support = spec.multi_shared_support;
      for (int p = 0; p < p_signals; ++p)
        prob.outputs.push_back(op.forward(Eigen::MatrixXd(d.xs[p] * d.h0.transpose())));
      const MultiSolution multi = solve_multi({op}, prob, cfg);
      double sq = 0.0;
      for (int p = 0; p < p_signals; ++p) {
        const auto& sol = multi.per_signal[p];
        const double e = rmse(sol.x_hat, sol.h_hat, d.xs[p], d.h0);
        sq += e * e;
      }
      rec.rmse = std::sqrt(sq / p_signals);
      rec.status = multi.status;
    }
    rec.success = rec.rmse < 0.01;
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.records[ti] = std::move(rec);
  });

  sort_records(result.records);
  // success-rate matrix: rows = S, cols = L
  Eigen::MatrixXd rate(spec.s_values.size(), spec.l_values.size());
  json cells = json::array();
  for (size_t si = 0; si < spec.s_values.size(); ++si)
    for (size_t li = 0; li < spec.l_values.size(); ++li) {
      int total = 0, hits = 0;
      for (const auto& r : result.records)
        if (r.s == spec.s_values[si] && r.l == spec.l_values[li]) {
          ++total;
          hits += r.success ? 1 : 0;
        }
      rate(si, li) = total ? static_cast<double>(hits) / total : 0.0;
      cells.push_back({{"s", spec.s_values[si]},
                       {"l", spec.l_values[li]},
                       {"success_rate", rate(si, li)},
                       {"trials", total}});
    }
  json summary;
  summary["kind"] = "phase";
  summary["solver"] = spec.solver;
  summary["p_signals"] = p_signals;
  summary["cells"] = cells;
  summary["spec"] = json::parse(spec_to_json(spec));
  result.summary_json = summary.dump(2);

  std::vector<std::string> row_labels, col_labels;
  for (int s : spec.s_values) row_labels.push_back("S=" + std::to_string(s));
  for (int l : spec.l_values) col_labels.push_back("L=" + std::to_string(l));
  result.files["phase_" + spec.solver + ".svg"] =
      svg::heatmap(rate, row_labels, col_labels, "recovery success rate (" + spec.solver + ")",
                   "filter length L", "sparsity S");
  return result;
}

// --------------------------------------------------------------- sweep

ExperimentResult run_sweep(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.spec = spec;
  const Graph graph = gen_graph(spec.graph, derive_seed(spec.master_seed, 201));
  const ShiftSpectrum spectrum = build_spectrum(graph, spec.shift);
  const int n = spectrum.n();
  const FilterBasis basis(spectrum, spec.l);
  std::vector<int> counts = spec.observed_counts;
  if (counts.empty())
    for (int c = std::max(spec.l + spec.s, n / 2); c <= n; c += 2) counts.push_back(c);

  struct Task {
    int count_idx, trial;
  };
  std::vector<Task> tasks;
  for (size_t ci = 0; ci < counts.size(); ++ci)
    for (int t = 0; t < spec.trials; ++t) tasks.push_back({static_cast<int>(ci), t});

  std::vector<std::vector<TrialRecord>> per_task(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), spec.threads, [&](int ti) {
    const int count = counts[tasks[ti].count_idx];
    const int trial = tasks[ti].trial;
    const std::uint64_t seed = derive_seed(spec.master_seed, 202, count, trial);
    Rng rng(seed);
    SignalDraw d = draw_signals(rng, n, spec.s, spec.l, 1);
    const std::vector<int> observed = rng.sample_without_replacement(n, count);
    const LiftedOperator op(spectrum, basis, observed, SamplingMode::vertex);
    const Eigen::VectorXcd y_clean = op.forward(Eigen::MatrixXd(d.x0 * d.h0.transpose()));
    Eigen::VectorXcd y_noisy(y_clean.size());
    for (Eigen::Index i = 0; i < y_clean.size(); ++i)
      y_noisy(i) = y_clean(i) * (1.0 + spec.noise_sigma * rng.normal());

    for (const std::string& name : spec.sweep_solvers) {
      const auto t0 = std::chrono::steady_clock::now();
      SolverConfig cfg = spec.config;
      cfg.rng_seed = seed;
      const bool noisy = name.find("noisy") != std::string::npos;
      const bool known = name.find("ks") != std::string::npos;
      if (known) cfg.known_support = d.support;
      LiftedSolution sol;
      if (name == "ls") {
        sol = baseline_ls(op, y_clean);
      } else if (name == "am") {
        sol = baseline_am(op, y_clean, spec.s, cfg);
      } else if (noisy) {
        cfg.noise_eps = spec.noise_sigma * y_noisy.norm();
        sol = solve_noisy(op, y_noisy, cfg);
      } else {
        sol = solve_reweighted(op, y_clean, cfg);
      }
      TrialRecord rec;
      rec.solver = name;
      rec.s = spec.s;
      rec.l = spec.l;
      rec.observed = count;
      rec.trial = trial;
      rec.seed = seed;
      rec.rmse = rmse(sol.x_hat, sol.h_hat, d.x0, d.h0);
      rec.success = rec.rmse < 0.01;
      rec.status = sol.status;
      rec.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      per_task[ti].push_back(std::move(rec));
    }
  });
  for (auto& group : per_task)
    for (auto& r : group) result.records.push_back(std::move(r));
  sort_records(result.records);

  json curves = json::array();
  std::vector<svg::Series> series;
  for (const std::string& name : spec.sweep_solvers) {
    svg::Series s;
    s.label = name;
    for (int c : counts) {
      std::vector<double> vals;
      for (const auto& r : result.records)
        if (r.solver == name && r.observed == c) vals.push_back(r.rmse);
      const double med = median(vals);
      s.x.push_back(c);
      s.y.push_back(med);
      curves.push_back({{"solver", name}, {"observed", c}, {"median_rmse", med}});
    }
    series.push_back(std::move(s));
  }
  json summary;
  summary["kind"] = "sampling_sweep";
  summary["curves"] = curves;
  summary["n"] = n;
  summary["spec"] = json::parse(spec_to_json(spec));
  result.summary_json = summary.dump(2);
  result.files["sweep.svg"] = svg::line_chart(
      series, "median recovery error vs observations", "observed nodes", "median RMSE", true);
  return result;
}

// ----------------------------------------------------------------- rho

ExperimentResult run_rho(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.spec = spec;
  struct GraphStat {
    double p = 0, rho_u = 0, mean_rmse = 0, fail_rate = 0;
  };
  std::vector<GraphStat> stats(spec.n_graphs);
  std::vector<std::vector<TrialRecord>> per_graph(spec.n_graphs);

  parallel_for(spec.n_graphs, spec.threads, [&](int g) {
    const std::uint64_t gseed = derive_seed(spec.master_seed, 303, g);
    Rng grng(gseed);
    const double p = grng.uniform(spec.p_lo, spec.p_hi);
    GraphGenSpec gs = spec.graph;
    gs.kind = "er";
    gs.p = p;
    const Graph graph = gen_graph(gs, derive_seed(gseed, 11));
    const ShiftSpectrum spectrum = build_spectrum(graph, spec.shift);
    const int n = spectrum.n();
    const FilterBasis basis(spectrum, spec.l);
    const CoherenceProfile profile = coherence_profile(spectrum, basis, spec.s);
    const LiftedOperator op(spectrum, basis);

    double sum_rmse = 0;
    int fails = 0;
    for (int t = 0; t < spec.trials; ++t) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::uint64_t seed = derive_seed(gseed, 404, t);
      Rng rng(seed);
      SignalDraw d = draw_signals(rng, n, spec.s, spec.l, 1);
      SolverConfig cfg = spec.config;
      cfg.rng_seed = seed;
      const Eigen::VectorXcd y = op.forward(Eigen::MatrixXd(d.x0 * d.h0.transpose()));
      LiftedSolution sol;
      if (spec.solver == "n21")
        sol = solve_nuclear_l21(op, y, cfg);
      else if (spec.solver == "rw")
        sol = solve_reweighted(op, y, cfg);
      else
        sol = solve_l1(op, y, cfg);
      TrialRecord rec;
      rec.solver = spec.solver;
      rec.graph_id = g;
      rec.s = spec.s;
      rec.l = spec.l;
      rec.observed = n;
      rec.trial = t;
      rec.seed = seed;
      rec.rmse = rmse(sol.x_hat, sol.h_hat, d.x0, d.h0);
      rec.success = rec.rmse < 0.01;
      rec.status = sol.status;
      rec.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      sum_rmse += rec.rmse;
      fails += rec.success ? 0 : 1;
      per_graph[g].push_back(std::move(rec));
    }
    stats[g] = {p, profile.rho_u(spec.s - 1), sum_rmse / spec.trials,
                static_cast<double>(fails) / spec.trials};
  });
  for (auto& group : per_graph)
    for (auto& r : group) result.records.push_back(std::move(r));
  sort_records(result.records);

  std::vector<double> rho_values;
  for (const auto& st : stats) rho_values.push_back(st.rho_u);
  const double rho_median = median(rho_values);
  double lo_rmse = 0, hi_rmse = 0, lo_fail = 0, hi_fail = 0;
  int lo_n = 0, hi_n = 0;
  json graphs = json::array();
  for (const auto& st : stats) {
    graphs.push_back({{"p", st.p},
                      {"rho_u", st.rho_u},
                      {"mean_rmse", st.mean_rmse},
                      {"failure_rate", st.fail_rate}});
    if (st.rho_u <= rho_median) {
      lo_rmse += st.mean_rmse;
      lo_fail += st.fail_rate;
      ++lo_n;
    } else {
      hi_rmse += st.mean_rmse;
      hi_fail += st.fail_rate;
      ++hi_n;
    }
  }
  json summary;
  summary["kind"] = "rho_correlation";
  summary["rho_k"] = spec.s;
  summary["graphs"] = graphs;
  summary["rho_median"] = rho_median;
  summary["below_median"] = {{"count", lo_n},
                             {"mean_rmse", lo_n ? lo_rmse / lo_n : 0.0},
                             {"mean_failure_rate", lo_n ? lo_fail / lo_n : 0.0}};
  summary["above_median"] = {{"count", hi_n},
                             {"mean_rmse", hi_n ? hi_rmse / hi_n : 0.0},
                             {"mean_failure_rate", hi_n ? hi_fail / hi_n : 0.0}};
  summary["spec"] = json::parse(spec_to_json(spec));
  result.summary_json = summary.dump(2);

  // sort by rho for readable curves
  std::vector<int> order(stats.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return stats[a].rho_u < stats[b].rho_u; });
  svg::Series fail_s{"failure rate", {}, {}}, rmse_s{"mean RMSE", {}, {}};
  for (int idx : order) {
    fail_s.x.push_back(stats[idx].rho_u);
    fail_s.y.push_back(stats[idx].fail_rate);
    rmse_s.x.push_back(stats[idx].rho_u);
    rmse_s.y.push_back(stats[idx].mean_rmse);
  }
  result.files["rho_correlation.svg"] =
      svg::line_chart({fail_s, rmse_s}, "recovery difficulty vs coherence", "rho_U", "value");
  return result;
}

// ------------------------------------------------------------ epidemic

ExperimentResult run_epidemic_exp(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.spec = spec;
  const Graph graph = gen_graph(spec.graph, derive_seed(spec.master_seed, 500));
  const int n = graph.n_nodes();
  const EpidemicSpec& ep = spec.epidemic;

  struct RealizationOut {
    std::vector<TrialRecord> records;
    json info;
  };
  std::vector<RealizationOut> outs(ep.realizations);

  parallel_for(ep.realizations, spec.threads, [&](int r) {
    const std::uint64_t rseed = derive_seed(spec.master_seed, 505, r);
    Rng rng(rseed);
    const int s_level =
        ep.s_choices[static_cast<size_t>(rng.uniform_int(0, ep.s_choices.size() - 1))];
    const std::vector<int> sources = rng.sample_without_replacement(n, s_level);
    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(n);
    for (int i : sources) p0(i) = rng.uniform(ep.p0_lo, ep.p0_hi);
    std::vector<double> upsilon(ep.horizon);
    for (double& u : upsilon) u = rng.uniform(ep.upsilon_lo, ep.upsilon_hi);

    EpidemicModel model{graph, ep.omega, ep.beta, upsilon, ep.horizon, ep.outbreaks, p0};
    int rejections = 0;
    const OutbreakSet outbreaks = sis_simulate(model, derive_seed(rseed, 1), &rejections);

    json info;
    info["realization"] = r;
    info["s"] = s_level;
    info["sources"] = sources;
    info["upsilon"] = upsilon;
    info["rejected_empty_initial_sets"] = rejections;

    for (int count : ep.observed_counts) {
      const int c = std::min(count, n);
      Rng obs_rng(derive_seed(rseed, 2, c));
      const std::vector<int> observed = obs_rng.sample_without_replacement(n, c);
      for (const std::string& mode : ep.q_modes) {
        const auto t0 = std::chrono::steady_clock::now();
        int q = n;
        if (mode == "2S")
          q = std::min(n, 2 * s_level);
        else if (mode == "N/2")
          q = n / 2;
        std::vector<int> prior;
        if (q < n) {
          // candidate set containing the true sources plus random decoys
          Rng prior_rng(derive_seed(rseed, 3, c, q));
          prior = sources;
          std::vector<int> rest;
          for (int i = 0; i < n; ++i)
            if (std::find(sources.begin(), sources.end(), i) == sources.end()) rest.push_back(i);
          const int need = q - s_level;
          const std::vector<int> picks =
              prior_rng.sample_without_replacement(static_cast<int>(rest.size()), need);
          for (int k : picks) prior.push_back(rest[k]);
          std::sort(prior.begin(), prior.end());
        }
        SolverConfig cfg = spec.config;
        cfg.rng_seed = rseed;
        const LocalizationResult loc = localize_sources(model, outbreaks, observed, prior, cfg);
        TrialRecord rec;
        rec.solver = spec.solver;
        rec.graph_id = 0;
        rec.s = s_level;
        rec.l = ep.horizon + 1;
        rec.observed = c;
        rec.q = q;
        rec.trial = r;
        rec.seed = rseed;
        rec.rmse = loc.error;
        rec.success = rec.rmse < 0.01;
        rec.status = loc.status;
        rec.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        outs[r].records.push_back(std::move(rec));
      }
    }
    outs[r].info = std::move(info);
  });

  json realizations = json::array();
  for (auto& o : outs) {
    for (auto& rec : o.records) result.records.push_back(std::move(rec));
    realizations.push_back(std::move(o.info));
  }
  sort_records(result.records);

  // mean localization error per (q_mode, observed count)
  json curve_rows = json::array();
  std::vector<svg::Series> series;
  for (const std::string& mode : ep.q_modes) {
    svg::Series s;
    s.label = "Q=" + mode;
    for (int count : ep.observed_counts) {
      const int c = std::min(count, n);
      double sum = 0;
      int total = 0;
      for (const auto& rec : result.records) {
        const bool is_mode = (mode == "N" && rec.q == n) ||
                             (mode == "N/2" && rec.q == n / 2) ||
                             (mode == "2S" && rec.q == std::min(n, 2 * rec.s));
        if (is_mode && rec.observed == c) {
          sum += rec.rmse;
          ++total;
        }
      }
      const double mean = total ? sum / total : 0.0;
      s.x.push_back(c);
      s.y.push_back(mean);
      curve_rows.push_back({{"q_mode", mode}, {"observed", c}, {"mean_error", mean}});
    }
    series.push_back(std::move(s));
  }
  json summary;
  summary["kind"] = "epidemic";
  summary["curves"] = curve_rows;
  summary["realizations"] = realizations;
  summary["spec"] = json::parse(spec_to_json(spec));
  result.summary_json = summary.dump(2);
  result.files["epidemic.svg"] = svg::line_chart(
      series, "source localization error", "observed nodes", "mean localization error");
  return result;
}

// -------------------------------------------------------- single solve

ExperimentResult run_single(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.spec = spec;
  require(!spec.y_path.empty(), errc::invalid_argument, "single_solve needs y_path");
  const Graph graph = gen_graph(spec.graph, derive_seed(spec.master_seed, 600));
  const ShiftSpectrum spectrum = build_spectrum(graph, spec.shift);
  const FilterBasis basis(spectrum, spec.l);
  const Eigen::MatrixXcd y_mat = load_matrix_csv(spec.y_path);
  require(y_mat.cols() == 1, errc::invalid_argument, "y file must be a single column");
  const LiftedOperator op(spectrum, basis, spec.observed_nodes, SamplingMode::vertex);
  Eigen::VectorXcd y(op.n_observed());
  if (y_mat.rows() == spectrum.n() && op.n_observed() != spectrum.n()) {
    for (int k = 0; k < op.n_observed(); ++k) y(k) = y_mat(op.observed()[k], 0);
  } else {
    require(y_mat.rows() == op.n_observed(), errc::dimension_mismatch,
            "y length does not match the observation set");
    y = y_mat.col(0);
  }
  SolverConfig cfg = spec.config;
  cfg.rng_seed = spec.master_seed;
  const auto t0 = std::chrono::steady_clock::now();
  LiftedSolution sol;
  if (spec.solver == "l1")
    sol = solve_l1(op, y, cfg);
  else if (spec.solver == "n21")
    sol = solve_nuclear_l21(op, y, cfg);
  else if (spec.solver == "ls")
    sol = baseline_ls(op, y);
  else
    sol = (cfg.noise_eps > 0) ? solve_noisy(op, y, cfg) : solve_reweighted(op, y, cfg);

  TrialRecord rec;
  rec.solver = spec.solver;
  rec.s = spec.s;
  rec.l = spec.l;
  rec.observed = op.n_observed();
  rec.seed = spec.master_seed;
  rec.status = sol.status;
  rec.rmse = std::numeric_limits<double>::quiet_NaN();
  if (!spec.x0_path.empty() && !spec.h0_path.empty()) {
    const Eigen::VectorXd x0 = load_matrix_csv_real(spec.x0_path).col(0);
    const Eigen::VectorXd h0 = load_matrix_csv_real(spec.h0_path).col(0);
    rec.rmse = rmse(sol.x_hat, sol.h_hat, x0, h0);
    rec.success = rec.rmse < 0.01;
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.records.push_back(rec);

  json summary;
  summary["kind"] = "single_solve";
  summary["spec"] = json::parse(spec_to_json(spec));
  result.summary_json = summary.dump(2);
  result.files["solution.json"] = solution_to_json(sol) + "\n";
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::phase: return run_phase(spec);
    case ExperimentKind::sampling_sweep: return run_sweep(spec);
    case ExperimentKind::rho_correlation: return run_rho(spec);
    case ExperimentKind::epidemic: return run_epidemic_exp(spec);
    case ExperimentKind::single_solve: return run_single(spec);
  }
  fail(errc::invalid_argument, "unknown experiment kind");
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::string out = "solver,graph_id,s,l,p,observed,q,trial,seed,rmse,success,status\n";
  for (const auto& r : records) {
    out += r.solver + "," + std::to_string(r.graph_id) + "," + std::to_string(r.s) + "," +
           std::to_string(r.l) + "," + std::to_string(r.p_signals) + "," +
           std::to_string(r.observed) + "," + std::to_string(r.q) + "," +
           std::to_string(r.trial) + "," + std::to_string(r.seed) + "," + format_double(r.rmse) +
           "," + (r.success ? "1" : "0") + "," + to_string(r.status) + "\n";
  }
  return out;
}

void emit_outputs(const ExperimentResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  require(!ec, errc::io_error, "cannot create output directory: " + out_dir);

  const auto write = [&](const std::string& name, const std::string& content) {
    const std::string path = out_dir + "/" + name;
    std::ofstream f(path, std::ios::binary);
    require(f.good(), errc::io_error, "cannot write: " + path);
    f << content;
    require(f.good(), errc::io_error, "write failed: " + path);
  };
  write("results.csv", records_to_csv(result.records));

  std::string timings = "solver,graph_id,s,l,p,observed,q,trial,wall_time_s\n";
  for (const auto& r : result.records)
    timings += r.solver + "," + std::to_string(r.graph_id) + "," + std::to_string(r.s) + "," +
               std::to_string(r.l) + "," + std::to_string(r.p_signals) + "," +
               std::to_string(r.observed) + "," + std::to_string(r.q) + "," +
               std::to_string(r.trial) + "," + format_double(r.wall_time_s) + "\n";
  write("timings.csv", timings);
  write("summary.json", result.summary_json + "\n");
  for (const auto& [name, content] : result.files) write(name, content);
}

}  // namespace gfb
