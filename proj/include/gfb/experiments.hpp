#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gfb/epidemic.hpp"
#include "gfb/graph.hpp"
#include "gfb/solvers.hpp"

namespace gfb {

struct GraphGenSpec {
  std::string kind;  // er | directed_cycle | small_world | pref_attach | random_regular | from_file
  int n = 0;
  double p = 0.0;       // er edge probability
  int k = 0;            // small_world: even neighbor count
  double rewire = 0.0;  // small_world: rewiring probability
  int m = 0;            // pref_attach: edges per new node
  int d = 0;            // random_regular: degree
  std::string path;     // from_file
  bool directed_file = false;
};

Graph gen_graph(const GraphGenSpec& spec, std::uint64_t seed);

enum class ExperimentKind { phase, sampling_sweep, rho_correlation, epidemic, single_solve };

struct EpidemicSpec {
  double omega = 0.3;
  double beta = 0.1;
  int horizon = 3;
  int outbreaks = 500;
  std::vector<int> s_choices = {3, 4, 5};
  std::vector<int> observed_counts = {16, 24, 34};
  std::vector<std::string> q_modes = {"2S", "N/2", "N"};
  int realizations = 20;
  double upsilon_lo = 0.5, upsilon_hi = 1.5;
  double p0_lo = 0.15, p0_hi = 0.4;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::phase;
  std::uint64_t master_seed = 1;
  std::string out_dir = "out";
  GraphGenSpec graph{.kind = "er", .n = 50, .p = 0.1};
  std::string shift = "adjacency";  // adjacency | laplacian
  std::string solver = "rw";        // l1 | n21 | rw | rwP
  int p_signals = 1;
  bool multi_shared_support = true;
  SolverConfig config;
  int trials = 20;
  // phase grid
  std::vector<int> s_values = {2, 3, 4, 5, 6, 7, 8};
  std::vector<int> l_values = {2, 3, 4, 5};
  // sampling sweep
  std::vector<int> observed_counts;
  int s = 3, l = 3;
  double noise_sigma = 0.01;
  std::vector<std::string> sweep_solvers = {"proposed",       "proposed_ks", "ls",
                                            "am",             "proposed_noisy",
                                            "proposed_ks_noisy"};
  // rho correlation
  int n_graphs = 30;
  double p_lo = 0.05, p_hi = 0.15;
  // epidemic
  EpidemicSpec epidemic;
  // single solve
  std::string y_path, x0_path, h0_path;
  std::vector<int> observed_nodes;  // empty = all

  int threads = 0;  // 0 = hardware concurrency
};

ExperimentSpec parse_spec_json(const std::string& json_text);
std::string spec_to_json(const ExperimentSpec& spec);

struct TrialRecord {
  std::string solver;
  int graph_id = 0;
  int s = 0;
  int l = 0;
  int p_signals = 1;
  int observed = 0;
  int q = 0;  // epidemic candidate-set cardinality, 0 elsewhere
  int trial = 0;
  std::uint64_t seed = 0;
  double rmse = 0.0;
  bool success = false;
  SolveStatus status = SolveStatus::converged;
  double wall_time_s = 0.0;  // reported in timings.csv only
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<TrialRecord> records;
  std::string summary_json;
  std::map<std::string, std::string> files;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// results.csv (deterministic bytes), timings.csv, summary.json and the
/// per-kind SVG plots.
void emit_outputs(const ExperimentResult& result, const std::string& out_dir);

std::string records_to_csv(const std::vector<TrialRecord>& records);

}  // namespace gfb
