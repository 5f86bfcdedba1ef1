#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gfb/lifting.hpp"

namespace gfb {

struct SolverConfig {
  double tau = 1.0;       // rank vs row-sparsity tradeoff
  double delta = -1.0;    // reweighting offset; <=0 selects 1e-3*||y||/sqrt(N)
  int reweight_iters = 3; // 0 = plain nuclear + l2,1
  double admm_penalty = 1.0;
  int max_iters = 3000;
  double tol_primal = 1e-7;
  double tol_dual = 1e-7;
  double noise_eps = 0.0;  // >0 replaces the equality by a 2-norm ball
  std::uint64_t rng_seed = 0;
  int am_max_outer = 30;
  std::vector<int> known_support;  // rows of Z allowed to be nonzero; empty = all
  bool track_objective = false;    // record per-iteration objective values
};

enum class SolveStatus { converged, max_iters, infeasible };

const char* to_string(SolveStatus s);

struct LiftedSolution {
  Eigen::MatrixXd z;
  Eigen::VectorXd x_hat;
  Eigen::VectorXd h_hat;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double feas_residual = 0.0;
  int iters = 0;
  SolveStatus status = SolveStatus::converged;
  Eigen::VectorXd singular_values;
  std::uint64_t seed = 0;
  std::vector<double> objective_trace;
};

struct MultiOutputProblem {
  std::vector<Eigen::VectorXcd> outputs;
  bool shared_support = true;
  std::vector<double> taus;  // per-signal, used when shared_support is false
};

struct MultiSolution {
  std::vector<LiftedSolution> per_signal;
  Eigen::VectorXd h_consensus;
  double objective = 0.0;
  SolveStatus status = SolveStatus::converged;
  int iters = 0;
};

/// min ||Z||_1  s.to  M vec(Z) = ŷ  (or the noise ball when noise_eps > 0).
LiftedSolution solve_l1(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                        const SolverConfig& cfg);

/// min ||Z||_* + τ||Z||_{2,1}  s.to  the lifted constraint.
LiftedSolution solve_nuclear_l21(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                                 const SolverConfig& cfg);

/// Iteratively reweighted rows: w_i(k) = τ / (||z_i(k-1)|| + δ); outer
/// iteration 0 runs with uniform weights τ.
LiftedSolution solve_reweighted(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                                const SolverConfig& cfg);

/// Ball-constrained variant ||y_obs - op(Z)||_2 <= noise_eps; same composite
/// objective as solve_reweighted.
LiftedSolution solve_noisy(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                           const SolverConfig& cfg);

/// min ||Z̃_v||_* + τ||Z̃_h||_{2,1} (or Σ_p τ_p||Z_p||_{2,1}) subject to all
/// P lifted constraints; ops holds one operator per signal over a shared
/// spectrum (a single entry is reused for all P).
MultiSolution solve_multi(const std::vector<LiftedOperator>& ops, const MultiOutputProblem& prob,
                          const SolverConfig& cfg);

/// Top singular pair of Z with ||h|| = 1 and the first nonzero entry of h
/// positive. Errors on the zero matrix.
std::pair<Eigen::VectorXd, Eigen::VectorXd> extract_rank_one(const Eigen::MatrixXd& z);

/// Minimum-norm least-squares solution of the real-split system.
LiftedSolution baseline_ls(const LiftedOperator& op, const Eigen::VectorXcd& y_obs);

/// Alternating minimization with known sparsity level S: LS for h, then
/// l1-minimization plus hard thresholding for x, initialized at the LS
/// estimate of h.
LiftedSolution baseline_am(const LiftedOperator& op, const Eigen::VectorXcd& y_obs, int S,
                           const SolverConfig& cfg);

/// ||x̂ĥᵀ - x₀h₀ᵀ||_F; invariant to the inherent scaling ambiguity.
double rmse(const Eigen::VectorXd& x_hat, const Eigen::VectorXd& h_hat,
            const Eigen::VectorXd& x0, const Eigen::VectorXd& h0);

std::string solution_to_json(const LiftedSolution& sol);

}  // namespace gfb
