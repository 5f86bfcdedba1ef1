#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gfb/graph.hpp"
#include "gfb/solvers.hpp"

namespace gfb {

/// SIS dynamics on an undirected contact graph. Sources are drawn per
/// outbreak from the sparse probability vector p0; the per-step activity
/// schedule upsilon scales both healing and infection, keeping their ratio
/// fixed. The identification shift is ω·I - β·A.
struct EpidemicModel {
  Graph graph;
  double omega = 0.0;            // healing probability
  double beta = 0.0;             // per-infected-neighbor infection rate
  std::vector<double> upsilon;   // length-T step schedule; empty = all ones
  int horizon = 0;               // T
  int outbreaks = 0;             // W
  Eigen::VectorXd p0;
};

/// One outbreak = N×(T+1) 0/1 states, columns indexed by time.
using OutbreakSet = std::vector<Eigen::MatrixXi>;

/// Simulate W outbreaks; empty initial infected sets are redrawn (count
/// reported through rejections). Infection probability β·|infected
/// neighbors| is clipped to 1.
OutbreakSet sis_simulate(const EpidemicModel& model, std::uint64_t seed,
                         int* rejections = nullptr);

Eigen::VectorXd empirical_infection_frequency(const OutbreakSet& outbreaks, int t);

/// Linearized mean-field iterate p_t = [I - υ_t(ωI - βA)] p_{t-1}.
Eigen::VectorXd mean_field_iterate(const Eigen::MatrixXd& adjacency, const Eigen::VectorXd& p0,
                                   double omega, double beta, const std::vector<double>& upsilon);

/// Coefficients (ascending powers, length T+1) of Π_t (1 - υ_t s).
Eigen::VectorXd filter_coeffs_from_upsilon(const std::vector<double>& upsilon);

struct LocalizationResult {
  Eigen::VectorXd p0_hat;
  std::vector<int> support_estimate;
  double error = 0.0;  // fraction of true sources missed
  SolveStatus status = SolveStatus::converged;
};

/// Blind identification of the outbreak sources from partial observations
/// of the empirical infection frequency at the horizon.
LocalizationResult localize_sources(const EpidemicModel& model, const OutbreakSet& outbreaks,
                                    const std::vector<int>& observed,
                                    const std::vector<int>& q_prior, const SolverConfig& cfg);

}  // namespace gfb
