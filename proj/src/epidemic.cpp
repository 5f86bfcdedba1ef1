#include "gfb/epidemic.hpp"

#include <algorithm>
#include <numeric>

#include "gfb/rng.hpp"
#include "gfb/spectrum.hpp"

namespace gfb {

OutbreakSet sis_simulate(const EpidemicModel& model, std::uint64_t seed, int* rejections) {
  const int n = model.graph.n_nodes();
  require(model.omega >= 0 && model.omega <= 1, errc::invalid_argument,
          "healing probability must lie in [0, 1]");
  require(model.beta >= 0 && model.beta <= 1, errc::invalid_argument,
          "infection rate must lie in [0, 1]");
  require(model.p0.size() == n, errc::dimension_mismatch, "p0 length mismatch");
  require(model.p0.minCoeff() >= 0 && model.p0.maxCoeff() <= 1, errc::invalid_argument,
          "p0 entries must be probabilities");
  require(model.horizon >= 0 && model.outbreaks >= 1, errc::invalid_argument,
          "invalid horizon or outbreak count");
  require(model.upsilon.empty() ||
              static_cast<int>(model.upsilon.size()) == model.horizon,
          errc::invalid_argument, "upsilon schedule must have one entry per step");

  const auto neighbors = model.graph.neighbor_lists();
  Rng rng(seed);
  int rejected = 0;
  OutbreakSet out;
  out.reserve(model.outbreaks);
  for (int w = 0; w < model.outbreaks; ++w) {
    Eigen::MatrixXi states = Eigen::MatrixXi::Zero(n, model.horizon + 1);
    // Initial infected set: independent Bernoulli draws, rejected if empty.
    bool any = false;
    while (!any) {
      for (int i = 0; i < n; ++i) {
        const int v = rng.bernoulli(model.p0(i)) ? 1 : 0;
        states(i, 0) = v;
        any = any || v;
      }
      if (!any) ++rejected;
    }
    for (int t = 1; t <= model.horizon; ++t) {
      const double step = model.upsilon.empty() ? 1.0 : model.upsilon[t - 1];
      const double heal = std::min(1.0, step * model.omega);
      const double rate = step * model.beta;
      for (int i = 0; i < n; ++i) {
        if (states(i, t - 1)) {
          states(i, t) = rng.bernoulli(heal) ? 0 : 1;
        } else {
          int infected_nbrs = 0;
          for (int j : neighbors[i]) infected_nbrs += states(j, t - 1);
          states(i, t) = rng.bernoulli(std::min(1.0, rate * infected_nbrs)) ? 1 : 0;
        }
      }
    }
    out.push_back(std::move(states));
  }
  if (rejections) *rejections = rejected;
  return out;
}

Eigen::VectorXd empirical_infection_frequency(const OutbreakSet& outbreaks, int t) {
  require(!outbreaks.empty(), errc::invalid_argument, "no outbreaks");
  require(t >= 0 && t < outbreaks.front().cols(), errc::invalid_argument,
          "time index out of range");
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(outbreaks.front().rows());
  for (const auto& states : outbreaks) freq += states.col(t).cast<double>();
  return freq / static_cast<double>(outbreaks.size());
}

Eigen::VectorXd mean_field_iterate(const Eigen::MatrixXd& adjacency, const Eigen::VectorXd& p0,
                                   double omega, double beta,
                                   const std::vector<double>& upsilon) {
  Eigen::VectorXd p = p0;
  for (double step : upsilon) p = (1.0 - step * omega) * p + step * beta * (adjacency * p);
  return p;
}

Eigen::VectorXd filter_coeffs_from_upsilon(const std::vector<double>& upsilon) {
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(upsilon.size() + 1);
  coeffs(0) = 1.0;
  int deg = 0;
  for (double u : upsilon) {
    // multiply by (1 - u s)
    Eigen::VectorXd next = coeffs;
    for (int k = deg; k >= 0; --k) next(k + 1) -= u * coeffs(k);
    coeffs = next;
    ++deg;
  }
  return coeffs;
}

LocalizationResult localize_sources(const EpidemicModel& model, const OutbreakSet& outbreaks,
                                    const std::vector<int>& observed,
                                    const std::vector<int>& q_prior, const SolverConfig& cfg) {
  const int n = model.graph.n_nodes();
  require(!observed.empty(), errc::invalid_argument, "need at least one observed node");
  const Eigen::VectorXd p_hat_t = empirical_infection_frequency(outbreaks, model.horizon);

  const Eigen::MatrixXd shift =
      model.omega * Eigen::MatrixXd::Identity(n, n) - model.beta * model.graph.adjacency();
  const ShiftSpectrum spec = ShiftSpectrum::build_custom(shift);
  const FilterBasis basis(spec, model.horizon + 1);
  const LiftedOperator op(spec, basis, observed, SamplingMode::vertex);

  Eigen::VectorXcd y(observed.size());
  for (size_t k = 0; k < observed.size(); ++k) y(k) = Complex(p_hat_t(observed[k]), 0.0);

  const LiftedSolution sol = solve_reweighted(op, y, cfg);

  LocalizationResult res;
  res.p0_hat = sol.x_hat;
  res.status = sol.status;

  std::vector<int> true_support;
  for (int i = 0; i < n; ++i)
    if (model.p0(i) > 0) true_support.push_back(i);
  const int s_level = static_cast<int>(true_support.size());
  require(s_level >= 1, errc::invalid_argument, "p0 has empty support");

  std::vector<int> candidates = q_prior.empty() ? [&] {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }() : q_prior;
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    const double ma = std::abs(res.p0_hat(a)), mb = std::abs(res.p0_hat(b));
    if (ma != mb) return ma > mb;
    return a < b;
  });
  candidates.resize(std::min<size_t>(candidates.size(), s_level));
  res.support_estimate = candidates;
  std::sort(res.support_estimate.begin(), res.support_estimate.end());

  int missed = 0;
  for (int i : true_support)
    if (!std::binary_search(res.support_estimate.begin(), res.support_estimate.end(), i))
      ++missed;
  res.error = static_cast<double>(missed) / s_level;
  return res;
}

}  // namespace gfb
