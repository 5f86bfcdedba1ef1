#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gfb/spectrum.hpp"

namespace gfb {

/// Largest sum of the k biggest squared entry magnitudes over any row of A.
double rho(const Eigen::MatrixXcd& a, int k);

/// ρ tables evaluated on the analysis normalizations: √N·U (so that
/// UᴴU = N·I) and the orthonormal factor P of Ψ. These deliberately differ
/// from the solver-side U, Ψ and must not be mixed with them.
struct CoherenceProfile {
  Eigen::VectorXd rho_u;    // index k-1 holds ρ_U(k), k = 1..K
  Eigen::VectorXd rho_psi;  // index k-1 holds ρ_Ψ(k), k = 1..L
  Eigen::MatrixXcd u_scaled;
  Eigen::MatrixXcd psi_used;
};

CoherenceProfile coherence_profile(const ShiftSpectrum& spec, const FilterBasis& basis, int K);

struct RecoveryBound {
  double alpha = 0.0;
  double alpha1 = 0.0;
  double gamma = 0.0;
  double p_rec_lower = 0.0;
  int S = 0, L = 0, N = 0;
  bool applicable = false;  // the probability bound requires alpha >= 1
};

RecoveryBound theorem1_bound(const CoherenceProfile& profile, int S, int L, int N);

/// Exact spark by increasing-cardinality subset rank tests; returns
/// cols+1 when no dependent subset exists. Capped at 20 columns.
int spark(const Eigen::MatrixXcd& a);

enum class SupportFamily { all, adjacent };

struct IdentifiabilityResult {
  bool identifiable = false;
  /// No row set satisfied the spark precondition, so the minimum is over an
  /// empty family and the condition holds vacuously.
  bool vacuous = false;
  int min_distinct = 0;
  std::vector<int> witness_rows;  // violating row set when not identifiable
};

/// Brute-force evaluation of the rank-minimization validity condition:
/// over row sets I admitting a nonzero S-sparse x (support drawn from the
/// given family) with U_I x = 0, the number of distinct eigenvalues indexed
/// by the complement must exceed L-1. N <= 12.
IdentifiabilityResult check_identifiability(const ShiftSpectrum& spec, int L, int S,
                                            SupportFamily family = SupportFamily::all);

}  // namespace gfb
