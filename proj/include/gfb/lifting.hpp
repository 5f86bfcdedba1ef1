#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gfb/spectrum.hpp"

namespace gfb {

enum class SamplingMode {
  /// Observations are entries of ŷ = M vec(Z) restricted to the index set.
  frequency,
  /// Observations are vertex-domain samples y_c = C V ŷ; this is the
  /// practical partial-observation model.
  vertex,
};

/// Real form of the observation equality M vec(Z) = ŷ: stacks real over
/// imaginary parts so solvers can work on a real system (Z = xhᵀ is real).
struct RealSplitSystem {
  Eigen::MatrixXd a;  // 2|Γ| × L·N
  Eigen::VectorXd b;  // 2|Γ|
};

RealSplitSystem real_split_system(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b);

/// The lifted linear map ŷ_i = u_iᵀ Z ψ_i with optional row sampling.
/// Matrix-free forward/adjoint; materialization only for small instances.
/// Immutable and safe to share across threads.
class LiftedOperator {
 public:
  LiftedOperator(const ShiftSpectrum& spec, const FilterBasis& basis,
                 std::vector<int> observed = {}, SamplingMode mode = SamplingMode::frequency);

  /// Operator with U rows resampled i.i.d. uniformly with replacement,
  /// for empirical studies of the probabilistic recovery model.
  static LiftedOperator resampled_rows(const ShiftSpectrum& spec, const FilterBasis& basis,
                                       std::uint64_t seed);

  int n() const { return n_; }
  int filter_len() const { return L_; }
  int n_observed() const { return static_cast<int>(observed_.size()); }
  const std::vector<int>& observed() const { return observed_; }
  SamplingMode mode() const { return mode_; }
  const Eigen::MatrixXcd& u_rows() const { return u_; }
  const Eigen::MatrixXcd& psi_rows() const { return psi_; }

  Eigen::VectorXcd forward(const Eigen::MatrixXd& z) const;
  Eigen::VectorXcd forward(const Eigen::MatrixXcd& z) const;
  /// Adjoint under ⟨X,Z⟩ = tr(XZᴴ): ℳ*(z) = Σ_i z_i ū_i ψ_iᴴ.
  Eigen::MatrixXcd adjoint(const Eigen::VectorXcd& z) const;
  Eigen::MatrixXcd gram(const Eigen::MatrixXcd& z) const;

  /// Dense |Γ| × LN matrix; rows are ψ_iᵀ ⊗ u_iᵀ (frequency mode) or rows
  /// of C·V·M (vertex mode). vec() is column-major throughout.
  Eigen::MatrixXcd materialize() const;

  RealSplitSystem real_split(const Eigen::VectorXcd& y_obs) const;

  /// Observation-domain system in h for fixed x: rows of diag(Ux)Ψ.
  Eigen::MatrixXcd h_system(const Eigen::VectorXd& x) const;
  /// Observation-domain system in x for fixed h: rows of diag(Ψh)U.
  Eigen::MatrixXcd x_system(const Eigen::VectorXd& h) const;

  /// ‖ℳ‖ by power iteration on ℳ*ℳ.
  double op_norm(int max_iter = 500, double tol = 1e-12) const;

 private:
  int n_ = 0;
  int L_ = 0;
  SamplingMode mode_ = SamplingMode::frequency;
  std::vector<int> observed_;
  Eigen::MatrixXcd u_;    // N×N analysis rows
  Eigen::MatrixXcd psi_;  // N×L basis rows
  Eigen::MatrixXcd v_;    // synthesis matrix, needed in vertex mode
};

}  // namespace gfb
