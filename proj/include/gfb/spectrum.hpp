#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gfb/graph.hpp"

namespace gfb {

using Complex = std::complex<double>;

enum class ShiftKind { adjacency, laplacian, directed_cycle, custom };
enum class FilterMode { vertex, frequency };

struct ShiftOptions {
  /// Rescale S to unit spectral radius before anything else sees it; the
  /// scale is absorbed into the filter coefficients without changing the
  /// model class. Off by default.
  bool rescale_to_unit_radius = false;
};

/// A graph-shift operator together with its eigendecomposition S = V Λ V⁻¹
/// and the analysis GFT matrix U = V⁻¹. Immutable after construction; the
/// residual invariants below are checked at build time.
class ShiftSpectrum {
 public:
  static ShiftSpectrum build(const Graph& graph, ShiftKind kind, ShiftOptions opts = {});
  static ShiftSpectrum build_custom(const Eigen::MatrixXd& shift, ShiftOptions opts = {});
  /// Analytic DFT decomposition of the directed-cycle adjacency; no
  /// numerical eigensolve involved.
  static ShiftSpectrum directed_cycle(int n, ShiftOptions opts = {});

  int n() const { return static_cast<int>(shift_.rows()); }
  const Eigen::MatrixXd& shift() const { return shift_; }
  const Eigen::MatrixXcd& eigvecs() const { return v_; }
  const Eigen::VectorXcd& eigvals() const { return lambda_; }
  const Eigen::MatrixXcd& u_analysis() const { return u_; }
  bool normal() const { return normal_; }
  double inv_condition() const { return inv_condition_; }
  bool has_repeated_eigvals() const { return repeated_eigvals_; }

  Eigen::VectorXcd gft(const Eigen::VectorXd& x) const;
  Eigen::VectorXcd gft(const Eigen::VectorXcd& x) const;
  Eigen::VectorXcd igft(const Eigen::VectorXcd& xhat) const;

  /// y = Σ_l h_l S^l x. Vertex mode uses L-1 iterated shifts; frequency mode
  /// goes through ŷ = (Ψh)∘(Ux). Both agree to 1e-9 relative.
  Eigen::VectorXd apply_filter(const Eigen::VectorXd& h, const Eigen::VectorXd& x,
                               FilterMode mode) const;

  /// {x^(0), ..., x^(steps)} with x^(l+1) = S x^(l).
  std::vector<Eigen::VectorXd> simulate_diffusion(const Eigen::VectorXd& x0, int steps) const;

 private:
  ShiftSpectrum() = default;
  static ShiftSpectrum from_decomposition(Eigen::MatrixXd shift, Eigen::MatrixXcd v,
                                          Eigen::VectorXcd lambda, Eigen::MatrixXcd u, bool normal,
                                          double inv_condition);
  void validate() const;

  Eigen::MatrixXd shift_;
  Eigen::MatrixXcd v_;
  Eigen::VectorXcd lambda_;
  Eigen::MatrixXcd u_;
  bool normal_ = false;
  double inv_condition_ = 1.0;
  bool repeated_eigvals_ = false;
};

/// The N×L Vandermonde filter basis Ψ_ij = λ_i^(j-1) plus its thin SVD
/// Ψ = P Σ Rᴴ; P is the orthonormal basis used by the coherence analysis.
class FilterBasis {
 public:
  FilterBasis(const ShiftSpectrum& spec, int L);

  int L() const { return static_cast<int>(psi_.cols()); }
  const Eigen::MatrixXcd& psi() const { return psi_; }
  const Eigen::MatrixXcd& psi_orth() const { return psi_orth_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }
  const Eigen::MatrixXcd& r_factor() const { return r_factor_; }
  /// Set when Ψ is numerically rank-deficient or the spectrum carries
  /// repeated eigenvalues; either breaks uniqueness of h given Ψh.
  bool rank_warning() const { return rank_warning_; }

 private:
  Eigen::MatrixXcd psi_;
  Eigen::MatrixXcd psi_orth_;
  Eigen::VectorXd sigma_;
  Eigen::MatrixXcd r_factor_;
  bool rank_warning_ = false;
};

}  // namespace gfb
