#include "gfb/lifting.hpp"

#include <numeric>

#include "gfb/rng.hpp"

namespace gfb {

LiftedOperator::LiftedOperator(const ShiftSpectrum& spec, const FilterBasis& basis,
                               std::vector<int> observed, SamplingMode mode)
    : n_(spec.n()),
      L_(basis.L()),
      mode_(mode),
      observed_(std::move(observed)),
      u_(spec.u_analysis()),
      psi_(basis.psi()),
      v_(spec.eigvecs()) {
  require(psi_.rows() == n_, errc::dimension_mismatch, "basis and spectrum sizes differ");
  if (observed_.empty()) {
    observed_.resize(n_);
    std::iota(observed_.begin(), observed_.end(), 0);
  }
  require(static_cast<int>(observed_.size()) <= n_, errc::invalid_argument,
          "observation set larger than the graph");
  for (int i : observed_)
    require(i >= 0 && i < n_, errc::invalid_argument, "observed index out of range");
}

LiftedOperator LiftedOperator::resampled_rows(const ShiftSpectrum& spec, const FilterBasis& basis,
                                              std::uint64_t seed) {
  LiftedOperator op(spec, basis);
  Rng rng(seed);
  Eigen::MatrixXcd u(op.n_, op.n_);
  Eigen::MatrixXcd psi(op.n_, op.L_);
  for (int i = 0; i < op.n_; ++i) {
    const int r = static_cast<int>(rng.uniform_int(0, op.n_ - 1));
    u.row(i) = op.u_.row(r);
    psi.row(i) = op.psi_.row(r);
  }
  op.u_ = std::move(u);
  op.psi_ = std::move(psi);
  return op;
}

Eigen::VectorXcd LiftedOperator::forward(const Eigen::MatrixXd& z) const {
  return forward(Eigen::MatrixXcd(z.cast<Complex>()));
}

Eigen::VectorXcd LiftedOperator::forward(const Eigen::MatrixXcd& z) const {
  require(z.rows() == n_ && z.cols() == L_, errc::dimension_mismatch, "forward: Z shape mismatch");
  // ŷ_i = u_iᵀ Z ψ_i for all nodes; no conjugation anywhere.
  const Eigen::MatrixXcd uz = u_ * z;
  const Eigen::VectorXcd full = (uz.array() * psi_.array()).rowwise().sum();
  if (mode_ == SamplingMode::frequency) {
    if (static_cast<int>(observed_.size()) == n_) return full;
    Eigen::VectorXcd out(observed_.size());
    for (size_t k = 0; k < observed_.size(); ++k) out(k) = full(observed_[k]);
    return out;
  }
  const Eigen::VectorXcd y = v_ * full;
  Eigen::VectorXcd out(observed_.size());
  for (size_t k = 0; k < observed_.size(); ++k) out(k) = y(observed_[k]);
  return out;
}

Eigen::MatrixXcd LiftedOperator::adjoint(const Eigen::VectorXcd& z) const {
  require(z.size() == n_observed(), errc::dimension_mismatch, "adjoint: length mismatch");
  Eigen::VectorXcd w;
  if (mode_ == SamplingMode::frequency) {
    w = Eigen::VectorXcd::Zero(n_);
    for (size_t k = 0; k < observed_.size(); ++k) w(observed_[k]) += z(k);
  } else {
    Eigen::VectorXcd scattered = Eigen::VectorXcd::Zero(n_);
    for (size_t k = 0; k < observed_.size(); ++k) scattered(observed_[k]) += z(k);
    w = v_.adjoint() * scattered;
  }
  // Σ_i w_i ū_i ψ_iᴴ = Uᴴ diag(w) conj(Ψ).
  return u_.adjoint() * w.asDiagonal() * psi_.conjugate();
}

Eigen::MatrixXcd LiftedOperator::gram(const Eigen::MatrixXcd& z) const { return adjoint(forward(z)); }

Eigen::MatrixXcd LiftedOperator::materialize() const {
  require(static_cast<long long>(L_) * n_ <= 200000, errc::too_large,
          "materialization only allowed for L*N <= 2e5");
  Eigen::MatrixXcd m_full(n_, static_cast<Eigen::Index>(L_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < L_; ++j)
      m_full.block(i, static_cast<Eigen::Index>(j) * n_, 1, n_) = psi_(i, j) * u_.row(i);
  if (mode_ == SamplingMode::frequency) {
    Eigen::MatrixXcd out(observed_.size(), m_full.cols());
    for (size_t k = 0; k < observed_.size(); ++k) out.row(k) = m_full.row(observed_[k]);
    return out;
  }
  const Eigen::MatrixXcd vm = v_ * m_full;
  Eigen::MatrixXcd out(observed_.size(), m_full.cols());
  for (size_t k = 0; k < observed_.size(); ++k) out.row(k) = vm.row(observed_[k]);
  return out;
}

RealSplitSystem real_split_system(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
  require(a.rows() == b.size(), errc::dimension_mismatch, "real split: row count mismatch");
  RealSplitSystem sys;
  sys.a.resize(2 * a.rows(), a.cols());
  sys.a.topRows(a.rows()) = a.real();
  sys.a.bottomRows(a.rows()) = a.imag();
  sys.b.resize(2 * b.size());
  sys.b.head(b.size()) = b.real();
  sys.b.tail(b.size()) = b.imag();
  return sys;
}

RealSplitSystem LiftedOperator::real_split(const Eigen::VectorXcd& y_obs) const {
  require(y_obs.size() == n_observed(), errc::dimension_mismatch, "real_split: length mismatch");
  return real_split_system(materialize(), y_obs);
}

Eigen::MatrixXcd LiftedOperator::h_system(const Eigen::VectorXd& x) const {
  require(x.size() == n_, errc::dimension_mismatch, "h_system: signal length mismatch");
  Eigen::MatrixXcd full = (u_ * x.cast<Complex>()).asDiagonal() * psi_;
  if (mode_ == SamplingMode::vertex) full = v_ * full;
  Eigen::MatrixXcd out(observed_.size(), L_);
  for (size_t k = 0; k < observed_.size(); ++k) out.row(k) = full.row(observed_[k]);
  return out;
}

Eigen::MatrixXcd LiftedOperator::x_system(const Eigen::VectorXd& h) const {
  require(h.size() == L_, errc::dimension_mismatch, "x_system: filter length mismatch");
  Eigen::MatrixXcd full = (psi_ * h.cast<Complex>()).asDiagonal() * u_;
  if (mode_ == SamplingMode::vertex) full = v_ * full;
  Eigen::MatrixXcd out(observed_.size(), n_);
  for (size_t k = 0; k < observed_.size(); ++k) out.row(k) = full.row(observed_[k]);
  return out;
}

double LiftedOperator::op_norm(int max_iter, double tol) const {
  Rng rng(12345);
  Eigen::MatrixXcd z(n_, L_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < L_; ++j) z(i, j) = Complex(rng.normal(), rng.normal());
  z /= z.norm();
  double value = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXcd next = gram(z);
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    const double prev = value;
    value = std::sqrt(norm);
    z = next;
    if (it > 2 && std::abs(value - prev) <= tol * std::max(1.0, value)) break;
  }
  return value;
}

}  // namespace gfb
