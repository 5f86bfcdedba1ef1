#include "gfb/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gfb {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_symmetric(const Eigen::MatrixXd& s) {
  return (s - s.transpose()).cwiseAbs().maxCoeff() == 0.0;
}

bool is_normal(const Eigen::MatrixXd& s) {
  const double scale = std::max(1.0, s.squaredNorm());
  return (s * s.transpose() - s.transpose() * s).norm() <= 1e-10 * scale;
}

/// Deterministic ordering: descending real part, then descending imaginary.
std::vector<int> spectral_order(const Eigen::VectorXcd& lambda) {
  std::vector<int> idx(lambda.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (lambda(a).real() != lambda(b).real()) return lambda(a).real() > lambda(b).real();
    return lambda(a).imag() > lambda(b).imag();
  });
  return idx;
}

bool detect_repeated(const Eigen::VectorXcd& lambda) {
  const int n = static_cast<int>(lambda.size());
  double lmax = 0.0;
  for (int i = 0; i < n; ++i) lmax = std::max(lmax, std::abs(lambda(i)));
  const double tol = 1e-8 * std::max(lmax, 1e-300);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(lambda(i) - lambda(j)) < tol) return true;
  return false;
}

}  // namespace

ShiftSpectrum ShiftSpectrum::from_decomposition(Eigen::MatrixXd shift, Eigen::MatrixXcd v,
                                                Eigen::VectorXcd lambda, Eigen::MatrixXcd u,
                                                bool normal, double inv_condition) {
  ShiftSpectrum s;
  s.shift_ = std::move(shift);
  s.v_ = std::move(v);
  s.lambda_ = std::move(lambda);
  s.u_ = std::move(u);
  s.normal_ = normal;
  s.inv_condition_ = inv_condition;
  s.repeated_eigvals_ = detect_repeated(s.lambda_);
  s.validate();
  return s;
}

void ShiftSpectrum::validate() const {
  const int n = this->n();
  const double snorm = std::max(shift_.norm(), 1e-300);
  const double eig_residual =
      (shift_.cast<Complex>() * v_ - v_ * lambda_.asDiagonal()).norm() / snorm;
  require(eig_residual <= 1e-8, errc::eigen_failure,
          "eigendecomposition residual exceeds tolerance");
  const double inv_residual = (u_ * v_ - Eigen::MatrixXcd::Identity(n, n)).norm();
  require(inv_residual <= 1e-8 * n, errc::eigen_failure, "U*V deviates from identity");
  if (normal_) {
    require((u_ - v_.adjoint()).norm() <= 1e-8 * n, errc::eigen_failure,
            "normal shift must have unitary eigenbasis");
  }
}

ShiftSpectrum ShiftSpectrum::directed_cycle(int n, ShiftOptions opts) {
  require(n >= 1, errc::invalid_argument, "cycle size must be positive");
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) shift((j + 1) % n, j) = 1.0;

  // Columns v_k(j) = exp(2πi jk/N)/√N, eigenvalues λ_k = exp(-2πi k/N).
  Eigen::MatrixXcd v(n, n);
  Eigen::VectorXcd lambda(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    lambda(k) = std::polar(1.0, -2.0 * kPi * k / n);
    for (int j = 0; j < n; ++j) v(j, k) = std::polar(scale, 2.0 * kPi * j * k / n);
  }
  const auto order = spectral_order(lambda);
  Eigen::MatrixXcd vs(n, n);
  Eigen::VectorXcd ls(n);
  for (int k = 0; k < n; ++k) {
    vs.col(k) = v.col(order[k]);
    ls(k) = lambda(order[k]);
  }
  (void)opts;  // |λ| = 1 already
  return from_decomposition(std::move(shift), vs, ls, vs.adjoint(), true, 1.0);
}

ShiftSpectrum ShiftSpectrum::build(const Graph& graph, ShiftKind kind, ShiftOptions opts) {
  switch (kind) {
    case ShiftKind::adjacency:
      return build_custom(graph.adjacency(), opts);
    case ShiftKind::laplacian:
      return build_custom(graph.laplacian(), opts);
    case ShiftKind::directed_cycle:
      return directed_cycle(graph.n_nodes(), opts);
    case ShiftKind::custom:
      fail(errc::invalid_argument, "custom shift requires build_custom with a matrix");
  }
  fail(errc::invalid_argument, "unknown shift kind");
}

ShiftSpectrum ShiftSpectrum::build_custom(const Eigen::MatrixXd& shift_in, ShiftOptions opts) {
  require(shift_in.rows() == shift_in.cols() && shift_in.rows() > 0, errc::invalid_argument,
          "shift must be square and nonempty");
  const int n = static_cast<int>(shift_in.rows());
  Eigen::MatrixXd shift = shift_in;

  Eigen::MatrixXcd v(n, n), u(n, n);
  Eigen::VectorXcd lambda(n);
  bool normal = false;
  double inv_condition = 1.0;

  if (is_symmetric(shift)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shift);
    require(es.info() == Eigen::Success, errc::eigen_failure, "symmetric eigensolver failed");
    v = es.eigenvectors().cast<Complex>();
    lambda = es.eigenvalues().cast<Complex>();
    u = v.adjoint();
    normal = true;
  } else if (is_normal(shift)) {
    // Schur form of a normal matrix is diagonal, with unitary Q.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(shift.cast<Complex>());
    require(schur.info() == Eigen::Success, errc::eigen_failure, "Schur decomposition failed");
    v = schur.matrixU();
    lambda = schur.matrixT().diagonal();
    u = v.adjoint();
    normal = true;
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(shift.cast<Complex>());
    require(es.info() == Eigen::Success, errc::eigen_failure, "eigensolver failed");
    v = es.eigenvectors();
    lambda = es.eigenvalues();
    for (int k = 0; k < n; ++k) v.col(k) /= v.col(k).norm();  // unit-2-norm columns
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    const double smin = svd.singularValues()(n - 1);
    inv_condition = smin > 0 ? svd.singularValues()(0) / smin
                             : std::numeric_limits<double>::infinity();
    require(inv_condition <= 1e10, errc::non_diagonalizable,
            "eigenbasis condition number exceeds 1e10; shift is numerically defective");
    u = v.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
  }

  const auto order = spectral_order(lambda);
  Eigen::MatrixXcd vs(n, n), us(n, n);
  Eigen::VectorXcd ls(n);
  for (int k = 0; k < n; ++k) {
    vs.col(k) = v.col(order[k]);
    us.row(k) = u.row(order[k]);
    ls(k) = lambda(order[k]);
  }

  if (opts.rescale_to_unit_radius) {
    const double radius = ls.cwiseAbs().maxCoeff();
    if (radius > 0) {
      shift /= radius;
      ls /= radius;
    }
  }
  return from_decomposition(std::move(shift), std::move(vs), std::move(ls), std::move(us), normal,
                            inv_condition);
}

Eigen::VectorXcd ShiftSpectrum::gft(const Eigen::VectorXd& x) const {
  return gft(Eigen::VectorXcd(x.cast<Complex>()));
}

Eigen::VectorXcd ShiftSpectrum::gft(const Eigen::VectorXcd& x) const {
  require(x.size() == n(), errc::dimension_mismatch, "gft: signal length mismatch");
  return u_ * x;
}

Eigen::VectorXcd ShiftSpectrum::igft(const Eigen::VectorXcd& xhat) const {
  require(xhat.size() == n(), errc::dimension_mismatch, "igft: signal length mismatch");
  return v_ * xhat;
}

Eigen::VectorXd ShiftSpectrum::apply_filter(const Eigen::VectorXd& h, const Eigen::VectorXd& x,
                                            FilterMode mode) const {
  const int len = static_cast<int>(h.size());
  require(len >= 1 && len <= n(), errc::dimension_mismatch, "filter length must be in [1, N]");
  require(x.size() == n(), errc::dimension_mismatch, "apply_filter: signal length mismatch");
  if (mode == FilterMode::vertex) {
    Eigen::VectorXd y = h(0) * x;
    Eigen::VectorXd cur = x;
    for (int l = 1; l < len; ++l) {
      cur = shift_ * cur;
      y += h(l) * cur;
    }
    return y;
  }
  // ĥ = Ψh evaluated by Horner's rule on the eigenvalues.
  Eigen::VectorXcd hhat = Eigen::VectorXcd::Constant(n(), h(len - 1));
  for (int l = len - 2; l >= 0; --l)
    hhat = hhat.cwiseProduct(lambda_) + Eigen::VectorXcd::Constant(n(), h(l));
  const Eigen::VectorXcd yhat = hhat.cwiseProduct(gft(x));
  return igft(yhat).real();
}

std::vector<Eigen::VectorXd> ShiftSpectrum::simulate_diffusion(const Eigen::VectorXd& x0,
                                                               int steps) const {
  require(steps >= 0, errc::invalid_argument, "steps must be nonnegative");
  require(x0.size() == n(), errc::dimension_mismatch, "diffusion: signal length mismatch");
  std::vector<Eigen::VectorXd> states;
  states.reserve(steps + 1);
  states.push_back(x0);
  for (int l = 0; l < steps; ++l) states.push_back(shift_ * states.back());
  return states;
}

FilterBasis::FilterBasis(const ShiftSpectrum& spec, int L) {
  require(L >= 1 && L <= spec.n(), errc::invalid_argument, "basis order must be in [1, N]");
  const int n = spec.n();
  psi_.resize(n, L);
  psi_.col(0).setOnes();
  for (int j = 1; j < L; ++j) psi_.col(j) = psi_.col(j - 1).cwiseProduct(spec.eigvals());

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(psi_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  psi_orth_ = svd.matrixU();
  sigma_ = svd.singularValues();
  r_factor_ = svd.matrixV();
  const double smax = sigma_(0);
  rank_warning_ = (smax <= 0) || (sigma_(L - 1) / smax < 1e-10) || spec.has_repeated_eigvals();
}

}  // namespace gfb
