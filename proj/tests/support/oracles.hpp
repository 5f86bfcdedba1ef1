#pragma once

// Independent brute-force oracles used by the unit and acceptance suites.
// Nothing here may call into the implementation paths it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// y[n] = sum_k h[k] x[(n-k) mod N] with h zero-padded to length N.
inline Eigen::VectorXd circular_convolution(const Eigen::VectorXd& h, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < h.size(); ++k) y(i) += h(k) * x(((i - k) % n + n) % n);
  return y;
}

/// Exhaustive evaluation of the k-subset row-coherence (all C(N,k) subsets).
inline double rho_exhaustive(const Eigen::MatrixXcd& a, int k) {
  const int cols = static_cast<int>(a.cols());
  std::vector<int> idx(k);
  double best = 0.0;
  for (Eigen::Index row = 0; row < a.rows(); ++row) {
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      double sum = 0.0;
      for (int i : idx) sum += std::norm(a(row, i));
      best = std::max(best, sum);
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == cols - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return best;
}

/// Two-phase dense simplex with Bland's rule for
///   min c^T t  s.t.  A t = b, t >= 0.
/// Small instances only; returns +inf if infeasible.
inline double simplex_min(Eigen::MatrixXd a, Eigen::VectorXd b, Eigen::VectorXd c) {
  const double inf = std::numeric_limits<double>::infinity();
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  for (int i = 0; i < m; ++i)
    if (b(i) < 0) {
      a.row(i) = -a.row(i);
      b(i) = -b(i);
    }
  // Phase 1 tableau with artificial variables.
  Eigen::MatrixXd t(m + 1, n + m + 1);
  t.setZero();
  t.block(0, 0, m, n) = a;
  t.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  t.block(0, n + m, m, 1) = b;
  for (int j = 0; j < n; ++j) t(m, j) = -a.col(j).sum();
  t(m, n + m) = -b.sum();
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const auto pivot = [&](int prow, int pcol) {
    t.row(prow) /= t(prow, pcol);
    for (int i = 0; i <= m; ++i)
      if (i != prow && std::abs(t(i, pcol)) > 1e-13) t.row(i) -= t(i, pcol) * t.row(prow);
    basis[prow] = pcol;
  };
  const auto run = [&](int ncols) {
    for (int guard = 0; guard < 100000; ++guard) {
      int pcol = -1;
      for (int j = 0; j < ncols; ++j)
        if (t(m, j) < -1e-10) {
          pcol = j;
          break;  // Bland's rule
        }
      if (pcol < 0) return true;
      int prow = -1;
      double best = inf;
      for (int i = 0; i < m; ++i)
        if (t(i, pcol) > 1e-12) {
          const double rat = t(i, n + m) / t(i, pcol);
          if (rat < best - 1e-12 || (rat < best + 1e-12 && (prow < 0 || basis[i] < basis[prow]))) {
            best = rat;
            prow = i;
          }
        }
      if (prow < 0) return false;  // unbounded
      pivot(prow, pcol);
    }
    return false;
  };

  if (!run(n + m)) return inf;
  if (t(m, n + m) < -1e-7) return inf;  // phase-1 optimum > 0: infeasible
  // Drive artificial variables out of the basis if possible.
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) {
      for (int j = 0; j < n; ++j)
        if (std::abs(t(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
    }
  // Phase 2 objective row.
  t.row(m).setZero();
  for (int j = 0; j < n; ++j) t(m, j) = c(j);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) t.row(m) -= c(basis[i]) * t.row(i);
  if (!run(n)) return inf;
  double value = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) value += c(basis[i]) * t(i, n + m);
  return value;
}

/// Exact minimum of ||z||_1 subject to A z = b via the LP split z = u - v.
inline double l1_min_exact(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Eigen::MatrixXd big(m, 2 * n);
  big.leftCols(n) = a;
  big.rightCols(n) = -a;
  return simplex_min(big, b, Eigen::VectorXd::Ones(2 * n));
}

}  // namespace oracle
