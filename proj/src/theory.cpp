#include "gfb/theory.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace gfb {

namespace {

/// Numerical rank with the 1e-8·σ_max threshold shared by spark and the
/// identifiability search.
int numerical_rank(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8 * s(0)) ++r;
  return r;
}

Eigen::MatrixXcd select_columns(const Eigen::MatrixXcd& m, const std::vector<int>& cols) {
  Eigen::MatrixXcd out(m.rows(), cols.size());
  for (size_t j = 0; j < cols.size(); ++j) out.col(j) = m.col(cols[j]);
  return out;
}

bool next_subset(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

int count_distinct(const std::vector<Complex>& vals, double tol) {
  int distinct = 0;
  std::vector<bool> used(vals.size(), false);
  for (size_t i = 0; i < vals.size(); ++i) {
    if (used[i]) continue;
    ++distinct;
    for (size_t j = i + 1; j < vals.size(); ++j)
      if (!used[j] && std::abs(vals[i] - vals[j]) < tol) used[j] = true;
  }
  return distinct;
}

}  // namespace

double rho(const Eigen::MatrixXcd& a, int k) {
  require(k >= 1 && k <= a.cols(), errc::invalid_argument, "rho: k out of range");
  double best = 0.0;
  std::vector<double> mags(a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) mags[j] = std::norm(a(i, j));
    std::partial_sort(mags.begin(), mags.begin() + k, mags.end(), std::greater<double>());
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += mags[j];
    best = std::max(best, sum);
  }
  return best;
}

CoherenceProfile coherence_profile(const ShiftSpectrum& spec, const FilterBasis& basis, int K) {
  require(spec.normal(), errc::not_normal,
          "coherence analysis requires a normal shift operator");
  require(K >= 1 && K <= spec.n(), errc::invalid_argument, "profile: K out of range");
  CoherenceProfile p;
  p.u_scaled = std::sqrt(static_cast<double>(spec.n())) * spec.u_analysis();
  p.psi_used = basis.psi_orth();
  p.rho_u.resize(K);
  for (int k = 1; k <= K; ++k) p.rho_u(k - 1) = rho(p.u_scaled, k);
  p.rho_psi.resize(basis.L());
  for (int k = 1; k <= basis.L(); ++k) p.rho_psi(k - 1) = rho(p.psi_used, k);
  return p;
}

RecoveryBound theorem1_bound(const CoherenceProfile& profile, int S, int L, int N) {
  require(S >= 1 && S <= profile.rho_u.size(), errc::invalid_argument,
          "bound: profile does not cover S");
  require(L >= 1 && L <= profile.rho_psi.size(), errc::invalid_argument,
          "bound: profile does not cover L");
  RecoveryBound b;
  b.S = S;
  b.L = L;
  b.N = N;
  const double ru1 = profile.rho_u(0);
  const double ruS = profile.rho_u(S - 1);
  const double rp1 = profile.rho_psi(0);
  const double rpL = profile.rho_psi(L - 1);
  b.gamma = std::sqrt(2.0 * N * (std::log(2.0 * L * N) + 1.0) + 1.0);
  const double logs =
      std::log(4.0 * b.gamma * std::sqrt(2.0 * L * S)) * std::log(2.0 * S * double(N) * N);
  const double ratio = ru1 * rp1 * L * S / (ruS * rpL);
  b.alpha = 3.0 * std::log(2.0) / ((120.0 * ratio + 8.0 * std::sqrt(ratio)) * ruS * rpL * logs);
  b.alpha1 = 3.0 * std::log(2.0) / 128.0 / (double(L) * S * ruS * rpL * logs);
  b.applicable = b.alpha >= 1.0;
  b.p_rec_lower = std::clamp(1.0 - std::pow(double(N), -b.alpha + 1.0), 0.0, 1.0);
  return b;
}

int spark(const Eigen::MatrixXcd& a) {
  const int cols = static_cast<int>(a.cols());
  require(cols >= 1, errc::invalid_argument, "spark: empty matrix");
  require(cols <= 20, errc::too_large, "spark: exponential search capped at 20 columns");
  for (int k = 1; k <= cols; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    do {
      if (numerical_rank(select_columns(a, idx)) < k) return k;
    } while (next_subset(idx, cols));
  }
  return cols + 1;
}

IdentifiabilityResult check_identifiability(const ShiftSpectrum& spec, int L, int S,
                                            SupportFamily family) {
  const int n = spec.n();
  require(n <= 12, errc::too_large, "identifiability search capped at N = 12");
  require(L >= 1 && L <= n && S >= 1 && S <= n, errc::invalid_argument,
          "identifiability: L, S out of range");

  // Candidate supports for the sparse input.
  std::vector<std::vector<int>> supports;
  if (family == SupportFamily::adjacent) {
    for (int start = 0; start < n; ++start) {
      std::vector<int> w(S);
      for (int j = 0; j < S; ++j) w[j] = (start + j) % n;
      std::sort(w.begin(), w.end());
      supports.push_back(std::move(w));
    }
    std::sort(supports.begin(), supports.end());
    supports.erase(std::unique(supports.begin(), supports.end()), supports.end());
  } else {
    std::vector<int> idx(S);
    for (int i = 0; i < S; ++i) idx[i] = i;
    do {
      supports.push_back(idx);
    } while (next_subset(idx, n));
  }

  std::vector<Eigen::MatrixXcd> support_cols;
  support_cols.reserve(supports.size());
  for (const auto& sup : supports) support_cols.push_back(select_columns(spec.u_analysis(), sup));

  double lmax = spec.eigvals().cwiseAbs().maxCoeff();
  const double tol = 1e-8 * std::max(lmax, 1e-300);

  IdentifiabilityResult res;
  res.min_distinct = -1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size == n) continue;  // U is invertible, full row set never qualifies
    // The row set qualifies when some allowed support admits a nonzero
    // sparse null vector: rank(U_{I,Ω}) < S. Fewer than S rows always do.
    bool qualifies = size < S;
    for (size_t c = 0; c < supports.size() && !qualifies; ++c) {
      Eigen::MatrixXcd sub(size, S);
      int rr = 0;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) sub.row(rr++) = support_cols[c].row(i);
      if (numerical_rank(sub) < S) qualifies = true;
    }
    if (!qualifies) continue;
    std::vector<Complex> complement;
    for (int i = 0; i < n; ++i)
      if (!(mask & (1u << i))) complement.push_back(spec.eigvals()(i));
    const int distinct = count_distinct(complement, tol);
    if (res.min_distinct < 0 || distinct < res.min_distinct) {
      res.min_distinct = distinct;
      res.witness_rows.clear();
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) res.witness_rows.push_back(i);
    }
  }
  if (res.min_distinct < 0) {
    res.identifiable = true;
    res.vacuous = true;
    res.min_distinct = 0;
    return res;
  }
  res.identifiable = res.min_distinct > L - 1;
  if (res.identifiable) res.witness_rows.clear();
  return res;
}

}  // namespace gfb
