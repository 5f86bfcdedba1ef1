#include "gfb/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "json.hpp"

namespace gfb {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd flatten(const MatrixXd& z) {
  return Eigen::Map<const VectorXd>(z.data(), z.size());
}

MatrixXd unflatten(const VectorXd& v, int rows, int cols) {
  return Eigen::Map<const MatrixXd>(v.data(), rows, cols);
}

// ---------------------------------------------------------------- blocks

class ProxBlock {
 public:
  virtual ~ProxBlock() = default;
  virtual void prox(const VectorXd& v, double t, VectorXd& out) const = 0;
  virtual double objective(const VectorXd&) const { return 0.0; }
};

/// Projection onto {v : A v = b}; minimum-norm correction through a cached
/// complete orthogonal decomposition, robust to rank deficiency.
class EqualityProjBlock : public ProxBlock {
 public:
  EqualityProjBlock(MatrixXd a, VectorXd b)
      : a_(std::move(a)), b_(std::move(b)), cod_(a_) {
    least_norm_ = cod_.solve(b_);
    min_residual_ = (a_ * least_norm_ - b_).norm();
  }
  void prox(const VectorXd& v, double, VectorXd& out) const override {
    out = v - cod_.solve(a_ * v - b_);
  }
  double residual(const VectorXd& v) const { return (a_ * v - b_).norm(); }
  double min_residual() const { return min_residual_; }
  const VectorXd& least_norm() const { return least_norm_; }

 private:
  MatrixXd a_;
  VectorXd b_;
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod_;
  VectorXd least_norm_;
  double min_residual_ = 0.0;
};

/// Projection onto {v : ||A v - b|| <= eps}. The KKT system reduces to a
/// scalar root-find on the multiplier once the SVD of A is cached.
class BallProjBlock : public ProxBlock {
 public:
  BallProjBlock(MatrixXd a, VectorXd b, double eps)
      : a_(std::move(a)), b_(std::move(b)), eps_(eps),
        svd_(a_, Eigen::ComputeThinU | Eigen::ComputeThinV) {
    btil_ = svd_.matrixU().transpose() * b_;
    bperp2_ = std::max(0.0, b_.squaredNorm() - btil_.squaredNorm());
    const auto& s = svd_.singularValues();
    double floor2 = bperp2_;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) <= 0) floor2 += btil_(i) * btil_(i);
    min_residual_ = std::sqrt(floor2);
  }

  void prox(const VectorXd& v, double, VectorXd& out) const override {
    const double res0 = (a_ * v - b_).norm();
    if (res0 <= eps_) {
      out = v;
      return;
    }
    const auto& s = svd_.singularValues();
    const VectorXd c = svd_.matrixV().transpose() * v;
    const auto phi = [&](double mu) {
      double val = bperp2_;
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double num = s(i) * c(i) - btil_(i);
        const double den = 1.0 + mu * s(i) * s(i);
        val += (num / den) * (num / den);
      }
      return val;
    };
    const double target = eps_ * eps_;
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (phi(hi) > target && guard++ < 400) hi *= 2.0;
    for (int it = 0; it < 120; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (phi(mid) > target)
        lo = mid;
      else
        hi = mid;
    }
    const double mu = hi;
    VectorXd cp(c.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
      cp(i) = (c(i) + mu * s(i) * btil_(i)) / (1.0 + mu * s(i) * s(i));
    out = v + svd_.matrixV() * (cp - c);
  }

  double residual(const VectorXd& v) const { return (a_ * v - b_).norm(); }
  double min_residual() const { return min_residual_; }

 private:
  MatrixXd a_;
  VectorXd b_;
  double eps_;
  Eigen::JacobiSVD<MatrixXd> svd_;
  VectorXd btil_;
  double bperp2_ = 0.0;
  double min_residual_ = 0.0;
};

class L1Block : public ProxBlock {
 public:
  explicit L1Block(double weight) : w_(weight) {}
  void prox(const VectorXd& v, double t, VectorXd& out) const override {
    const double thr = t * w_;
    out = v.unaryExpr([thr](double x) {
      const double m = std::abs(x) - thr;
      return m > 0 ? (x > 0 ? m : -m) : 0.0;
    });
  }
  double objective(const VectorXd& v) const override { return w_ * v.lpNorm<1>(); }

 private:
  double w_;
};

/// Group soft-thresholding over disjoint index groups (rows of Z or of a
/// stacked block matrix), one weight per group.
class RowGroupBlock : public ProxBlock {
 public:
  RowGroupBlock(std::vector<std::vector<int>> groups, VectorXd weights)
      : groups_(std::move(groups)), w_(std::move(weights)) {}

  void prox(const VectorXd& v, double t, VectorXd& out) const override {
    out = v;
    for (size_t g = 0; g < groups_.size(); ++g) {
      double nrm2 = 0.0;
      for (int idx : groups_[g]) nrm2 += v(idx) * v(idx);
      const double nrm = std::sqrt(nrm2);
      const double scale = nrm > 0 ? std::max(1.0 - t * w_(g) / nrm, 0.0) : 0.0;
      for (int idx : groups_[g]) out(idx) = scale * v(idx);
    }
  }
  double objective(const VectorXd& v) const override {
    double obj = 0.0;
    for (size_t g = 0; g < groups_.size(); ++g) {
      double nrm2 = 0.0;
      for (int idx : groups_[g]) nrm2 += v(idx) * v(idx);
      obj += w_(g) * std::sqrt(nrm2);
    }
    return obj;
  }

 private:
  std::vector<std::vector<int>> groups_;
  VectorXd w_;
};

/// Singular-value soft-thresholding of a matrix view of the flat variable.
/// plan[r + c*rows] gives the flat index of entry (r, c).
class NuclearBlock : public ProxBlock {
 public:
  NuclearBlock(int rows, int cols, std::vector<int> plan)
      : rows_(rows), cols_(cols), plan_(std::move(plan)) {}

  void prox(const VectorXd& v, double t, VectorXd& out) const override {
    MatrixXd m = gather(v);
    Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    VectorXd s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::max(s(i) - t, 0.0);
    m = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
    out = v;
    scatter(m, out);
  }
  double objective(const VectorXd& v) const override {
    Eigen::JacobiSVD<MatrixXd> svd(gather(v));
    return svd.singularValues().sum();
  }

 private:
  MatrixXd gather(const VectorXd& v) const {
    MatrixXd m(rows_, cols_);
    for (int c = 0; c < cols_; ++c)
      for (int r = 0; r < rows_; ++r) m(r, c) = v(plan_[r + c * rows_]);
    return m;
  }
  void scatter(const MatrixXd& m, VectorXd& out) const {
    for (int c = 0; c < cols_; ++c)
      for (int r = 0; r < rows_; ++r) out(plan_[r + c * rows_]) = m(r, c);
  }
  int rows_, cols_;
  std::vector<int> plan_;
};

std::vector<int> identity_plan(int n) {
  std::vector<int> plan(n);
  std::iota(plan.begin(), plan.end(), 0);
  return plan;
}

// ---------------------------------------------------------------- engine

struct AdmmOutput {
  VectorXd x_affine;
  VectorXd z;
  double r = 0.0, s = 0.0;
  int iters = 0;
  bool converged = false;
  std::vector<double> trace;
};

/// Scaled-form consensus ADMM: one copy of the variable per nonsmooth term
/// plus the constraint-projection block; the averaged consensus variable
/// ties them together. Returns the constraint block's final iterate, which
/// is feasible by construction.
AdmmOutput run_consensus(const std::vector<ProxBlock*>& blocks, int affine_idx, int n,
                         const SolverConfig& cfg, const VectorXd* z_init) {
  const int k_blocks = static_cast<int>(blocks.size());
  double rho = cfg.admm_penalty;
  VectorXd z = z_init ? *z_init : VectorXd::Zero(n);
  std::vector<VectorXd> x(k_blocks, VectorXd::Zero(n));
  std::vector<VectorXd> u(k_blocks, VectorXd::Zero(n));
  AdmmOutput out;
  VectorXd tmp(n), z_old(n);

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    for (int k = 0; k < k_blocks; ++k) {
      tmp = z - u[k];
      blocks[k]->prox(tmp, 1.0 / rho, x[k]);
    }
    z_old = z;
    z.setZero();
    for (int k = 0; k < k_blocks; ++k) z += x[k] + u[k];
    z /= k_blocks;
    double r2 = 0.0;
    for (int k = 0; k < k_blocks; ++k) {
      u[k] += x[k] - z;
      r2 += (x[k] - z).squaredNorm();
    }
    const double r = std::sqrt(r2);
    const double s = rho * std::sqrt(static_cast<double>(k_blocks)) * (z - z_old).norm();
    if (cfg.track_objective) {
      double obj = 0.0;
      for (int k = 0; k < k_blocks; ++k) obj += blocks[k]->objective(x[affine_idx]);
      out.trace.push_back(obj);
    }
    out.iters = iter;
    out.r = r;
    out.s = s;
    const double scale = std::sqrt(static_cast<double>(k_blocks)) * std::max(1.0, z.norm());
    if (r <= cfg.tol_primal * scale && s <= cfg.tol_dual * scale) {
      out.converged = true;
      break;
    }
    if (iter % 50 == 0 && iter <= 1500) {
      if (r > 10.0 * s) {
        rho *= 2.0;
        for (auto& uk : u) uk /= 2.0;
      } else if (s > 10.0 * r) {
        rho /= 2.0;
        for (auto& uk : u) uk *= 2.0;
      }
      rho = std::clamp(rho, cfg.admm_penalty * 1e-4, cfg.admm_penalty * 1e4);
    }
  }
  tmp = z - u[affine_idx];
  out.x_affine.resize(n);
  blocks[affine_idx]->prox(tmp, 1.0 / rho, out.x_affine);
  out.z = z;
  return out;
}

// ------------------------------------------------------------- assembly

enum class ObjKind { l1_only, nuclear_l21 };

struct ReducedSystem {
  MatrixXd a;
  VectorXd b;
  std::vector<int> rows;  // reduced row index -> node index
  int n_red = 0;
};

/// Restrict the lifted system to the rows of Z allowed to be nonzero; with
/// column-major vec(), column l*N + i belongs to row i.
ReducedSystem reduce_known_support(const RealSplitSystem& sys, int n, int len,
                                   const std::vector<int>& support) {
  ReducedSystem red;
  if (support.empty()) {
    red.a = sys.a;
    red.b = sys.b;
    red.rows.resize(n);
    std::iota(red.rows.begin(), red.rows.end(), 0);
    red.n_red = n;
    return red;
  }
  for (int i : support)
    require(i >= 0 && i < n, errc::invalid_argument, "known support index out of range");
  red.rows = support;
  std::sort(red.rows.begin(), red.rows.end());
  red.rows.erase(std::unique(red.rows.begin(), red.rows.end()), red.rows.end());
  red.n_red = static_cast<int>(red.rows.size());
  red.a.resize(sys.a.rows(), static_cast<Eigen::Index>(red.n_red) * len);
  for (int l = 0; l < len; ++l)
    for (int r = 0; r < red.n_red; ++r)
      red.a.col(static_cast<Eigen::Index>(l) * red.n_red + r) =
          sys.a.col(static_cast<Eigen::Index>(l) * n + red.rows[r]);
  red.b = sys.b;
  return red;
}

MatrixXd embed_rows(const MatrixXd& z_red, const std::vector<int>& rows, int n) {
  MatrixXd z = MatrixXd::Zero(n, z_red.cols());
  for (int r = 0; r < z_red.rows(); ++r) z.row(rows[r]) = z_red.row(r);
  return z;
}

double auto_delta(const SolverConfig& cfg, const Eigen::VectorXcd& y, int n) {
  if (cfg.delta > 0) return cfg.delta;
  return 1e-3 * y.norm() / std::sqrt(static_cast<double>(n));
}

LiftedSolution finish_solution(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                               MatrixXd z, double objective, const AdmmOutput& admm,
                               SolveStatus status, std::uint64_t seed) {
  LiftedSolution sol;
  sol.z = std::move(z);
  sol.objective = objective;
  sol.primal_residual = admm.r;
  sol.dual_residual = admm.s;
  sol.iters = admm.iters;
  sol.status = status;
  sol.seed = seed;
  sol.objective_trace = admm.trace;
  sol.feas_residual = (op.forward(sol.z) - y_obs).norm();
  Eigen::JacobiSVD<MatrixXd> svd(sol.z);
  sol.singular_values = svd.singularValues();
  if (sol.z.norm() > 0) {
    auto [x, h] = extract_rank_one(sol.z);
    sol.x_hat = std::move(x);
    sol.h_hat = std::move(h);
  } else {
    sol.x_hat = VectorXd::Zero(sol.z.rows());
    sol.h_hat = VectorXd::Zero(sol.z.cols());
  }
  return sol;
}

/// Shared single-operator path: objective kind + optional per-row weights
/// (reduced indexing) + equality or ball constraint.
LiftedSolution solve_single(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                            const SolverConfig& cfg, ObjKind kind, const VectorXd* row_weights,
                            const VectorXd* warm) {
  require(y_obs.size() == op.n_observed(), errc::dimension_mismatch,
          "observation length mismatch");
  const int n = op.n();
  const int len = op.filter_len();
  const RealSplitSystem sys = op.real_split(y_obs);
  const ReducedSystem red = reduce_known_support(sys, n, len, cfg.known_support);
  const int dim = static_cast<int>(red.a.cols());

  std::unique_ptr<EqualityProjBlock> eq;
  std::unique_ptr<BallProjBlock> ball;
  double min_res = 0.0;
  const double feas_tol = 1e-6 * (1.0 + red.b.norm());
  if (cfg.noise_eps > 0) {
    ball = std::make_unique<BallProjBlock>(red.a, red.b, cfg.noise_eps);
    min_res = ball->min_residual();
  } else {
    eq = std::make_unique<EqualityProjBlock>(red.a, red.b);
    min_res = eq->min_residual();
  }
  const double infeas_gap = cfg.noise_eps > 0 ? min_res - cfg.noise_eps : min_res;
  if (infeas_gap > feas_tol) {
    // No point iterating: even the least-squares residual violates the
    // constraint. Report the least-squares point.
    EqualityProjBlock ls(red.a, red.b);
    AdmmOutput none;
    none.x_affine = ls.least_norm();
    MatrixXd z = embed_rows(unflatten(ls.least_norm(), red.n_red, len), red.rows, n);
    return finish_solution(op, y_obs, std::move(z), 0.0, none, SolveStatus::infeasible,
                           cfg.rng_seed);
  }

  std::vector<std::unique_ptr<ProxBlock>> owned;
  if (kind == ObjKind::l1_only) {
    owned.push_back(std::make_unique<L1Block>(1.0));
  } else {
    owned.push_back(std::make_unique<NuclearBlock>(red.n_red, len, identity_plan(dim)));
    std::vector<std::vector<int>> groups(red.n_red);
    for (int r = 0; r < red.n_red; ++r) {
      groups[r].resize(len);
      for (int l = 0; l < len; ++l) groups[r][l] = l * red.n_red + r;
    }
    VectorXd w = row_weights ? *row_weights : VectorXd::Constant(red.n_red, cfg.tau);
    owned.push_back(std::make_unique<RowGroupBlock>(std::move(groups), std::move(w)));
  }
  std::vector<ProxBlock*> blocks;
  for (auto& b : owned) blocks.push_back(b.get());
  ProxBlock* constraint = eq ? static_cast<ProxBlock*>(eq.get()) : ball.get();
  blocks.push_back(constraint);
  const int affine_idx = static_cast<int>(blocks.size()) - 1;

  AdmmOutput admm = run_consensus(blocks, affine_idx, dim, cfg, warm);
  double objective = 0.0;
  for (auto& b : owned) objective += b->objective(admm.x_affine);
  MatrixXd z = embed_rows(unflatten(admm.x_affine, red.n_red, len), red.rows, n);
  const SolveStatus status = admm.converged ? SolveStatus::converged : SolveStatus::max_iters;
  return finish_solution(op, y_obs, std::move(z), objective, admm, status, cfg.rng_seed);
}

VectorXd reduced_flat(const LiftedSolution& sol, const std::vector<int>& support) {
  if (support.empty()) return flatten(sol.z);
  std::vector<int> rows = support;
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  MatrixXd z_red(rows.size(), sol.z.cols());
  for (size_t r = 0; r < rows.size(); ++r) z_red.row(r) = sol.z.row(rows[r]);
  return flatten(z_red);
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

LiftedSolution solve_l1(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                        const SolverConfig& cfg) {
  return solve_single(op, y_obs, cfg, ObjKind::l1_only, nullptr, nullptr);
}

LiftedSolution solve_nuclear_l21(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                                 const SolverConfig& cfg) {
  return solve_single(op, y_obs, cfg, ObjKind::nuclear_l21, nullptr, nullptr);
}

LiftedSolution solve_reweighted(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                                const SolverConfig& cfg) {
  require(cfg.reweight_iters >= 0, errc::invalid_argument, "reweight_iters must be >= 0");
  const double delta = auto_delta(cfg, y_obs, op.n());
  std::vector<int> rows = cfg.known_support;
  if (rows.empty()) {
    rows.resize(op.n());
    std::iota(rows.begin(), rows.end(), 0);
  } else {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  }
  const int n_red = static_cast<int>(rows.size());

  LiftedSolution current = solve_single(op, y_obs, cfg, ObjKind::nuclear_l21, nullptr, nullptr);
  if (current.status == SolveStatus::infeasible) return current;
  LiftedSolution best = current;
  for (int k = 1; k <= cfg.reweight_iters; ++k) {
    // w_i(k) = tau / (||z_i(k-1)|| + delta) over the active rows.
    VectorXd weights(n_red);
    for (int r = 0; r < n_red; ++r)
      weights(r) = cfg.tau / (current.z.row(rows[r]).norm() + delta);
    const VectorXd warm = reduced_flat(current, cfg.known_support);
    LiftedSolution next = solve_single(op, y_obs, cfg, ObjKind::nuclear_l21, &weights, &warm);
    if (next.status == SolveStatus::infeasible) break;
    current = next;
    if (current.status == SolveStatus::converged || current.feas_residual <= best.feas_residual)
      best = current;
  }
  return best;
}

LiftedSolution solve_noisy(const LiftedOperator& op, const Eigen::VectorXcd& y_obs,
                           const SolverConfig& cfg) {
  require(cfg.noise_eps > 0, errc::invalid_argument, "solve_noisy requires noise_eps > 0");
  return solve_reweighted(op, y_obs, cfg);
}

MultiSolution solve_multi(const std::vector<LiftedOperator>& ops, const MultiOutputProblem& prob,
                          const SolverConfig& cfg) {
  const int P = static_cast<int>(prob.outputs.size());
  require(P >= 1, errc::invalid_argument, "multi-output problem needs P >= 1");
  require(!ops.empty(), errc::invalid_argument, "no operators given");
  require(ops.size() == 1 || static_cast<int>(ops.size()) == P, errc::invalid_argument,
          "give one operator or one per signal");
  require(cfg.known_support.empty(), errc::invalid_argument,
          "known support is not supported in the multi-output path");
  require(cfg.noise_eps <= 0, errc::invalid_argument,
          "noise ball is not supported in the multi-output path");
  const auto& op0 = ops.front();
  const int n = op0.n();
  const int len = op0.filter_len();
  for (const auto& op : ops)
    require(op.n() == n && op.filter_len() == len, errc::dimension_mismatch,
            "operators must share dimensions");
  if (!prob.shared_support)
    require(prob.taus.empty() || static_cast<int>(prob.taus.size()) == P, errc::invalid_argument,
            "per-signal taus must have one entry per signal");

  const int dim = P * n * len;
  std::vector<std::unique_ptr<EqualityProjBlock>> eqs;
  double worst_gap = 0.0;
  for (int p = 0; p < P; ++p) {
    const auto& op = ops.size() == 1 ? op0 : ops[p];
    require(prob.outputs[p].size() == op.n_observed(), errc::dimension_mismatch,
            "output length mismatch");
    RealSplitSystem sys = op.real_split(prob.outputs[p]);
    eqs.push_back(std::make_unique<EqualityProjBlock>(std::move(sys.a), std::move(sys.b)));
    worst_gap = std::max(worst_gap, eqs.back()->min_residual());
  }

  // Constraint block: the per-signal equalities act on disjoint segments.
  class MultiEqualityBlock : public ProxBlock {
   public:
    MultiEqualityBlock(std::vector<EqualityProjBlock*> eqs, int seg)
        : eqs_(std::move(eqs)), seg_(seg) {}
    void prox(const VectorXd& v, double t, VectorXd& out) const override {
      out.resize(v.size());
      VectorXd part(seg_);
      for (size_t p = 0; p < eqs_.size(); ++p) {
        eqs_[p]->prox(v.segment(p * seg_, seg_), t, part);
        out.segment(p * seg_, seg_) = part;
      }
    }
   private:
    std::vector<EqualityProjBlock*> eqs_;
    int seg_;
  };

  // Z̃_v(p·N+i, l) lives at flat index p·N·L + l·N + i.
  std::vector<int> plan(static_cast<size_t>(n) * P * len);
  for (int c = 0; c < len; ++c)
    for (int r = 0; r < n * P; ++r) {
      const int p = r / n, i = r % n;
      plan[r + c * n * P] = p * n * len + c * n + i;
    }

  auto make_groups = [&](bool shared) {
    std::vector<std::vector<int>> groups;
    if (shared) {
      groups.resize(n);
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < P; ++p)
          for (int l = 0; l < len; ++l) groups[i].push_back(p * n * len + l * n + i);
    } else {
      groups.resize(static_cast<size_t>(n) * P);
      for (int p = 0; p < P; ++p)
        for (int i = 0; i < n; ++i)
          for (int l = 0; l < len; ++l)
            groups[p * n + i].push_back(p * n * len + l * n + i);
    }
    return groups;
  };

  auto initial_weights = [&]() {
    if (prob.shared_support) return VectorXd::Constant(n, cfg.tau).eval();
    VectorXd w(static_cast<Eigen::Index>(n) * P);
    for (int p = 0; p < P; ++p)
      w.segment(p * n, n).setConstant(prob.taus.empty() ? cfg.tau : prob.taus[p]);
    return w;
  };

  std::vector<EqualityProjBlock*> eq_ptrs;
  for (auto& e : eqs) eq_ptrs.push_back(e.get());
  MultiEqualityBlock constraint(eq_ptrs, n * len);

  const double delta = auto_delta(cfg, prob.outputs.front(), n);
  VectorXd weights = initial_weights();
  VectorXd warm;
  const VectorXd* warm_ptr = nullptr;
  AdmmOutput admm;
  double objective = 0.0;
  for (int k = 0; k <= std::max(cfg.reweight_iters, 0); ++k) {
    NuclearBlock nuc(n * P, len, plan);
    RowGroupBlock l21(make_groups(prob.shared_support), weights);
    std::vector<ProxBlock*> blocks{&nuc, &l21, &constraint};
    admm = run_consensus(blocks, 2, dim, cfg, warm_ptr);
    objective = nuc.objective(admm.x_affine) + l21.objective(admm.x_affine);
    if (k == cfg.reweight_iters) break;
    // Reweight rows of Z̃_h (shared) or of each Z_p.
    if (prob.shared_support) {
      for (int i = 0; i < n; ++i) {
        double nrm2 = 0.0;
        for (int p = 0; p < P; ++p)
          for (int l = 0; l < len; ++l) {
            const double v = admm.x_affine(p * n * len + l * n + i);
            nrm2 += v * v;
          }
        weights(i) = cfg.tau / (std::sqrt(nrm2) + delta);
      }
    } else {
      for (int p = 0; p < P; ++p)
        for (int i = 0; i < n; ++i) {
          double nrm2 = 0.0;
          for (int l = 0; l < len; ++l) {
            const double v = admm.x_affine(p * n * len + l * n + i);
            nrm2 += v * v;
          }
          const double tau_p = prob.taus.empty() ? cfg.tau : prob.taus[p];
          weights(p * n + i) = tau_p / (std::sqrt(nrm2) + delta);
        }
    }
    warm = admm.x_affine;
    warm_ptr = &warm;
  }

  MultiSolution multi;
  multi.objective = objective;
  multi.iters = admm.iters;
  multi.status = admm.converged ? SolveStatus::converged : SolveStatus::max_iters;

  // Rank-one factorization of the vertical stack gives one h and all x_p.
  MatrixXd zv(n * P, len);
  for (int c = 0; c < len; ++c)
    for (int r = 0; r < n * P; ++r) zv(r, c) = admm.x_affine(plan[r + c * n * P]);
  VectorXd x_stack = VectorXd::Zero(n * P);
  VectorXd h_cons = VectorXd::Zero(len);
  if (zv.norm() > 0) {
    auto [x, h] = extract_rank_one(zv);
    x_stack = std::move(x);
    h_cons = std::move(h);
  }
  multi.h_consensus = h_cons;
  for (int p = 0; p < P; ++p) {
    const auto& op = ops.size() == 1 ? op0 : ops[p];
    LiftedSolution sol;
    sol.z = zv.middleRows(p * n, n);
    sol.x_hat = x_stack.segment(p * n, n);
    sol.h_hat = h_cons;
    sol.objective = objective;
    sol.primal_residual = admm.r;
    sol.dual_residual = admm.s;
    sol.iters = admm.iters;
    sol.status = multi.status;
    sol.seed = cfg.rng_seed;
    sol.feas_residual = (op.forward(sol.z) - prob.outputs[p]).norm();
    Eigen::JacobiSVD<MatrixXd> svd(sol.z);
    sol.singular_values = svd.singularValues();
    multi.per_signal.push_back(std::move(sol));
  }
  return multi;
}

std::pair<VectorXd, VectorXd> extract_rank_one(const MatrixXd& z) {
  require(z.size() > 0 && z.norm() > 0, errc::zero_matrix,
          "rank-one extraction needs a nonzero matrix");
  Eigen::JacobiSVD<MatrixXd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  VectorXd x = svd.singularValues()(0) * svd.matrixU().col(0);
  VectorXd h = svd.matrixV().col(0);
  const double hmax = h.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < h.size(); ++j) {
    if (std::abs(h(j)) > 1e-12 * hmax) {
      if (h(j) < 0) {
        h = -h;
        x = -x;
      }
      break;
    }
  }
  return {std::move(x), std::move(h)};
}

LiftedSolution baseline_ls(const LiftedOperator& op, const Eigen::VectorXcd& y_obs) {
  const RealSplitSystem sys = op.real_split(y_obs);
  EqualityProjBlock eq(sys.a, sys.b);
  AdmmOutput none;
  none.iters = 1;
  none.converged = true;
  MatrixXd z = unflatten(eq.least_norm(), op.n(), op.filter_len());
  return finish_solution(op, y_obs, std::move(z), 0.0, none, SolveStatus::converged, 0);
}

LiftedSolution baseline_am(const LiftedOperator& op, const Eigen::VectorXcd& y_obs, int S,
                           const SolverConfig& cfg) {
  const int n = op.n();
  const int len = op.filter_len();
  require(S >= 1 && S <= n, errc::invalid_argument, "sparsity level out of range");
  require(y_obs.size() == op.n_observed(), errc::dimension_mismatch,
          "observation length mismatch");

  // Initialize h from the least-squares lifted estimate.
  const RealSplitSystem sys = op.real_split(y_obs);
  EqualityProjBlock init(sys.a, sys.b);
  MatrixXd z_ls = unflatten(init.least_norm(), n, len);
  VectorXd h = VectorXd::Zero(len);
  if (z_ls.norm() > 0)
    h = extract_rank_one(z_ls).second;
  else
    h(0) = 1.0;

  VectorXd x = VectorXd::Zero(n);
  SolveStatus status = SolveStatus::max_iters;
  int outer = 0;
  for (outer = 1; outer <= cfg.am_max_outer; ++outer) {
    const VectorXd x_prev = x, h_prev = h;

    // x-step: basis pursuit on the fixed-h system, then keep the S largest
    // magnitudes (ties broken towards the lowest index).
    const RealSplitSystem xs = real_split_system(op.x_system(h), y_obs);
    EqualityProjBlock eq(xs.a, xs.b);
    L1Block l1(1.0);
    std::vector<ProxBlock*> blocks{&l1, &eq};
    AdmmOutput bp = run_consensus(blocks, 1, n, cfg, nullptr);
    x = bp.x_affine;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (std::abs(x(a)) != std::abs(x(b))) return std::abs(x(a)) > std::abs(x(b));
      return a < b;
    });
    VectorXd thresholded = VectorXd::Zero(n);
    for (int r = 0; r < S; ++r) thresholded(order[r]) = x(order[r]);
    x = thresholded;

    // h-step: minimum-norm LS fit of the fixed-x system.
    const RealSplitSystem hs = real_split_system(op.h_system(x), y_obs);
    h = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(hs.a).solve(hs.b);

    // Absorb the scale into x and fix the sign so iterates are comparable.
    const double hn = h.norm();
    if (hn > 0) {
      h /= hn;
      x *= hn;
      const double hmax = h.cwiseAbs().maxCoeff();
      for (Eigen::Index j = 0; j < h.size(); ++j) {
        if (std::abs(h(j)) > 1e-12 * hmax) {
          if (h(j) < 0) {
            h = -h;
            x = -x;
          }
          break;
        }
      }
    }
    const double change = (x - x_prev).norm() / (1.0 + x_prev.norm()) + (h - h_prev).norm();
    if (outer > 1 && change < 1e-6) {
      status = SolveStatus::converged;
      break;
    }
  }

  MatrixXd z = x * h.transpose();
  AdmmOutput diag;
  diag.iters = std::min(outer, cfg.am_max_outer);
  LiftedSolution sol = finish_solution(op, y_obs, std::move(z), 0.0, diag, status, cfg.rng_seed);
  sol.x_hat = x;
  sol.h_hat = h;
  return sol;
}

double rmse(const VectorXd& x_hat, const VectorXd& h_hat, const VectorXd& x0,
            const VectorXd& h0) {
  require(x_hat.size() == x0.size() && h_hat.size() == h0.size(), errc::dimension_mismatch,
          "rmse: shape mismatch");
  return (x_hat * h_hat.transpose() - x0 * h0.transpose()).norm();
}

std::string solution_to_json(const LiftedSolution& sol) {
  nlohmann::json j;
  auto& z = j["Z"];
  for (Eigen::Index i = 0; i < sol.z.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < sol.z.cols(); ++c) row.push_back(sol.z(i, c));
    z.push_back(row);
  }
  j["x_hat"] = std::vector<double>(sol.x_hat.data(), sol.x_hat.data() + sol.x_hat.size());
  j["h_hat"] = std::vector<double>(sol.h_hat.data(), sol.h_hat.data() + sol.h_hat.size());
  j["objective"] = sol.objective;
  j["residuals"] = {{"primal", sol.primal_residual},
                    {"dual", sol.dual_residual},
                    {"feasibility", sol.feas_residual}};
  j["iters"] = sol.iters;
  j["status"] = to_string(sol.status);
  j["seed"] = sol.seed;
  return j.dump(2);
}

}  // namespace gfb
