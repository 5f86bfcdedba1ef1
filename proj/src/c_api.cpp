#include "gfblind.h"

#include <cstring>
#include <string>

#include "gfb/epidemic.hpp"
#include "gfb/experiments.hpp"
#include "gfb/io.hpp"
#include "gfb/lifting.hpp"
#include "gfb/solvers.hpp"
#include "gfb/spectrum.hpp"
#include "gfb/theory.hpp"

namespace {

thread_local std::string g_last_error;

gfb_status code_of(const gfb::Error& e) {
  switch (e.code()) {
    case gfb::errc::invalid_argument: return GFB_ERR_INVALID_ARG;
    case gfb::errc::dimension_mismatch: return GFB_ERR_DIMENSION;
    case gfb::errc::non_diagonalizable: return GFB_ERR_NON_DIAGONALIZABLE;
    case gfb::errc::eigen_failure: return GFB_ERR_EIGEN_FAILURE;
    case gfb::errc::not_normal: return GFB_ERR_NOT_NORMAL;
    case gfb::errc::too_large: return GFB_ERR_TOO_LARGE;
    case gfb::errc::zero_matrix: return GFB_ERR_ZERO_MATRIX;
    case gfb::errc::io_error: return GFB_ERR_IO;
  }
  return GFB_ERR_UNKNOWN;
}

/// Runs fn, translating exceptions into status codes + thread-local text.
template <typename Fn>
gfb_status guard(Fn&& fn) {
  try {
    fn();
    return GFB_OK;
  } catch (const gfb::Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GFB_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return GFB_ERR_UNKNOWN;
  }
}

template <typename T, typename Fn>
T* guard_ptr(Fn&& fn) {
  T* out = nullptr;
  guard([&] { out = fn(); });
  return out;
}

Eigen::VectorXcd to_complex(const double* re, const double* im, int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = {re[i], im ? im[i] : 0.0};
  return v;
}

Eigen::MatrixXcd to_complex_matrix(const double* re, const double* im, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const size_t idx = static_cast<size_t>(c) * rows + r;
      m(r, c) = {re[idx], im ? im[idx] : 0.0};
    }
  return m;
}

gfb::SolverConfig convert(const gfb_solver_config* cfg, const int* support, size_t n_support) {
  gfb::SolverConfig out;
  if (cfg) {
    out.tau = cfg->tau;
    out.delta = cfg->delta;
    out.reweight_iters = cfg->reweight_iters;
    out.admm_penalty = cfg->admm_penalty;
    out.max_iters = cfg->max_iters;
    out.tol_primal = cfg->tol_primal;
    out.tol_dual = cfg->tol_dual;
    out.noise_eps = cfg->noise_eps;
    out.rng_seed = cfg->rng_seed;
    out.am_max_outer = cfg->am_max_outer;
  }
  if (support && n_support) out.known_support.assign(support, support + n_support);
  return out;
}

}  // namespace

struct gfb_graph {
  gfb::Graph impl;
};
struct gfb_spectrum {
  gfb::ShiftSpectrum impl;
};
struct gfb_basis {
  gfb::FilterBasis impl;
};
struct gfb_operator {
  gfb::LiftedOperator impl;
};
struct gfb_solution {
  gfb::LiftedSolution impl;
};

extern "C" {

const char* gfb_last_error(void) { return g_last_error.c_str(); }

void gfb_string_free(char* s) { delete[] s; }

/* ------------------------------------------------------------- graphs */

gfb_graph* gfb_graph_create(int n_nodes, const int* src, const int* dst, const double* weight,
                            size_t n_edges, int directed) {
  return guard_ptr<gfb_graph>([&] {
    gfb::require(src && dst, gfb::errc::invalid_argument, "edge arrays must not be null");
    std::vector<gfb::Edge> edges(n_edges);
    for (size_t i = 0; i < n_edges; ++i)
      edges[i] = {src[i], dst[i], weight ? weight[i] : 1.0};
    return new gfb_graph{gfb::Graph(n_nodes, std::move(edges), directed != 0)};
  });
}

gfb_graph* gfb_graph_generate(const char* kind, int n, double arg1, double arg2, uint64_t seed) {
  return guard_ptr<gfb_graph>([&] {
    gfb::require(kind, gfb::errc::invalid_argument, "kind must not be null");
    gfb::GraphGenSpec spec;
    spec.kind = kind;
    spec.n = n;
    if (spec.kind == "er") spec.p = arg1;
    if (spec.kind == "small_world") {
      spec.k = static_cast<int>(arg1);
      spec.rewire = arg2;
    }
    if (spec.kind == "pref_attach") spec.m = static_cast<int>(arg1);
    if (spec.kind == "random_regular") spec.d = static_cast<int>(arg1);
    return new gfb_graph{gfb::gen_graph(spec, seed)};
  });
}

gfb_graph* gfb_graph_load(const char* path, int directed) {
  return guard_ptr<gfb_graph>([&] {
    gfb::require(path, gfb::errc::invalid_argument, "path must not be null");
    return new gfb_graph{gfb::load_edge_list(path, directed != 0)};
  });
}

gfb_status gfb_graph_save(const gfb_graph* graph, const char* path) {
  return guard([&] {
    gfb::require(graph && path, gfb::errc::invalid_argument, "null argument");
    gfb::save_edge_list(graph->impl, path);
  });
}

int gfb_graph_n_nodes(const gfb_graph* graph) { return graph ? graph->impl.n_nodes() : 0; }

long long gfb_graph_n_edges(const gfb_graph* graph) {
  return graph ? static_cast<long long>(graph->impl.edges().size()) : 0;
}

void gfb_graph_free(gfb_graph* graph) { delete graph; }

/* ------------------------------------------------------------ spectra */

gfb_spectrum* gfb_spectrum_build(const gfb_graph* graph, const char* shift_kind, int rescale) {
  return guard_ptr<gfb_spectrum>([&] {
    gfb::require(graph && shift_kind, gfb::errc::invalid_argument, "null argument");
    const std::string kind = shift_kind;
    gfb::ShiftOptions opts{rescale != 0};
    gfb::ShiftKind k = gfb::ShiftKind::adjacency;
    if (kind == "laplacian")
      k = gfb::ShiftKind::laplacian;
    else if (kind == "directed_cycle")
      k = gfb::ShiftKind::directed_cycle;
    else
      gfb::require(kind == "adjacency", gfb::errc::invalid_argument,
                   "unknown shift kind: " + kind);
    return new gfb_spectrum{gfb::ShiftSpectrum::build(graph->impl, k, opts)};
  });
}

gfb_spectrum* gfb_spectrum_build_custom(const double* shift, int n, int rescale) {
  return guard_ptr<gfb_spectrum>([&] {
    gfb::require(shift && n > 0, gfb::errc::invalid_argument, "bad shift matrix");
    Eigen::Map<const Eigen::MatrixXd> s(shift, n, n);
    return new gfb_spectrum{
        gfb::ShiftSpectrum::build_custom(s, gfb::ShiftOptions{rescale != 0})};
  });
}

int gfb_spectrum_n(const gfb_spectrum* spec) { return spec ? spec->impl.n() : 0; }
int gfb_spectrum_is_normal(const gfb_spectrum* spec) {
  return spec && spec->impl.normal() ? 1 : 0;
}
int gfb_spectrum_has_repeated_eigvals(const gfb_spectrum* spec) {
  return spec && spec->impl.has_repeated_eigvals() ? 1 : 0;
}
double gfb_spectrum_inv_condition(const gfb_spectrum* spec) {
  return spec ? spec->impl.inv_condition() : 0.0;
}

gfb_status gfb_spectrum_eigvals(const gfb_spectrum* spec, double* re, double* im) {
  return guard([&] {
    gfb::require(spec && re && im, gfb::errc::invalid_argument, "null argument");
    const auto& l = spec->impl.eigvals();
    for (int i = 0; i < spec->impl.n(); ++i) {
      re[i] = l(i).real();
      im[i] = l(i).imag();
    }
  });
}

void gfb_spectrum_free(gfb_spectrum* spec) { delete spec; }

gfb_status gfb_apply_filter(const gfb_spectrum* spec, const double* h, int filter_len,
                            const double* x, const char* mode, double* y_out) {
  return guard([&] {
    gfb::require(spec && h && x && mode && y_out, gfb::errc::invalid_argument, "null argument");
    const int n = spec->impl.n();
    const gfb::FilterMode m = std::strcmp(mode, "frequency") == 0 ? gfb::FilterMode::frequency
                                                                  : gfb::FilterMode::vertex;
    Eigen::Map<const Eigen::VectorXd> hv(h, filter_len), xv(x, n);
    const Eigen::VectorXd y = spec->impl.apply_filter(hv, xv, m);
    std::memcpy(y_out, y.data(), sizeof(double) * n);
  });
}

gfb_status gfb_gft(const gfb_spectrum* spec, const double* x, double* xhat_re, double* xhat_im) {
  return guard([&] {
    gfb::require(spec && x && xhat_re && xhat_im, gfb::errc::invalid_argument, "null argument");
    const int n = spec->impl.n();
    const Eigen::VectorXcd xhat = spec->impl.gft(Eigen::Map<const Eigen::VectorXd>(x, n).eval());
    for (int i = 0; i < n; ++i) {
      xhat_re[i] = xhat(i).real();
      xhat_im[i] = xhat(i).imag();
    }
  });
}

gfb_status gfb_igft(const gfb_spectrum* spec, const double* xhat_re, const double* xhat_im,
                    double* x_re, double* x_im) {
  return guard([&] {
    gfb::require(spec && xhat_re && xhat_im && x_re && x_im, gfb::errc::invalid_argument,
                 "null argument");
    const int n = spec->impl.n();
    const Eigen::VectorXcd x = spec->impl.igft(to_complex(xhat_re, xhat_im, n));
    for (int i = 0; i < n; ++i) {
      x_re[i] = x(i).real();
      x_im[i] = x(i).imag();
    }
  });
}

gfb_status gfb_simulate_diffusion(const gfb_spectrum* spec, const double* x0, int steps,
                                  double* states_out) {
  return guard([&] {
    gfb::require(spec && x0 && states_out, gfb::errc::invalid_argument, "null argument");
    const int n = spec->impl.n();
    const auto states =
        spec->impl.simulate_diffusion(Eigen::Map<const Eigen::VectorXd>(x0, n).eval(), steps);
    for (size_t t = 0; t < states.size(); ++t)
      std::memcpy(states_out + t * n, states[t].data(), sizeof(double) * n);
  });
}

/* -------------------------------------------------------------- basis */

gfb_basis* gfb_basis_build(const gfb_spectrum* spec, int filter_len) {
  return guard_ptr<gfb_basis>([&] {
    gfb::require(spec, gfb::errc::invalid_argument, "null spectrum");
    return new gfb_basis{gfb::FilterBasis(spec->impl, filter_len)};
  });
}

int gfb_basis_rank_warning(const gfb_basis* basis) {
  return basis && basis->impl.rank_warning() ? 1 : 0;
}

gfb_status gfb_basis_sigma(const gfb_basis* basis, double* sigma_out) {
  return guard([&] {
    gfb::require(basis && sigma_out, gfb::errc::invalid_argument, "null argument");
    const auto& s = basis->impl.sigma();
    std::memcpy(sigma_out, s.data(), sizeof(double) * s.size());
  });
}

void gfb_basis_free(gfb_basis* basis) { delete basis; }

/* ----------------------------------------------------- lifted operator */

gfb_operator* gfb_operator_create(const gfb_spectrum* spec, const gfb_basis* basis,
                                  const int* observed, size_t n_observed, const char* sampling) {
  return guard_ptr<gfb_operator>([&] {
    gfb::require(spec && basis, gfb::errc::invalid_argument, "null argument");
    std::vector<int> obs;
    if (observed && n_observed) obs.assign(observed, observed + n_observed);
    gfb::SamplingMode mode = gfb::SamplingMode::frequency;
    if (sampling && std::strcmp(sampling, "vertex") == 0) mode = gfb::SamplingMode::vertex;
    return new gfb_operator{
        gfb::LiftedOperator(spec->impl, basis->impl, std::move(obs), mode)};
  });
}

gfb_operator* gfb_operator_resampled(const gfb_spectrum* spec, const gfb_basis* basis,
                                     uint64_t seed) {
  return guard_ptr<gfb_operator>([&] {
    gfb::require(spec && basis, gfb::errc::invalid_argument, "null argument");
    return new gfb_operator{gfb::LiftedOperator::resampled_rows(spec->impl, basis->impl, seed)};
  });
}

int gfb_operator_n_observed(const gfb_operator* op) { return op ? op->impl.n_observed() : 0; }

gfb_status gfb_operator_forward(const gfb_operator* op, const double* z, double* y_re,
                                double* y_im) {
  return guard([&] {
    gfb::require(op && z && y_re && y_im, gfb::errc::invalid_argument, "null argument");
    Eigen::Map<const Eigen::MatrixXd> zm(z, op->impl.n(), op->impl.filter_len());
    const Eigen::VectorXcd y = op->impl.forward(Eigen::MatrixXd(zm));
    for (int i = 0; i < op->impl.n_observed(); ++i) {
      y_re[i] = y(i).real();
      y_im[i] = y(i).imag();
    }
  });
}

gfb_status gfb_operator_adjoint(const gfb_operator* op, const double* z_re, const double* z_im,
                                double* out_re, double* out_im) {
  return guard([&] {
    gfb::require(op && z_re && out_re && out_im, gfb::errc::invalid_argument, "null argument");
    const Eigen::MatrixXcd a = op->impl.adjoint(to_complex(z_re, z_im, op->impl.n_observed()));
    for (int c = 0; c < op->impl.filter_len(); ++c)
      for (int r = 0; r < op->impl.n(); ++r) {
        const size_t idx = static_cast<size_t>(c) * op->impl.n() + r;
        out_re[idx] = a(r, c).real();
        out_im[idx] = a(r, c).imag();
      }
  });
}

gfb_status gfb_operator_materialize(const gfb_operator* op, double* m_re, double* m_im) {
  return guard([&] {
    gfb::require(op && m_re && m_im, gfb::errc::invalid_argument, "null argument");
    const Eigen::MatrixXcd m = op->impl.materialize();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const size_t idx = static_cast<size_t>(c) * m.rows() + r;
        m_re[idx] = m(r, c).real();
        m_im[idx] = m(r, c).imag();
      }
  });
}

double gfb_operator_norm(const gfb_operator* op) {
  double out = 0.0;
  guard([&] {
    gfb::require(op, gfb::errc::invalid_argument, "null operator");
    out = op->impl.op_norm();
  });
  return out;
}

void gfb_operator_free(gfb_operator* op) { delete op; }

/* ------------------------------------------------------------ solvers */

void gfb_solver_config_init(gfb_solver_config* cfg) {
  if (!cfg) return;
  const gfb::SolverConfig d;
  cfg->tau = d.tau;
  cfg->delta = d.delta;
  cfg->reweight_iters = d.reweight_iters;
  cfg->admm_penalty = d.admm_penalty;
  cfg->max_iters = d.max_iters;
  cfg->tol_primal = d.tol_primal;
  cfg->tol_dual = d.tol_dual;
  cfg->noise_eps = d.noise_eps;
  cfg->rng_seed = d.rng_seed;
  cfg->am_max_outer = d.am_max_outer;
}

gfb_solution* gfb_solve(const gfb_operator* op, const double* y_re, const double* y_im,
                        const gfb_solver_config* cfg, const char* solver,
                        const int* known_support, size_t n_support) {
  return guard_ptr<gfb_solution>([&] {
    gfb::require(op && y_re && solver, gfb::errc::invalid_argument, "null argument");
    const Eigen::VectorXcd y = to_complex(y_re, y_im, op->impl.n_observed());
    const gfb::SolverConfig c = convert(cfg, known_support, n_support);
    const std::string name = solver;
    gfb::LiftedSolution sol;
    if (name == "l1")
      sol = gfb::solve_l1(op->impl, y, c);
    else if (name == "n21")
      sol = gfb::solve_nuclear_l21(op->impl, y, c);
    else if (name == "rw")
      sol = c.noise_eps > 0 ? gfb::solve_noisy(op->impl, y, c)
                            : gfb::solve_reweighted(op->impl, y, c);
    else if (name == "ls")
      sol = gfb::baseline_ls(op->impl, y);
    else
      gfb::fail(gfb::errc::invalid_argument, "unknown solver: " + name);
    return new gfb_solution{std::move(sol)};
  });
}

gfb_solution* gfb_solve_am(const gfb_operator* op, const double* y_re, const double* y_im, int s,
                           const gfb_solver_config* cfg) {
  return guard_ptr<gfb_solution>([&] {
    gfb::require(op && y_re, gfb::errc::invalid_argument, "null argument");
    const Eigen::VectorXcd y = to_complex(y_re, y_im, op->impl.n_observed());
    return new gfb_solution{gfb::baseline_am(op->impl, y, s, convert(cfg, nullptr, 0))};
  });
}

gfb_solution* gfb_solve_multi(const gfb_operator* op, const double* ys_re, const double* ys_im,
                              int p_signals, int shared_support, const gfb_solver_config* cfg) {
  return guard_ptr<gfb_solution>([&] {
    gfb::require(op && ys_re && p_signals >= 1, gfb::errc::invalid_argument, "bad arguments");
    const int m = op->impl.n_observed();
    gfb::MultiOutputProblem prob;
    prob.shared_support = shared_support != 0;
    for (int p = 0; p < p_signals; ++p)
      prob.outputs.push_back(
          to_complex(ys_re + static_cast<size_t>(p) * m,
                     ys_im ? ys_im + static_cast<size_t>(p) * m : nullptr, m));
    const gfb::MultiSolution multi =
        gfb::solve_multi({op->impl}, prob, convert(cfg, nullptr, 0));
    // Stack the per-signal matrices so one handle carries the whole answer.
    const int n = op->impl.n();
    const int len = op->impl.filter_len();
    gfb::LiftedSolution stacked;
    stacked.z.resize(static_cast<Eigen::Index>(n) * p_signals, len);
    stacked.x_hat.resize(static_cast<Eigen::Index>(n) * p_signals);
    for (int p = 0; p < p_signals; ++p) {
      stacked.z.middleRows(static_cast<Eigen::Index>(p) * n, n) = multi.per_signal[p].z;
      stacked.x_hat.segment(static_cast<Eigen::Index>(p) * n, n) = multi.per_signal[p].x_hat;
    }
    stacked.h_hat = multi.h_consensus;
    stacked.objective = multi.objective;
    stacked.status = multi.status;
    stacked.iters = multi.iters;
    stacked.primal_residual = multi.per_signal.front().primal_residual;
    stacked.dual_residual = multi.per_signal.front().dual_residual;
    double feas2 = 0;
    for (const auto& s : multi.per_signal) feas2 += s.feas_residual * s.feas_residual;
    stacked.feas_residual = std::sqrt(feas2);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked.z);
    stacked.singular_values = svd.singularValues();
    stacked.seed = cfg ? cfg->rng_seed : 0;
    return new gfb_solution{std::move(stacked)};
  });
}

int gfb_solution_n(const gfb_solution* sol) {
  return sol ? static_cast<int>(sol->impl.z.rows()) : 0;
}
int gfb_solution_filter_len(const gfb_solution* sol) {
  return sol ? static_cast<int>(sol->impl.z.cols()) : 0;
}
const char* gfb_solution_status(const gfb_solution* sol) {
  return sol ? gfb::to_string(sol->impl.status) : "invalid";
}
double gfb_solution_objective(const gfb_solution* sol) {
  return sol ? sol->impl.objective : 0.0;
}
int gfb_solution_iters(const gfb_solution* sol) { return sol ? sol->impl.iters : 0; }

gfb_status gfb_solution_x(const gfb_solution* sol, double* x_out) {
  return guard([&] {
    gfb::require(sol && x_out, gfb::errc::invalid_argument, "null argument");
    std::memcpy(x_out, sol->impl.x_hat.data(), sizeof(double) * sol->impl.x_hat.size());
  });
}

gfb_status gfb_solution_h(const gfb_solution* sol, double* h_out) {
  return guard([&] {
    gfb::require(sol && h_out, gfb::errc::invalid_argument, "null argument");
    std::memcpy(h_out, sol->impl.h_hat.data(), sizeof(double) * sol->impl.h_hat.size());
  });
}

gfb_status gfb_solution_z(const gfb_solution* sol, double* z_out) {
  return guard([&] {
    gfb::require(sol && z_out, gfb::errc::invalid_argument, "null argument");
    std::memcpy(z_out, sol->impl.z.data(), sizeof(double) * sol->impl.z.size());
  });
}

gfb_status gfb_solution_residuals(const gfb_solution* sol, double* primal, double* dual,
                                  double* feasibility) {
  return guard([&] {
    gfb::require(sol, gfb::errc::invalid_argument, "null solution");
    if (primal) *primal = sol->impl.primal_residual;
    if (dual) *dual = sol->impl.dual_residual;
    if (feasibility) *feasibility = sol->impl.feas_residual;
  });
}

char* gfb_solution_json(const gfb_solution* sol) {
  char* out = nullptr;
  guard([&] {
    gfb::require(sol, gfb::errc::invalid_argument, "null solution");
    const std::string s = gfb::solution_to_json(sol->impl);
    out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
  });
  return out;
}

void gfb_solution_free(gfb_solution* sol) { delete sol; }

gfb_status gfb_extract_rank_one(const double* z, int n, int filter_len, double* x_out,
                                double* h_out) {
  return guard([&] {
    gfb::require(z && x_out && h_out, gfb::errc::invalid_argument, "null argument");
    Eigen::Map<const Eigen::MatrixXd> zm(z, n, filter_len);
    const auto [x, h] = gfb::extract_rank_one(zm);
    std::memcpy(x_out, x.data(), sizeof(double) * n);
    std::memcpy(h_out, h.data(), sizeof(double) * filter_len);
  });
}

double gfb_rmse(const double* x_hat, const double* h_hat, const double* x0, const double* h0,
                int n, int filter_len) {
  double out = -1.0;
  guard([&] {
    gfb::require(x_hat && h_hat && x0 && h0, gfb::errc::invalid_argument, "null argument");
    out = gfb::rmse(Eigen::Map<const Eigen::VectorXd>(x_hat, n),
                    Eigen::Map<const Eigen::VectorXd>(h_hat, filter_len),
                    Eigen::Map<const Eigen::VectorXd>(x0, n),
                    Eigen::Map<const Eigen::VectorXd>(h0, filter_len));
  });
  return out;
}

/* ------------------------------------------------------------- theory */

double gfb_rho(const double* a_re, const double* a_im, int rows, int cols, int k) {
  double out = -1.0;
  guard([&] {
    gfb::require(a_re, gfb::errc::invalid_argument, "null matrix");
    out = gfb::rho(to_complex_matrix(a_re, a_im, rows, cols), k);
  });
  return out;
}

gfb_status gfb_coherence_profile(const gfb_spectrum* spec, const gfb_basis* basis, int k_max,
                                 double* rho_u_out, double* rho_psi_out) {
  return guard([&] {
    gfb::require(spec && basis && rho_u_out && rho_psi_out, gfb::errc::invalid_argument,
                 "null argument");
    const gfb::CoherenceProfile p = gfb::coherence_profile(spec->impl, basis->impl, k_max);
    std::memcpy(rho_u_out, p.rho_u.data(), sizeof(double) * p.rho_u.size());
    std::memcpy(rho_psi_out, p.rho_psi.data(), sizeof(double) * p.rho_psi.size());
  });
}

gfb_status gfb_theorem_bound(const double* rho_u, int k_max, const double* rho_psi,
                             int filter_len, int s, int n, gfb_recovery_bound* out) {
  return guard([&] {
    gfb::require(rho_u && rho_psi && out, gfb::errc::invalid_argument, "null argument");
    gfb::CoherenceProfile p;
    p.rho_u = Eigen::Map<const Eigen::VectorXd>(rho_u, k_max);
    p.rho_psi = Eigen::Map<const Eigen::VectorXd>(rho_psi, filter_len);
    const gfb::RecoveryBound b = gfb::theorem1_bound(p, s, filter_len, n);
    out->alpha = b.alpha;
    out->alpha1 = b.alpha1;
    out->gamma = b.gamma;
    out->p_rec_lower = b.p_rec_lower;
    out->applicable = b.applicable ? 1 : 0;
  });
}

int gfb_spark(const double* a_re, const double* a_im, int rows, int cols) {
  int out = -1;
  guard([&] {
    gfb::require(a_re, gfb::errc::invalid_argument, "null matrix");
    out = gfb::spark(to_complex_matrix(a_re, a_im, rows, cols));
  });
  return out;
}

int gfb_check_identifiability(const gfb_spectrum* spec, int filter_len, int s,
                              const char* support_family, int* vacuous_out) {
  int out = -1;
  guard([&] {
    gfb::require(spec, gfb::errc::invalid_argument, "null spectrum");
    gfb::SupportFamily family = gfb::SupportFamily::all;
    if (support_family && std::strcmp(support_family, "adjacent") == 0)
      family = gfb::SupportFamily::adjacent;
    const auto res = gfb::check_identifiability(spec->impl, filter_len, s, family);
    if (vacuous_out) *vacuous_out = res.vacuous ? 1 : 0;
    out = res.identifiable ? 1 : 0;
  });
  return out;
}

/* -------------------------------------------------------- experiments */

gfb_status gfb_experiment_run_json(const char* spec_json, const char* out_dir) {
  return guard([&] {
    gfb::require(spec_json, gfb::errc::invalid_argument, "null spec");
    gfb::ExperimentSpec spec = gfb::parse_spec_json(spec_json);
    if (out_dir) spec.out_dir = out_dir;
    const gfb::ExperimentResult result = gfb::run_experiment(spec);
    gfb::emit_outputs(result, spec.out_dir);
  });
}

}  // extern "C"
