/* gfblind — blind identification of graph filters.
 *
 * C API over opaque handles. Every function returns a gfb_status (or a
 * handle that is NULL on failure); gfb_last_error() describes the most
 * recent failure on the calling thread. Handles are destroyed with their
 * matching *_free function. All matrices are dense; complex data is passed
 * as separate real/imaginary arrays. vec() ordering is column-major.
 */

#ifndef GFBLIND_H
#define GFBLIND_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gfb_status {
  GFB_OK = 0,
  GFB_ERR_INVALID_ARG = 1,
  GFB_ERR_DIMENSION = 2,
  GFB_ERR_NON_DIAGONALIZABLE = 3,
  GFB_ERR_EIGEN_FAILURE = 4,
  GFB_ERR_NOT_NORMAL = 5,
  GFB_ERR_TOO_LARGE = 6,
  GFB_ERR_ZERO_MATRIX = 7,
  GFB_ERR_IO = 8,
  GFB_ERR_UNKNOWN = 9
} gfb_status;

/* Thread-local message for the last failed call on this thread. */
const char* gfb_last_error(void);

typedef struct gfb_graph gfb_graph;
typedef struct gfb_spectrum gfb_spectrum;
typedef struct gfb_basis gfb_basis;
typedef struct gfb_operator gfb_operator;
typedef struct gfb_solution gfb_solution;

/* ------------------------------------------------------------- graphs */

/* edges given as src/dst index arrays with optional weights (NULL = 1.0) */
gfb_graph* gfb_graph_create(int n_nodes, const int* src, const int* dst, const double* weight,
                            size_t n_edges, int directed);
/* kind: "er" (n, p), "directed_cycle" (n), "small_world" (n, k, p),
 * "pref_attach" (n, m), "random_regular" (n, d). Integer parameters ride in
 * arg1/arg2 as doubles where noted. Deterministic in the seed. */
gfb_graph* gfb_graph_generate(const char* kind, int n, double arg1, double arg2, uint64_t seed);
/* Edge-list file: "src dst [weight]" per line, 0-based, '#' comments. */
gfb_graph* gfb_graph_load(const char* path, int directed);
gfb_status gfb_graph_save(const gfb_graph* graph, const char* path);
int gfb_graph_n_nodes(const gfb_graph* graph);
long long gfb_graph_n_edges(const gfb_graph* graph);
void gfb_graph_free(gfb_graph* graph);

/* ------------------------------------------------------------ spectra */

/* shift_kind: "adjacency", "laplacian", "directed_cycle".
 * rescale != 0 normalizes the shift to unit spectral radius. */
gfb_spectrum* gfb_spectrum_build(const gfb_graph* graph, const char* shift_kind, int rescale);
gfb_spectrum* gfb_spectrum_build_custom(const double* shift, int n, int rescale);
int gfb_spectrum_n(const gfb_spectrum* spec);
int gfb_spectrum_is_normal(const gfb_spectrum* spec);
int gfb_spectrum_has_repeated_eigvals(const gfb_spectrum* spec);
double gfb_spectrum_inv_condition(const gfb_spectrum* spec);
/* out arrays of length n */
gfb_status gfb_spectrum_eigvals(const gfb_spectrum* spec, double* re, double* im);
void gfb_spectrum_free(gfb_spectrum* spec);

/* y = sum_l h[l] S^l x. mode: "vertex" or "frequency". */
gfb_status gfb_apply_filter(const gfb_spectrum* spec, const double* h, int filter_len,
                            const double* x, const char* mode, double* y_out);
gfb_status gfb_gft(const gfb_spectrum* spec, const double* x, double* xhat_re, double* xhat_im);
gfb_status gfb_igft(const gfb_spectrum* spec, const double* xhat_re, const double* xhat_im,
                    double* x_re, double* x_im);
/* states_out has (steps+1)*n entries, state t at offset t*n */
gfb_status gfb_simulate_diffusion(const gfb_spectrum* spec, const double* x0, int steps,
                                  double* states_out);

/* -------------------------------------------------------------- basis */

gfb_basis* gfb_basis_build(const gfb_spectrum* spec, int filter_len);
int gfb_basis_rank_warning(const gfb_basis* basis);
gfb_status gfb_basis_sigma(const gfb_basis* basis, double* sigma_out);
void gfb_basis_free(gfb_basis* basis);

/* ----------------------------------------------------- lifted operator */

/* sampling: "frequency" or "vertex"; observed may be NULL for all nodes. */
gfb_operator* gfb_operator_create(const gfb_spectrum* spec, const gfb_basis* basis,
                                  const int* observed, size_t n_observed, const char* sampling);
gfb_operator* gfb_operator_resampled(const gfb_spectrum* spec, const gfb_basis* basis,
                                     uint64_t seed);
int gfb_operator_n_observed(const gfb_operator* op);
gfb_status gfb_operator_forward(const gfb_operator* op, const double* z, double* y_re,
                                double* y_im);
/* out is n*filter_len, column-major, split into real/imaginary parts */
gfb_status gfb_operator_adjoint(const gfb_operator* op, const double* z_re, const double* z_im,
                                double* out_re, double* out_im);
/* dense |observed| x (n*filter_len) matrix, column-major in each part */
gfb_status gfb_operator_materialize(const gfb_operator* op, double* m_re, double* m_im);
double gfb_operator_norm(const gfb_operator* op);
void gfb_operator_free(gfb_operator* op);

/* ------------------------------------------------------------ solvers */

typedef struct gfb_solver_config {
  double tau;            /* rank vs row-sparsity tradeoff (default 1.0) */
  double delta;          /* reweighting offset; <= 0 selects the default */
  int reweight_iters;    /* outer reweighting iterations (default 3) */
  double admm_penalty;   /* initial ADMM penalty (default 1.0) */
  int max_iters;         /* ADMM iteration cap (default 3000) */
  double tol_primal;     /* default 1e-7 */
  double tol_dual;       /* default 1e-7 */
  double noise_eps;      /* > 0 replaces equality with a 2-norm ball */
  uint64_t rng_seed;     /* recorded in solutions */
  int am_max_outer;      /* alternating-minimization outer cap */
} gfb_solver_config;

void gfb_solver_config_init(gfb_solver_config* cfg);

/* solver: "l1", "n21", "rw", "ls". y imaginary part may be NULL.
 * known_support (may be NULL) pins the nonzero rows of Z. */
gfb_solution* gfb_solve(const gfb_operator* op, const double* y_re, const double* y_im,
                        const gfb_solver_config* cfg, const char* solver,
                        const int* known_support, size_t n_support);
/* Alternating-minimization baseline; sparsity level s is assumed known. */
gfb_solution* gfb_solve_am(const gfb_operator* op, const double* y_re, const double* y_im,
                           int s, const gfb_solver_config* cfg);
/* Multiple outputs of one filter: ys is P stacked observation vectors
 * (row-major, each of length n_observed). Returns the stacked solution;
 * x_hat has length P*n and h_hat is the consensus filter. */
gfb_solution* gfb_solve_multi(const gfb_operator* op, const double* ys_re, const double* ys_im,
                              int p_signals, int shared_support, const gfb_solver_config* cfg);

int gfb_solution_n(const gfb_solution* sol);
int gfb_solution_filter_len(const gfb_solution* sol);
const char* gfb_solution_status(const gfb_solution* sol);
double gfb_solution_objective(const gfb_solution* sol);
int gfb_solution_iters(const gfb_solution* sol);
gfb_status gfb_solution_x(const gfb_solution* sol, double* x_out);
gfb_status gfb_solution_h(const gfb_solution* sol, double* h_out);
gfb_status gfb_solution_z(const gfb_solution* sol, double* z_out); /* column-major n*L */
gfb_status gfb_solution_residuals(const gfb_solution* sol, double* primal, double* dual,
                                  double* feasibility);
/* JSON dump {Z, x_hat, h_hat, objective, residuals, iters, status, seed};
 * free with gfb_string_free. */
char* gfb_solution_json(const gfb_solution* sol);
void gfb_solution_free(gfb_solution* sol);

gfb_status gfb_extract_rank_one(const double* z, int n, int filter_len, double* x_out,
                                double* h_out);
double gfb_rmse(const double* x_hat, const double* h_hat, const double* x0, const double* h0,
                int n, int filter_len);

/* ------------------------------------------------------------- theory */

/* a is rows x cols, column-major, split parts (im may be NULL). */
double gfb_rho(const double* a_re, const double* a_im, int rows, int cols, int k);
/* rho_u_out has k_max entries, rho_psi_out has filter_len entries. */
gfb_status gfb_coherence_profile(const gfb_spectrum* spec, const gfb_basis* basis, int k_max,
                                 double* rho_u_out, double* rho_psi_out);
typedef struct gfb_recovery_bound {
  double alpha;
  double alpha1;
  double gamma;
  double p_rec_lower;
  int applicable; /* the probability bound requires alpha >= 1 */
} gfb_recovery_bound;
gfb_status gfb_theorem_bound(const double* rho_u, int k_max, const double* rho_psi,
                             int filter_len, int s, int n, gfb_recovery_bound* out);
int gfb_spark(const double* a_re, const double* a_im, int rows, int cols);
/* support_family: "all" or "adjacent". Returns 1/0, or -1 on error. */
int gfb_check_identifiability(const gfb_spectrum* spec, int filter_len, int s,
                              const char* support_family, int* vacuous_out);

/* -------------------------------------------------------- experiments */

/* Runs a declarative experiment (phase | sampling_sweep | rho_correlation |
 * epidemic | single_solve) described by a JSON spec; writes results.csv,
 * timings.csv, summary.json and SVG plots into out_dir (overrides the
 * spec's "out" field when non-NULL). */
gfb_status gfb_experiment_run_json(const char* spec_json, const char* out_dir);

void gfb_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* GFBLIND_H */
