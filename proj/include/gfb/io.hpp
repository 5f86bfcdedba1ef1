#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "gfb/graph.hpp"

namespace gfb {

/// Edge-list format: one "src dst [weight]" per line, 0-based indices,
/// '#' starts a comment. Undirected files list each edge once. Node count
/// is max index + 1 unless n_nodes is given.
Graph load_edge_list(const std::string& path, bool directed = false, int n_nodes = -1);
void save_edge_list(const Graph& graph, const std::string& path);

/// Dense CSV, one row per line; complex entries serialized as "a+bi".
void save_matrix_csv(const Eigen::MatrixXcd& m, const std::string& path);
void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXcd load_matrix_csv(const std::string& path);
Eigen::MatrixXd load_matrix_csv_real(const std::string& path);

/// Deterministic shortest-roundtrip formatting used by every emitter.
std::string format_double(double v);
std::string format_complex(std::complex<double> v);
std::complex<double> parse_complex(const std::string& token);

}  // namespace gfb
