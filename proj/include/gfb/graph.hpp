#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gfb/errors.hpp"

namespace gfb {

struct Edge {
  int src;
  int dst;
  double weight = 1.0;
};

/// Node-indexed graph with an explicit edge list. Immutable after
/// construction. Indices are 0-based; self-loops are rejected (diagonal
/// shift entries are introduced by the shift builders, not the graph).
class Graph {
 public:
  Graph(int n_nodes, std::vector<Edge> edges, bool directed);

  int n_nodes() const { return n_; }
  bool directed() const { return directed_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Dense adjacency with A(dst, src) = weight, so that y = A x propagates
  /// values along edge direction. Symmetric when the graph is undirected.
  Eigen::MatrixXd adjacency() const;

  /// Combinatorial Laplacian D - A; undirected graphs only.
  Eigen::MatrixXd laplacian() const;

  /// Undirected neighbor lists (union of in/out for directed graphs).
  std::vector<std::vector<int>> neighbor_lists() const;

 private:
  int n_;
  bool directed_;
  std::vector<Edge> edges_;
};

}  // namespace gfb
