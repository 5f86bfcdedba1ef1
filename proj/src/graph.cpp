#include "gfb/graph.hpp"

#include <set>
#include <utility>

namespace gfb {

Graph::Graph(int n_nodes, std::vector<Edge> edges, bool directed)
    : n_(n_nodes), directed_(directed), edges_(std::move(edges)) {
  require(n_ > 0, errc::invalid_argument, "graph needs at least one node");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    require(e.src >= 0 && e.src < n_ && e.dst >= 0 && e.dst < n_, errc::invalid_argument,
            "edge index out of range");
    require(e.src != e.dst, errc::invalid_argument, "self-loops are not allowed in the edge list");
    auto key = directed_ ? std::make_pair(e.src, e.dst)
                         : std::make_pair(std::min(e.src, e.dst), std::max(e.src, e.dst));
    require(seen.insert(key).second, errc::invalid_argument, "duplicate edge in edge list");
  }
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.dst, e.src) = e.weight;
    if (!directed_) a(e.src, e.dst) = e.weight;
  }
  return a;
}

Eigen::MatrixXd Graph::laplacian() const {
  require(!directed_, errc::invalid_argument, "laplacian requires an undirected graph");
  Eigen::MatrixXd a = adjacency();
  Eigen::VectorXd deg = a.rowwise().sum();
  Eigen::MatrixXd l = -a;
  l.diagonal() += deg;
  return l;
}

std::vector<std::vector<int>> Graph::neighbor_lists() const {
  std::vector<std::set<int>> nbr(n_);
  for (const Edge& e : edges_) {
    nbr[e.src].insert(e.dst);
    nbr[e.dst].insert(e.src);
  }
  std::vector<std::vector<int>> out(n_);
  for (int i = 0; i < n_; ++i) out[i].assign(nbr[i].begin(), nbr[i].end());
  return out;
}

}  // namespace gfb
