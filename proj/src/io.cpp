#include "gfb/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace gfb {

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char trial[64];
    std::snprintf(trial, sizeof(trial), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(trial, "%lf", &back);
    if (back == v) return trial;
  }
  return buf;
}

std::string format_complex(std::complex<double> v) {
  const std::string im = format_double(v.imag());
  const bool neg = !im.empty() && im[0] == '-';
  return format_double(v.real()) + (neg ? "" : "+") + im + "i";
}

std::complex<double> parse_complex(const std::string& token) {
  std::string t;
  for (char c : token)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  require(!t.empty(), errc::io_error, "empty numeric token");
  if (t.back() != 'i' && t.back() != 'I') {
    return {std::stod(t), 0.0};
  }
  t.pop_back();
  // Split at the sign that separates real and imaginary parts (not a leading
  // sign and not part of an exponent).
  for (int i = static_cast<int>(t.size()) - 1; i > 0; --i) {
    const char c = t[i];
    if ((c == '+' || c == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      const std::string re = t.substr(0, i);
      std::string im = t.substr(i);
      if (im == "+" || im == "-") im += "1";
      return {std::stod(re), std::stod(im)};
    }
  }
  if (t.empty() || t == "+") return {0.0, 1.0};
  if (t == "-") return {0.0, -1.0};
  return {0.0, std::stod(t)};  // pure imaginary
}

Graph load_edge_list(const std::string& path, bool directed, int n_nodes) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open edge list: " + path);
  std::vector<Edge> edges;
  int max_idx = -1;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(strip_comment(line));
    int src, dst;
    if (!(ss >> src >> dst)) continue;
    double w = 1.0;
    ss >> w;
    edges.push_back({src, dst, w});
    max_idx = std::max(max_idx, std::max(src, dst));
  }
  const int n = n_nodes > 0 ? n_nodes : max_idx + 1;
  require(n > 0, errc::io_error, "edge list contains no edges and no node count was given");
  return Graph(n, std::move(edges), directed);
}

void save_edge_list(const Graph& graph, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot write edge list: " + path);
  out << "# nodes: " << graph.n_nodes() << (graph.directed() ? " directed" : " undirected")
      << "\n";
  for (const Edge& e : graph.edges())
    out << e.src << " " << e.dst << " " << format_double(e.weight) << "\n";
  require(out.good(), errc::io_error, "write failed: " + path);
}

void save_matrix_csv(const Eigen::MatrixXcd& m, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot write matrix: " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_complex(m(i, j));
    }
    out << "\n";
  }
  require(out.good(), errc::io_error, "write failed: " + path);
}

void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot write matrix: " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
  require(out.good(), errc::io_error, "write failed: " + path);
}

Eigen::MatrixXcd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open matrix: " + path);
  std::vector<std::vector<std::complex<double>>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::string body = strip_comment(line);
    if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::complex<double>> row;
    std::istringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(parse_complex(tok));
    require(rows.empty() || row.size() == rows.front().size(), errc::io_error,
            "ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), errc::io_error, "empty matrix file: " + path);
  Eigen::MatrixXcd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Eigen::MatrixXd load_matrix_csv_real(const std::string& path) {
  const Eigen::MatrixXcd m = load_matrix_csv(path);
  require(m.imag().cwiseAbs().maxCoeff() == 0.0 ||
              m.imag().norm() <= 1e-12 * std::max(1.0, m.real().norm()),
          errc::io_error, "matrix has non-negligible imaginary part: " + path);
  return m.real();
}

}  // namespace gfb
