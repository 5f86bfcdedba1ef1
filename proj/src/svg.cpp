#include "gfb/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gfb {
namespace svg {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string color_for(double t) {
  // 0 -> dark blue, 1 -> white; simple two-stop gradient.
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(20 + 235 * t);
  const int g = static_cast<int>(40 + 215 * t);
  const int b = static_cast<int>(120 + 135 * t);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string heatmap(const Eigen::MatrixXd& values, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& col_labels, const std::string& title,
                    const std::string& x_axis, const std::string& y_axis) {
  const int rows = static_cast<int>(values.rows());
  const int cols = static_cast<int>(values.cols());
  const int cell = 36;
  const int left = 70, top = 50, right = 30, bottom = 60;
  const int width = left + cols * cell + right;
  const int height = top + rows * cell + bottom;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double v = values(i, j);
      out << "<rect x=\"" << left + j * cell << "\" y=\"" << top + i * cell << "\" width=\""
          << cell << "\" height=\"" << cell << "\" fill=\"" << color_for(v)
          << "\" stroke=\"#444\"/>\n";
      out << "<text x=\"" << left + j * cell + cell / 2 << "\" y=\""
          << top + i * cell + cell / 2 + 4 << "\" text-anchor=\"middle\" font-size=\"10\">"
          << fmt(v) << "</text>\n";
    }
  }
  for (int i = 0; i < rows && i < static_cast<int>(row_labels.size()); ++i)
    out << "<text x=\"" << left - 8 << "\" y=\"" << top + i * cell + cell / 2 + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << row_labels[i] << "</text>\n";
  for (int j = 0; j < cols && j < static_cast<int>(col_labels.size()); ++j)
    out << "<text x=\"" << left + j * cell + cell / 2 << "\" y=\"" << top + rows * cell + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << col_labels[j] << "</text>\n";
  out << "<text x=\"" << left + cols * cell / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_axis << "</text>\n";
  out << "<text x=\"18\" y=\"" << top + rows * cell / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 "
      << top + rows * cell / 2 << ")\">" << y_axis << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string line_chart(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_axis, const std::string& y_axis, bool log_y) {
  const int width = 640, height = 420;
  const int left = 70, top = 50, right = 160, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      double yv = s.y[i];
      if (log_y) yv = std::log10(std::max(yv, 1e-12));
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = yv;
        first = false;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, yv);
        ymax = std::max(ymax, yv);
      }
    }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  const auto py = [&](double y) {
    if (log_y) y = std::log10(std::max(y, 1e-12));
    return top + plot_h - (y - ymin) / (ymax - ymin) * plot_h;
  };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i)
      out << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
    out << "\"/>\n";
    for (size_t i = 0; i < s.x.size(); ++i)
      out << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << width - right + 14 << "\" y=\"" << top + 16 + 18 * k
        << "\" font-size=\"11\" fill=\"" << color << "\">" << s.label << "</text>\n";
  }
  // axis extremes
  out << "<text x=\"" << left << "\" y=\"" << height - 34
      << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xmin) << "</text>\n";
  out << "<text x=\"" << left + plot_w << "\" y=\"" << height - 34
      << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xmax) << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + plot_h + 4
      << "\" text-anchor=\"end\" font-size=\"10\">" << (log_y ? "1e" + fmt(ymin) : fmt(ymin))
      << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + 10
      << "\" text-anchor=\"end\" font-size=\"10\">" << (log_y ? "1e" + fmt(ymax) : fmt(ymax))
      << "</text>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 14
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_axis << "</text>\n";
  out << "<text x=\"20\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 20 "
      << top + plot_h / 2 << ")\">" << y_axis << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace svg
}  // namespace gfb
