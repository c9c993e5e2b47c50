#include "geometria/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace geometria::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void open_svg(std::ostringstream& out, double w, double h,
              const std::string& title, const std::string& csv_table) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
      << "\">\n";
  out << "<metadata><![CDATA[\n" << csv_table << "]]></metadata>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2
      << "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << escape(title) << "</text>\n";
}

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * double(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - double(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::string boxplot(const std::string& title,
                    const std::vector<BoxplotSeries>& series,
                    const std::string& csv_table) {
  const double width = 120.0 * double(series.size()) + 80.0;
  const double height = 360.0;
  const double top = 40.0, bottom = 320.0, left = 60.0;

  double vmin = 0.0, vmax = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (const double v : s.values) {
      if (first || v < vmin) vmin = v;
      if (first || v > vmax) vmax = v;
      first = false;
    }
  }
  if (vmax <= vmin) vmax = vmin + 1.0;
  const double pad = 0.05 * (vmax - vmin);
  vmin -= pad;
  vmax += pad;
  auto y_of = [&](double v) {
    return bottom - (v - vmin) / (vmax - vmin) * (bottom - top);
  };

  std::ostringstream out;
  open_svg(out, width, height, title, csv_table);
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = vmin + (vmax - vmin) * tick / 4.0;
    out << "<text x=\"" << left - 6 << "\" y=\"" << y_of(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << num(v) << "</text>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<double> vals = series[i].values;
    std::sort(vals.begin(), vals.end());
    const double cx = left + 60.0 + 120.0 * double(i);
    if (!vals.empty()) {
      const double q1 = quantile(vals, 0.25), q2 = quantile(vals, 0.5),
                   q3 = quantile(vals, 0.75);
      const double lo = vals.front(), hi = vals.back();
      out << "<line x1=\"" << cx << "\" y1=\"" << y_of(lo) << "\" x2=\"" << cx
          << "\" y2=\"" << y_of(hi) << "\" stroke=\"black\"/>\n";
      out << "<rect x=\"" << cx - 30 << "\" y=\"" << y_of(q3)
          << "\" width=\"60\" height=\"" << y_of(q1) - y_of(q3)
          << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
      out << "<line x1=\"" << cx - 30 << "\" y1=\"" << y_of(q2) << "\" x2=\""
          << cx + 30 << "\" y2=\"" << y_of(q2)
          << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    out << "<text x=\"" << cx << "\" y=\"" << bottom + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << escape(series[i].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string heatmap(const std::string& title,
                    const std::vector<std::string>& labels,
                    const Eigen::MatrixXd& values,
                    const std::string& csv_table) {
  const auto n = values.rows();
  const double cell = 64.0;
  const double left = 80.0, top = 50.0;
  const double width = left + cell * double(n) + 30.0;
  const double height = top + cell * double(n) + 40.0;

  const double vmin = values.minCoeff();
  const double vmax = values.maxCoeff();
  auto shade = [&](double v) {
    const double t = vmax > vmin ? (v - vmin) / (vmax - vmin) : 0.0;
    const int r = static_cast<int>(255.0 - 160.0 * t);
    const int g = static_cast<int>(245.0 - 180.0 * t);
    const int b = 255;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };

  std::ostringstream out;
  open_svg(out, width, height, title, csv_table);
  for (Eigen::Index i = 0; i < n; ++i) {
    out << "<text x=\"" << left - 8 << "\" y=\"" << top + cell * double(i) + cell / 2 + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(labels[static_cast<std::size_t>(i)]) << "</text>\n";
    out << "<text x=\"" << left + cell * double(i) + cell / 2 << "\" y=\""
        << top - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << escape(labels[static_cast<std::size_t>(i)]) << "</text>\n";
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = left + cell * double(j);
      const double y = top + cell * double(i);
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << shade(values(i, j))
          << "\" stroke=\"white\"/>\n";
      out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"11\">"
          << num(values(i, j)) << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::string scatter(const std::string& title, const std::string& x_label,
                    const std::string& y_label,
                    const std::vector<std::pair<double, double>>& points,
                    const std::string& csv_table) {
  const double width = 480.0, height = 400.0;
  const double left = 60.0, right = 440.0, top = 40.0, bottom = 340.0;

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& [x, y] : points) {
    if (first) {
      xmin = xmax = x;
      ymin = ymax = y;
      first = false;
    }
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double xpad = 0.05 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;
  auto x_of = [&](double v) {
    return left + (v - xmin) / (xmax - xmin) * (right - left);
  };
  auto y_of = [&](double v) {
    return bottom - (v - ymin) / (ymax - ymin) * (bottom - top);
  };

  std::ostringstream out;
  open_svg(out, width, height, title, csv_table);
  out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double xv = xmin + (xmax - xmin) * tick / 4.0;
    const double yv = ymin + (ymax - ymin) * tick / 4.0;
    out << "<text x=\"" << x_of(xv) << "\" y=\"" << bottom + 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << num(xv) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << y_of(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << num(yv) << "</text>\n";
  }
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << escape(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << (top + bottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << (top + bottom) / 2 << ")\">" << escape(y_label) << "</text>\n";
  for (const auto& [x, y] : points) {
    out << "<circle cx=\"" << num(x_of(x)) << "\" cy=\"" << num(y_of(y))
        << "\" r=\"2.5\" fill=\"#3182bd\" fill-opacity=\"0.6\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace geometria::svg
