#include "fsv/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fsv/errors.hpp"

namespace fsv::io {
namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<std::string>& dates,
                          const std::vector<SvgSeries>& series) {
  if (series.empty() || dates.empty())
    throw InvalidInput("svg-empty", "line chart needs dates and at least one series");
  const double width = 900, height = 420;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const std::size_t n = dates.size();

  double lo = series[0].values[0], hi = lo;
  for (const auto& s : series) {
    if (s.values.size() != n)
      throw InvalidInput("svg-length", "series length does not match date count");
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {
    hi += 0.5;
    lo -= 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  auto xpix = [&](std::size_t i) {
    return ml + (n == 1 ? 0.5 * pw : pw * static_cast<double>(i) / static_cast<double>(n - 1));
  };
  auto ypix = [&](double v) { return mt + ph * (1.0 - (v - lo) / (hi - lo)); };

  std::ofstream out(path);
  if (!out) throw IoError("cannot write SVG: " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(title) << "</text>\n";

  // axes and ticks
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"#333\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    const double y = ypix(v);
    out << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v, "%.4g")
        << "</text>\n";
  }
  const int n_xticks = std::min<std::size_t>(6, n);
  for (int k = 0; k < n_xticks; ++k) {
    const std::size_t i =
        n_xticks == 1 ? 0 : (n - 1) * static_cast<std::size_t>(k) / (n_xticks - 1);
    out << "<text x=\"" << xpix(i) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(dates[i]) << "</text>\n";
  }

  double legend_x = ml + 8;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.4\" data-label=\""
        << xml_escape(s.label) << "\" data-values=\"";
    for (std::size_t i = 0; i < n; ++i) out << (i ? " " : "") << fmt(s.values[i]);
    out << "\" points=\"";
    for (std::size_t i = 0; i < n; ++i)
      out << (i ? " " : "") << fmt(xpix(i), "%.2f") << ',' << fmt(ypix(s.values[i]), "%.2f");
    out << "\"/>\n";
    out << "<text x=\"" << legend_x << "\" y=\"" << mt - 6 << "\" font-family=\"sans-serif\""
        << " font-size=\"11\" fill=\"" << s.color << "\">" << xml_escape(s.label) << "</text>\n";
    legend_x += 10.0 * (s.label.size() + 2);
  }
  out << "</svg>\n";
  if (!out) throw IoError("failed writing SVG: " + path);
}

void write_heatmap_svg(const std::string& path, const std::string& title,
                       const Eigen::MatrixXd& matrix,
                       const std::vector<std::string>& labels) {
  const long m = matrix.rows();
  if (m != matrix.cols() || static_cast<long>(labels.size()) != m)
    throw InvalidInput("svg-shape", "heatmap needs a square matrix with matching labels");
  const double cell = 40, ml = 90, mt = 70;
  const double width = ml + cell * static_cast<double>(m) + 20;
  const double height = mt + cell * static_cast<double>(m) + 20;

  std::ofstream out(path);
  if (!out) throw IoError("cannot write SVG: " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(title) << "</text>\n";
  for (long i = 0; i < m; ++i) {
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + cell * (static_cast<double>(i) + 0.62)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(labels[static_cast<std::size_t>(i)]) << "</text>\n";
    out << "<text x=\"" << ml + cell * (static_cast<double>(i) + 0.5) << "\" y=\"" << mt - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(labels[static_cast<std::size_t>(i)]) << "</text>\n";
  }
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) {
      const double v = std::clamp(matrix(i, j), -1.0, 1.0);
      int rch, gch, bch;
      if (v >= 0) {
        rch = 255;
        gch = bch = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      } else {
        bch = 255;
        rch = gch = static_cast<int>(std::lround(255.0 * (1.0 + v)));
      }
      const double x = ml + cell * static_cast<double>(j);
      const double y = mt + cell * static_cast<double>(i);
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"rgb(" << rch << ',' << gch << ',' << bch << ")\" stroke=\"#999\""
          << " data-row=\"" << i << "\" data-col=\"" << j << "\" data-value=\""
          << fmt(matrix(i, j)) << "\"/>\n";
      out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
          << fmt(matrix(i, j), "%.2f") << "</text>\n";
    }
  out << "</svg>\n";
  if (!out) throw IoError("failed writing SVG: " + path);
}

}  // namespace fsv::io
