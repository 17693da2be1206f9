#include "povar/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "povar/csv.hpp"

namespace povar {

namespace {

constexpr double kW = 720, kH = 480;
constexpr double kL = 70, kR = 20, kT = 40, kB = 50;  // margins

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double frac(double v) const { return (v - lo) / (hi - lo); }
};

double tx(const Range& r, double v) { return kL + r.frac(v) * (kW - kL - kR); }
double ty(const Range& r, double v) { return kH - kB - r.frac(v) * (kH - kT - kB); }

std::string num(double v) { return format_double(v); }

void write_svg(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << body << "</svg>\n";
}

void axes(std::ostringstream& out, const std::string& title, const Range& rx,
          const Range& ry, const char* x_note, const char* y_note) {
  out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
      << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
      << kH - kB << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kL << "\" y=\"" << kH - kB + 18
      << "\" font-size=\"11\" text-anchor=\"middle\">" << num(rx.lo) << "</text>\n";
  out << "<text x=\"" << kW - kR << "\" y=\"" << kH - kB + 18
      << "\" font-size=\"11\" text-anchor=\"middle\">" << num(rx.hi) << "</text>\n";
  out << "<text x=\"" << kL - 6 << "\" y=\"" << kH - kB
      << "\" font-size=\"11\" text-anchor=\"end\">" << num(ry.lo) << "</text>\n";
  out << "<text x=\"" << kL - 6 << "\" y=\"" << kT + 4
      << "\" font-size=\"11\" text-anchor=\"end\">" << num(ry.hi) << "</text>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_note << "</text>\n";
  out << "<text x=\"16\" y=\"" << kH / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kH / 2 << ")\">" << y_note << "</text>\n";
}

}  // namespace

void svg_scatter(const std::string& path, const std::string& title,
                 const std::vector<PlotSeries>& series, bool log_x, bool log_y) {
  auto fx = [&](double v) { return log_x ? std::log10(std::max(v, 1e-300)) : v; };
  auto fy = [&](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };

  Range rx, ry;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      rx.add(fx(x));
      ry.add(fy(y));
    }
  rx.pad();
  ry.pad();

  std::ostringstream out;
  axes(out, title, rx, ry, log_x ? "log10 x" : "x", log_y ? "log10 y" : "y");
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    for (const auto& [x, y] : series[si].points)
      out << "<circle cx=\"" << tx(rx, fx(x)) << "\" cy=\"" << ty(ry, fy(y))
          << "\" r=\"3.5\" fill=\"" << color << "\" fill-opacity=\"0.75\"/>\n";
    out << "<text x=\"" << kW - kR - 6 << "\" y=\"" << kT + 16 + 16 * si
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << color << "\">"
        << series[si].label << "</text>\n";
  }
  write_svg(path, out.str());
}

void svg_heatmap(const std::string& path, const std::string& title,
                 const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<std::vector<double>>& values) {
  if (values.size() != ys.size())
    throw std::invalid_argument("heatmap values/ys size mismatch");
  for (const auto& row : values)
    if (row.size() != xs.size())
      throw std::invalid_argument("heatmap values/xs size mismatch");

  Range rv;
  for (const auto& row : values)
    for (double v : row)
      if (std::isfinite(v) && v > 0.0) rv.add(std::log10(v));
  rv.pad();

  const double cw = (kW - kL - kR) / std::max<std::size_t>(xs.size(), 1);
  const double ch = (kH - kT - kB) / std::max<std::size_t>(ys.size(), 1);

  std::ostringstream out;
  out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  for (std::size_t iy = 0; iy < ys.size(); ++iy)
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      double v = values[iy][ix];
      std::string fill = "#ffffff";
      if (std::isfinite(v) && v > 0.0) {
        double t = rv.frac(std::log10(v));  // 0 = cool, 1 = hot
        int red = static_cast<int>(40 + 215 * t);
        int blue = static_cast<int>(255 - 215 * t);
        std::ostringstream c;
        c << "rgb(" << red << ",60," << blue << ")";
        fill = c.str();
      }
      // y grows upward: last row at the top
      double px = kL + ix * cw;
      double py = kH - kB - (iy + 1) * ch;
      out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cw
          << "\" height=\"" << ch << "\" fill=\"" << fill
          << "\" stroke=\"#dddddd\"/>\n";
    }
  out << "<text x=\"" << kL << "\" y=\"" << kH - kB + 18 << "\" font-size=\"11\">"
      << num(xs.front()) << "</text>\n";
  out << "<text x=\"" << kW - kR << "\" y=\"" << kH - kB + 18
      << "\" font-size=\"11\" text-anchor=\"end\">" << num(xs.back()) << "</text>\n";
  out << "<text x=\"" << kL - 6 << "\" y=\"" << kH - kB
      << "\" font-size=\"11\" text-anchor=\"end\">" << num(ys.front()) << "</text>\n";
  out << "<text x=\"" << kL - 6 << "\" y=\"" << kT + 10
      << "\" font-size=\"11\" text-anchor=\"end\">" << num(ys.back()) << "</text>\n";
  write_svg(path, out.str());
}

}  // namespace povar
