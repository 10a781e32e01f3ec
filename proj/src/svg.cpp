#include "gsc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "gsc/errors.hpp"

namespace gsc {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : spec.series) {
    for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    for (double v : s.y_low) ymin = std::min(ymin, v);
    for (double v : s.y_high) ymax = std::max(ymax, v);
  }
  if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
  if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
  double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double ml = 64, mr = 16, mt = 36, mb = 48;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << spec.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-size=\"14\">" << spec.title << "</text>\n";

  // axes and ticks
  out << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    double tx = xmin + (xmax - xmin) * i / nticks;
    double ty = ymin + (ymax - ymin) * i / nticks;
    out << "<line x1=\"" << num(px(tx)) << "\" y1=\"" << num(mt + ph) << "\" x2=\""
        << num(px(tx)) << "\" y2=\"" << num(mt + ph + 4) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(px(tx)) << "\" y=\"" << num(mt + ph + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(tx) << "</text>\n";
    out << "<line x1=\"" << num(ml - 4) << "\" y1=\"" << num(py(ty)) << "\" x2=\""
        << num(ml) << "\" y2=\"" << num(py(ty)) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(ty) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(ty) << "</text>\n";
  }
  out << "<text x=\"" << spec.width / 2 << "\" y=\"" << spec.height - 8
      << "\" text-anchor=\"middle\" font-size=\"12\">" << spec.x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << spec.height / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
      << spec.height / 2 << ")\">" << spec.y_label << "</text>\n";

  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (s.y_low.size() == s.y.size() && s.y_high.size() == s.y.size() && !s.y.empty()) {
      out << "<path d=\"M";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << num(px(s.x[i])) << " " << num(py(s.y_high[i])) << " L";
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        out << num(px(s.x[i])) << " " << num(py(s.y_low[i]));
        if (i > 0) out << " L";
      }
      out << " Z\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    double ly = mt + 16 + 16 * si;
    out << "<line x1=\"" << num(ml + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
        << num(ml + 34) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(ml + 40) << "\" y=\"" << num(ly)
        << "\" font-size=\"11\">" << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace gsc
