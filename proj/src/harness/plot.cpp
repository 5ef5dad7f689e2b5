#include "onegan/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <vector>

namespace onegan {

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct SeriesPoint {
  double n;
  double mean;
  double stdev;
};

}  // namespace

void write_sweep_plot(const CsvTable& summary, const std::string& path,
                      const PlotOptions& opts) {
  const int cd = summary.column("d");
  const int cn = summary.column("n");
  const int cm = summary.column("mean_rec_err");
  const int cs = summary.column("std_rec_err");
  if (cd < 0 || cn < 0 || cm < 0 || cs < 0)
    throw std::invalid_argument(
        "write_sweep_plot: summary needs columns d, n, mean_rec_err, std_rec_err");
  if (summary.rows.empty()) throw std::invalid_argument("write_sweep_plot: empty summary");

  std::map<long, std::vector<SeriesPoint>> series;  // keyed by d, ascending
  double nmin = 0.0, nmax = 0.0, ymax = 0.0;
  bool first = true;
  for (const auto& row : summary.rows) {
    const long d = std::lround(parse_double(row[cd]));
    SeriesPoint pt{parse_double(row[cn]), parse_double(row[cm]), parse_double(row[cs])};
    if (!(pt.n > 0.0)) throw std::invalid_argument("write_sweep_plot: n must be positive");
    series[d].push_back(pt);
    nmin = first ? pt.n : std::min(nmin, pt.n);
    nmax = first ? pt.n : std::max(nmax, pt.n);
    ymax = std::max(ymax, pt.mean + pt.stdev);
    first = false;
  }
  for (auto& [d, pts] : series)
    std::sort(pts.begin(), pts.end(),
              [](const SeriesPoint& a, const SeriesPoint& b) { return a.n < b.n; });
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.08;

  const double ml = 78, mr = 24, mt = 24, mb = 58;
  const double w = opts.width, h = opts.height;
  const double pw = w - ml - mr, ph = h - mt - mb;
  const double lx0 = std::log10(nmin), lx1 = std::log10(nmax);
  const auto xpix = [&](double n) {
    const double u = lx1 > lx0 ? (std::log10(n) - lx0) / (lx1 - lx0) : 0.5;
    return ml + u * pw;
  };
  const auto ypix = [&](double v) {
    const double c = std::clamp(v, 0.0, ymax);
    return mt + ph * (1.0 - c / ymax);
  };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};
  const int palette_n = 6;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_sweep_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" fill=\"#ffffff\"/>\n";

  // Frame and ticks are <line> elements so that the polyline/polygon counts
  // reflect the data series alone.
  out << "<line x1=\"" << px(ml) << "\" y1=\"" << px(mt + ph) << "\" x2=\"" << px(ml + pw)
      << "\" y2=\"" << px(mt + ph) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << px(ml) << "\" y1=\"" << px(mt) << "\" x2=\"" << px(ml) << "\" y2=\""
      << px(mt + ph) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  std::vector<double> xticks;
  for (const auto& [d, pts] : series)
    for (const auto& pt : pts)
      if (std::find(xticks.begin(), xticks.end(), pt.n) == xticks.end()) xticks.push_back(pt.n);
  std::sort(xticks.begin(), xticks.end());
  for (double n : xticks) {
    const double x = xpix(n);
    out << "<line x1=\"" << px(x) << "\" y1=\"" << px(mt + ph) << "\" x2=\"" << px(x)
        << "\" y2=\"" << px(mt + ph + 5) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << px(mt + ph + 20)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
        << short_num(n) << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = ymax * i / 5.0;
    const double y = ypix(v);
    out << "<line x1=\"" << px(ml - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(ml)
        << "\" y2=\"" << px(y) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << px(ml - 9) << "\" y=\"" << px(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << short_num(v)
        << "</text>\n";
  }
  out << "<text x=\"" << px(ml + pw / 2) << "\" y=\"" << px(h - 14)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << opts.x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << px(mt + ph / 2)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << px(mt + ph / 2) << ")\">" << opts.y_label << "</text>\n";

  int color = 0;
  for (const auto& [d, pts] : series) {
    const char* c = kPalette[color % palette_n];
    out << "<polygon fill=\"" << c << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
    for (const auto& pt : pts) out << px(xpix(pt.n)) << "," << px(ypix(pt.mean + pt.stdev)) << " ";
    for (auto it = pts.rbegin(); it != pts.rend(); ++it)
      out << px(xpix(it->n)) << "," << px(ypix(it->mean - it->stdev)) << " ";
    out << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& pt : pts) out << px(xpix(pt.n)) << "," << px(ypix(pt.mean)) << " ";
    out << "\"/>\n";
    const double ly = mt + 16 + 18.0 * color;
    out << "<line x1=\"" << px(ml + pw - 150) << "\" y1=\"" << px(ly) << "\" x2=\""
        << px(ml + pw - 126) << "\" y2=\"" << px(ly) << "\" stroke=\"" << c
        << "\" stroke-width=\"1.8\"/>\n";
    out << "<text x=\"" << px(ml + pw - 120) << "\" y=\"" << px(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">d = " << d << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write_sweep_plot: write failed for " + path);
}

}  // namespace onegan
