#include "degenwave/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace degenwave {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_text(const std::vector<CsvColumn>& columns) {
  if (columns.empty()) throw std::invalid_argument("csv: no columns");
  const std::size_t rows = columns.front().values->size();
  for (const auto& c : columns)
    if (c.values->size() != rows) throw std::invalid_argument("csv: ragged columns");
  std::string out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j) out += ',';
    out += columns[j].name;
  }
  out += '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      out += format_number((*columns[j].values)[i]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_csv(const std::string& path, const std::vector<CsvColumn>& columns) {
  write_text(path, csv_text(columns));
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string fmt(double x, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (f * mag >= raw) {
      step = f * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
    t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return t;
}

// Keeps points in order but collapses each horizontal bucket to its extremes.
std::vector<std::pair<double, double>> envelope(const std::vector<std::pair<double, double>>& pts,
                                                double x0, double x1, std::size_t max_points) {
  if (pts.size() <= max_points) return pts;
  const std::size_t buckets = std::max<std::size_t>(1, max_points / 2);
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0;
  for (std::size_t b = 0; b < buckets && i < pts.size(); ++b) {
    const double edge = x0 + (x1 - x0) * static_cast<double>(b + 1) / static_cast<double>(buckets);
    std::size_t lo = i, hi = i;
    std::size_t j = i;
    for (; j < pts.size() && (pts[j].first <= edge || b + 1 == buckets); ++j) {
      if (pts[j].second < pts[lo].second) lo = j;
      if (pts[j].second > pts[hi].second) hi = j;
    }
    if (j == i) continue;
    out.push_back(pts[std::min(lo, hi)]);
    if (lo != hi) out.push_back(pts[std::max(lo, hi)]);
    i = j;
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotStyle& style) {
  if (series.empty()) throw std::invalid_argument("plot: no series");
  const bool lg = style.loglog;
  auto tx = [lg](double v) { return lg ? std::log10(v) : v; };

  std::vector<std::vector<std::pair<double, double>>> pts(series.size());
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& sr = series[s];
    if (sr.x.size() != sr.y.size()) throw std::invalid_argument("plot: x/y length mismatch");
    for (std::size_t i = 0; i < sr.x.size(); ++i) {
      const double x = sr.x[i], y = sr.y[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (lg && (x <= 0.0 || y <= 0.0)) continue;
      const double X = tx(x), Y = tx(y);
      pts[s].emplace_back(X, Y);
      xmin = std::min(xmin, X);
      xmax = std::max(xmax, X);
      ymin = std::min(ymin, Y);
      ymax = std::max(ymax, Y);
    }
  }
  if (!std::isfinite(xmin)) throw std::invalid_argument("plot: no drawable points");
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    const double pad = ymin == 0.0 ? 1.0 : 0.1 * std::abs(ymin);
    ymin -= pad;
    ymax += pad;
  } else {
    const double pad = 0.04 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  const double W = style.width, H = style.height;
  const double left = 92, right = 20, top = 40, bottom = 55;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double X) { return left + (X - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double Y) { return top + (ymax - Y) / (ymax - ymin) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W, "%.0f") + "\" height=\"" +
       fmt(H, "%.0f") + "\" viewBox=\"0 0 " + fmt(W, "%.0f") + " " + fmt(H, "%.0f") +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty())
    o += "<text x=\"" + fmt(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(style.title) + "</text>\n";
  o += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" +
       fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks_for = [&](double lo, double hi) {
    if (!lg) return linear_ticks(lo, hi);
    std::vector<double> t;
    for (double d = std::ceil(lo); d <= std::floor(hi); d += 1.0) t.push_back(d);
    if (t.size() >= 3) return t;
    // Less than a few decades: 1-2-5 (or every integer) mantissas.
    for (const auto& mantissas : {std::vector<double>{1, 2, 5}, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9}}) {
      t.clear();
      for (double d = std::floor(lo); d <= std::ceil(hi); d += 1.0)
        for (double mnt : mantissas) {
          const double v = d + std::log10(mnt);
          if (v >= lo && v <= hi) t.push_back(v);
        }
      if (t.size() >= 3) break;
    }
    return t;
  };
  auto label = [&](double v) {
    return lg ? tick_label(std::round(std::pow(10.0, v) * 1e12) / 1e12) : tick_label(v);
  };
  for (double v : ticks_for(xmin, xmax)) {
    const double x = px(v);
    o += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(top + ph) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
         fmt(top + ph + 5) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(top + ph + 18) + "\" text-anchor=\"middle\">" +
         escape(label(v)) + "</text>\n";
  }
  for (double v : ticks_for(ymin, ymax)) {
    const double y = py(v);
    o += "<line x1=\"" + fmt(left - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left) + "\" y2=\"" +
         fmt(y) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">" +
         escape(label(v)) + "</text>\n";
  }
  const std::string xl = style.xlabel + (lg ? " (log)" : "");
  const std::string yl = style.ylabel + (lg ? " (log)" : "");
  o += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(H - 12) + "\" text-anchor=\"middle\">" +
       escape(xl) + "</text>\n";
  o += "<text x=\"16\" y=\"" + fmt(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fmt(top + ph / 2) + ")\">" + escape(yl) + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto reduced = envelope(pts[s], xmin, xmax, style.max_points);
    if (reduced.empty()) continue;
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      if (i) o += ' ';
      o += fmt(px(reduced[i].first)) + "," + fmt(py(reduced[i].second));
    }
    o += "\"/>\n";
    const double ly = top + 16 + 16 * static_cast<double>(s);
    o += "<line x1=\"" + fmt(left + pw - 110) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
         fmt(left + pw - 90) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + fmt(left + pw - 85) + "\" y=\"" + fmt(ly) + "\">" + escape(series[s].label) +
         "</text>\n";
  }
  if (!style.annotation.empty())
    o += "<text x=\"" + fmt(left + 10) + "\" y=\"" + fmt(top + ph - 10) + "\">" +
         escape(style.annotation) + "</text>\n";
  o += "</svg>\n";
  return o;
}

void emit_plot(const std::string& path, const std::vector<PlotSeries>& series,
               const PlotStyle& style) {
  write_text(path, render_svg(series, style));
}

}  // namespace degenwave
