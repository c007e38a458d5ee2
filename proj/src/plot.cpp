#include "becdecay/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace becdecay {
namespace {

// printf-style append; every number routed through here uses a fixed format
// so the emitted SVG is byte-stable across runs.
void put(std::string& s, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  const int n = std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  if (n < 0 || n >= static_cast<int>(sizeof(buf))) {
    throw std::runtime_error("plot: formatted fragment too long");
  }
  s.append(buf, static_cast<std::size_t>(n));
}

struct LineStyle {
  const char* color;
  const char* dash;  // empty -> solid
  const char* label;
};

LineStyle style_for(const std::string& word) {
  if (word == "full") return {"#000000", "", "full"};
  if (word == "simple") return {"#0072B2", "9,5", "simple"};
  if (word == "literal") return {"#009E73", "9,4,2,4", "simple (literal)"};
  if (word == "pure") return {"#D55E00", "2,5", "pure condensate"};
  if (word == "ideal") return {"#CC79A7", "14,6", "ideal"};
  return {"#666666", "", word.c_str()};
}

// Tick step of the form {1,2,5}x10^k giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double m = (r <= 1.0) ? 1.0 : (r <= 2.0) ? 2.0 : (r <= 5.0) ? 5.0 : 10.0;
  return m * mag;
}

std::vector<double> ticks(double lo, double hi, int target) {
  std::vector<double> out;
  const double step = nice_step(hi - lo, target);
  double v = std::ceil(lo / step - 1e-9) * step;
  for (; v <= hi + 1e-9 * (hi - lo); v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

struct Axis {
  double lo = 0.0, hi = 1.0;  // data range
  double p0 = 0.0, p1 = 1.0;  // pixel range (p0 maps lo)
  double to_px(double v) const { return p0 + (v - lo) / (hi - lo) * (p1 - p0); }
};

void polyline(std::string& svg, const Axis& x, const Axis& y,
              const std::vector<std::pair<double, double>>& pts,
              const LineStyle& st, double width) {
  put(svg, "  <polyline fill=\"none\" stroke=\"%s\" stroke-width=\"%.2f\"",
      st.color, width);
  if (st.dash[0] != '\0') put(svg, " stroke-dasharray=\"%s\"", st.dash);
  put(svg, " points=\"");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    put(svg, "%s%.2f,%.2f", i ? " " : "", x.to_px(pts[i].first),
        y.to_px(pts[i].second));
  }
  put(svg, "\"/>\n");
}

}  // namespace

void write_decay_svg(const std::string& path,
                     const std::vector<ModeRun>& runs) {
  if (runs.empty()) {
    throw std::runtime_error("plot: no runs to draw");
  }
  const double W = 840.0, H = 600.0;
  const double ml = 90.0, mr = 30.0, mt = 30.0, mb = 70.0;
  const double pw = W - ml - mr, ph = H - mt - mb;

  double t_max = 0.0, n_max = 0.0;
  for (const auto& r : runs) {
    for (const auto& p : r.traj.points) {
      t_max = std::max(t_max, p.t);
      n_max = std::max(n_max, p.N_C);
    }
  }
  if (t_max <= 0.0 || n_max <= 0.0) {
    throw std::runtime_error("plot: degenerate data range");
  }

  // Engineering scale keeps the atom-count tick labels short.
  double scale = 1.0;
  int scale_exp = 0;
  if (n_max >= 1e4) {
    scale_exp = 3 * static_cast<int>(std::floor(std::log10(n_max) / 3.0));
    scale = std::pow(10.0, scale_exp);
  }

  Axis ax{0.0, t_max, ml, ml + pw};
  Axis ay{0.0, n_max * 1.02, mt + ph, mt};  // y grows upward

  std::string svg;
  svg.reserve(1 << 16);
  put(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  put(svg,
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
      "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
      W, H, W, H);
  put(svg, "  <rect width=\"%.0f\" height=\"%.0f\" fill=\"#ffffff\"/>\n", W, H);
  put(svg,
      "  <g font-family=\"Helvetica, Arial, sans-serif\" fill=\"#000000\">\n");

  // Frame.
  put(svg,
      "  <rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
      "fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n",
      ml, mt, pw, ph);

  // X ticks and labels.
  for (double v : ticks(ax.lo, ax.hi, 6)) {
    const double px = ax.to_px(v);
    put(svg,
        "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
        "stroke=\"#000000\"/>\n",
        px, mt + ph, px, mt + ph - 6.0);
    put(svg,
        "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" "
        "text-anchor=\"middle\">%g</text>\n",
        px, mt + ph + 18.0, v);
  }
  // Y ticks and labels (scaled).
  for (double v : ticks(ay.lo, ay.hi, 6)) {
    const double py = ay.to_px(v);
    put(svg,
        "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
        "stroke=\"#000000\"/>\n",
        ml, py, ml + 6.0, py);
    put(svg,
        "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" "
        "text-anchor=\"end\">%g</text>\n",
        ml - 8.0, py + 4.0, v / scale);
  }
  // Axis titles.
  put(svg,
      "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"14\" "
      "text-anchor=\"middle\">time (s)</text>\n",
      ml + pw / 2.0, H - 28.0);
  if (scale_exp != 0) {
    put(svg,
        "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"14\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 %.2f %.2f)\">condensate atoms / 1e%d</text>\n",
        ml - 56.0, mt + ph / 2.0, ml - 56.0, mt + ph / 2.0, scale_exp);
  } else {
    put(svg,
        "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"14\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 %.2f %.2f)\">condensate atoms</text>\n",
        ml - 56.0, mt + ph / 2.0, ml - 56.0, mt + ph / 2.0);
  }

  // Curves, in run order.
  for (const auto& r : runs) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(r.traj.points.size());
    for (const auto& p : r.traj.points) pts.emplace_back(p.t, p.N_C);
    polyline(svg, ax, ay, pts, style_for(r.word), r.word == "full" ? 2.0 : 1.6);
  }

  // Legend row below the x-axis title line.
  double lx = ml;
  const double ly = H - 8.0;
  for (const auto& r : runs) {
    const LineStyle st = style_for(r.word);
    put(svg,
        "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
        "stroke=\"%s\" stroke-width=\"2\"",
        lx, ly - 4.0, lx + 28.0, ly - 4.0, st.color);
    if (st.dash[0] != '\0') put(svg, " stroke-dasharray=\"%s\"", st.dash);
    put(svg, "/>\n");
    put(svg, "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">%s</text>\n",
        lx + 34.0, ly, st.label);
    lx += 34.0 + 8.0 * static_cast<double>(std::string(st.label).size()) + 24.0;
  }

  // Temperature inset from the full-model run, when present.
  const ModeRun* full = nullptr;
  for (const auto& r : runs) {
    if (r.word == "full") full = &r;
  }
  if (full != nullptr && full->traj.points.size() >= 2) {
    const double ix0 = ml + 0.55 * pw, ix1 = ml + 0.95 * pw;
    const double iy0 = mt + 0.08 * ph, iy1 = mt + 0.42 * ph;
    double tmin = full->traj.points.front().T, tmax = tmin;
    double tt_max = 0.0;
    for (const auto& p : full->traj.points) {
      tmin = std::min(tmin, p.T);
      tmax = std::max(tmax, p.T);
      tt_max = std::max(tt_max, p.t);
    }
    double pad = 0.08 * (tmax - tmin);
    if (pad <= 0.0) pad = 0.02 * tmax + 1e-12;
    Axis itx{0.0, tt_max, ix0, ix1};
    Axis ity{(tmin - pad) * 1e6, (tmax + pad) * 1e6, iy1, iy0};
    put(svg,
        "  <rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
        "fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"0.8\"/>\n",
        ix0, iy0, ix1 - ix0, iy1 - iy0);
    for (double v : ticks(ity.lo, ity.hi, 3)) {
      const double py = ity.to_px(v);
      put(svg,
          "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
          "stroke=\"#000000\"/>\n",
          ix0, py, ix0 + 5.0, py);
      put(svg,
          "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" "
          "text-anchor=\"end\">%g</text>\n",
          ix0 - 4.0, py + 3.0, v);
    }
    std::vector<std::pair<double, double>> pts;
    pts.reserve(full->traj.points.size());
    for (const auto& p : full->traj.points) pts.emplace_back(p.t, p.T * 1e6);
    polyline(svg, itx, ity, pts, LineStyle{"#000000", "", ""}, 1.4);
    put(svg,
        "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" "
        "text-anchor=\"middle\">temperature (&#181;K)</text>\n",
        (ix0 + ix1) / 2.0, iy0 - 6.0);
  }

  put(svg, "  </g>\n</svg>\n");

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open plot file: " + path);
  }
  out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
  out.flush();
  if (!out) {
    throw std::runtime_error("short write on plot file: " + path);
  }
}

}  // namespace becdecay
