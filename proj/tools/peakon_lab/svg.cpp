#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace peakon::lab {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> pts;
};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo <= 1e-300) {
      const double pad = std::max(std::abs(lo) * 0.1, 1.0);
      lo -= pad;
      hi += pad;
    }
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render(const std::vector<Curve>& curves, const std::string& xlabel, const std::string& ylabel,
                   const std::string& title) {
  Range xr, yr;
  for (const auto& c : curves)
    for (auto [x, y] : c.pts) {
      xr.add(x);
      yr.add(y);
    }
  xr.finish();
  yr.finish();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::string s;
  s += fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}" viewBox="0 0 {:.0f} {:.0f}">)",
                   kWidth, kHeight, kWidth, kHeight);
  s += "\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += fmt::format("<text x=\"{:.2f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
                   kLeft + pw / 2, escape(title));
  s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                   kLeft, kTop, pw, ph);
  for (int i = 0; i <= 4; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#dddddd\"/>\n", sx(fx), kTop,
                     kTop + ph);
    s += fmt::format("<line x1=\"{1:.2f}\" y1=\"{0:.2f}\" x2=\"{2:.2f}\" y2=\"{0:.2f}\" stroke=\"#dddddd\"/>\n", sy(fy), kLeft,
                     kLeft + pw);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.4g}</text>\n",
                     sx(fx), kTop + ph + 16, fx);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.4g}</text>\n",
                     kLeft - 6, sy(fy) + 4, fy);
  }
  if (yr.lo < 0.0 && yr.hi > 0.0)
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n",
                     kLeft, sy(0.0), kLeft + pw, sy(0.0));
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                   kLeft + pw / 2, kHeight - 12, escape(xlabel));
  s += fmt::format("<text x=\"18\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2f})\">{}</text>\n",
                   kTop + ph / 2, kTop + ph / 2, escape(ylabel));

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % std::size(kPalette)];
    std::string d;
    bool pen_down = false;
    for (auto [x, y] : curves[c].pts) {
      if (!std::isfinite(x) || !std::isfinite(y)) {
        pen_down = false;
        continue;
      }
      d += fmt::format("{}{:.2f},{:.2f} ", pen_down ? "L" : "M", sx(x), sy(y));
      pen_down = true;
    }
    if (!d.empty()) d.pop_back();
    s += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", d, color);
    const double ly = kTop + 14 + 18.0 * static_cast<double>(c);
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                     kLeft + pw + 10, ly, kLeft + pw + 30, ly, color);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                     kLeft + pw + 36, ly + 4, escape(curves[c].label));
  }
  s += "</svg>\n";
  return s;
}

}  // namespace

std::string render_svg(const CsvTable& table, PlotKind kind, const std::vector<std::string>& columns,
                       const std::string& title) {
  if (table.rows.empty()) throw std::invalid_argument("empty series: nothing to plot");
  std::vector<Curve> curves;
  if (kind == PlotKind::profile) {
    const std::size_t ct = table.column("t"), cx = table.column("x"), cu = table.column("u");
    for (const auto& r : table.rows) {
      const std::string label = fmt::format("t = {:.6g}", r[ct]);
      if (curves.empty() || curves.back().label != label) curves.push_back({label, {}});
      curves.back().pts.emplace_back(r[cx], r[cu]);
    }
    return render(curves, "x", "u", title);
  }
  if (table.header.size() < 2) throw std::invalid_argument("series plot needs at least two columns");
  std::vector<std::size_t> ys;
  if (columns.empty()) {
    for (std::size_t i = 1; i < table.header.size(); ++i) ys.push_back(i);
  } else {
    for (const auto& c : columns) ys.push_back(table.column(c));
  }
  for (std::size_t y : ys) {
    Curve c{table.header[y], {}};
    for (const auto& r : table.rows) c.pts.emplace_back(r[0], r[y]);
    curves.push_back(std::move(c));
  }
  return render(curves, table.header[0], ys.size() == 1 ? table.header[ys[0]] : std::string("value"), title);
}

}  // namespace peakon::lab
