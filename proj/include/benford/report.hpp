#pragma once

// CSV and SVG emitters.  Every number is formatted through snprintf with
// fixed formats, so output bytes depend only on the values.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "density.hpp"
#include "satotate.hpp"

namespace benford {

inline std::string format(const char* fmt, auto... args) {
  char buf[128];
  const int n = std::snprintf(buf, sizeof buf, fmt, args...);
  return std::string(buf, static_cast<std::size_t>(std::max(0, std::min<int>(n, sizeof buf - 1))));
}

/// x,numerator,denominator,ratio with ratios to 10 significant digits.
inline std::string density_csv(const DensitySeries& s) {
  std::string out = "x,numerator,denominator,ratio\n";
  for (const Checkpoint& c : s.checkpoints) {
    out += std::to_string(c.x) + ",";
    if (s.mode == DensityMode::arithmetic) {
      out += format("%.0Lf,%.0Lf,", c.numerator, c.denominator);
    } else {
      out += format("%.15Lg,%.15Lg,", c.numerator, c.denominator);
    }
    out += format("%.10g\n", c.ratio);
  }
  return out;
}

inline std::string window_csv(const std::vector<std::vector<WindowResult>>& families, const std::vector<unsigned>& ds) {
  std::string out = "n";
  for (unsigned d : ds) {
    const std::string s = std::to_string(d);
    out += ",lo_d" + s + ",hi_d" + s + ",members_d" + s + ",primes_d" + s + ",proportion_d" + s;
  }
  out += "\n";
  const std::size_t rows = families.empty() ? 0 : families.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    out += std::to_string(families.front()[r].n);
    for (const auto& fam : families) {
      const WindowResult& w = fam[r];
      out += "," + std::to_string(w.lo) + "," + std::to_string(w.hi) + "," + std::to_string(w.members) + "," +
             std::to_string(w.primes) + "," + (w.proportion ? format("%.10g", *w.proportion) : std::string("empty"));
    }
    out += "\n";
  }
  return out;
}

inline std::string cdf_csv(const std::vector<CdfRow>& rows) {
  std::string out = "t,empirical_cdf,st_cdf\n";
  for (const CdfRow& r : rows) out += format("%.6Lf,%.10Lg,%.10Lg\n", r.t, r.empirical_cdf, r.st_cdf);
  return out;
}

inline std::string cells_csv(const std::vector<Cell>& cells) {
  std::string out = "lo,hi,empirical,expected,error\n";
  for (const Cell& c : cells) {
    out += format("%.10Lg,%.10Lg,%.10Lg,%.10Lg,%.10Lg\n", c.lo, c.hi, c.empirical, c.expected,
                  c.empirical - c.expected);
  }
  return out;
}

/// Self-contained 1000x600 line plot of ratio against log10 x with a dashed
/// horizontal reference line.
inline std::string density_svg(const DensitySeries& s, double reference, const std::string& title) {
  constexpr double W = 1000, H = 600, L = 80, R = 30, T = 50, B = 60;
  std::vector<std::pair<double, double>> pts;
  for (const Checkpoint& c : s.checkpoints) pts.emplace_back(std::log10(static_cast<double>(c.x)), c.ratio);
  double x0 = pts.empty() ? 0 : pts.front().first, x1 = pts.empty() ? 1 : pts.back().first;
  if (x1 <= x0) x1 = x0 + 1;
  double y0 = reference, y1 = reference;
  for (auto [x, y] : pts) {
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  const double pad = std::max(0.01, (y1 - y0) * 0.05);
  y0 -= pad;
  y1 += pad;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::string out = format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n", W, H,
      W, H);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"500\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" + title +
         "</text>\n";
  out += format("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", L, H - B, W - R, H - B);
  out += format("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", L, T, L, H - B);
  for (int e = static_cast<int>(std::ceil(x0)); e <= static_cast<int>(std::floor(x1)); ++e) {
    out += format("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"13\">1e%d</text>\n",
                  sx(e), H - B + 20, e);
  }
  for (int i = 0; i <= 5; ++i) {
    const double y = y0 + (y1 - y0) * i / 5;
    out += format("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"13\">%.3f</text>\n",
                  L - 6, sy(y) + 4, y);
  }
  out += format("<text x=\"500\" y=\"%.0f\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">x "
                "(log scale)</text>\n",
                H - 15);
  out += format("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n",
                L, sy(reference), W - R, sy(reference));
  out += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (auto [x, y] : pts) out += format("%.2f,%.2f ", sx(x), sy(y));
  out += "\"/>\n</svg>\n";
  return out;
}

}  // namespace benford
