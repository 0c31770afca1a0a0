/*
 * Copyright 2026 The housebench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "housebench/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace housebench {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string TickLabel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Roughly five round tick values covering [lo, hi].
std::vector<double> Ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return ticks;
}

void Range(const std::vector<double>& v, double& lo, double& hi) {
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
}

void Pad(double& lo, double& hi) {
  if (!(lo <= hi)) {
    lo = 0.0;
    hi = 1.0;
  } else if (lo == hi) {
    const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= d;
    hi += d;
  } else {
    const double d = 0.05 * (hi - lo);
    lo -= d;
    hi += d;
  }
}

}  // namespace

std::string XmlEscape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string LineChartSvg(const std::vector<Series>& series, const ChartOptions& o) {
  constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
  const double w = o.width - kLeft - kRight;
  const double h = o.height - kTop - kBottom;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const Series& s : series) {
    Range(s.x, x_lo, x_hi);
    Range(s.y, y_lo, y_hi);
  }
  Pad(x_lo, x_hi);
  Pad(y_lo, y_hi);
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * w; };
  auto py = [&](double y) { return kTop + h - (y - y_lo) / (y_hi - y_lo) * h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\""
      << o.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << Num(kLeft + w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << XmlEscape(o.title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << Num(w) << "\" height=\""
      << Num(h) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : Ticks(x_lo, x_hi)) {
    out << "<line x1=\"" << Num(px(t)) << "\" y1=\"" << Num(kTop + h) << "\" x2=\"" << Num(px(t))
        << "\" y2=\"" << Num(kTop + h + 5) << "\" stroke=\"#333\"/>";
    out << "<text x=\"" << Num(px(t)) << "\" y=\"" << Num(kTop + h + 18)
        << "\" text-anchor=\"middle\">" << TickLabel(t) << "</text>\n";
  }
  for (double t : Ticks(y_lo, y_hi)) {
    out << "<line x1=\"" << Num(kLeft - 5) << "\" y1=\"" << Num(py(t)) << "\" x2=\"" << Num(kLeft + w)
        << "\" y2=\"" << Num(py(t)) << "\" stroke=\"#ddd\"/>";
    out << "<text x=\"" << Num(kLeft - 8) << "\" y=\"" << Num(py(t) + 4)
        << "\" text-anchor=\"end\">" << TickLabel(t) << "</text>\n";
  }
  out << "<text x=\"" << Num(kLeft + w / 2) << "\" y=\"" << o.height - 15
      << "\" text-anchor=\"middle\">" << XmlEscape(o.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << Num(kTop + h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << XmlEscape(o.y_label) << "</text>\n";

  for (size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      out << Num(px(s.x[k])) << ',' << Num(py(s.y[k])) << ' ';
    }
    out << "\"/>\n";
    if (o.markers) {
      for (size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
        if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
        out << "<circle cx=\"" << Num(px(s.x[k])) << "\" cy=\"" << Num(py(s.y[k]))
            << "\" r=\"2.5\" fill=\"" << color << "\"/>";
      }
      out << '\n';
    }
    const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
    out << "<line x1=\"" << Num(kLeft + w + 15) << "\" y1=\"" << Num(ly) << "\" x2=\""
        << Num(kLeft + w + 35) << "\" y2=\"" << Num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>";
    out << "<text x=\"" << Num(kLeft + w + 40) << "\" y=\"" << Num(ly + 4) << "\">"
        << XmlEscape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string BarChartSvg(const std::vector<std::string>& labels, const std::vector<double>& values,
                        const ChartOptions& o) {
  constexpr double kLeft = 260, kRight = 40, kTop = 40, kBottom = 50;
  const size_t n = std::min(labels.size(), values.size());
  const double bar = 18.0;
  const int height = std::max(o.height, static_cast<int>(kTop + kBottom + bar * 1.4 * static_cast<double>(n)));
  const double w = o.width - kLeft - kRight;
  double lo = 0.0, hi = 0.0;
  Range(values, lo, hi);
  if (lo == hi) hi = lo + 1.0;
  auto px = [&](double v) { return kLeft + (v - lo) / (hi - lo) * w; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << Num(o.width / 2.0) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << XmlEscape(o.title) << "</text>\n";
  for (size_t i = 0; i < n; ++i) {
    const double y = kTop + bar * 1.4 * static_cast<double>(i);
    const double v = std::isfinite(values[i]) ? values[i] : 0.0;
    const double x0 = px(std::min(0.0, v));
    const double x1 = px(std::max(0.0, v));
    out << "<rect x=\"" << Num(x0) << "\" y=\"" << Num(y) << "\" width=\"" << Num(x1 - x0)
        << "\" height=\"" << Num(bar) << "\" fill=\"" << kPalette[0] << "\"/>";
    out << "<text x=\"" << Num(kLeft - 6) << "\" y=\"" << Num(y + bar * 0.7)
        << "\" text-anchor=\"end\">" << XmlEscape(labels[i]) << "</text>\n";
  }
  const double axis_y = kTop + bar * 1.4 * static_cast<double>(n) + 4;
  out << "<line x1=\"" << kLeft << "\" y1=\"" << Num(axis_y) << "\" x2=\"" << Num(kLeft + w)
      << "\" y2=\"" << Num(axis_y) << "\" stroke=\"#333\"/>\n";
  for (double t : Ticks(lo, hi)) {
    out << "<text x=\"" << Num(px(t)) << "\" y=\"" << Num(axis_y + 16)
        << "\" text-anchor=\"middle\">" << TickLabel(t) << "</text>\n";
  }
  out << "<text x=\"" << Num(kLeft + w / 2) << "\" y=\"" << Num(axis_y + 36)
      << "\" text-anchor=\"middle\">" << XmlEscape(o.x_label) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace housebench
