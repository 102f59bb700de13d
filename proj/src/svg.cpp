// Copyright 2026 The selcov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "selcov/svg.hpp"

#include <cmath>
#include <cstdio>

namespace selcov {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

std::string coord(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

}  // namespace

std::string curve_to_svg(const CurveTable& curve) {
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;

  double t_lo = 0.0;
  double t_hi = 1.0;
  if (!curve.points.empty()) {
    t_lo = curve.points.front().threshold;
    t_hi = curve.points.back().threshold;
    if (t_hi <= t_lo) t_hi = t_lo + 1.0;
  }
  auto x_of = [&](double t) { return kMarginLeft + (t - t_lo) / (t_hi - t_lo) * plot_w; };
  auto y_of = [&](double v) { return kMarginTop + (1.0 - v) * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" +
         coord(kHeight) + "\" viewBox=\"0 0 " + coord(kWidth) + " " + coord(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + coord(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
         "Accuracy and rejection rate vs confidence threshold</text>\n";

  // Axes and gridlines at 0.0, 0.1, ..., 1.0 on y; five ticks on x.
  for (int i = 0; i <= 10; ++i) {
    const double v = i / 10.0;
    const double y = y_of(v);
    svg += "<line x1=\"" + coord(kMarginLeft) + "\" y1=\"" + coord(y) + "\" x2=\"" +
           coord(kWidth - kMarginRight) + "\" y2=\"" + coord(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + coord(kMarginLeft - 8) + "\" y=\"" + coord(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + coord(v) +
           "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / 5.0;
    const double x = x_of(t);
    svg += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(kMarginTop) + "\" x2=\"" + coord(x) +
           "\" y2=\"" + coord(kHeight - kMarginBottom) +
           "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + coord(x) + "\" y=\"" + coord(kHeight - kMarginBottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           coord(t) + "</text>\n";
  }
  svg += "<rect x=\"" + coord(kMarginLeft) + "\" y=\"" + coord(kMarginTop) + "\" width=\"" +
         coord(plot_w) + "\" height=\"" + coord(plot_h) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + coord(kMarginLeft + plot_w / 2) + "\" y=\"" + coord(kHeight - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">confidence "
         "threshold</text>\n";

  auto polyline = [&](const std::string& color, auto value_of) {
    std::string points;
    for (const EvalPoint& point : curve.points) {
      const auto v = value_of(point);
      if (!v) continue;
      if (!points.empty()) points += ' ';
      points += coord(x_of(point.threshold)) + "," + coord(y_of(*v));
    }
    if (points.empty()) return;
    svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"" +
           points + "\"/>\n";
  };
  polyline("#1f77b4", [](const EvalPoint& p) { return p.accuracy; });
  polyline("#d62728",
           [](const EvalPoint& p) { return std::optional<double>(p.rejection_rate); });

  svg += "<rect x=\"" + coord(kMarginLeft + 12) + "\" y=\"" + coord(kMarginTop + 10) +
         "\" width=\"14\" height=\"3\" fill=\"#1f77b4\"/>\n";
  svg += "<text x=\"" + coord(kMarginLeft + 32) + "\" y=\"" + coord(kMarginTop + 15) +
         "\" font-family=\"sans-serif\" font-size=\"12\">accuracy</text>\n";
  svg += "<rect x=\"" + coord(kMarginLeft + 12) + "\" y=\"" + coord(kMarginTop + 28) +
         "\" width=\"14\" height=\"3\" fill=\"#d62728\"/>\n";
  svg += "<text x=\"" + coord(kMarginLeft + 32) + "\" y=\"" + coord(kMarginTop + 33) +
         "\" font-family=\"sans-serif\" font-size=\"12\">rejection rate</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace selcov
