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


#ifndef HOUSEBENCH_SVG_H_
#define HOUSEBENCH_SVG_H_

#include <string>
#include <vector>

namespace housebench {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 440;
  // Draw point markers in addition to lines.
  bool markers = true;
};

// Self-contained SVG line chart with axes, ticks and a legend.
std::string LineChartSvg(const std::vector<Series>& series, const ChartOptions& options);

// Horizontal bar chart, first bar on top.
std::string BarChartSvg(const std::vector<std::string>& labels, const std::vector<double>& values,
                        const ChartOptions& options);

std::string XmlEscape(const std::string& text);

}  // namespace housebench

#endif  // HOUSEBENCH_SVG_H_
