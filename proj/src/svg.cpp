// Copyright 2026 The conmap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "conmap/svg.hpp"

#include <algorithm>
#include <sstream>

namespace conmap {

namespace {

constexpr double kPanel = 260.0;
constexpr double kPad = 24.0;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#bcbd22",
                                "#17becf", "#393b79", "#637939", "#8c6d31"};

const char* color(int label) {
  if (label < 0) return "#bbbbbb";
  return kPalette[label % int(std::size(kPalette))];
}

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

}  // namespace

Eigen::MatrixXd oblique_view(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.cols() != 3) throw InvalidArgument("oblique_view needs 3 columns");
  Eigen::Matrix<double, 3, 2> P;
  P << 1.0, 0.0,
       0.35, 0.35,
       0.0, 1.0;
  return X * P;
}

std::string scatter_grid_svg(const std::vector<ScatterPanel>& panels, int rows,
                             int cols) {
  if (rows < 1 || cols < 1 || int(panels.size()) > rows * cols)
    throw InvalidArgument("panels do not fit the grid");
  const double cell = kPanel + kPad;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * cell + kPad
     << "\" height=\"" << rows * cell + kPad << "\" font-family=\"sans-serif\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& p = panels[k];
    if (p.xy.cols() != 2 || p.xy.rows() != p.labels.size())
      throw InvalidArgument("panel " + std::to_string(k) + ": shape mismatch");
    const double x0 = kPad + double(int(k) % cols) * cell;
    const double y0 = kPad + double(int(k) / cols) * cell;
    os << "<g class=\"panel\" transform=\"translate(" << x0 << ',' << y0 << ")\">\n"
       << "<rect width=\"" << kPanel << "\" height=\"" << kPanel
       << "\" fill=\"none\" stroke=\"#444\"/>\n"
       << "<text x=\"4\" y=\"-6\" font-size=\"12\">" << escape(p.title) << "</text>\n";
    if (p.xy.rows() > 0) {
      const Eigen::Vector2d lo = p.xy.colwise().minCoeff();
      const Eigen::Vector2d hi = p.xy.colwise().maxCoeff();
      const double span = std::max((hi - lo).maxCoeff(), 1e-12);
      const double scale = (kPanel - 16.0) / span;
      const Eigen::Vector2d off =
          Eigen::Vector2d::Constant(kPanel / 2) - scale * (lo + hi) / 2;
      // Noise first so clusters are drawn on top.
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index i = 0; i < p.xy.rows(); ++i) {
          if ((p.labels(i) < 0) != (pass == 0)) continue;
          const double x = off.x() + scale * p.xy(i, 0);
          const double y = kPanel - (off.y() + scale * p.xy(i, 1));
          os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"1.6\" fill=\""
             << color(p.labels(i)) << "\"/>\n";
        }
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string bench_svg(const std::vector<StrategySummary>& summary) {
  const double bar = 48.0, gap = 24.0, h = 200.0;
  const double chart_w = double(summary.size()) * (bar + gap) + gap;
  double t_max = 0.0;
  for (const auto& s : summary)
    if (s.mean_time_s) t_max = std::max(t_max, *s.mean_time_s + *s.std_time_s);
  if (t_max <= 0.0) t_max = 1.0;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * chart_w + 3 * kPad
     << "\" height=\"" << h + 3 * kPad + 20 << "\" font-family=\"sans-serif\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int chart = 0; chart < 2; ++chart) {
    const double x0 = kPad + double(chart) * (chart_w + kPad);
    os << "<g class=\"chart\" transform=\"translate(" << x0 << ',' << 2 * kPad << ")\">\n"
       << "<text x=\"0\" y=\"-10\" font-size=\"13\">"
       << (chart == 0 ? "success rate (%)" : "planning time (s), successes only")
       << "</text>\n<line x1=\"0\" y1=\"" << h << "\" x2=\"" << chart_w << "\" y2=\"" << h
       << "\" stroke=\"#444\"/>\n<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"" << h
       << "\" stroke=\"#444\"/>\n";
    for (std::size_t k = 0; k < summary.size(); ++k) {
      const auto& s = summary[k];
      const double x = gap + double(k) * (bar + gap);
      double v = 0.0;
      if (chart == 0) v = s.success_rate / 100.0;
      else if (s.mean_time_s) v = *s.mean_time_s / t_max;
      os << "<rect class=\"bar\" x=\"" << x << "\" y=\"" << h * (1 - v) << "\" width=\""
         << bar << "\" height=\"" << h * v << "\" fill=\"" << color(int(k)) << "\"/>\n";
      if (chart == 1 && s.std_time_s) {
        const double a = h * (1 - (*s.mean_time_s - *s.std_time_s) / t_max);
        const double b = h * (1 - (*s.mean_time_s + *s.std_time_s) / t_max);
        os << "<line x1=\"" << x + bar / 2 << "\" y1=\"" << a << "\" x2=\"" << x + bar / 2
           << "\" y2=\"" << b << "\" stroke=\"black\"/>\n";
      }
      os << "<text x=\"" << x + bar / 2 << "\" y=\"" << h + 14
         << "\" font-size=\"10\" text-anchor=\"middle\">" << to_string(s.strategy)
         << "</text>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace conmap
