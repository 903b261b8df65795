#include "grasp_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "grasp/model.hpp"

namespace grasp::cli {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Keeps the axis from collapsing when every value is equal.
void widen(double& lo, double& hi) {
  if (hi > lo) return;
  lo -= 0.5;
  hi += 0.5;
}

}  // namespace

std::string render_svg(const LineChart& chart) {
  double x_lo = chart.x.empty() ? 0.0 : *std::min_element(chart.x.begin(), chart.x.end());
  double x_hi = chart.x.empty() ? 1.0 : *std::max_element(chart.x.begin(), chart.x.end());
  double y_lo = 0.0;
  double y_hi = 1.0;
  for (const auto& s : chart.series) {
    for (double v : s.y) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  widen(x_lo, x_hi);
  widen(y_lo, y_hi);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(chart.title) << "</text>\n";

  // axes
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\"/>\n";
  svg << "</g>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / kTicks;
    const double yv = y_lo + (y_hi - y_lo) * i / kTicks;
    svg << "<text x=\"" << fixed(px(xv), 1) << "\" y=\"" << kTop + plot_h + 16
        << "\" text-anchor=\"middle\">" << format_real(std::round(xv * 100) / 100) << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(yv) + 4, 1)
        << "\" text-anchor=\"end\">" << fixed(yv, 2) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << kTop + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(chart.y_label) << "</text>\n";
  svg << "</g>\n";

  for (const auto& s : chart.series) {
    svg << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"2\" points=\"";
    const std::size_t n = std::min(s.y.size(), chart.x.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) svg << ' ';
      svg << fixed(px(chart.x[i]), 2) << ',' << fixed(py(s.y[i]), 2);
    }
    svg << "\"/>\n";
  }

  double ly = kTop + 10;
  for (const auto& s : chart.series) {
    const double lx = kLeft + plot_w + 15;
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly
        << "\" stroke=\"" << escape(s.color) << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label) << "</text>\n";
    ly += 18;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace grasp::cli
