#include "rr/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rr {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 140;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 52;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_curve_svg(const std::string& path, const std::vector<CurveSeries>& series,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label) {
  double x_min = 0.0;
  double x_max = 1.0;
  bool any = false;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!any) {
        x_min = x_max = x;
        any = true;
      } else {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
      }
    }
  }
  if (!any) throw std::invalid_argument("write_curve_svg: no points to plot");
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return kMarginTop + (1.0 - y) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
      << "font-family=\"sans-serif\">" << escape(title) << "</text>\n";

  // Axes with ticks: 5 on x, y fixed at 0 .. 1 step 0.25.
  svg << "<g stroke=\"#333\" stroke-width=\"1\" font-size=\"11\" font-family=\"sans-serif\">\n";
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << sy(0) << "\" x2=\"" << kWidth - kMarginRight
      << "\" y2=\"" << sy(0) << "\"/>\n";
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << sy(0) << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << sy(1) << "\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    svg << "<line x1=\"" << sx(xv) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(xv) << "\" y2=\""
        << sy(0) + 4 << "\"/>\n";
    svg << "<text x=\"" << sx(xv) << "\" y=\"" << sy(0) + 18
        << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333\">" << fmt(xv) << "</text>\n";
    const double yv = i / 4.0;
    svg << "<line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << sy(yv) << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << sy(yv) << "\"/>\n";
    svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333\">" << fmt(yv) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
      << escape(x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 16 " << kMarginTop + plot_h / 2 << ")\">" << escape(y_label)
      << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[s].points) {
      svg << sx(x) << "," << sy(std::clamp(y, 0.0, 1.0)) << " ";
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : series[s].points) {
      svg << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(std::clamp(y, 0.0, 1.0))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kMarginTop + 16.0 * static_cast<double>(s);
    svg << "<line x1=\"" << kWidth - kMarginRight + 12 << "\" y1=\"" << ly << "\" x2=\""
        << kWidth - kMarginRight + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kWidth - kMarginRight + 40 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape(series[s].label)
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write plot: " + path);
  out << svg.str();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rr
