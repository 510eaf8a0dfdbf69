#include "fairfit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fairfit {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 600;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 48;
constexpr int kMarginBottom = 48;
constexpr int kCurveSamples = 257;

const char* kWantedColor = "#1f77b4";
const char* kUnwantedColor = "#2ca02c";
const char* kCurveColor = "#d62728";

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

std::string fmt_tick(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4g", v);
  return buffer;
}

struct Axis {
  double lo, hi;
  double pix_lo, pix_hi;
  double to_pixels(double v) const {
    return pix_lo + (v - lo) / (hi - lo) * (pix_hi - pix_lo);
  }
};

}  // namespace

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * (static_cast<double>(i) / (n - 1));
  return out;
}

std::string render_plot(const Dataset& dataset, const PolynomialModel& model,
                        const std::string& title) {
  dataset.validate();
  const double x_lo = dataset.xs.minCoeff();
  const double x_hi = dataset.xs.maxCoeff();
  const std::vector<double> curve_x =
      x_hi > x_lo ? linspace(x_lo, x_hi, kCurveSamples)
                  : std::vector<double>{x_lo};
  const Eigen::VectorXd curve_y = predict(
      model, Eigen::Map<const Eigen::VectorXd>(
                 curve_x.data(), static_cast<Eigen::Index>(curve_x.size())));

  double y_lo = std::min(dataset.ys.minCoeff(), curve_y.minCoeff());
  double y_hi = std::max(dataset.ys.maxCoeff(), curve_y.maxCoeff());
  if (y_hi == y_lo) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  const double y_pad = 0.05 * (y_hi - y_lo);
  const double x_pad = x_hi > x_lo ? 0.03 * (x_hi - x_lo) : 1.0;

  const Axis x_axis{x_lo - x_pad, x_hi + x_pad, kMarginLeft,
                    kWidth - kMarginRight};
  const Axis y_axis{y_lo - y_pad, y_hi + y_pad, kHeight - kMarginBottom,
                    kMarginTop};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth
      << " " << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"28\" font-family=\"sans-serif\" "
         "font-size=\"18\" text-anchor=\"middle\">"
      << title << "</text>\n";

  // frame and min/max ticks
  svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << (kWidth - kMarginLeft - kMarginRight) << "\" height=\""
      << (kHeight - kMarginTop - kMarginBottom)
      << "\" fill=\"none\" stroke=\"#999999\"/>\n";
  svg << "<text x=\"" << fmt(x_axis.to_pixels(x_lo)) << "\" y=\""
      << (kHeight - kMarginBottom + 20)
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">"
      << fmt_tick(x_lo) << "</text>\n";
  svg << "<text x=\"" << fmt(x_axis.to_pixels(x_hi)) << "\" y=\""
      << (kHeight - kMarginBottom + 20)
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">"
      << fmt_tick(x_hi) << "</text>\n";
  svg << "<text x=\"" << (kMarginLeft - 8) << "\" y=\""
      << fmt(y_axis.to_pixels(y_lo))
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
      << fmt_tick(y_lo) << "</text>\n";
  svg << "<text x=\"" << (kMarginLeft - 8) << "\" y=\""
      << fmt(y_axis.to_pixels(y_hi))
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
      << fmt_tick(y_hi) << "</text>\n";

  // model curve
  svg << "<polyline fill=\"none\" stroke=\"" << kCurveColor
      << "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < curve_x.size(); ++i) {
    if (i > 0) svg << ' ';
    svg << fmt(x_axis.to_pixels(curve_x[i])) << ','
        << fmt(y_axis.to_pixels(curve_y[static_cast<Eigen::Index>(i)]));
  }
  svg << "\"/>\n";

  // scatter
  for (Eigen::Index i = 0; i < dataset.size(); ++i) {
    const bool wanted = dataset.mask[static_cast<std::size_t>(i)] == Label::Wanted;
    svg << "<circle cx=\"" << fmt(x_axis.to_pixels(dataset.xs[i])) << "\" cy=\""
        << fmt(y_axis.to_pixels(dataset.ys[i])) << "\" r=\"3\" fill=\""
        << (wanted ? kWantedColor : kUnwantedColor) << "\" fill-opacity=\"0.8\"/>\n";
  }

  // legend
  const bool has_unwanted = dataset.count(Label::Unwanted) > 0;
  double legend_y = kMarginTop + 16;
  const int legend_x = kWidth - kMarginRight - 150;
  const auto legend_entry = [&](const char* color, const std::string& text,
                                bool circle) {
    if (circle)
      svg << "<circle cx=\"" << legend_x << "\" cy=\"" << fmt(legend_y - 4)
          << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    else
      svg << "<line x1=\"" << (legend_x - 6) << "\" y1=\"" << fmt(legend_y - 4)
          << "\" x2=\"" << (legend_x + 6) << "\" y2=\"" << fmt(legend_y - 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << (legend_x + 12) << "\" y=\"" << fmt(legend_y)
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << text
        << "</text>\n";
    legend_y += 18;
  };
  legend_entry(kWantedColor, "wanted", true);
  if (has_unwanted) legend_entry(kUnwantedColor, "unwanted", true);
  legend_entry(kCurveColor, "model", false);

  svg << "</svg>\n";
  return svg.str();
}

void write_plot(const Dataset& dataset, const PolynomialModel& model,
                const std::string& title, const std::string& path) {
  const std::string body = render_plot(dataset, model, title);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("write_plot: cannot open '" + path + "' for writing");
  out << body;
  if (!out) throw ConfigError("write_plot: write to '" + path + "' failed");
}

}  // namespace fairfit
