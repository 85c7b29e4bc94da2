#include "ttrace/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ttrace::svg {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                             "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string line_chart(const std::vector<Series>& series, const PlotOptions& opts) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double lo = opts.log_axes ? std::log10(opts.log_floor) : 0.0;
  const double hi = opts.log_axes ? 0.0 : 1.0;

  auto scale = [&](double v) {
    if (opts.log_axes) v = std::log10(std::max(v, opts.log_floor));
    return (std::clamp(v, lo, hi) - lo) / (hi - lo);
  };
  auto sx = [&](double v) { return kLeft + scale(v) * plot_w; };
  auto sy = [&](double v) { return kTop + (1.0 - scale(v)) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(opts.title) << "</text>\n";

  // Grid and tick labels.
  std::vector<double> ticks;
  if (opts.log_axes) {
    for (double e = std::ceil(lo); e <= hi + 1e-9; e += 1.0) ticks.push_back(std::pow(10.0, e));
  } else {
    for (int k = 0; k <= 5; ++k) ticks.push_back(k / 5.0);
  }
  for (double t : ticks) {
    char label[32];
    std::snprintf(label, sizeof label, opts.log_axes ? "%.0e" : "%.1f", t);
    out << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(sx(t)) << "\" y2=\""
        << num(kTop + plot_h) << "\" stroke=\"#ddd\"/>\n";
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(kLeft + plot_w)
        << "\" y2=\"" << num(sy(t)) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << label << "</text>\n";
    out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">"
        << label << "</text>\n";
  }
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" text-anchor=\"middle\">" << escape(opts.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << num(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(opts.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % kColors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[s].points) out << num(sx(x)) << ',' << num(sy(y)) << ' ';
    out << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(s);
    out << "<line x1=\"" << num(kLeft + plot_w + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(kLeft + plot_w + 36) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(kLeft + plot_w + 42) << "\" y=\"" << num(ly + 4) << "\">"
        << escape(series[s].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ttrace::svg
