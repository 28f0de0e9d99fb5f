#include "tsbandit/cli/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace tsb::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 200.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Series {
  std::string id;
  std::vector<const OutputRecord*> points;
};

std::string escape_xml(const std::string& s) {
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

std::string fixed(double v, int digits = 2) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, v);
  return buffer;
}

// 1, 2 or 5 times a power of ten, giving about `target` ticks over [0, hi].
double nice_step(double hi, int target) {
  const double raw = hi / target;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * magnitude >= raw) return m * magnitude;
  }
  return 10.0 * magnitude;
}

std::string tick_label(double v) {
  if (v >= 1e4 && std::abs(v - std::round(v)) < 1e-9) {
    const int exponent = static_cast<int>(std::floor(std::log10(v)));
    const double mantissa = v / std::pow(10.0, exponent);
    if (std::abs(mantissa - 1.0) < 1e-9) return "1e" + std::to_string(exponent);
    return fixed(mantissa, 1) + "e" + std::to_string(exponent);
  }
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

std::string render_regret_svg(const std::vector<OutputRecord>& records, const std::string& title) {
  std::vector<Series> series;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    auto [it, inserted] = index.emplace(r.experiment_id, series.size());
    if (inserted) series.push_back({r.experiment_id, {}});
    series[it->second].points.push_back(&r);
  }
  for (auto& s : series) {
    std::stable_sort(s.points.begin(), s.points.end(),
                     [](const OutputRecord* a, const OutputRecord* b) { return a->t < b->t; });
  }

  double t_min = 1e300, t_max = 0.0, y_max = 0.0;
  for (const auto& r : records) {
    t_min = std::min(t_min, static_cast<double>(r.t));
    t_max = std::max(t_max, static_cast<double>(r.t));
    y_max = std::max(y_max, r.mean_cum_regret + r.ci95);
  }
  if (records.empty()) t_min = t_max = 1.0;
  const bool log_x = t_min >= 1.0 && t_max >= 10.0 * t_min;
  auto x_coord = [&](double t) {
    const double lo = log_x ? std::log10(t_min) : t_min;
    const double hi = log_x ? std::log10(t_max) : t_max;
    const double v = log_x ? std::log10(t) : t;
    const double frac = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    return kLeft + frac * (kWidth - kLeft - kRight);
  };
  if (!(y_max > 0.0)) y_max = 1.0;
  const double y_step = nice_step(y_max, 5);
  const double y_top = std::ceil(y_max / y_step) * y_step;
  auto y_coord = [&](double y) { return kTop + (1.0 - y / y_top) * (kHeight - kTop - kBottom); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << (kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape_xml(title) << "</text>\n";

  // Axes and ticks.
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  svg << "<g stroke=\"black\" fill=\"none\">\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0 << "\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1 << "\"/>\n"
      << "</g>\n";
  for (double y = 0.0; y <= y_top + 1e-9 * y_top; y += y_step) {
    const double py = y_coord(y);
    svg << "<line x1=\"" << x0 - 5 << "\" y1=\"" << fixed(py) << "\" x2=\"" << x0 << "\" y2=\""
        << fixed(py) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << x0 - 8 << "\" y=\"" << fixed(py + 4) << "\" text-anchor=\"end\">"
        << tick_label(y) << "</text>\n";
  }
  std::vector<double> x_ticks;
  if (log_x) {
    for (double p = std::pow(10.0, std::ceil(std::log10(t_min))); p <= t_max * (1 + 1e-12); p *= 10.0) {
      x_ticks.push_back(p);
    }
  } else if (t_max > t_min) {
    const double step = nice_step(t_max - t_min, 5);
    for (double t = std::ceil(t_min / step) * step; t <= t_max + 1e-9; t += step) x_ticks.push_back(t);
  } else {
    x_ticks.push_back(t_min);
  }
  for (double t : x_ticks) {
    const double px = x_coord(t);
    svg << "<line x1=\"" << fixed(px) << "\" y1=\"" << y0 << "\" x2=\"" << fixed(px) << "\" y2=\""
        << y0 + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fixed(px) << "\" y=\"" << y0 + 20 << "\" text-anchor=\"middle\">"
        << tick_label(t) << "</text>\n";
  }
  svg << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">round t" << (log_x ? " (log scale)" : "") << "</text>\n"
      << "<text x=\"20\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (y0 + y1) / 2 << ")\">mean cumulative regret</text>\n";

  // Bands, curves, legend.
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPalette.size()];
    const auto& pts = series[s].points;
    svg << "<g class=\"series\" data-experiment=\"" << escape_xml(series[s].id) << "\">\n";
    svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (const auto* p : pts) {
      svg << fixed(x_coord(static_cast<double>(p->t))) << ',' << fixed(y_coord(p->mean_cum_regret + p->ci95)) << ' ';
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      svg << fixed(x_coord(static_cast<double>((*it)->t))) << ','
          << fixed(y_coord(std::max(0.0, (*it)->mean_cum_regret - (*it)->ci95))) << ' ';
    }
    svg << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) svg << ' ';
      svg << fixed(x_coord(static_cast<double>(pts[i]->t))) << ',' << fixed(y_coord(pts[i]->mean_cum_regret));
    }
    svg << "\"/>\n";
    for (const auto* p : pts) {
      svg << "<circle cx=\"" << fixed(x_coord(static_cast<double>(p->t))) << "\" cy=\""
          << fixed(y_coord(p->mean_cum_regret)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 10 + 22.0 * static_cast<double>(s);
    svg << "<line x1=\"" << x1 + 15 << "\" y1=\"" << ly << "\" x2=\"" << x1 + 40 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n"
        << "<text x=\"" << x1 + 46 << "\" y=\"" << ly + 4 << "\">" << escape_xml(series[s].id)
        << "</text>\n</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace tsb::cli
