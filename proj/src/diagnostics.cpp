#include "gevstat/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gevstat/errors.hpp"
#include "gevstat/returns.hpp"

namespace gevstat {

std::string_view to_string(PlotKind k) noexcept {
  switch (k) {
    case PlotKind::ProbabilityPlot:
      return "probability_plot";
    case PlotKind::QuantilePlot:
      return "quantile_plot";
    case PlotKind::ReturnLevelCurve:
      return "return_level_curve";
    case PlotKind::DensityOverlay:
      return "density_overlay";
  }
  return "?";
}

namespace {

std::vector<double> sorted(std::span<const double> x) {
  if (x.empty()) throw InputError("diagnostics: empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::stable_sort(s.begin(), s.end());
  return s;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

PlotSeries probability_plot(std::span<const double> x, const GevParams& params) {
  const auto s = sorted(x);
  const double m1 = static_cast<double>(s.size()) + 1.0;
  PlotSeries out;
  out.kind = PlotKind::ProbabilityPlot;
  out.reference = "unit diagonal; x = empirical i/(m+1), y = fitted cdf";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.points.push_back({static_cast<double>(i + 1) / m1, cdf(params, s[i])});
  }
  return out;
}

PlotSeries quantile_plot(std::span<const double> x, const GevParams& params) {
  const auto s = sorted(x);
  const double m1 = static_cast<double>(s.size()) + 1.0;
  PlotSeries out;
  out.kind = PlotKind::QuantilePlot;
  out.reference = "unit diagonal; x = fitted quantile at i/(m+1), y = ordered observation";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.points.push_back({quantile(params, static_cast<double>(i + 1) / m1), s[i]});
  }
  return out;
}

PlotSeries return_curve(const FitResult& fit, std::span<const double> periods, double tau,
                        Sidedness sided, const std::optional<GevParams>& corrected) {
  std::vector<double> ps(periods.begin(), periods.end());
  std::sort(ps.begin(), ps.end());
  PlotSeries out;
  out.kind = PlotKind::ReturnLevelCurve;
  out.reference = "x = return period (plot on a log scale), y = return level";
  std::vector<Interval> bands;
  for (double period : ps) {
    if (!(period > 1.0)) throw DomainError("return_curve: periods must exceed 1");
    const auto est = return_level_ci(fit, 1.0 / period, tau, sided, corrected);
    out.points.push_back({period, est.level});
    bands.push_back(est.ci);
  }
  out.bands = std::move(bands);
  return out;
}

int sturges_bins(std::size_t n) {
  if (n <= 1) return 1;
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
}

PlotSeries density_overlay(std::span<const double> x, const GevParams& params,
                           std::optional<int> bins) {
  const auto s = sorted(x);
  const int k = bins.value_or(sturges_bins(s.size()));
  if (k < 1) throw DomainError("density_overlay: need at least one bin");
  double lo = s.front();
  double width = (s.back() - s.front()) / k;
  if (!(width > 0.0)) {
    width = 1.0;
    lo -= 0.5 * k;
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (double v : s) {
    auto idx = static_cast<std::size_t>(std::floor((v - lo) / width));
    counts[std::min(idx, counts.size() - 1)]++;
  }
  PlotSeries out;
  out.kind = PlotKind::DensityOverlay;
  out.bin_width = width;
  out.reference = "histogram density per bin (width " + num(width) + "); model = fitted pdf";
  const double scale = 1.0 / (static_cast<double>(s.size()) * width);
  for (int b = 0; b < k; ++b) {
    const double mid = lo + (b + 0.5) * width;
    out.points.push_back({mid, static_cast<double>(counts[static_cast<std::size_t>(b)]) * scale});
    out.model.push_back(pdf(params, mid));
  }
  return out;
}

std::string to_csv(const PlotSeries& series) {
  std::ostringstream os;
  os << "kind,x,y,lower,upper\n";
  const auto kind = to_string(series.kind);
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    const auto& p = series.points[i];
    os << kind << ',' << num(p.x) << ',' << num(p.y) << ',';
    if (series.bands) os << num((*series.bands)[i].lower) << ',' << num((*series.bands)[i].upper);
    else os << ',';
    os << '\n';
  }
  for (std::size_t i = 0; i < series.model.size(); ++i) {
    os << "density_model," << num(series.points[i].x) << ',' << num(series.model[i]) << ",,\n";
  }
  return os.str();
}

std::string to_svg(const PlotSeries& series) {
  constexpr double W = 640.0, H = 480.0, L = 60.0, R = 20.0, T = 30.0, B = 50.0;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto grow = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x0 = std::min(x0, x), x1 = std::max(x1, x);
    y0 = std::min(y0, y), y1 = std::max(y1, y);
  };
  const bool log_x = series.kind == PlotKind::ReturnLevelCurve;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    const auto& p = series.points[i];
    grow(tx(p.x), p.y);
    if (series.bands) {
      grow(tx(p.x), (*series.bands)[i].lower);
      grow(tx(p.x), (*series.bands)[i].upper);
    }
    if (i < series.model.size()) grow(p.x, series.model[i]);
  }
  if (series.kind == PlotKind::DensityOverlay) {
    y0 = 0.0;
    x0 -= 0.5 * series.bin_width;
    x1 += 0.5 * series.bin_width;
  }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  auto sx = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * (W - L - R); };
  auto sxr = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\" width=\"640\" "
        "height=\"480\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  os << "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << to_string(series.kind) << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << num(log_x ? std::pow(10.0, x0) : x0)
     << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
     << num(log_x ? std::pow(10.0, x1) : x1) << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">"
     << num(y0) << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
     << num(y1) << "</text>\n";

  switch (series.kind) {
    case PlotKind::ProbabilityPlot:
    case PlotKind::QuantilePlot: {
      const double a = std::max(x0, y0), b = std::min(x1, y1);
      if (b > a) {
        os << "<line x1=\"" << sxr(a) << "\" y1=\"" << sy(a) << "\" x2=\"" << sxr(b) << "\" y2=\""
           << sy(b) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
      }
      for (const auto& p : series.points) {
        os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
           << "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n";
      }
      break;
    }
    case PlotKind::ReturnLevelCurve: {
      auto line = [&](auto value, const char* style) {
        os << "<polyline fill=\"none\" " << style << " points=\"";
        for (std::size_t i = 0; i < series.points.size(); ++i) {
          os << sx(series.points[i].x) << ',' << sy(value(i)) << ' ';
        }
        os << "\"/>\n";
      };
      line([&](std::size_t i) { return series.points[i].y; }, "stroke=\"black\"");
      if (series.bands) {
        line([&](std::size_t i) { return (*series.bands)[i].lower; },
             "stroke=\"steelblue\" stroke-dasharray=\"4 3\"");
        line([&](std::size_t i) { return (*series.bands)[i].upper; },
             "stroke=\"steelblue\" stroke-dasharray=\"4 3\"");
      }
      break;
    }
    case PlotKind::DensityOverlay: {
      for (const auto& p : series.points) {
        const double left = sxr(p.x - 0.5 * series.bin_width);
        const double right = sxr(p.x + 0.5 * series.bin_width);
        os << "<rect x=\"" << left << "\" y=\"" << sy(p.y) << "\" width=\"" << right - left
           << "\" height=\"" << sy(0.0) - sy(p.y)
           << "\" fill=\"lightgray\" stroke=\"black\"/>\n";
      }
      os << "<polyline fill=\"none\" stroke=\"firebrick\" points=\"";
      for (std::size_t i = 0; i < series.model.size(); ++i) {
        os << sxr(series.points[i].x) << ',' << sy(series.model[i]) << ' ';
      }
      os << "\"/>\n";
      break;
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace gevstat
