#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gevstat/distributions.hpp"
#include "gevstat/inference.hpp"

namespace gevstat {

enum class PlotKind { ProbabilityPlot, QuantilePlot, ReturnLevelCurve, DensityOverlay };

[[nodiscard]] std::string_view to_string(PlotKind k) noexcept;

struct PlotPoint {
  double x;
  double y;
};

// A model-check plot as data. Points are ordered by x.
struct PlotSeries {
  PlotKind kind = PlotKind::ProbabilityPlot;
  std::vector<PlotPoint> points;
  std::optional<std::vector<Interval>> bands;  // per point (return-level curve)
  std::vector<double> model;  // density overlay: fitted pdf at each bin midpoint
  double bin_width = 0.0;     // density overlay only
  std::string reference;
};

// Points (i/(m+1), G(x_(i))) over the sorted sample.
[[nodiscard]] PlotSeries probability_plot(std::span<const double> x, const GevParams& params);
// Points (G^-1(i/(m+1)), x_(i)) over the sorted sample.
[[nodiscard]] PlotSeries quantile_plot(std::span<const double> x, const GevParams& params);

// Return levels with delta-method bands for each period (> 1), sorted by period.
// `corrected` evaluates the levels at bias-corrected parameters.
[[nodiscard]] PlotSeries return_curve(const FitResult& fit, std::span<const double> periods,
                                      double tau = 0.05, Sidedness sided = Sidedness::TwoSided,
                                      const std::optional<GevParams>& corrected = {});

// Sturges' rule: ceil(log2 n) + 1.
[[nodiscard]] int sturges_bins(std::size_t n);

// Area-normalized histogram (points at bin midpoints) plus the fitted density
// at the same midpoints. Throws DomainError if bins < 1.
[[nodiscard]] PlotSeries density_overlay(std::span<const double> x, const GevParams& params,
                                         std::optional<int> bins = std::nullopt);

// CSV with header "kind,x,y,lower,upper". Density overlays add "density_model"
// rows carrying the fitted pdf.
[[nodiscard]] std::string to_csv(const PlotSeries& series);
[[nodiscard]] std::string to_svg(const PlotSeries& series);

}  // namespace gevstat
