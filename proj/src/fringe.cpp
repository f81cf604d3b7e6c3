#include "multislit/fringe.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "multislit/errors.hpp"
#include "multislit/uqsd.hpp"

namespace multislit {
namespace {

constexpr double kFlatTolerance = 1e-14;

struct Extremum {
  double x;
  double value;
};

// Vertex of the parabola through samples k-1, k, k+1.
Extremum refine(const std::vector<double>& xs, const std::vector<double>& f,
                std::size_t k) {
  const double y0 = f[k - 1];
  const double y1 = f[k];
  const double y2 = f[k + 1];
  const double curvature = y0 - 2.0 * y1 + y2;
  if (curvature == 0.0) return {xs[k], y1};
  const double shift = 0.5 * (y0 - y2) / curvature;
  const double step = shift >= 0.0 ? xs[k + 1] - xs[k] : xs[k] - xs[k - 1];
  return {xs[k] + shift * step, y1 - 0.25 * (y0 - y2) * shift};
}

// Among samples of the given kind (local max when `want_max`) with
// lo <= x < hi (lo < x <= hi when `open_left`), the most extreme one.
// Equal values resolve to the smaller x.
std::optional<std::size_t> pick_extremum(const std::vector<double>& xs,
                                         const std::vector<double>& f,
                                         bool want_max, double lo, double hi,
                                         bool open_left) {
  std::optional<std::size_t> best;
  for (std::size_t k = 1; k + 1 < f.size(); ++k) {
    const bool inside = open_left ? (xs[k] > lo && xs[k] <= hi)
                                  : (xs[k] >= lo && xs[k] < hi);
    if (!inside) continue;
    const bool is_extremum = want_max
                                 ? (f[k] > f[k - 1] && f[k] >= f[k + 1])
                                 : (f[k] < f[k - 1] && f[k] <= f[k + 1]);
    if (!is_extremum) continue;
    if (!best || (want_max ? f[k] > f[*best] : f[k] < f[*best])) best = k;
  }
  return best;
}

double pair_coherence(const DetectorConfig& det, std::size_t i, std::size_t j) {
  return std::sqrt(det.prior(i) * det.prior(j)) *
         overlap(det.state(i), det.state(j)).magnitude;
}

}  // namespace

VisibilityReport extract_visibility(const IntensityPattern& pattern,
                                    int fringe_index) {
  const auto& xs = pattern.xs;
  const std::size_t n = xs.size();
  if (fringe_index < 1) throw InvalidArgument("fringe_index must be >= 1");
  if (pattern.intensities.size() != n) {
    throw InvalidArgument("pattern: xs and intensities differ in length");
  }
  if (!pattern.background.empty() && pattern.background.size() != n) {
    throw InvalidArgument("pattern: background differs in length");
  }
  if (n < 3) throw InvalidArgument("pattern needs at least three samples");
  for (std::size_t k = 1; k < n; ++k) {
    if (!(xs[k] > xs[k - 1])) {
      throw InvalidArgument("pattern: xs must be strictly increasing");
    }
  }
  const double period = pattern.fringe_period;
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw InvalidArgument("pattern: fringe period must be finite and > 0");
  }

  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = pattern.intensities[k];
    if (!pattern.background.empty()) {
      if (!(pattern.background[k] > 0.0)) {
        throw NumericError("pattern: background must be positive");
      }
      f[k] /= pattern.background[k];
    }
  }

  const auto [lo_it, hi_it] = std::minmax_element(f.begin(), f.end());
  const double scale = std::max(std::abs(*lo_it), std::abs(*hi_it));
  if (*hi_it - *lo_it <= kFlatTolerance * scale) throw NoFringesError();

  const double fringe_lo = (fringe_index - 0.5) * period;
  const double fringe_hi = (fringe_index + 0.5) * period;
  if (xs.front() > fringe_lo || xs.back() < fringe_hi) {
    throw InvalidArgument("requested fringe outside window");
  }
  const auto k_max = pick_extremum(xs, f, true, fringe_lo, fringe_hi, false);
  if (!k_max) throw NoFringesError();
  const Extremum peak = refine(xs, f, *k_max);

  if (xs.back() < peak.x + period) {
    throw InvalidArgument("requested fringe outside window");
  }
  const auto k_min = pick_extremum(xs, f, false, peak.x, peak.x + period, true);
  if (!k_min) throw NoFringesError();
  const Extremum trough = refine(xs, f, *k_min);

  VisibilityReport report;
  report.fringe_index = fringe_index;
  report.x_max = peak.x;
  report.x_min = trough.x;
  report.i_max = peak.value;
  report.i_min = std::clamp(trough.value, 0.0, peak.value);
  report.v = (report.i_max - report.i_min) / (report.i_max + report.i_min);
  return report;
}

double ideal_visibility(double x, const SlitGeometry& geom,
                        const DetectorConfig& det) {
  if (geom.size() != 3 || det.size() != 3) {
    throw InvalidArgument("ideal visibility is defined for three slits");
  }
  const auto& pos = geom.positions();
  const double l1 = std::abs(pos[0] - pos[1]);
  const double l2 = std::abs(pos[1] - pos[2]);
  if (std::abs(l1 - l2) > 1e-12 * std::max(l1, l2)) {
    throw InvalidArgument("ideal visibility requires equally spaced slits");
  }
  // Slit 1 of the closed form sits at +d.
  const bool reversed = pos[0] < pos[2];
  const std::size_t s1 = reversed ? 2 : 0;
  const std::size_t s3 = reversed ? 0 : 2;

  const double d = l1;
  const double y = x - pos[1];
  const double s2 = geom.sigma() * geom.sigma();
  const double c12 = pair_coherence(det, s1, 1);
  const double c13 = pair_coherence(det, s1, s3);
  const double c23 = pair_coherence(det, 1, s3);
  const double p1 = det.prior(s1);
  const double p2 = det.prior(1);
  const double p3 = det.prior(s3);

  const double coherent = c12 * std::exp(y * d / (2.0 * s2)) +
                          c13 * std::exp(-d * d / (2.0 * s2)) +
                          c23 * std::exp(-y * d / (2.0 * s2));
  const double alpha =
      2.0 * (p2 + (p1 * std::exp(y * d / s2) + p3 * std::exp(-y * d / s2)) *
                      std::exp(-d * d / (2.0 * s2)));
  return 3.0 * coherent / (alpha + coherent);
}

double visibility_bound(const DetectorConfig& det) {
  if (det.size() == 2) return 1.0 - distinguishability(det);
  if (det.size() != 3) {
    throw InvalidArgument("visibility bound is defined for two or three slits");
  }
  const double t = pair_coherence(det, 0, 1) + pair_coherence(det, 0, 2) +
                   pair_coherence(det, 1, 2);
  return 3.0 * t / (2.0 + t);
}

}  // namespace multislit
