#pragma once

// Fringe visibility: extraction from sampled patterns and the analytic
// three-slit estimates.

#include "multislit/quantum_core.hpp"
#include "multislit/wavepacket.hpp"

namespace multislit {

/// Contrast of one fringe. When the pattern carries a background, i_max and
/// i_min are background-normalized (dimensionless) intensities.
struct VisibilityReport {
  double v = 0.0;
  double i_max = 0.0;
  double i_min = 0.0;
  double x_max = 0.0;
  double x_min = 0.0;
  int fringe_index = 1;
};

/// Visibility (I_max - I_min) / (I_max + I_min) of fringe `fringe_index`.
///
/// The fringe-th maximum is the brightest local maximum whose position lies
/// in [(n - 1/2) P, (n + 1/2) P), with P the pattern's fringe period; the
/// paired minimum is the darkest local minimum in (x_max, x_max + P].
/// Extrema are refined by three-point parabolic interpolation. If the
/// pattern has a background, the intensity is divided by it first.
///
/// Throws NoFringesError for a flat pattern and InvalidArgument when the
/// requested fringe is not covered by the sampled window.
VisibilityReport extract_visibility(const IntensityPattern& pattern,
                                    int fringe_index = 1);

/// Closed-form ideal visibility at screen position x for equally spaced
/// slits (overlap phases ignored).
double ideal_visibility(double x, const SlitGeometry& geom,
                        const DetectorConfig& det);

/// 3T/(2+T), T = sum_{i<j} sqrt(p_i p_j)|<d_i|d_j>|, for three slits;
/// 1 - D_Q = 2 sqrt(p_1 p_2)|<d_1|d_2>| for two.
double visibility_bound(const DetectorConfig& det);

}  // namespace multislit
