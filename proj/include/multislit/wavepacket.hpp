#pragma once

// Free Gaussian evolution behind an N-slit mask and the detector-conditioned
// screen intensity.
//
// Each slit launches a Gaussian packet of width epsilon. After a time t the
// packets have width sigma, sigma^2 = eps^2 + (hbar t / 2 m eps)^2, and the
// cross terms oscillate at a rate set by Omega^2 = eps^4 + (hbar t / 2 m)^2.
// Two independent routes to |Psi(x,t)|^2 are provided: the expanded
// three-slit closed form and a Gram-matrix sum over the evolved packets.

#include <complex>
#include <limits>
#include <vector>

#include "multislit/quantum_core.hpp"

namespace multislit {

/// Natural-unit defaults: hbar = m = eps = 1.
inline constexpr double kDefaultWidth = 1.0;
inline constexpr double kDefaultMass = 1.0;
inline constexpr double kDefaultHbar = 1.0;
/// Neighbouring slits 16 widths apart: the launched packets overlap by
/// exp(-16^2/8) ~ 1e-14, so the initial state is normalized to that level.
inline constexpr double kDefaultSpacing = 16.0;
inline constexpr double kDefaultSigmaOverD = 200.0;
inline constexpr int kDefaultSamplesPerPeriod = 64;

struct PhysicalConstants {
  double width = kDefaultWidth;
  double mass = kDefaultMass;
  double hbar = kDefaultHbar;
};

/// Slit centres on the x axis plus the free-evolution parameters.
class SlitGeometry {
 public:
  SlitGeometry(std::vector<double> positions, double width, double mass,
               double hbar, double time);
  SlitGeometry(std::vector<double> positions, PhysicalConstants constants,
               double time);

  /// Slits at (+l1, 0, -l2).
  static SlitGeometry three_slit(double l1, double l2, double time,
                                 PhysicalConstants constants = {});
  /// n slits with spacing d in decreasing order, slit n/2 at the origin:
  /// three slits land at (+d, 0, -d), two at (+d, 0).
  static SlitGeometry equally_spaced(std::size_t n, double d, double time,
                                     PhysicalConstants constants = {});

  std::size_t size() const noexcept { return positions_.size(); }
  const std::vector<double>& positions() const noexcept { return positions_; }
  double width() const noexcept { return width_; }
  double mass() const noexcept { return mass_; }
  double hbar() const noexcept { return hbar_; }
  double time() const noexcept { return time_; }
  PhysicalConstants constants() const { return {width_, mass_, hbar_}; }

  double sigma() const;
  double omega_squared() const;
  /// Smallest gap between neighbouring slits.
  double min_spacing() const;
  /// Spatial period 8 pi m Omega^2 / (hbar t d_min) of the nearest-neighbour
  /// cross term; +infinity at t = 0.
  double fringe_period() const;

  SlitGeometry at_time(double time) const;
  SlitGeometry with_positions(std::vector<double> positions) const;

 private:
  std::vector<double> positions_;
  double width_;
  double mass_;
  double hbar_;
  double time_;
};

/// Evolution time at which sigma / d equals `sigma_over_d`.
double time_for_sigma_over_d(double sigma_over_d, double d,
                             PhysicalConstants constants = {});

/// Sampled screen intensity.
///
/// `background` holds the decohered intensity sum_i p_i |psi_i(x)|^2 on the
/// same grid (empty when unknown); fringe analysis divides by it to strip
/// the slowly varying Gaussian envelope.
struct IntensityPattern {
  std::vector<double> xs;
  std::vector<double> intensities;
  std::vector<double> background;
  double sigma = std::numeric_limits<double>::infinity();
  double fringe_period = std::numeric_limits<double>::infinity();
};

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// Evolved packet launched from `center`.
Complex gaussian_amplitude(double x, double center, const SlitGeometry& geom);

/// Expanded three-slit intensity, written in terms of |<d_i|d_j>|, the
/// overlap phases theta_k and the offsets beta_k.
double intensity_closed_form(double x, const SlitGeometry& geom,
                             const DetectorConfig& det);

/// conj(psi_i(x)) psi_j(x) for packets launched from the two centres.
Complex packet_product(double x, double center_i, double center_j,
                       const SlitGeometry& geom);

/// sum_ij sqrt(p_i p_j) conj(psi_i) psi_j <d_i|d_j> for any slit count.
double intensity_oracle(double x, const SlitGeometry& geom,
                        const DetectorConfig& det);

/// sum_i p_i |psi_i(x)|^2.
double incoherent_intensity(double x, const SlitGeometry& geom,
                            const DetectorConfig& det);

/// Default analysis window [0.25, 3.25] fringe periods (skips the central
/// fringe).
Window default_window(const SlitGeometry& geom);

/// Uniform grid over `window` with at least `samples_per_period` points per
/// fringe period. Uses the closed form for three slits and the oracle
/// otherwise.
IntensityPattern sample_pattern(const SlitGeometry& geom,
                                const DetectorConfig& det, Window window,
                                int samples_per_period = kDefaultSamplesPerPeriod);

}  // namespace multislit
