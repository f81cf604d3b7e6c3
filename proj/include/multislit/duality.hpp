#pragma once

// Wave-particle duality relations and randomized verification sweeps.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "multislit/quantum_core.hpp"
#include "multislit/wavepacket.hpp"

namespace multislit {

/// Violations below this are attributed to discretization and the finite
/// sigma/d ratio.
inline constexpr double kDualityTolerance = 5e-3;

struct DualityReport {
  std::size_t index = 0;
  int n_slits = 3;
  double d_q = 0.0;
  double v = 0.0;
  double lhs = 0.0;
  bool bound_satisfied = false;
  /// Unequal spacing, where the relation is expected to hold strictly.
  bool strict = false;
  double slack = 0.0;
  bool d_q_in_range = true;
  /// Visibility of the equally spaced twin (unequal sweeps only).
  std::optional<double> v_equal;
};

/// V + 2 D_Q / (3 - D_Q).
double duality_lhs_three(double v, double d_q);
/// D_Q + 2 V / (3 - V).
double duality_lhs_three_alt(double v, double d_q);
/// V + D_Q.
double duality_lhs_two(double v, double d_q);

/// V^2 + D^2 with D the Englert distinguishability; needs p = (1/2, 1/2).
double englert_check(double v, const DetectorConfig& config2);
/// P^2 + V^2 with P = |p1 - p2|.
double greenberger_yasin_check(double v, double p1, double p2);

/// Builds a report for two or three slits. `strict` selects `<` over `<=`.
DualityReport make_duality_report(int n_slits, double d_q, double v,
                                  bool strict = false,
                                  double tolerance = kDualityTolerance);

/// Flat (uniform) sample from the probability simplex of dimension n.
std::vector<double> sample_simplex(std::size_t n, std::mt19937_64& rng);

/// Simulates the pattern on the default window and extracts the visibility
/// of `fringe_index`. A pattern without fringes has visibility 0.
double simulate_visibility(const SlitGeometry& geom, const DetectorConfig& det,
                           int fringe_index = 1,
                           int samples_per_period = kDefaultSamplesPerPeriod);

enum class GeometryMode { kEqual, kUnequal };

struct SweepOptions {
  std::size_t n_configs = 1000;
  std::uint64_t seed = 0;
  GeometryMode mode = GeometryMode::kEqual;
  double spacing = kDefaultSpacing;
  double sigma_over_d = kDefaultSigmaOverD;
  PhysicalConstants constants{};
  double ratio_min = 1.2;
  double ratio_max = 3.0;
  int samples_per_period = kDefaultSamplesPerPeriod;
  int fringe_index = 1;
  double tolerance = kDualityTolerance;
  /// Worker threads; 0 picks the hardware concurrency. Results do not
  /// depend on this.
  unsigned threads = 0;
};

/// One three-slit config per index: three random detector states, flat
/// random priors, equal spacing d or (d, r d) with r drawn from
/// [ratio_min, ratio_max]. Unequal configs also simulate their equally
/// spaced twin (l1 = l2 = d, same evolution time).
std::vector<DualityReport> sweep_duality(const SweepOptions& options);

}  // namespace multislit
