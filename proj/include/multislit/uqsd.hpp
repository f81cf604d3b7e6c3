#pragma once

// Path distinguishability measures built on unambiguous state discrimination.

#include <array>

#include <Eigen/Dense>

#include "multislit/quantum_core.hpp"

namespace multislit {

/// Three-outcome unambiguous measurement on span{p, q}.
///
/// Operators are 2x2 matrices in the orthonormal basis {p, p_perp} stored in
/// `basis`. `succeed_first` never fires on q, `succeed_second` never fires
/// on p.
struct Povm2 {
  enum Outcome { kSucceedFirst = 0, kSucceedSecond = 1, kFail = 2 };

  std::array<Eigen::Matrix2cd, 3> elements;
  std::array<DetectorState, 2> basis;

  const Eigen::Matrix2cd& succeed_first() const { return elements[kSucceedFirst]; }
  const Eigen::Matrix2cd& succeed_second() const { return elements[kSucceedSecond]; }
  const Eigen::Matrix2cd& fail() const { return elements[kFail]; }

  /// <psi| P E_k P |psi>, with P the projector onto the span.
  double probability(Outcome k, const DetectorState& psi) const;
};

/// Maximum unambiguous success probability for two equiprobable pure
/// states: 1 - |<p|q>|.
double idp_limit(const DetectorState& p, const DetectorState& q);

/// Optimal equal-prior unambiguous discrimination of p and q. Throws
/// NumericError when the states are parallel.
Povm2 uqsd_two_state_povm(const DetectorState& p, const DetectorState& q);

/// D_Q = 1 - 2/(N-1) * sum_{i<j} sqrt(p_i p_j) |<d_i|d_j>|.
///
/// Returned unclamped: for N >= 4 the value can leave [0, 1]; see
/// distinguishability_in_range().
double distinguishability(const DetectorConfig& config);

/// True when `d_q` lies in [0, 1] up to rounding.
bool distinguishability_in_range(double d_q);

/// sqrt(1 - |<d_1|d_2>|^2). Requires a two-slit config.
double englert_distinguishability(const DetectorConfig& config);

/// |p1 - p2|.
double predictability(double p1, double p2);

/// 1 - 2 sqrt(p1 p2): D_Q when both detector states coincide.
double reduced_distinguishability(double p1, double p2);

}  // namespace multislit
