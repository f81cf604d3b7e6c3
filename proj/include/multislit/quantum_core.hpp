#pragma once

// Detector kets, their overlaps, and the prior-weighted which-path detector.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace multislit {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;

/// A normalized pure state of the which-path detector.
///
/// The constructor normalizes its input; zero (or non-finite) vectors are
/// rejected. Instances are immutable.
class DetectorState {
 public:
  explicit DetectorState(std::vector<Complex> amplitudes);
  DetectorState(std::initializer_list<Complex> amplitudes)
      : DetectorState(std::vector<Complex>(amplitudes)) {}

  /// Computational basis ket |k> in a space of dimension `dim`.
  static DetectorState basis(std::size_t dim, std::size_t k);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  /// Same ray, multiplied by exp(i*phase).
  DetectorState with_global_phase(double phase) const;

 private:
  std::vector<Complex> amplitudes_;
};

/// <a|b> split into modulus and argument. The phase lives in (-pi, pi].
struct Overlap {
  double magnitude = 0.0;
  double phase = 0.0;

  Complex value() const { return std::polar(magnitude, phase); }
};

/// Raw inner product <a|b> (antilinear in the first argument).
Complex inner_product(const DetectorState& a, const DetectorState& b);

Overlap overlap(const DetectorState& a, const DetectorState& b);

/// Unit vector drawn uniformly from the complex sphere in C^dim.
DetectorState random_state(std::size_t dim, std::uint64_t seed);

/// Which-path detector: one ket per slit plus the slit probabilities p_i.
class DetectorConfig {
 public:
  DetectorConfig(std::vector<DetectorState> states, std::vector<double> priors);

  /// Equal priors 1/N.
  static DetectorConfig uniform(std::vector<DetectorState> states);

  std::size_t size() const noexcept { return states_.size(); }
  std::size_t dim() const noexcept { return states_.front().dim(); }
  std::span<const DetectorState> states() const noexcept { return states_; }
  std::span<const double> priors() const noexcept { return priors_; }
  const DetectorState& state(std::size_t i) const { return states_.at(i); }
  double prior(std::size_t i) const { return priors_.at(i); }

  /// G(i, j) = <d_i|d_j>.
  Eigen::MatrixXcd gram_matrix() const;

  /// Same detector with slits relabelled: new slit k is old slit order[k].
  DetectorConfig permuted(std::span<const std::size_t> order) const;

 private:
  std::vector<DetectorState> states_;
  std::vector<double> priors_;
};

/// Checks p_i >= 0 and sum p_i = 1 (within kNormTolerance); throws otherwise.
void validate_priors(std::span<const double> priors);

}  // namespace multislit
