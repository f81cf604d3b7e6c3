#include "multislit/quantum_core.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "multislit/errors.hpp"

namespace multislit {

DetectorState::DetectorState(std::vector<Complex> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) {
    throw InvalidArgument("detector state needs at least one amplitude");
  }
  double norm2 = 0.0;
  for (const auto& a : amplitudes_) norm2 += std::norm(a);
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("detector state must be a finite non-zero vector");
  }
  for (auto& a : amplitudes_) a /= norm;
}

DetectorState DetectorState::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw InvalidArgument("basis index out of range");
  std::vector<Complex> amps(dim);
  amps[k] = 1.0;
  return DetectorState(std::move(amps));
}

DetectorState DetectorState::with_global_phase(double phase) const {
  std::vector<Complex> amps = amplitudes_;
  const Complex factor = std::polar(1.0, phase);
  for (auto& a : amps) a *= factor;
  return DetectorState(std::move(amps));
}

Complex inner_product(const DetectorState& a, const DetectorState& b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()));
  }
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

Overlap overlap(const DetectorState& a, const DetectorState& b) {
  const Complex z = inner_product(a, b);
  Overlap out;
  out.magnitude = std::min(std::abs(z), 1.0);
  // std::arg returns [-pi, pi]; fold -pi onto the canonical +pi.
  out.phase = out.magnitude == 0.0 ? 0.0 : std::arg(z);
  if (out.phase <= -std::numbers::pi) out.phase = std::numbers::pi;
  return out;
}

DetectorState random_state(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw InvalidArgument("random_state: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> amps(dim);
  for (auto& a : amps) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    a = Complex(re, im);
  }
  return DetectorState(std::move(amps));
}

void validate_priors(std::span<const double> priors) {
  double sum = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidArgument("slit probabilities must be finite and >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw InvalidArgument("slit probabilities must sum to 1 (got " +
                          std::to_string(sum) + ")");
  }
}

DetectorConfig::DetectorConfig(std::vector<DetectorState> states,
                               std::vector<double> priors)
    : states_(std::move(states)), priors_(std::move(priors)) {
  if (states_.size() < 2) {
    throw InvalidArgument("detector config needs at least two slits");
  }
  if (priors_.size() != states_.size()) {
    throw InvalidArgument("one prior per detector state is required");
  }
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw InvalidArgument("detector states must share one dimension");
    }
  }
  validate_priors(priors_);
}

DetectorConfig DetectorConfig::uniform(std::vector<DetectorState> states) {
  const std::size_t n = states.size();
  std::vector<double> priors(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  return DetectorConfig(std::move(states), std::move(priors));
}

Eigen::MatrixXcd DetectorConfig::gram_matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = inner_product(states_[i], states_[j]);
    }
  }
  return g;
}

DetectorConfig DetectorConfig::permuted(
    std::span<const std::size_t> order) const {
  if (order.size() != size()) {
    throw InvalidArgument("permutation length must equal the slit count");
  }
  std::vector<bool> seen(size(), false);
  std::vector<DetectorState> states;
  std::vector<double> priors;
  for (std::size_t k : order) {
    if (k >= size() || seen[k]) throw InvalidArgument("not a permutation");
    seen[k] = true;
    states.push_back(states_[k]);
    priors.push_back(priors_[k]);
  }
  return DetectorConfig(std::move(states), std::move(priors));
}

}  // namespace multislit
