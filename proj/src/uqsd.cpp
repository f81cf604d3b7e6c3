#include "multislit/uqsd.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "multislit/errors.hpp"

namespace multislit {
namespace {

void check_two_priors(double p1, double p2) {
  const std::array<double, 2> priors{p1, p2};
  validate_priors(priors);
}

// Coordinates of psi in the orthonormal pair (e0, e1).
Eigen::Vector2cd coordinates(const std::array<DetectorState, 2>& basis,
                             const DetectorState& psi) {
  return {inner_product(basis[0], psi), inner_product(basis[1], psi)};
}

}  // namespace

double Povm2::probability(Outcome k, const DetectorState& psi) const {
  const Eigen::Vector2cd v = coordinates(basis, psi);
  return (v.adjoint() * elements[k] * v)(0, 0).real();
}

double idp_limit(const DetectorState& p, const DetectorState& q) {
  return 1.0 - overlap(p, q).magnitude;
}

Povm2 uqsd_two_state_povm(const DetectorState& p, const DetectorState& q) {
  const Complex c = inner_product(p, q);
  const double mag = std::abs(c);
  if (mag >= 1.0 - kNormTolerance) {
    throw NumericError("no unambiguous discrimination possible");
  }

  // Gram-Schmidt: q = c p + s p_perp.
  std::vector<Complex> residual(q.dim());
  for (std::size_t i = 0; i < q.dim(); ++i) residual[i] = q[i] - c * p[i];
  const DetectorState p_perp(std::move(residual));
  const double s = std::abs(inner_product(p_perp, q));

  // In the {p, p_perp} basis: q = (c, s), q_perp = (-s, conj(c)).
  const Eigen::Vector2cd q_perp(-s, std::conj(c));
  const Eigen::Vector2cd e1(0.0, 1.0);
  const double weight = (1.0 - mag) / (s * s);

  Povm2 povm{{}, {p, p_perp}};
  povm.elements[Povm2::kSucceedFirst] = weight * q_perp * q_perp.adjoint();
  povm.elements[Povm2::kSucceedSecond] = weight * e1 * e1.adjoint();
  povm.elements[Povm2::kFail] = Eigen::Matrix2cd::Identity() -
                                povm.elements[Povm2::kSucceedFirst] -
                                povm.elements[Povm2::kSucceedSecond];
  return povm;
}

double distinguishability(const DetectorConfig& config) {
  const std::size_t n = config.size();
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pair_sum += std::sqrt(config.prior(i) * config.prior(j)) *
                  overlap(config.state(i), config.state(j)).magnitude;
    }
  }
  // The ordered-pair sum counts each unordered pair twice.
  return 1.0 - 2.0 * pair_sum / static_cast<double>(n - 1);
}

bool distinguishability_in_range(double d_q) {
  return d_q >= -kNormTolerance && d_q <= 1.0 + kNormTolerance;
}

double englert_distinguishability(const DetectorConfig& config) {
  if (config.size() != 2) {
    throw InvalidArgument("Englert distinguishability needs exactly two slits");
  }
  const double c = overlap(config.state(0), config.state(1)).magnitude;
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

double predictability(double p1, double p2) {
  check_two_priors(p1, p2);
  return std::abs(p1 - p2);
}

double reduced_distinguishability(double p1, double p2) {
  check_two_priors(p1, p2);
  return 1.0 - 2.0 * std::sqrt(p1 * p2);
}

}  // namespace multislit
