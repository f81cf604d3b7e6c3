#include "multislit/wavepacket.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "multislit/errors.hpp"

namespace multislit {
namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be finite and > 0");
  }
}

void require_matching(const SlitGeometry& geom, const DetectorConfig& det) {
  if (geom.size() != det.size()) {
    throw InvalidArgument("slit count mismatch: geometry has " +
                          std::to_string(geom.size()) + " slits, detector " +
                          std::to_string(det.size()));
  }
}

// |A|^2 = 1 / (sqrt(2 pi) sigma).
double squared_prefactor(const SlitGeometry& geom) {
  return 1.0 / (std::sqrt(2.0 * kPi) * geom.sigma());
}

}  // namespace

SlitGeometry::SlitGeometry(std::vector<double> positions, double width,
                           double mass, double hbar, double time)
    : positions_(std::move(positions)),
      width_(width),
      mass_(mass),
      hbar_(hbar),
      time_(time) {
  if (positions_.empty()) throw InvalidArgument("at least one slit required");
  require_positive(width_, "slit width");
  require_positive(mass_, "mass");
  require_positive(hbar_, "hbar");
  if (!(time_ >= 0.0) || !std::isfinite(time_)) {
    throw InvalidArgument("time must be finite and >= 0");
  }
  for (double x : positions_) {
    if (!std::isfinite(x)) throw InvalidArgument("slit positions must be finite");
  }
  if (positions_.size() > 1) {
    const bool increasing = positions_[1] > positions_[0];
    for (std::size_t i = 1; i < positions_.size(); ++i) {
      const bool ok = increasing ? positions_[i] > positions_[i - 1]
                                 : positions_[i] < positions_[i - 1];
      if (!ok) {
        throw InvalidArgument("slit positions must be strictly monotone");
      }
    }
  }
}

SlitGeometry::SlitGeometry(std::vector<double> positions,
                           PhysicalConstants constants, double time)
    : SlitGeometry(std::move(positions), constants.width, constants.mass,
                   constants.hbar, time) {}

SlitGeometry SlitGeometry::three_slit(double l1, double l2, double time,
                                      PhysicalConstants constants) {
  require_positive(l1, "l1");
  require_positive(l2, "l2");
  return SlitGeometry({l1, 0.0, -l2}, constants, time);
}

SlitGeometry SlitGeometry::equally_spaced(std::size_t n, double d, double time,
                                          PhysicalConstants constants) {
  require_positive(d, "slit spacing");
  if (n == 0) throw InvalidArgument("at least one slit required");
  std::vector<double> positions(n);
  const auto middle = static_cast<double>(n / 2);
  for (std::size_t k = 0; k < n; ++k) {
    positions[k] = d * (middle - static_cast<double>(k));
  }
  return SlitGeometry(std::move(positions), constants, time);
}

double SlitGeometry::sigma() const {
  const double spread = hbar_ * time_ / (2.0 * mass_ * width_);
  return std::sqrt(width_ * width_ + spread * spread);
}

double SlitGeometry::omega_squared() const {
  const double w2 = width_ * width_;
  const double rate = hbar_ * time_ / (2.0 * mass_);
  return w2 * w2 + rate * rate;
}

double SlitGeometry::min_spacing() const {
  if (positions_.size() < 2) return std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    gap = std::min(gap, std::abs(positions_[i] - positions_[i - 1]));
  }
  return gap;
}

double SlitGeometry::fringe_period() const {
  const double d = min_spacing();
  if (time_ == 0.0 || !std::isfinite(d)) {
    return std::numeric_limits<double>::infinity();
  }
  return 8.0 * kPi * mass_ * omega_squared() / (hbar_ * time_ * d);
}

SlitGeometry SlitGeometry::at_time(double time) const {
  return SlitGeometry(positions_, width_, mass_, hbar_, time);
}

SlitGeometry SlitGeometry::with_positions(std::vector<double> positions) const {
  return SlitGeometry(std::move(positions), width_, mass_, hbar_, time_);
}

double time_for_sigma_over_d(double sigma_over_d, double d,
                             PhysicalConstants constants) {
  require_positive(sigma_over_d, "sigma_over_d");
  require_positive(d, "slit spacing");
  const double target = sigma_over_d * d;
  const double eps = constants.width;
  if (target < eps) {
    throw InvalidArgument("sigma_over_d * d must be at least the slit width");
  }
  // sigma^2 = eps^2 + (hbar t / 2 m eps)^2
  return 2.0 * constants.mass * eps / constants.hbar *
         std::sqrt(target * target - eps * eps);
}

Complex gaussian_amplitude(double x, double center, const SlitGeometry& geom) {
  const double eps = geom.width();
  const double rate = geom.hbar() * geom.time() / geom.mass();
  const Complex width_term(eps, rate / (2.0 * eps));
  const Complex prefactor = 1.0 / std::sqrt(std::sqrt(2.0 * kPi) * width_term);
  const Complex denom(4.0 * eps * eps, 2.0 * rate);
  const double dx = x - center;
  return prefactor * std::exp(-(dx * dx) / denom);
}

double intensity_closed_form(double x, const SlitGeometry& geom,
                             const DetectorConfig& det) {
  if (geom.size() != 3 || det.size() != 3) {
    throw InvalidArgument("closed-form intensity is defined for three slits");
  }
  // Bring the slits into the (+l1, 0, -l2) order; relabel the detector with
  // them.
  const auto& pos = geom.positions();
  const bool reversed = pos[0] < pos[2];
  const std::array<std::size_t, 3> order =
      reversed ? std::array<std::size_t, 3>{2, 1, 0}
               : std::array<std::size_t, 3>{0, 1, 2};
  const double l1 = pos[order[0]] - pos[order[1]];
  const double l2 = pos[order[1]] - pos[order[2]];
  const double y = x - pos[order[1]];

  const double p1 = det.prior(order[0]);
  const double p2 = det.prior(order[1]);
  const double p3 = det.prior(order[2]);
  const Overlap o12 = overlap(det.state(order[0]), det.state(order[1]));
  const Overlap o23 = overlap(det.state(order[1]), det.state(order[2]));
  const Overlap o13 = overlap(det.state(order[0]), det.state(order[2]));

  const double sigma = geom.sigma();
  const double s2 = sigma * sigma;
  const double omega2 = geom.omega_squared();
  const double ht_m = geom.hbar() * geom.time() / geom.mass();
  const double k = ht_m / (4.0 * omega2);
  const double beta1 = ht_m * l1 * l1 / (8.0 * omega2);
  const double beta2 = ht_m * l2 * l2 / (8.0 * omega2);
  const double beta3 = ht_m * (l2 * l2 - l1 * l1) / (8.0 * omega2);

  const double envelope =
      std::exp(-y * y / (2.0 * s2)) *
      (p1 * std::exp(-(l1 * l1 - 2.0 * y * l1) / (2.0 * s2)) + p2 +
       p3 * std::exp(-(l2 * l2 + 2.0 * y * l2) / (2.0 * s2)));

  const double cross12 =
      2.0 * std::sqrt(p1 * p2) * o12.magnitude *
      std::exp(-(2.0 * y * y + l1 * l1 - 2.0 * y * l1) / (4.0 * s2)) *
      std::cos(y * l1 * k - beta1 + o12.phase);
  const double cross23 =
      2.0 * std::sqrt(p2 * p3) * o23.magnitude *
      std::exp(-(2.0 * y * y + l2 * l2 + 2.0 * y * l2) / (4.0 * s2)) *
      std::cos(y * l2 * k + beta2 + o23.phase);
  const double cross13 =
      2.0 * std::sqrt(p1 * p3) * o13.magnitude *
      std::exp(-(2.0 * y * y + l1 * l1 + l2 * l2 + 2.0 * y * (l2 - l1)) /
               (4.0 * s2)) *
      std::cos(y * (l1 + l2) * k + beta3 + o13.phase);

  return squared_prefactor(geom) * (envelope + cross12 + cross23 + cross13);
}

Complex packet_product(double x, double center_i, double center_j,
                       const SlitGeometry& geom) {
  // conj(psi_i) psi_j with the exponents combined first: the large phases
  // (x - c)^2 Im(1/D) of the two packets cancel analytically, not in
  // floating point.
  const double eps = geom.width();
  const double rate = geom.hbar() * geom.time() / geom.mass();
  const double denom2 = 16.0 * eps * eps * eps * eps + 4.0 * rate * rate;  // |D|^2
  const double di = x - center_i;
  const double dj = x - center_j;
  const double re = -4.0 * eps * eps * (di * di + dj * dj) / denom2;
  const double im = 2.0 * rate * (center_i - center_j) *
                    (2.0 * x - center_i - center_j) / denom2;
  return squared_prefactor(geom) * std::exp(Complex(re, im));
}

double intensity_oracle(double x, const SlitGeometry& geom,
                        const DetectorConfig& det) {
  require_matching(geom, det);
  const std::size_t n = det.size();
  const Eigen::MatrixXcd gram = det.gram_matrix();
  const auto& pos = geom.positions();
  Complex total = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex term = std::sqrt(det.prior(i) * det.prior(j)) *
                           packet_product(x, pos[i], pos[j], geom) *
                           gram(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
      total += term;
      scale += std::abs(term);
    }
  }
  if (std::abs(total.imag()) > 1e-12 * std::max(scale, 1e-300)) {
    throw NumericError("intensity oracle: non-Hermitian residue");
  }
  return total.real();
}

double incoherent_intensity(double x, const SlitGeometry& geom,
                            const DetectorConfig& det) {
  require_matching(geom, det);
  const double sigma = geom.sigma();
  double sum = 0.0;
  for (std::size_t i = 0; i < det.size(); ++i) {
    const double dx = x - geom.positions()[i];
    sum += det.prior(i) * std::exp(-dx * dx / (2.0 * sigma * sigma));
  }
  return squared_prefactor(geom) * sum;
}

Window default_window(const SlitGeometry& geom) {
  const double period = geom.fringe_period();
  return {0.25 * period, 3.25 * period};
}

IntensityPattern sample_pattern(const SlitGeometry& geom,
                                const DetectorConfig& det, Window window,
                                int samples_per_period) {
  require_matching(geom, det);
  if (samples_per_period < 16) {
    throw InvalidArgument("samples_per_period must be >= 16");
  }
  if (!(window.hi > window.lo) || !std::isfinite(window.lo) ||
      !std::isfinite(window.hi)) {
    throw InvalidArgument("analysis window is degenerate");
  }
  const double period = geom.fringe_period();
  const double span = window.hi - window.lo;
  if (!std::isfinite(period) || span < period * (1.0 - 1e-12)) {
    throw InvalidArgument("window smaller than one fringe period");
  }

  const auto intervals = static_cast<std::size_t>(
      std::ceil(span / period * samples_per_period - 1e-9));
  const bool closed_form = geom.size() == 3;

  IntensityPattern out;
  out.sigma = geom.sigma();
  out.fringe_period = period;
  out.xs.resize(intervals + 1);
  out.intensities.resize(intervals + 1);
  out.background.resize(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double x = k == intervals
                         ? window.hi
                         : window.lo + span * static_cast<double>(k) /
                                           static_cast<double>(intervals);
    out.xs[k] = x;
    out.intensities[k] = closed_form ? intensity_closed_form(x, geom, det)
                                     : intensity_oracle(x, geom, det);
    out.background[k] = incoherent_intensity(x, geom, det);
  }
  return out;
}

}  // namespace multislit
