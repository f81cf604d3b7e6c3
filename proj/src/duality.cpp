#include "multislit/duality.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "multislit/errors.hpp"
#include "multislit/fringe.hpp"
#include "multislit/uqsd.hpp"

namespace multislit {

double duality_lhs_three(double v, double d_q) {
  return v + 2.0 * d_q / (3.0 - d_q);
}

double duality_lhs_three_alt(double v, double d_q) {
  return d_q + 2.0 * v / (3.0 - v);
}

double duality_lhs_two(double v, double d_q) { return v + d_q; }

double englert_check(double v, const DetectorConfig& config2) {
  if (config2.size() != 2) {
    throw InvalidArgument("Englert check needs exactly two slits");
  }
  if (std::abs(config2.prior(0) - 0.5) > kNormTolerance) {
    throw InvalidArgument("Englert check needs equal priors");
  }
  const double d = englert_distinguishability(config2);
  return v * v + d * d;
}

double greenberger_yasin_check(double v, double p1, double p2) {
  const double p = predictability(p1, p2);
  return p * p + v * v;
}

DualityReport make_duality_report(int n_slits, double d_q, double v,
                                  bool strict, double tolerance) {
  DualityReport r;
  r.n_slits = n_slits;
  r.d_q = d_q;
  r.v = v;
  if (n_slits == 2) {
    r.lhs = duality_lhs_two(v, d_q);
  } else if (n_slits == 3) {
    r.lhs = duality_lhs_three(v, d_q);
  } else {
    throw InvalidArgument("duality relations exist for two or three slits");
  }
  r.strict = strict;
  r.slack = 1.0 - r.lhs;
  r.bound_satisfied = strict ? r.lhs < 1.0 + tolerance : r.lhs <= 1.0 + tolerance;
  r.d_q_in_range = distinguishability_in_range(d_q);
  return r;
}

std::vector<double> sample_simplex(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw InvalidArgument("simplex dimension must be >= 1");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> cuts(n - 1);
  for (auto& c : cuts) c = uniform(rng);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> p(n);
  double previous = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    p[i] = cuts[i] - previous;
    previous = cuts[i];
  }
  p[n - 1] = 1.0 - previous;
  return p;
}

double simulate_visibility(const SlitGeometry& geom, const DetectorConfig& det,
                           int fringe_index, int samples_per_period) {
  const IntensityPattern pattern =
      sample_pattern(geom, det, default_window(geom), samples_per_period);
  try {
    return extract_visibility(pattern, fringe_index).v;
  } catch (const NoFringesError&) {
    return 0.0;
  }
}

namespace {

DualityReport run_sweep_entry(const SweepOptions& opt, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed),
                    static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);

  std::vector<DetectorState> states;
  for (int k = 0; k < 3; ++k) states.push_back(random_state(3, rng()));
  const DetectorConfig det(std::move(states), sample_simplex(3, rng));
  const double d_q = distinguishability(det);

  const double d = opt.spacing;
  const double time = time_for_sigma_over_d(opt.sigma_over_d, d, opt.constants);
  const SlitGeometry equal = SlitGeometry::three_slit(d, d, time, opt.constants);

  DualityReport report;
  if (opt.mode == GeometryMode::kEqual) {
    const double v = simulate_visibility(equal, det, opt.fringe_index,
                                         opt.samples_per_period);
    report = make_duality_report(3, d_q, v, false, opt.tolerance);
  } else {
    std::uniform_real_distribution<double> ratio(opt.ratio_min, opt.ratio_max);
    const SlitGeometry unequal =
        SlitGeometry::three_slit(d, ratio(rng) * d, time, opt.constants);
    const double v = simulate_visibility(unequal, det, opt.fringe_index,
                                         opt.samples_per_period);
    report = make_duality_report(3, d_q, v, true, opt.tolerance);
    report.v_equal = simulate_visibility(equal, det, opt.fringe_index,
                                         opt.samples_per_period);
  }
  report.index = index;
  return report;
}

}  // namespace

std::vector<DualityReport> sweep_duality(const SweepOptions& options) {
  if (options.n_configs < 1) throw InvalidArgument("n_configs must be >= 1");
  if (!(options.ratio_min > 1.0) || !(options.ratio_max >= options.ratio_min)) {
    throw InvalidArgument("spacing ratio range must satisfy 1 < min <= max");
  }
  std::vector<DualityReport> reports(options.n_configs);
  unsigned workers = options.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, options.n_configs));

  // Each slot is written by exactly one worker; order is fixed by index.
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < options.n_configs; i += workers) {
        reports[i] = run_sweep_entry(options, i);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return reports;
}

}  // namespace multislit
