#include "multislit/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "multislit/duality.hpp"
#include "multislit/errors.hpp"
#include "multislit/experiment.hpp"
#include "multislit/fringe.hpp"
#include "multislit/quantum_core.hpp"
#include "multislit/uqsd.hpp"
#include "multislit/wavepacket.hpp"

namespace multislit::acceptance {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

std::string num(double x) { return format_number(x); }

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

DetectorConfig random_three_slit(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<DetectorState> states;
  for (int k = 0; k < 3; ++k) states.push_back(random_state(3, rng()));
  return DetectorConfig(std::move(states), sample_simplex(3, rng));
}

DetectorConfig camera_config() {
  return DetectorConfig::uniform(preset_states("camera", 3, 0));
}

DetectorConfig symmetric_overlap_config() {
  return DetectorConfig::uniform(preset_states("symmetric-overlap", 3, 0));
}

SlitGeometry far_field_three_slit(double sigma_over_d) {
  const double d = kDefaultSpacing;
  return SlitGeometry::three_slit(d, d, time_for_sigma_over_d(sigma_over_d, d));
}

SlitGeometry far_field_two_slit(double sigma_over_d) {
  const double d = kDefaultSpacing;
  return SlitGeometry::equally_spaced(2, d, time_for_sigma_over_d(sigma_over_d, d));
}

CriterionResult oracle_equivalence() {
  CriterionResult r;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::uniform_real_distribution<double> ratio(1.0, 3.0);
    std::uniform_real_distribution<double> log_sod(std::log(5.0), std::log(200.0));
    const DetectorConfig det = random_three_slit(seed);
    const double l1 = kDefaultSpacing;
    const double l2 = l1 * ratio(rng);
    const double t = time_for_sigma_over_d(std::exp(log_sod(rng)), l1);
    const SlitGeometry geom = SlitGeometry::three_slit(l1, l2, t);
    const double half = 4.0 * geom.sigma();
    for (int k = 0; k < 2048; ++k) {
      const double x = -half + 2.0 * half * k / 2047.0;
      const double closed = intensity_closed_form(x, geom, det);
      const double oracle = intensity_oracle(x, geom, det);
      worst = std::max(worst, std::abs(closed - oracle) / std::abs(oracle));
    }
  }
  r.passed = worst < 1e-10;
  r.detail = "max relative error " + num(worst) + " (limit 1e-10)";
  return r;
}

double total_probability(const SlitGeometry& geom, const DetectorConfig& det) {
  const auto [lo_it, hi_it] =
      std::minmax_element(geom.positions().begin(), geom.positions().end());
  const double lo = *lo_it - 12.0 * geom.sigma();
  const double hi = *hi_it + 12.0 * geom.sigma();
  constexpr int kIntervals = 40000;
  const double h = (hi - lo) / kIntervals;
  double sum = 0.0;
  for (int k = 0; k <= kIntervals; ++k) {
    const double w = (k == 0 || k == kIntervals) ? 0.5 : 1.0;
    sum += w * intensity_closed_form(lo + h * k, geom, det);
  }
  return sum * h;
}

CriterionResult normalization() {
  CriterionResult r;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const DetectorConfig det = random_three_slit(500 + seed);
    const SlitGeometry far = far_field_three_slit(kDefaultSigmaOverD);
    for (const SlitGeometry& geom : {far.at_time(0.0), far}) {
      worst = std::max(worst, std::abs(total_probability(geom, det) - 1.0));
    }
  }
  r.passed = worst < 1e-6;
  r.detail = "max |integral - 1| " + num(worst) + " (limit 1e-6)";
  return r;
}

CriterionResult special_case(const DetectorConfig& det, double expected_dq,
                             double v_lo, double v_hi, bool check_lhs,
                             double expected_bound) {
  CriterionResult r;
  const double d_q = distinguishability(det);
  const double v = simulate_visibility(far_field_three_slit(200.0), det);
  const double lhs = duality_lhs_three(v, d_q);
  const double bound = visibility_bound(det);
  const bool dq_ok = std::abs(d_q - expected_dq) <= 1e-12;
  const bool v_ok = within(v, v_lo, v_hi);
  const bool lhs_ok = !check_lhs || within(lhs, 0.98, 1.005);
  const bool bound_ok = std::abs(bound - expected_bound) <= 1e-12;
  r.passed = dq_ok && v_ok && lhs_ok && bound_ok;
  std::ostringstream os;
  os << "D_Q " << num(d_q) << (dq_ok ? " ok" : " WRONG") << "; V " << num(v)
     << " in [" << num(v_lo) << ", " << num(v_hi) << "]"
     << (v_ok ? " ok" : " OUT") << "; bound " << num(bound)
     << (bound_ok ? " ok" : " WRONG");
  if (check_lhs) {
    os << "; lhs " << num(lhs) << " in [0.98, 1.005]" << (lhs_ok ? " ok" : " OUT");
  }
  r.detail = os.str();
  return r;
}

CriterionResult camera_case() {
  return special_case(camera_config(), 2.0 / 3.0, 3.0 / 7.0 - 0.02,
                      3.0 / 7.0 + 1e-3, true, 3.0 / 7.0);
}

CriterionResult symmetric_overlap_case() {
  return special_case(symmetric_overlap_config(), 1.0 - kSqrt2 / 3.0, 0.552,
                      0.573, false, 3.0 * kSqrt2 / (6.0 + kSqrt2));
}

CriterionResult duality_sweep() {
  SweepOptions opt;
  opt.n_configs = 1000;
  opt.seed = 20240601;
  opt.mode = GeometryMode::kEqual;
  opt.sigma_over_d = 200.0;
  const auto reports = sweep_duality(opt);
  std::size_t violations = 0;
  double max_lhs = 0.0;
  for (const auto& rep : reports) {
    if (rep.lhs > 1.0 + kDualityTolerance) ++violations;
    max_lhs = std::max(max_lhs, rep.lhs);
  }
  CriterionResult r;
  r.passed = violations == 0;
  r.detail = std::to_string(violations) + " of " + std::to_string(reports.size()) +
             " configs exceed 1 + 5e-3 (max lhs " + num(max_lhs) + ")";
  return r;
}

// Real detector states with non-negative components: every overlap is real
// and >= 0, so all theta vanish.
DetectorConfig nonnegative_real_config(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<DetectorState> states;
  for (int k = 0; k < 3; ++k) {
    std::vector<Complex> amps(3);
    for (auto& a : amps) a = std::abs(gauss(rng));
    states.emplace_back(std::move(amps));
  }
  return DetectorConfig::uniform(std::move(states));
}

CriterionResult tightness_trend() {
  std::vector<double> slack_far;
  std::size_t not_decreasing = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const DetectorConfig det = nonnegative_real_config(7000 + seed);
    const double d_q = distinguishability(det);
    const double s20 =
        1.0 - duality_lhs_three(simulate_visibility(far_field_three_slit(20.0), det), d_q);
    const double s200 =
        1.0 - duality_lhs_three(simulate_visibility(far_field_three_slit(200.0), det), d_q);
    if (!(s200 < s20)) ++not_decreasing;
    slack_far.push_back(s200);
  }
  std::sort(slack_far.begin(), slack_far.end());
  const double median = 0.5 * (slack_far[24] + slack_far[25]);
  CriterionResult r;
  r.passed = not_decreasing == 0 && median < 0.02;
  r.detail = std::to_string(not_decreasing) +
             " of 50 configs with slack(200) >= slack(20); median slack(200) " +
             num(median) + " (limit 0.02); min slack(200) " + num(slack_far.front());
  return r;
}

CriterionResult unequal_spacing() {
  SweepOptions opt;
  opt.n_configs = 200;
  opt.seed = 20240602;
  opt.mode = GeometryMode::kUnequal;
  opt.sigma_over_d = 200.0;
  const auto reports = sweep_duality(opt);
  std::size_t failures = 0;
  for (const auto& rep : reports) {
    if (!(rep.v < rep.v_equal.value())) ++failures;
  }
  CriterionResult r;
  r.passed = failures == 0;
  r.detail = std::to_string(failures) + " of 200 pairs with v_unequal >= v_equal";
  return r;
}

CriterionResult englert_saturation() {
  CriterionResult r;
  r.passed = true;
  std::ostringstream os;
  const SlitGeometry geom = far_field_two_slit(200.0);
  for (int k = 0; k <= 5; ++k) {
    const double c = 0.2 * k;
    const DetectorConfig det = DetectorConfig::uniform(
        {DetectorState{1.0, 0.0}, DetectorState{c, std::sqrt(1.0 - c * c)}});
    const double v = simulate_visibility(geom, det);
    const double check = englert_check(v, det);
    const bool ok = within(check, 0.98, 1.005);
    r.passed = r.passed && ok;
    os << (k ? "; " : "") << "c=" << c << ": " << num(check) << (ok ? "" : " OUT");
  }
  r.detail = "V^2 + D^2 in [0.98, 1.005]: " + os.str();
  return r;
}

CriterionResult greenberger_yasin() {
  CriterionResult r;
  r.passed = true;
  std::ostringstream os;
  const SlitGeometry geom = far_field_two_slit(200.0);
  bool first = true;
  for (double p1 : {0.5, 0.6, 0.75, 0.9, 1.0}) {
    const double p2 = 1.0 - p1;
    const DetectorConfig det({DetectorState{1.0}, DetectorState{1.0}}, {p1, p2});
    const double v = simulate_visibility(geom, det);
    const double check = greenberger_yasin_check(v, p1, p2);
    const bool ok = within(check, 0.98, 1.005);
    r.passed = r.passed && ok;
    os << (first ? "" : "; ") << "p1=" << p1 << ": " << num(check)
       << (ok ? "" : " OUT");
    first = false;
  }
  r.detail = "P^2 + V^2 in [0.98, 1.005]: " + os.str();
  return r;
}

CriterionResult uqsd_povm() {
  double worst_misid = 0.0;
  double worst_completeness = 0.0;
  double worst_success = 0.0;
  double worst_negative = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const DetectorState p = random_state(3, 9000 + 2 * k);
    const DetectorState q = random_state(3, 9001 + 2 * k);
    const Povm2 povm = uqsd_two_state_povm(p, q);
    worst_misid = std::max({worst_misid,
                            std::abs(povm.probability(Povm2::kSucceedFirst, q)),
                            std::abs(povm.probability(Povm2::kSucceedSecond, p))});
    const Eigen::Matrix2cd sum =
        povm.succeed_first() + povm.succeed_second() + povm.fail();
    worst_completeness = std::max(
        worst_completeness, (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
    const double success = 0.5 * povm.probability(Povm2::kSucceedFirst, p) +
                           0.5 * povm.probability(Povm2::kSucceedSecond, q);
    worst_success = std::max(worst_success, std::abs(success - idp_limit(p, q)));
    for (const auto& e : povm.elements) {
      const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(e);
      worst_negative = std::max(worst_negative, -es.eigenvalues().minCoeff());
    }
  }
  CriterionResult r;
  r.passed = worst_misid < 1e-12 && worst_completeness < 1e-10 &&
             worst_success < 1e-10 && worst_negative <= 1e-12;
  r.detail = "misidentification " + num(worst_misid) + ", completeness residual " +
             num(worst_completeness) + ", |success - IDP| " + num(worst_success) +
             ", most negative eigenvalue " + num(-worst_negative);
  return r;
}

CriterionResult identity_chain() {
  double worst_englert = 0.0;
  double worst_predict = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double c = k / 100.0;
    const DetectorConfig det = DetectorConfig::uniform(
        {DetectorState{1.0, 0.0}, DetectorState{c, std::sqrt(1.0 - c * c)}});
    const double d = englert_distinguishability(det);
    worst_englert = std::max(
        worst_englert,
        std::abs(distinguishability(det) - (1.0 - std::sqrt(1.0 - d * d))));
    const double p1 = k / 100.0;
    const double p2 = 1.0 - p1;
    const double pr = predictability(p1, p2);
    worst_predict = std::max(
        worst_predict, std::abs(reduced_distinguishability(p1, p2) -
                                (1.0 - std::sqrt(1.0 - pr * pr))));
  }
  CriterionResult r;
  r.passed = worst_englert <= 1e-12 && worst_predict <= 1e-12;
  r.detail = "max |D_Q - (1 - sqrt(1 - D^2))| " + num(worst_englert) +
             ", max |reduced D_Q - (1 - sqrt(1 - P^2))| " + num(worst_predict);
  return r;
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CriterionResult determinism() {
  const nlohmann::json config = {{"schema_version", kSchemaVersion},
                                 {"n_configs", 1000},
                                 {"seed", 424242},
                                 {"geometry_mode", "equal"},
                                 {"sigma_over_d", 200.0}};
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path() /
                    ("multislit-determinism-" + std::to_string(rd()));
  std::string first;
  std::string second;
  {
    SweepConfig sc = parse_sweep_config(config);
    sc.options.threads = 1;
    write_sweep_outputs(run_sweep(sc), base / "a", TableFormat::kCsv);
    sc.options.threads = 0;
    write_sweep_outputs(run_sweep(sc), base / "b", TableFormat::kCsv);
    first = read_bytes(base / "a" / "sweep.csv");
    second = read_bytes(base / "b" / "sweep.csv");
  }
  std::error_code ec;
  std::filesystem::remove_all(base, ec);
  CriterionResult r;
  r.passed = !first.empty() && first == second;
  r.detail = "sweep.csv " + std::to_string(first.size()) + " bytes, reruns " +
             (first == second ? "identical" : "DIFFER");
  return r;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "oracle equivalence", oracle_equivalence},
      {2, "normalization", normalization},
      {3, "camera case", camera_case},
      {4, "symmetric-overlap case", symmetric_overlap_case},
      {5, "three-slit duality sweep", duality_sweep},
      {6, "tightness trend", tightness_trend},
      {7, "strict unequal-spacing inequality", unequal_spacing},
      {8, "two-slit Englert saturation", englert_saturation},
      {9, "two-slit Greenberger-Yasin", greenberger_yasin},
      {10, "UQSD POVM", uqsd_povm},
      {11, "identity chain", identity_chain},
      {12, "sweep determinism", determinism},
  };
  return list;
}

std::vector<CriterionResult> run_all(std::ostream& out) {
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    CriterionResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.id = c.id;
    r.name = c.name;
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << ": "
        << r.detail << '\n';
    out.flush();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace multislit::acceptance
