#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "multislit/duality.hpp"
#include "multislit/errors.hpp"
#include "multislit/fringe.hpp"
#include "multislit/uqsd.hpp"

using namespace multislit;

namespace {

constexpr double kD = 16.0;

SlitGeometry two_slit(double sigma_over_d) {
  return SlitGeometry::equally_spaced(2, kD, time_for_sigma_over_d(sigma_over_d, kD));
}

DetectorConfig two_with_overlap(double c) {
  return DetectorConfig::uniform(
      {DetectorState{1.0, 0.0}, DetectorState{c, std::sqrt(1.0 - c * c)}});
}

}  // namespace

TEST_CASE("three-slit duality lhs") {
  CHECK(duality_lhs_three(1.0, 0.0) == 1.0);
  CHECK(duality_lhs_three(0.0, 1.0) == 1.0);
  CHECK(duality_lhs_three(3.0 / 7.0, 2.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(duality_lhs_three_alt(0.0, 1.0) == 1.0);
  CHECK(duality_lhs_three_alt(1.0, 0.0) == 1.0);
}

TEST_CASE("both three-slit forms saturate on the same curve") {
  for (int k = 0; k <= 1000; ++k) {
    const double d = k / 1000.0;
    // Solve V + 2d/(3-d) = 1 for V.
    const double v = 1.0 - 2.0 * d / (3.0 - d);
    CHECK(duality_lhs_three(v, d) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(duality_lhs_three_alt(v, d) == doctest::Approx(1.0).epsilon(1e-13));
    // Off the curve both forms agree on the side.
    const double vin = 0.9 * v;
    CHECK((duality_lhs_three(vin, d) <= 1.0) == (duality_lhs_three_alt(vin, d) <= 1.0 + 1e-15));
  }
}

TEST_CASE("three-slit lhs is strictly increasing in both arguments") {
  const int n = 50;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = static_cast<double>(i) / n;
      const double b0 = static_cast<double>(j) / n;
      const double b1 = static_cast<double>(j + 1) / n;
      CHECK(duality_lhs_three(b1, a) > duality_lhs_three(b0, a));
      CHECK(duality_lhs_three(a, b1) > duality_lhs_three(a, b0));
    }
  }
}

TEST_CASE("two-slit lhs") {
  CHECK(duality_lhs_two(1.0, 0.0) == 1.0);
  CHECK(duality_lhs_two(0.6, 0.4) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(duality_lhs_two(0.5, 0.2) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("make_duality_report") {
  const DualityReport r = make_duality_report(3, 0.4, 0.5);
  CHECK(r.lhs == duality_lhs_three(0.5, 0.4));
  CHECK(r.slack == doctest::Approx(1.0 - r.lhs).epsilon(1e-15));
  CHECK(r.bound_satisfied);
  CHECK_FALSE(r.strict);

  const DualityReport edge = make_duality_report(2, 0.3, 0.7 + 5e-3);
  CHECK(edge.bound_satisfied);
  CHECK_FALSE(make_duality_report(2, 0.3, 0.7 + 5e-3, true).bound_satisfied);
  CHECK_FALSE(make_duality_report(2, 0.3, 0.71).bound_satisfied);
  CHECK(make_duality_report(2, 0.3, 0.71, false, 0.02).bound_satisfied);
  CHECK_FALSE(make_duality_report(2, -0.1, 0.5).d_q_in_range);
  CHECK_THROWS_AS(make_duality_report(4, 0.1, 0.1), InvalidArgument);
}

TEST_CASE("Englert relation saturates for pure detector states") {
  const SlitGeometry g = two_slit(200.0);
  SUBCASE("overlap 0") { CHECK(englert_check(simulate_visibility(g, two_with_overlap(0.0)), two_with_overlap(0.0)) == doctest::Approx(1.0).epsilon(0.02)); }
  SUBCASE("overlap 1") {
    const DetectorConfig det = two_with_overlap(1.0);
    const double v = simulate_visibility(g, det);
    CHECK(v == doctest::Approx(1.0).epsilon(0.02));
    CHECK(englert_check(v, det) == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("overlap 0.6") {
    const DetectorConfig det = two_with_overlap(0.6);
    const double v = simulate_visibility(g, det);
    CHECK(v == doctest::Approx(0.6).epsilon(0.02));
    CHECK(englert_check(v, det) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(duality_lhs_two(v, distinguishability(det)) == doctest::Approx(1.0).epsilon(0.02));
  }
  CHECK_THROWS_AS(englert_check(0.5, DetectorConfig({DetectorState{1.0}, DetectorState{1.0}},
                                                    {0.3, 0.7})),
                  InvalidArgument);
  CHECK_THROWS_AS(englert_check(0.5, DetectorConfig::uniform(std::vector<DetectorState>(
                                         3, DetectorState{1.0}))),
                  InvalidArgument);
}

TEST_CASE("Greenberger-Yasin relation with identical detector states") {
  const SlitGeometry g = two_slit(200.0);
  auto run = [&](double p1) {
    const DetectorConfig det({DetectorState{1.0}, DetectorState{1.0}}, {p1, 1.0 - p1});
    return simulate_visibility(g, det);
  };
  const double v_half = run(0.5);
  CHECK(v_half == doctest::Approx(1.0).epsilon(0.02));
  CHECK(greenberger_yasin_check(v_half, 0.5, 0.5) == doctest::Approx(1.0).epsilon(0.02));

  const double v_one = run(1.0);
  CHECK(v_one < 1e-6);
  CHECK(greenberger_yasin_check(v_one, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-6));

  const double v = run(0.75);
  CHECK(v == doctest::Approx(2.0 * std::sqrt(0.1875)).epsilon(0.02));
  CHECK(greenberger_yasin_check(v, 0.75, 0.25) == doctest::Approx(1.0).epsilon(0.02));
  CHECK_THROWS_AS(greenberger_yasin_check(0.5, 0.7, 0.7), InvalidArgument);
}

TEST_CASE("three slits with p3 = 0 reproduce the two-slit run") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DetectorState a = random_state(2, 10 + seed);
    const DetectorState b = random_state(2, 20 + seed);
    std::mt19937_64 rng(seed);
    const double p1 = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const DetectorConfig three({a, b, random_state(2, 30 + seed)}, {p1, 1.0 - p1, 0.0});
    const DetectorConfig two({a, b}, {p1, 1.0 - p1});
    const double t = time_for_sigma_over_d(200.0, kD);
    const double v3 = simulate_visibility(SlitGeometry::equally_spaced(3, kD, t), three);
    const double v2 = simulate_visibility(SlitGeometry::equally_spaced(2, kD, t), two);
    CHECK(std::abs(v3 - v2) < 1e-6);
    CHECK(v2 == doctest::Approx(visibility_bound(two)).epsilon(0.01));
  }
}

TEST_CASE("sample_simplex") {
  std::mt19937_64 rng(5);
  std::vector<double> mean(4, 0.0);
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const auto p = sample_simplex(4, rng);
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(p[i] >= 0.0);
      sum += p[i];
      mean[i] += p[i] / n;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  for (double m : mean) CHECK(std::abs(m - 0.25) < 0.01);

  std::mt19937_64 a(9);
  std::mt19937_64 b(9);
  CHECK(sample_simplex(3, a) == sample_simplex(3, b));
  CHECK(sample_simplex(1, a) == std::vector<double>{1.0});
  CHECK_THROWS_AS(sample_simplex(0, a), InvalidArgument);
}

TEST_CASE("sweep_duality") {
  SweepOptions opt;
  opt.n_configs = 24;
  opt.seed = 77;
  opt.threads = 1;
  const auto serial = sweep_duality(opt);
  opt.threads = 5;
  const auto parallel = sweep_duality(opt);
  REQUIRE(serial.size() == 24);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].index == i);
    CHECK(parallel[i].index == i);
    CHECK(serial[i].v == parallel[i].v);
    CHECK(serial[i].d_q == parallel[i].d_q);
    CHECK(serial[i].lhs == doctest::Approx(duality_lhs_three(serial[i].v, serial[i].d_q)).epsilon(1e-12));
    CHECK_FALSE(serial[i].v_equal.has_value());
    CHECK(serial[i].d_q >= 0.0);
    CHECK(serial[i].d_q <= 1.0);
  }
  opt.seed = 78;
  CHECK(sweep_duality(opt)[0].v != serial[0].v);

  opt.mode = GeometryMode::kUnequal;
  opt.n_configs = 6;
  for (const auto& r : sweep_duality(opt)) {
    CHECK(r.v_equal.has_value());
    CHECK(r.strict);
  }

  opt.n_configs = 0;
  CHECK_THROWS_AS(sweep_duality(opt), InvalidArgument);
  opt.n_configs = 3;
  opt.ratio_min = 1.0;
  CHECK_THROWS_AS(sweep_duality(opt), InvalidArgument);
}
