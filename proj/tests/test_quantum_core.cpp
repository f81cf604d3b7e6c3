#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "multislit/duality.hpp"
#include "multislit/errors.hpp"
#include "multislit/quantum_core.hpp"
#include "oracles.hpp"

using namespace multislit;

TEST_CASE("DetectorState normalizes and rejects bad input") {
  const DetectorState s{3.0, Complex(0.0, 4.0)};
  CHECK(s.dim() == 2);
  CHECK(std::abs(s[0] - 0.6) < 1e-15);
  CHECK(std::abs(s[1] - Complex(0.0, 0.8)) < 1e-15);

  CHECK_THROWS_AS(DetectorState({0.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(DetectorState(std::vector<Complex>{}), InvalidArgument);
  CHECK_THROWS_AS(DetectorState({std::nan(""), 1.0}), InvalidArgument);
  CHECK_THROWS_AS(DetectorState::basis(2, 2), InvalidArgument);

  const DetectorState e = DetectorState::basis(3, 1);
  CHECK(e[1] == Complex(1.0));
  CHECK(e[0] == Complex(0.0));
}

TEST_CASE("overlap: worked examples") {
  const DetectorState x = DetectorState::basis(3, 0);
  const Overlap self = overlap(x, x);
  CHECK(self.magnitude == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(self.phase == 0.0);

  CHECK(overlap(x, DetectorState::basis(3, 1)).magnitude == 0.0);

  const Overlap diag = overlap(DetectorState{1.0, 0.0}, DetectorState{1.0, 1.0});
  CHECK(std::abs(diag.magnitude - 1.0 / std::numbers::sqrt2) < 1e-15);
  CHECK(std::abs(diag.phase) < 1e-15);
}

TEST_CASE("overlap matches a loop oracle and is antilinear in the first slot") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DetectorState a = random_state(4, seed);
    const DetectorState b = random_state(4, seed + 1000);
    const Complex expected = oracle::dot(oracle::amps(a), oracle::amps(b));
    CHECK(std::abs(inner_product(a, b) - expected) < 1e-14);
    CHECK(std::abs(overlap(a, b).value() - expected) < 1e-14);

    const Overlap ab = overlap(a, b);
    const Overlap ba = overlap(b, a);
    CHECK(ab.magnitude == ba.magnitude);
    const double wrapped = std::remainder(ab.phase + ba.phase, 2.0 * std::numbers::pi);
    CHECK(std::abs(wrapped) < 1e-12);
    CHECK(ab.phase > -std::numbers::pi);
    CHECK(ab.phase <= std::numbers::pi);
    CHECK(overlap(a, a).magnitude == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("overlap phase picks up global phases") {
  const DetectorState a = random_state(3, 11);
  const DetectorState b = random_state(3, 12);
  const double base = overlap(a, b).phase;
  const double shifted = overlap(a, b.with_global_phase(0.7)).phase;
  CHECK(std::abs(std::remainder(shifted - base - 0.7, 2.0 * std::numbers::pi)) < 1e-12);
  CHECK(overlap(a, b.with_global_phase(0.7)).magnitude ==
        doctest::Approx(overlap(a, b).magnitude).epsilon(1e-14));
}

TEST_CASE("dimension mismatch is an error") {
  CHECK_THROWS_AS(overlap(DetectorState::basis(2, 0), DetectorState::basis(3, 0)),
                  InvalidArgument);
  CHECK_THROWS_AS(DetectorConfig::uniform({DetectorState::basis(2, 0),
                                           DetectorState::basis(3, 0)}),
                  InvalidArgument);
}

TEST_CASE("random_state") {
  SUBCASE("dim 1 has unit modulus") {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
      CHECK(std::abs(random_state(1, seed)[0]) == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
  SUBCASE("deterministic") {
    const DetectorState a = random_state(3, 7);
    const DetectorState b = random_state(3, 7);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
    CHECK(random_state(3, 8)[0] != a[0]);
  }
  SUBCASE("first-component moment of the uniform sphere") {
    double mean = 0.0;
    const int n = 10000;
    for (int k = 0; k < n; ++k) mean += std::norm(random_state(3, 50000 + k)[0]);
    mean /= n;
    CHECK(std::abs(mean - 1.0 / 3.0) < 0.02);
  }
  SUBCASE("unit norm") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const DetectorState s = random_state(5, seed);
      double norm = 0.0;
      for (const Complex& z : s.amplitudes()) norm += std::norm(z);
      CHECK(std::abs(norm - 1.0) < 1e-12);
    }
  }
  CHECK_THROWS_AS(random_state(0, 1), InvalidArgument);
}

TEST_CASE("DetectorConfig validation") {
  const std::vector<DetectorState> two{DetectorState::basis(2, 0),
                                       DetectorState::basis(2, 1)};
  CHECK_NOTHROW(DetectorConfig(two, {0.25, 0.75}));
  CHECK_NOTHROW(DetectorConfig(two, {1.0, 0.0}));
  CHECK_THROWS_AS(DetectorConfig(two, {0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(DetectorConfig(two, {-0.1, 1.1}), InvalidArgument);
  CHECK_THROWS_AS(DetectorConfig(two, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(DetectorConfig::uniform({DetectorState::basis(2, 0)}), InvalidArgument);

  const DetectorConfig u = DetectorConfig::uniform(two);
  CHECK(u.prior(0) == 0.5);
  CHECK(u.size() == 2);
  CHECK(u.dim() == 2);
}

TEST_CASE("Gram matrix is Hermitian PSD with unit diagonal") {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::vector<DetectorState> states;
    const std::size_t n = 2 + seed % 4;
    const std::size_t dim = 1 + seed % 3;
    for (std::size_t k = 0; k < n; ++k) states.push_back(random_state(dim, seed * 10 + k));
    const DetectorConfig c(states, sample_simplex(n, rng));
    const Eigen::MatrixXcd g = c.gram_matrix();
    CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      CHECK(std::abs(g(i, i) - 1.0) < 1e-12);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("permuted relabels states and priors together") {
  const DetectorConfig c({random_state(3, 1), random_state(3, 2), random_state(3, 3)},
                         {0.2, 0.3, 0.5});
  const std::vector<std::size_t> order{2, 0, 1};
  const DetectorConfig p = c.permuted(order);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(p.prior(k) == c.prior(order[k]));
    CHECK(p.state(k)[0] == c.state(order[k])[0]);
  }
  const std::vector<std::size_t> bad{0, 0, 1};
  CHECK_THROWS_AS(c.permuted(bad), InvalidArgument);
}
