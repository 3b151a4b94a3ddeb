#include "doctest.h"
#include "support.hpp"

#include "mkepler/skew.hpp"

using namespace mkepler;

TEST_CASE("generators") {
  const Eigen::MatrixXd m12 = generator(1, 2, 1).matrix();
  CHECK(m12(0, 1) == -1.0);
  CHECK(m12(1, 0) == 1.0);
  CHECK(m12.cwiseAbs().sum() == 2.0);
  const Eigen::MatrixXd big = generator(1, 2, 2).matrix();
  CHECK(big.rows() == 4);
  CHECK(big(0, 1) == -1.0);
  CHECK(big(1, 0) == 1.0);
  CHECK(big.cwiseAbs().sum() == 2.0);
  CHECK_THROWS_AS(generator(2, 1, 1), DomainError);
  CHECK_THROWS_AS(generator(1, 3, 1), DomainError);
  CHECK_THROWS_AS(generator(0, 1, 1), DomainError);
}

TEST_CASE("pairing is the half trace form") {
  CHECK(pairing(generator(1, 2, 2), generator(1, 2, 2)) == 1.0);
  CHECK(pairing(generator(1, 2, 2), generator(3, 4, 2)) == 0.0);
  CHECK(pairing(2.0 * generator(1, 2, 1), 3.0 * generator(1, 2, 1)) == doctest::Approx(6.0));
  CHECK_THROWS_AS(pairing(generator(1, 2, 1), generator(1, 2, 2)), DomainError);

  Rng rng(1);
  for (int k = 1; k <= 3; ++k) {
    const SkewMatrixd s(k, random_gaussian(static_cast<int>(SkewMatrixd::upper_size(k)), rng));
    const SkewMatrixd t(k, random_gaussian(static_cast<int>(SkewMatrixd::upper_size(k)), rng));
    CHECK(pairing(s, t) == doctest::Approx(0.5 * (s.matrix().transpose() * t.matrix()).trace()));
  }
}

TEST_CASE("orbit representatives") {
  CHECK((orbit_representative(2.0, 1) - 2.0 * generator(1, 2, 1)).norm() < 1e-15);
  for (int k = 1; k <= 3; ++k) CHECK(orbit_representative(0.0, k).is_zero());
  const auto r = orbit_representative(-3.0, 2);
  const auto expected = (3.0 * generator(1, 2, 2) - 3.0 * generator(3, 4, 2)) * (1.0 / std::sqrt(2.0));
  CHECK((r - expected).norm() < 1e-15);
  for (double mu : {0.0, 0.5, 2.0})
    for (int k = 1; k <= 3; ++k) {
      const auto x = orbit_representative(mu, k);
      CHECK(pairing(x, x) == doctest::Approx(mu * mu));
    }
}

TEST_CASE("orbit membership") {
  CHECK(on_orbit_residual(2.0 * generator(1, 2, 1), 2.0, 1e-12).on_orbit);
  CHECK_FALSE(on_orbit_residual(2.0 * generator(1, 2, 1), -2.0, 1e-12).on_orbit);
  CHECK(on_orbit_residual(SkewMatrixd(1), 0.0, 1e-12).on_orbit);
  CHECK_FALSE(on_orbit_residual(generator(1, 2, 2), 1.0, 1e-12).on_orbit);

  Rng rng(7);
  for (int k = 1; k <= 4; ++k)
    for (double mu : {-2.0, 0.5, 2.0}) {
      const auto xi = random_charge(mu, k, rng);
      const auto res = on_orbit_residual(xi, mu, 1e-10);
      CHECK(res.on_orbit);
      const auto g = random_rotation(2 * k, rng);
      const auto moved = on_orbit_residual(conjugate(g, xi), mu, 1e-10);
      CHECK(moved.on_orbit);
      CHECK(pairing(conjugate(g, xi), conjugate(g, xi)) == doctest::Approx(pairing(xi, xi)));
    }
}

TEST_CASE("conjugation") {
  Rng rng(3);
  const auto xi = random_charge(1.5, 2, rng);
  CHECK((conjugate(Eigen::MatrixXd::Identity(4, 4), xi) - xi).norm() < 1e-15);
  CHECK_THROWS_AS(conjugate(2.0 * Eigen::MatrixXd::Identity(4, 4), xi), DomainError);
}

TEST_CASE("pfaffian") {
  CHECK(pfaffian(2.0 * generator(1, 2, 1)) == doctest::Approx(2.0));
  const auto block = 2.0 * generator(1, 2, 3) - 3.0 * generator(3, 4, 3) + 0.5 * generator(5, 6, 3);
  CHECK(pfaffian(block) == doctest::Approx(-3.0));
  Rng rng(5);
  for (int k = 1; k <= 4; ++k) {
    const SkewMatrixd s(k, random_gaussian(static_cast<int>(SkewMatrixd::upper_size(k)), rng));
    const double pf = pfaffian(s);
    CHECK(pf * pf == doctest::Approx(s.matrix().determinant()).epsilon(1e-10));
  }
  // Orientation-preserving conjugation keeps the Pfaffian; a reflection flips it.
  const SkewMatrixd s(2, random_gaussian(6, rng));
  Eigen::MatrixXd flip = Eigen::MatrixXd::Identity(4, 4);
  flip(3, 3) = -1;
  CHECK(pfaffian(conjugate(flip, s)) == doctest::Approx(-pfaffian(s)));
  CHECK(pfaffian(conjugate(random_rotation(4, rng), s)) == doctest::Approx(pfaffian(s)));
}

TEST_CASE("skew matrix storage") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 0.5, 0;
  CHECK_THROWS_AS(SkewMatrixd::from_matrix(m), DomainError);
  CHECK_THROWS_AS(SkewMatrixd(0), DomainError);
  SkewMatrixd s(2);
  s.set(3, 1, 2.0);
  CHECK(s(1, 3) == -2.0);
  CHECK(s.matrix()(3, 1) == 2.0);
  CHECK_THROWS_AS(s.set(1, 1, 1.0), DomainError);
}
