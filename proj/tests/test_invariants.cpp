#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "mkepler/invariants.hpp"

using namespace mkepler;

namespace {

Eigen::VectorXd unit(int n, int i) { return Eigen::VectorXd::Unit(n, i); }


}  // namespace

TEST_CASE("circular Kepler state") {
  const Metric e3 = Metric::euclidean(3);
  const auto rec = compute_invariants(State{unit(3, 0), unit(3, 1), SkewMatrixd(1)}, 0.0);
  CHECK(rec.E == doctest::Approx(-0.5));
  CHECK((rec.L - Multivectord::basis(e3, {1, 2})).coefficient_norm() < 1e-15);
  CHECK(rec.A.norm() < 1e-15);
  REQUIRE(rec.V);
  CHECK(rec.V->is_zero());
  CHECK((*rec.Lbar - Multivectord::basis(e3, {1, 2})).coefficient_norm() < 1e-15);
}

TEST_CASE("uncharged states have Lbar = L and V = 0") {
  Rng rng(5);
  for (int k = 1; k <= 3; ++k) {
    const auto s = random_state(k, 0.0, rng);
    const auto rec = compute_invariants(s, 0.0);
    CHECK(rec.V->coefficient_norm() == 0.0);
    CHECK((*rec.Lbar - rec.L).coefficient_norm() < 1e-12 * rec.L.coefficient_norm());
    CHECK((effective_angular_momentum_by_projection(rec) - rec.L).coefficient_norm() == 0.0);
  }
}

TEST_CASE("closed-form Lbar equals the projection onto the V square") {
  Rng rng(6);
  for (int k = 1; k <= 3; ++k)
    for (double mu : {0.5, 2.0})
      for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_state(k, mu, rng);
        const auto rec = compute_invariants(s, mu);
        const auto proj = effective_angular_momentum_by_projection(rec);
        CHECK((proj - *rec.Lbar).coefficient_norm() < 1e-10 * rec.Lbar->coefficient_norm());
      }
}

TEST_CASE("algebraic relations among invariants") {
  Rng rng(7);
  for (int k = 1; k <= 3; ++k)
    for (double mu : {0.0, 0.5, 2.0})
      for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_state(k, mu, rng);
        const auto rec = compute_invariants(s, mu);
        const auto res = relation_residuals(rec, s);
        CHECK(res.max() < 1e-10);
        CHECK(square(rec.L) >= mu * mu);
      }
}

TEST_CASE("colliding states report absent V and Lbar") {
  const State s{unit(3, 0), 2.0 * unit(3, 0), 0.5 * generator(1, 2, 1)};
  const auto rec = compute_invariants(s, 0.5);
  CHECK_FALSE(rec.V);
  CHECK_FALSE(rec.Lbar);
  CHECK(rec.E == doctest::Approx(2.0 - 1.0 + 0.125));
  CHECK_THROWS_AS(relation_residuals(rec, s), DomainError);
}

TEST_CASE("rotations of the first 2k axes act equivariantly") {
  Rng rng(8);
  for (int k = 1; k <= 3; ++k) {
    const int n = 2 * k + 1;
    const double mu = 1.1;
    const auto s = random_state(k, mu, rng);
    const Eigen::MatrixXd g = random_rotation(2 * k, rng);
    Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(n, n);
    rot.topLeftCorner(2 * k, 2 * k) = g;
    const State moved{rot * s.r, rot * s.v, conjugate(g, s.xi)};
    const auto a = compute_invariants(s, mu);
    const auto b = compute_invariants(moved, mu);
    CHECK((transform(rot, a.L) - b.L).coefficient_norm() < 1e-12);
    CHECK((rot * a.A - b.A).norm() < 1e-12);
    CHECK((transform(rot, *a.V) - *b.V).coefficient_norm() < 1e-11);
    CHECK((transform(rot, *a.Lbar) - *b.Lbar).coefficient_norm() < 1e-11);
    CHECK(a.E == doctest::Approx(b.E));
  }
}
