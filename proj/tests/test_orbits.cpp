#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"

#include "mkepler/dynamics.hpp"
#include "mkepler/orbits.hpp"

using namespace mkepler;

namespace {

Eigen::VectorXd unit(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

OrbitElements planar(const Eigen::Vector3d& a) {
  return OrbitElements{1, a, Multivectord::basis(Metric::euclidean(3), {1, 2})};
}


}  // namespace

TEST_CASE("eccentricity, energy and class of planar elements") {
  CHECK(eccentricity(planar({0, 0, 0})) == doctest::Approx(0.0));
  CHECK(eccentricity(planar({0.5, 0, 0})) == doctest::Approx(0.5));
  CHECK(eccentricity(planar({2, 0, 0})) == doctest::Approx(2.0));
  CHECK(energy_from_elements(planar({0, 0, 0})) == doctest::Approx(-0.5));
  CHECK(energy_from_elements(planar({2, 0, 0})) == doctest::Approx(1.5));
  CHECK(energy_from_elements(planar({0, 1, 0})) == doctest::Approx(0.0));
  CHECK(classify(planar({0, 0, 0})) == ConicClass::Ellipse);
  CHECK(classify(planar({0.6, 0.8, 0})) == ConicClass::Parabola);
  CHECK(classify(planar({2, 0, 0})) == ConicClass::HyperbolaBranch);
}

TEST_CASE("implied charge") {
  CHECK(implied_magnetic_charge(planar({0.3, 0.1, 0})) == 0.0);
  const Metric e5 = Metric::euclidean(5);
  const OrbitElements el{2, 0.4 * unit(5, 2), Multivectord::basis(e5, {1, 2})};
  CHECK(implied_magnetic_charge(el) == doctest::Approx(0.4 * std::sqrt(2.0)));
  const OrbitElements doubled{2, 0.8 * unit(5, 2) + 0.3 * unit(5, 0), el.Lbar};
  CHECK(implied_magnetic_charge(doubled) == doctest::Approx(2 * implied_magnetic_charge(el)));
}

TEST_CASE("membership is enforced") {
  const Metric e5 = Metric::euclidean(5);
  const OrbitElements twisted{2, Eigen::VectorXd::Zero(5), Multivectord::basis(e5, {1, 2}) + Multivectord::basis(e5, {3, 4})};
  try {
    eccentricity(twisted);
    FAIL("expected a membership error");
  } catch (const MembershipError& e) {
    CHECK(e.invariant() == "Lbar_decomposable");
  }
  const OrbitElements heavy{2, 1.5 * unit(5, 4), Multivectord::basis(e5, {1, 2})};
  try {
    energy_from_elements(heavy);
    FAIL("expected a membership error");
  } catch (const MembershipError& e) {
    CHECK(e.invariant() == "Lbar_exceeds_wedge");
  }
  CHECK_THROWS_AS(validate(OrbitElements{1, Eigen::VectorXd::Zero(5), Multivectord::basis(e5, {1, 2})}), DomainError);
}

TEST_CASE("conic residuals of the unit circle") {
  const auto el = planar({0, 0, 0});
  const double c = std::cos(0.7), s = std::sin(0.7);
  const auto on = conic_residuals(Eigen::Vector3d(c, s, 0), el);
  CHECK(std::abs(on.scalar) < 1e-15);
  CHECK(on.wedge < 1e-15);
  CHECK(conic_residuals(Eigen::Vector3d(2, 0, 0), el).scalar == doctest::Approx(1.0));
}

TEST_CASE("orientation reversal keeps the scalar outputs") {
  Rng rng(3);
  for (int k = 1; k <= 3; ++k) {
    const auto s = random_state(k, 0.7, rng);
    const auto el = elements_of(compute_invariants(s, 0.7));
    const OrbitElements flipped{el.k, el.A, -el.Lbar};
    CHECK(eccentricity(flipped) == doctest::Approx(eccentricity(el)));
    CHECK(energy_from_elements(flipped) == doctest::Approx(energy_from_elements(el)));
    CHECK(classify(flipped) == classify(el));
  }
}

TEST_CASE("construction for the circle") {
  const auto data = construct_initial_data(planar({0, 0, 0}));
  const Eigen::MatrixXd rt = data.rotation.transpose();
  CHECK((rt * data.q - unit(3, 0)).norm() < 1e-15);
  CHECK((rt * data.v - unit(3, 1)).norm() < 1e-15);
  CHECK(data.u.norm() < 1e-15);
  CHECK(data.eta.is_zero());
  CHECK((data.q - unit(3, 2)).norm() < 1e-15);
  CHECK(data.rotation.determinant() == doctest::Approx(1.0));
}

TEST_CASE("construction round trip on random elements") {
  Rng rng(12);
  for (int k = 1; k <= 3; ++k) {
    const int n = 2 * k + 1;
    for (int trial = 0; trial < 30; ++trial) {
      const double mu = trial % 3 == 0 ? 0.0 : random_uniform(-2, 2, rng);
      const auto el = elements_of(compute_invariants(random_state(k, mu, rng), mu));
      const auto data = construct_initial_data(el);
      CHECK(std::abs(data.q.dot(data.v)) < 1e-12 * data.q.norm() * data.v.norm());
      CHECK(dirac_string_margin(data.q) == doctest::Approx(2.0));
      const Eigen::MatrixXd& rot = data.rotation;
      CHECK((rot * rot.transpose() - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-12);
      CHECK(rot.determinant() == doctest::Approx(1.0));

      const double mu_abs = implied_magnetic_charge(el);
      CHECK(std::abs(std::abs(data.implied_mu) - mu_abs) < 1e-10 * (1 + mu_abs));
      CHECK(on_orbit_residual(data.eta, data.implied_mu, 1e-10).on_orbit);
      if (k == 1 && mu != 0.0) CHECK(data.implied_mu * mu > 0);

      const auto back = elements_of(compute_invariants(State{data.q, data.v, data.eta}, data.implied_mu));
      const auto expected = rotate(el, rot);
      const double scale = 1 + expected.A.norm() + expected.Lbar.coefficient_norm();
      CHECK((back.A - expected.A).norm() < 1e-10 * scale);
      CHECK((back.Lbar - expected.Lbar).coefficient_norm() < 1e-10 * scale);

      const Eigen::MatrixXd p = paired_curvature(data.q, data.eta);
      const Eigen::VectorXd check = data.q.squaredNorm() * (p.transpose() * data.v);
      CHECK((check - data.u).norm() < 1e-10 * (1 + data.u.norm()));
    }
  }
}

TEST_CASE("conic fit on synthetic curves") {
  std::vector<Eigen::VectorXd> circle, ellipse, line;
  for (int i = 0; i < 40; ++i) {
    const double th = 2 * std::numbers::pi * i / 40;
    circle.push_back(Eigen::Vector3d(std::cos(th), std::sin(th), 0));
    const double r = 1.0 / (1.0 + 0.5 * std::cos(th));
    Eigen::VectorXd p = Eigen::VectorXd::Zero(5);
    p(1) = r * std::cos(th);
    p(3) = r * std::sin(th);
    p(4) = 0.3;
    ellipse.push_back(p);
    line.push_back(Eigen::Vector3d(i, 2 * i, 0));
  }
  CHECK(conic_fit(circle).e < 1e-8);
  CHECK(std::abs(conic_fit(ellipse).e - 0.5) < 1e-6);
  CHECK(conic_fit(ellipse).planarity < 1e-12);
  CHECK_THROWS_AS(conic_fit(line), DomainError);
  CHECK_THROWS_AS(conic_fit(std::vector<Eigen::VectorXd>(circle.begin(), circle.begin() + 5)), DomainError);
}

TEST_CASE("integrated orbits lie on the predicted conic") {
  Rng rng(21);
  for (int k = 1; k <= 3; ++k) {
    const int n = 2 * k + 1;
    const Metric metric = Metric::euclidean(n);
    Eigen::VectorXd a = 0.4 * random_unit(n, rng);
    Multivectord lbar = Multivectord::basis(metric, {1, 2}) * 0.9;
    const OrbitElements el{k, a, lbar};
    const auto data = construct_initial_data(el);
    const double mu = data.implied_mu;
    const double energy = energy_from_elements(el);
    const double period = 2 * std::numbers::pi * std::pow(-2 * energy, -1.5);
    IntegrationOptions opt;
    for (int i = 0; i < 60; ++i) opt.sample_times.push_back(period * i / 59);
    const auto traj = integrate(State{data.q, data.v, data.eta}, mu, 1.2 * period, opt);
    const auto frame_el = rotate(el, data.rotation);
    std::vector<Eigen::VectorXd> pts;
    for (const auto& smp : traj.samples) {
      const auto res = conic_residuals(smp.state.r, frame_el);
      CHECK(std::abs(res.scalar) < 1e-8 * smp.state.r.norm());
      CHECK(res.wedge < 1e-8 * smp.state.r.norm());
      const auto d = state_derivative(smp.state, mu);
      CHECK(orientation_cosine(smp.state.v, d.dv, frame_el) > 0.999999);
      pts.push_back(smp.state.r);
    }
    CHECK(std::abs(conic_fit(pts).e - eccentricity(el)) < 1e-6);
    CHECK((traj.samples.back().state.r - data.q).norm() < 1e-6);
    CHECK(radial_period(traj) == doctest::Approx(period).epsilon(1e-8));
  }
}
