#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "mkepler/gauge.hpp"

using namespace mkepler;

namespace {

Eigen::VectorXd unit(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

// d_j A_k - d_k A_j + c [A_j, A_k] by central differences of the potential.
SkewMatrixd curvature_by_differences(const Eigen::VectorXd& r, int j, int k, double h, int c,
                                     const GaugeConvention& conv) {
  const int n = static_cast<int>(r.size());
  const auto dj_p = potential(r + h * unit(n, j), conv), dj_m = potential(r - h * unit(n, j), conv);
  const auto dk_p = potential(r + h * unit(n, k), conv), dk_m = potential(r - h * unit(n, k), conv);
  const auto a = potential(r, conv);
  SkewMatrixd out = (dj_p[k] - dj_m[k] - dk_p[j] + dk_m[j]) * (0.5 / h);
  out += static_cast<double>(c) * commutator(a[j], a[k]);
  return out;
}

Eigen::Vector3d cross(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return Eigen::Vector3d(a(0), a(1), a(2)).cross(Eigen::Vector3d(b(0), b(1), b(2)));
}

}  // namespace

TEST_CASE("string margin") {
  CHECK(dirac_string_margin(unit(3, 2)) == 2.0);
  CHECK(dirac_string_margin(-unit(3, 2)) == 0.0);
  CHECK(dirac_string_margin(unit(5, 0)) == 1.0);
  CHECK_THROWS_AS(dirac_string_margin(Eigen::VectorXd::Zero(3)), DomainError);
}

TEST_CASE("potential examples") {
  for (int k = 1; k <= 3; ++k) {
    const auto a = potential(unit(2 * k + 1, 2 * k));
    for (const auto& c : a) CHECK(c.is_zero());
  }
  const auto a = potential(unit(3, 0));
  CHECK(a[0].is_zero());
  CHECK(a[2].is_zero());
  CHECK((a[1] - generator(1, 2, 1)).norm() < 1e-15);
  const auto half = potential(2.0 * unit(3, 0));
  CHECK((half[1] - 0.5 * a[1]).norm() < 1e-15);
  CHECK_THROWS_AS(potential(-unit(3, 2)), DiracStringError);
  CHECK_THROWS_AS(potential(Eigen::VectorXd::Zero(4)), DomainError);
}

TEST_CASE("potential along a velocity matches the component sum") {
  Rng rng(21);
  for (int k = 1; k <= 3; ++k) {
    const int n = 2 * k + 1;
    const auto r = random_point(n, 0.1, rng);
    const Eigen::VectorXd v = random_gaussian(n, rng);
    const auto a = potential(r);
    SkewMatrixd sum(k);
    for (int j = 0; j < n; ++j) sum += v(j) * a[j];
    CHECK((potential_along(r, v) - sum).norm() < 1e-13);
  }
}

TEST_CASE("curvature at the north pole and homogeneity") {
  const Curvature f = curvature(unit(3, 2));
  CHECK(f(2, 0).is_zero());
  CHECK(f(2, 1).is_zero());
  // With the potential sign fixed as sigma_A, the structure equation gives +sigma_A M_12 here.
  CHECK((f(0, 1) - kResolvedConvention.potential_sign * generator(1, 2, 1)).norm() < 1e-15);

  Rng rng(4);
  for (int k = 1; k <= 3; ++k) {
    const int n = 2 * k + 1;
    const auto r = random_point(n, 0.1, rng);
    const Curvature f1 = curvature(r), f2 = curvature(2.0 * r);
    const auto a1 = potential(r), a2 = potential(2.0 * r);
    for (int j = 0; j < n; ++j) {
      CHECK((a2[j] - 0.5 * a1[j]).norm() < 1e-14);
      for (int l = 0; l < n; ++l) {
        CHECK((f2(j, l) - 0.25 * f1(j, l)).norm() < 1e-14);
        CHECK((f1(j, l) + f1(l, j)).norm() == 0.0);
      }
    }
  }
}

TEST_CASE("curvature is the field strength of the potential") {
  Rng rng(12);
  for (int conv_sign : {+1, -1}) {
    const GaugeConvention conv{conv_sign, +1};
    for (int k = 1; k <= 3; ++k) {
      const int n = 2 * k + 1;
      for (int trial = 0; trial < 5; ++trial) {
        const auto r = random_point(n, 0.2, rng);
        const Curvature f = curvature(r, conv);
        double worst = 0, wrong = 0;
        for (int j = 0; j < n; ++j)
          for (int l = j + 1; l < n; ++l) {
            const double scale = 1.0 / r.squaredNorm();
            worst = std::max(worst, (curvature_by_differences(r, j, l, 1e-5, conv.commutator_sign(), conv) - f(j, l)).norm() / scale);
            wrong = std::max(wrong, (curvature_by_differences(r, j, l, 1e-5, -conv.commutator_sign(), conv) - f(j, l)).norm() / scale);
          }
        CHECK(worst < 1e-8);
        if (k > 1) CHECK(wrong > 1e-3);  // so(2) is abelian, so the sign is invisible for k = 1
      }
    }
  }
}

TEST_CASE("paired curvature closed form matches the full array") {
  Rng rng(31);
  for (int k = 1; k <= 4; ++k) {
    const int n = 2 * k + 1;
    for (int trial = 0; trial < 10; ++trial) {
      const auto r = random_point(n, 0.05, rng);
      const auto xi = random_charge(1.3, k, rng);
      const Eigen::MatrixXd fast = paired_curvature(r, xi);
      const Eigen::MatrixXd slow = paired_curvature_reference(curvature(r), xi);
      CHECK(testing::max_abs(fast - slow) < 1e-13 * (1 + testing::max_abs(slow)));
    }
  }
}

TEST_CASE("force field in three dimensions is the monopole force") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const double mu = random_uniform(-2, 2, rng);
    const auto r = random_point(3, 0.1, rng);
    const Eigen::VectorXd v = random_gaussian(3, rng);
    const Eigen::VectorXd w = force_field(r, v, mu * generator(1, 2, 1));
    const Eigen::Vector3d expected = -mu * cross(v, r) / std::pow(r.norm(), 3);
    CHECK((w - expected).norm() < 1e-13);
  }
}

TEST_CASE("force field vanishes for radial velocity and zero charge") {
  Rng rng(6);
  for (int k = 1; k <= 3; ++k) {
    const int n = 2 * k + 1;
    const auto r = random_point(n, 0.1, rng);
    const auto xi = random_charge(2.0, k, rng);
    CHECK(force_field(r, 3.0 * r, xi).norm() < 1e-13);
    CHECK(force_field(r, random_gaussian(n, rng), SkewMatrixd(k)).norm() == 0.0);
    const Eigen::VectorXd v = random_gaussian(n, rng);
    const Eigen::VectorXd w = force_field(r, v, xi);
    const double scale = w.norm() * (r.norm() + v.norm());
    CHECK(std::abs(w.dot(r)) < 1e-13 * scale);
    CHECK(std::abs(w.dot(v)) < 1e-13 * scale);
  }
}

TEST_CASE("lemma residuals at random points") {
  Rng rng(99);
  for (int k = 1; k <= 3; ++k)
    for (double mu : {0.0, 0.5, 2.0}) {
      const int n = 2 * k + 1;
      for (int trial = 0; trial < 20; ++trial) {
        const auto r = random_point(n, 0.1, rng);
        const auto xi = random_charge(mu, k, rng);
        const Eigen::VectorXd v = random_gaussian(n, rng);
        const auto res = lemma_residuals(r, xi, v, mu);
        CHECK(res.max_algebraic() < 1e-10);
        CHECK(res.covariant < 1e-6);
        if (mu == 0.0) {
          CHECK(res.quadratic == 0.0);
          CHECK(res.paired_norm == 0.0);
          CHECK(res.force_norm == 0.0);
        }
      }
    }
}

TEST_CASE("covariant identity converges at second order for the resolved commutator sign only") {
  Rng rng(44);
  for (int k = 2; k <= 3; ++k) {
    const auto r = random_point(2 * k + 1, 0.3, rng);
    const int c = kResolvedConvention.commutator_sign();
    const double e1 = covariant_derivative_residual(r, 1e-3, c);
    const double e2 = covariant_derivative_residual(r, 1e-4, c);
    const double order = std::log10(e1 / e2);
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
    CHECK(covariant_derivative_residual(r, 1e-4, -c) > 1e-2);
  }
}
