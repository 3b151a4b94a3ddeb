#include "mkepler/sampling.hpp"

#include "mkepler/gauge.hpp"

namespace mkepler {

Eigen::VectorXd random_gaussian(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = normal(rng);
  return out;
}

Eigen::VectorXd random_unit(int n, Rng& rng) {
  Eigen::VectorXd out;
  do {
    out = random_gaussian(n, rng);
  } while (out.norm() < 1e-8);
  return out.normalized();
}

double random_uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Eigen::MatrixXd random_rotation(int m, Rng& rng) {
  Eigen::MatrixXd g(m, m);
  for (int j = 0; j < m; ++j) g.col(j) = random_gaussian(m, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int j = 0; j < m; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

SkewMatrixd random_charge(double mu, int k, Rng& rng) {
  return conjugate(random_rotation(2 * k, rng), orbit_representative(mu, k));
}

Eigen::VectorXd random_point(int n, double min_margin, Rng& rng, double r_lo, double r_hi) {
  for (;;) {
    const Eigen::VectorXd dir = random_unit(n, rng);
    if ((1.0 + dir(n - 1)) <= min_margin) continue;
    return random_uniform(r_lo, r_hi, rng) * dir;
  }
}

}  // namespace mkepler

namespace mkepler {

namespace {

// Random orthonormal pair spanning a plane of R^n.
std::pair<Eigen::VectorXd, Eigen::VectorXd> random_plane(int n, Rng& rng) {
  const Eigen::MatrixXd q = random_rotation(n, rng);
  return {q.col(0), q.col(1)};
}

Eigen::VectorXd random_orthogonal_unit(int n, const Eigen::VectorXd& u, const Eigen::VectorXd& w, Rng& rng) {
  for (;;) {
    Eigen::VectorXd x = random_gaussian(n, rng);
    x -= x.dot(u) * u + x.dot(w) * w;
    if (x.norm() > 1e-6) return x.normalized();
  }
}

}  // namespace

State random_state(int k, double mu, Rng& rng, double min_margin, double speed) {
  const int n = 2 * k + 1;
  const Eigen::VectorXd r = random_point(n, min_margin, rng);
  const Eigen::VectorXd v = speed * random_gaussian(n, rng);
  return State{r, v, random_charge(mu, k, rng)};
}

OrbitElements random_elements(int k, Rng& rng, double max_parallel) {
  const int n = 2 * k + 1;
  const Metric metric = Metric::euclidean(n);
  const auto [u, w] = random_plane(n, rng);
  const double ell = random_uniform(0.5, 2.0, rng);
  const double theta = random_uniform(0, 2 * 3.141592653589793, rng);
  const Eigen::VectorXd a = random_uniform(0, max_parallel, rng) * (std::cos(theta) * u + std::sin(theta) * w) +
                            random_uniform(0, 0.9, rng) * random_orthogonal_unit(n, u, w, rng);
  return OrbitElements{k, a, ell * (Multivectord::vector(metric, u) ^ Multivectord::vector(metric, w))};
}

OrbitElements random_bound_elements(int k, double mu, Rng& rng, double e_lo, double e_hi) {
  const int n = 2 * k + 1;
  const Metric metric = Metric::euclidean(n);
  const auto [u, w] = random_plane(n, rng);
  const double level = std::abs(mu) / std::sqrt(static_cast<double>(k));
  const double ell = random_uniform(1.0, 1.3, rng) * std::max(0.9, 1.4 * level);
  const double p = level / ell;
  const Multivectord lbar = ell * (Multivectord::vector(metric, u) ^ Multivectord::vector(metric, w));
  const double theta = random_uniform(0, 2 * 3.141592653589793, rng);
  const Eigen::VectorXd dir = std::cos(theta) * u + std::sin(theta) * w;
  const Eigen::VectorXd perp = p * random_orthogonal_unit(n, u, w, rng);
  const double target = random_uniform(e_lo, e_hi, rng);
  double lo = 0, hi = std::sqrt(1 - p * p);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eccentricity(OrbitElements{k, mid * dir + perp, lbar}) < target)
      lo = mid;
    else
      hi = mid;
  }
  return OrbitElements{k, 0.5 * (lo + hi) * dir + perp, lbar};
}

Eigen::MatrixXd random_lorentz(int n, Rng& rng, double max_rapidity) {
  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(n + 1, n + 1);
  rot.bottomRightCorner(n, n) = random_rotation(n, rng);
  const Eigen::VectorXd d = random_unit(n, rng);
  const double beta = random_uniform(0, max_rapidity, rng);
  Eigen::MatrixXd boost = Eigen::MatrixXd::Identity(n + 1, n + 1);
  boost(0, 0) = std::cosh(beta);
  boost.block(0, 1, 1, n) = std::sinh(beta) * d.transpose();
  boost.block(1, 0, n, 1) = std::sinh(beta) * d;
  boost.bottomRightCorner(n, n) += (std::cosh(beta) - 1) * d * d.transpose();
  return boost * rot;
}

LightConeOrbit random_lightcone(int k, LightConeClass c, Rng& rng) {
  const int n = 2 * k + 1;
  LightConeOrbit base = canonical_representative(c, k);
  const double s = random_uniform(0.5, 2.0, rng);
  const double theta = random_uniform(0, 2 * 3.141592653589793, rng);
  const double beta = c == LightConeClass::Elliptic ? random_uniform(0, 1.0, rng) : 0.0;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
  if (c == LightConeClass::Elliptic) {
    a(0) = std::cosh(beta);
    a(1) = std::sinh(beta) * std::cos(theta);
    a(2) = std::sinh(beta) * std::sin(theta);
  } else {
    a(0) = 1;
    a(1) = std::cos(theta);
    a(2) = std::sin(theta);
  }
  base.a = s * a;
  const Eigen::MatrixXd lam = random_lorentz(n, rng, 1.0);
  return LightConeOrbit{k, lam * base.a, transform(lam, base.m)};
}

}  // namespace mkepler
