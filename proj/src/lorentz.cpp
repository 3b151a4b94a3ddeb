#include "mkepler/lorentz.hpp"

#include <cmath>
#include <vector>

namespace mkepler {

namespace {

Multivectord lvec(int n, const Eigen::VectorXd& x) { return Multivectord::vector(Metric::lorentz(n), x); }

int spatial_dim(const LightConeOrbit& lc) { return 2 * lc.k + 1; }

// Lorentz-orthogonal projector onto the subspace [m].
Eigen::MatrixXd subspace_projector(const Multivectord& m) {
  const Eigen::MatrixXd b = span_basis(m);
  const Eigen::MatrixXd eta = minkowski_metric(m.metric().dim);
  const Eigen::MatrixXd gram = b.transpose() * eta * b;
  return b * gram.inverse() * b.transpose() * eta;
}

// Removes the components along pseudo-orthonormal legs.
Eigen::VectorXd reduce(Eigen::VectorXd w, const std::vector<Eigen::VectorXd>& legs) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& f : legs) w -= (minkowski(w, f) / minkowski(f, f)) * f;
  return w;
}

// Spacelike unit vector of largest norm among the reduced candidates; the
// lowest index wins ties.
Eigen::VectorXd best_spacelike(const std::vector<Eigen::VectorXd>& candidates,
                               const std::vector<Eigen::VectorXd>& legs) {
  Eigen::VectorXd best;
  double best_norm = 0;
  for (const auto& c : candidates) {
    const Eigen::VectorXd w = reduce(c, legs);
    const double norm2 = -minkowski(w, w);
    if (norm2 > best_norm * (1 + 1e-12)) {
      best_norm = norm2;
      best = w;
    }
  }
  if (best_norm < 1e-12) throw DomainError("degenerate Lorentz frame");
  return best / std::sqrt(best_norm);
}

Eigen::MatrixXd boost01(int n, double rapidity) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n + 1, n + 1);
  b(0, 0) = b(1, 1) = std::cosh(rapidity);
  b(0, 1) = b(1, 0) = std::sinh(rapidity);
  return b;
}

}  // namespace

double minkowski(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("Lorentz vectors of mismatched size");
  return x(0) * y(0) - x.tail(x.size() - 1).dot(y.tail(y.size() - 1));
}

Eigen::MatrixXd minkowski_metric(int n) {
  Eigen::MatrixXd eta = -Eigen::MatrixXd::Identity(n + 1, n + 1);
  eta(0, 0) = 1;
  return eta;
}

void validate(const LightConeOrbit& lc, double tol) {
  const int n = spatial_dim(lc);
  if (lc.k < 1) throw DomainError("light-cone data need k >= 1");
  if (lc.a.size() != n + 1) throw DomainError("marked vector has the wrong dimension");
  if (lc.m.metric() != Metric::lorentz(n) || lc.m.grade() != 3)
    throw DomainError("m must be a Lorentz 3-vector over R^{1,2k+1}");
  if (!lc.a.allFinite() || !lc.m.coeffs().allFinite()) throw DomainError("light-cone data must be finite");
  if (!is_decomposable(lc.m, tol)) throw MembershipError("m_decomposable", "m is not decomposable");
  if (std::abs(square(lc.m) - 1.0) > tol) throw MembershipError("m_unit", "m^2 must equal 1");
  if (!(lc.a(0) > 0)) throw MembershipError("a_future", "a must have a positive temporal component");
  const Multivectord a = lvec(n, lc.a);
  const double scale = lc.a.norm();
  if ((a ^ lc.m).coefficient_norm() > tol * scale) throw MembershipError("a_in_m", "a must lie in [m]");
  if (interior(a, lc.m).coefficient_norm() <= tol * scale)
    throw MembershipError("a_interior_m", "a _| m must be nonzero");
}

LightConeOrbit to_lightcone(const OrbitElements& el) {
  validate(el);
  const int n = 2 * el.k + 1;
  Eigen::VectorXd big_a(n + 1);
  big_a << 1.0, el.A;
  const Multivectord lam = embed_spatial(el.Lbar) ^ lvec(n, big_a);
  const double norm2 = square(lam);
  if (!(norm2 > 0)) throw MembershipError("Lbar_exceeds_wedge", "Lbar ^ A is not spacelike-positive");
  const double norm = std::sqrt(norm2);
  return LightConeOrbit{el.k, big_a / norm2, lam / norm};
}

OrbitElements from_lightcone(const LightConeOrbit& lc) {
  validate(lc);
  const int n = spatial_dim(lc);
  const Multivectord e0 = Multivectord::basis(Metric::lorentz(n), {0});
  const double a0 = lc.a(0);
  return OrbitElements{lc.k, lc.a.tail(n) / a0, spatial_part(interior(e0, lc.m)) / std::sqrt(a0)};
}

double energy_lightcone(const LightConeOrbit& lc) { return -minkowski(lc.a, lc.a) / (2.0 * lc.a(0)); }

Eigen::VectorXd lift_point(const Eigen::VectorXd& r) {
  const double rn = r.norm();
  if (rn == 0.0) throw DomainError("the origin has no light-cone lift");
  Eigen::VectorXd x(r.size() + 1);
  x << rn, r;
  return x;
}

LightConeResidual lightcone_residuals(const Eigen::VectorXd& x, const LightConeOrbit& lc) {
  const int n = spatial_dim(lc);
  if (x.size() != n + 1) throw DomainError("point has the wrong dimension");
  const Multivectord xv = lvec(n, x);
  const Multivectord e0 = Multivectord::basis(Metric::lorentz(n), {0});
  LightConeResidual out;
  out.plane = minkowski(lc.a, x) - 1.0;
  out.span = (lc.m ^ xv).coefficient_norm();
  const Multivectord base = interior(interior(e0, lc.m), lc.m) / lc.a(0);
  out.line = ((xv - base) ^ interior(lvec(n, lc.a), lc.m)).coefficient_norm();
  return out;
}

const char* to_string(LightConeClass c) {
  switch (c) {
    case LightConeClass::Elliptic: return "elliptic";
    case LightConeClass::Parabolic: return "parabolic";
    case LightConeClass::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

LightConeClass classify(const LightConeOrbit& lc) {
  const double a2 = minkowski(lc.a, lc.a);
  if (std::abs(a2) <= 1e-10 * lc.a(0) * lc.a(0)) return LightConeClass::Parabolic;
  return a2 > 0 ? LightConeClass::Elliptic : LightConeClass::Hyperbolic;
}

LorentzTransform LorentzTransform::inverse() const {
  const Eigen::MatrixXd eta = minkowski_metric(static_cast<int>(matrix.rows()) - 1);
  return LorentzTransform{eta * matrix.transpose() * eta};
}

void validate(const LorentzTransform& t, double tol) {
  const Eigen::Index size = t.matrix.rows();
  if (size < 3 || t.matrix.cols() != size) throw DomainError("Lorentz transform must be square of size n+1 >= 3");
  if (!t.matrix.allFinite()) throw DomainError("Lorentz transform must be finite");
  const Eigen::MatrixXd eta = minkowski_metric(static_cast<int>(size) - 1);
  if ((t.matrix.transpose() * eta * t.matrix - eta).cwiseAbs().maxCoeff() > tol)
    throw MembershipError("lorentz_metric", "matrix does not preserve the Minkowski metric");
  if (!t.orthochronous()) throw MembershipError("orthochronous", "transform reverses the time direction");
}

LightConeOrbit group_apply(const LorentzTransform& t, double lambda, const LightConeOrbit& lc) {
  validate(t);
  if (!(lambda > 0)) throw DomainError("scale factor must be positive");
  validate(lc);
  if (t.matrix.rows() != lc.a.size()) throw DomainError("transform does not match the light-cone dimension");
  return LightConeOrbit{lc.k, lambda * (t.matrix * lc.a), transform(t.matrix, lc.m)};
}

LightConeOrbit canonical_representative(LightConeClass c, int k) {
  const int n = 2 * k + 1;
  const Metric metric = Metric::lorentz(n);
  Eigen::VectorXd a = Eigen::VectorXd::Unit(n + 1, 0);
  if (c == LightConeClass::Parabolic) a(1) = 1;
  else if (c != LightConeClass::Elliptic) throw DomainError("hyperbolic orbits have no canonical representative");
  return LightConeOrbit{k, a, Multivectord::basis(metric, {0, 1, 2})};
}

Witness canonical_frame(const LightConeOrbit& p, WitnessStyle style) {
  validate(p);
  const LightConeClass cls = classify(p);
  if (cls == LightConeClass::Hyperbolic) throw DomainError("transitivity is only available for elliptic and parabolic orbits");
  if (style == WitnessStyle::PureLorentz && cls != LightConeClass::Parabolic)
    throw DomainError("a pure Lorentz witness exists only for parabolic orbits");
  const int n = spatial_dim(p);
  const Eigen::MatrixXd proj = subspace_projector(p.m);

  std::vector<Eigen::VectorXd> legs;
  double lambda = 1;
  if (cls == LightConeClass::Elliptic) {
    lambda = std::sqrt(minkowski(p.a, p.a));
    legs.push_back(p.a / lambda);
  } else {
    const Eigen::VectorXd t = proj.col(0);
    const Eigen::VectorXd f0 = t / std::sqrt(minkowski(t, t));
    lambda = minkowski(p.a, f0);
    legs.push_back(f0);
    legs.push_back(p.a / lambda - f0);
  }
  std::vector<Eigen::VectorXd> candidates;
  for (int i = 1; i <= n; ++i) candidates.push_back(proj.col(i));
  while (legs.size() < 3) legs.push_back(best_spacelike(candidates, legs));

  const Multivectord frame3 = lvec(n, legs[0]) ^ lvec(n, legs[1]) ^ lvec(n, legs[2]);
  if (inner(frame3, p.m) < 0) legs[2] = -legs[2];

  for (int i = 0; i <= n && static_cast<int>(legs.size()) < n + 1; ++i) {
    const Eigen::VectorXd w = reduce(Eigen::VectorXd::Unit(n + 1, i), legs);
    const double norm2 = -minkowski(w, w);
    if (norm2 > 1e-6) legs.push_back(w / std::sqrt(norm2));
  }
  if (static_cast<int>(legs.size()) != n + 1) throw DomainError("degenerate Lorentz frame");

  Eigen::MatrixXd lam(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) lam.col(j) = legs[static_cast<std::size_t>(j)];
  if (lam.determinant() < 0) lam.col(n) *= -1.0;

  if (style == WitnessStyle::PureLorentz) {
    lam = lam * boost01(n, std::log(lambda));
    lambda = 1;
  }
  return Witness{LorentzTransform{lam}, lambda};
}

Witness transitivity_witness(const LightConeOrbit& p1, const LightConeOrbit& p2, WitnessStyle style) {
  validate(p1);
  validate(p2);
  if (p1.k != p2.k) throw DomainError("light-cone points live in different dimensions");
  if (classify(p1) != classify(p2)) throw DomainError("light-cone points lie in different classes");
  const Witness w1 = canonical_frame(p1, style);
  const Witness w2 = canonical_frame(p2, style);
  return Witness{LorentzTransform{w2.transform.matrix * w1.transform.inverse().matrix}, w2.lambda / w1.lambda};
}

}  // namespace mkepler
