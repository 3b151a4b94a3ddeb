#include "mkepler/orbits.hpp"

#include <algorithm>
#include <cmath>

#include "mkepler/gauge.hpp"

namespace mkepler {

namespace {

Multivectord vec(const Metric& m, const Eigen::VectorXd& x) { return Multivectord::vector(m, x); }

// x |-> -((x _| Lbar) _| Lbar) / |Lbar|^2, orthogonal projection onto [Lbar].
Eigen::MatrixXd plane_projector(const Multivectord& lbar) {
  const Eigen::MatrixXd m = lbar.as_antisymmetric();
  return -(m * m) / square(lbar);
}

// Orthonormal rows completing `fixed` (rows) to a basis, by Gram-Schmidt on e_1, e_2, ...
Eigen::MatrixXd complete_basis(const Eigen::MatrixXd& fixed, int n) {
  Eigen::MatrixXd rows(n - fixed.rows(), n);
  Eigen::MatrixXd all = fixed;
  int filled = 0;
  for (int i = 0; i < n && filled < rows.rows(); ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Unit(n, i);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < all.rows(); ++j) x -= all.row(j).dot(x) * all.row(j).transpose();
    if (x.norm() < 1e-6) continue;
    x.normalize();
    rows.row(filled++) = x.transpose();
    all.conservativeResize(all.rows() + 1, Eigen::NoChange);
    all.row(all.rows() - 1) = x.transpose();
  }
  if (filled != rows.rows()) throw DomainError("could not complete an orthonormal basis");
  return rows;
}

}  // namespace

void validate(const OrbitElements& el, double tol) {
  const int n = 2 * el.k + 1;
  if (el.k < 1) throw DomainError("orbit elements need k >= 1");
  if (el.A.size() != n) throw DomainError("Lenz vector has the wrong dimension");
  if (el.Lbar.metric() != Metric::euclidean(n) || el.Lbar.grade() != 2)
    throw DomainError("Lbar must be a Euclidean 2-vector in dimension 2k+1");
  if (!el.A.allFinite() || !el.Lbar.coeffs().allFinite()) throw DomainError("orbit elements must be finite");
  if (!is_decomposable(el.Lbar, tol)) throw MembershipError("Lbar_decomposable", "Lbar is not decomposable");
  const double lb2 = square(el.Lbar);
  const double la2 = square(lbar_wedge_a(el));
  if (!(lb2 > 0) || !(lb2 - la2 > 1e-13 * lb2))
    throw MembershipError("Lbar_exceeds_wedge", "orbit elements require |Lbar|^2 > |Lbar ^ A|^2");
}

OrbitElements elements_of(const InvariantRecord& rec) {
  if (!rec.Lbar) throw DomainError("colliding state has no orbit elements");
  return OrbitElements{rec.k, rec.A, *rec.Lbar};
}

Multivectord lbar_wedge_a(const OrbitElements& el) { return el.Lbar ^ vec(el.Lbar.metric(), el.A); }

Multivectord orbit_plane(const OrbitElements& el) {
  const Metric& m = el.Lbar.metric();
  const Multivectord a = vec(m, el.A);
  return el.Lbar - interior(a, a ^ el.Lbar);
}

double eccentricity(const OrbitElements& el) {
  validate(el);
  const double lb2 = square(el.Lbar);
  const double la2 = square(lbar_wedge_a(el));
  const double p2 = square(orbit_plane(el));
  const double one_minus_e2 = (lb2 - la2) / p2 * (1.0 - el.A.squaredNorm());
  return std::sqrt(std::max(0.0, 1.0 - one_minus_e2));
}

double energy_from_elements(const OrbitElements& el) {
  validate(el);
  const double lb2 = square(el.Lbar);
  const double la2 = square(lbar_wedge_a(el));
  return -(1.0 - el.A.squaredNorm()) / (2.0 * (lb2 - la2));
}

const char* to_string(ConicClass c) {
  switch (c) {
    case ConicClass::Ellipse: return "ellipse";
    case ConicClass::Parabola: return "parabola";
    case ConicClass::HyperbolaBranch: return "hyperbola";
  }
  return "unknown";
}

ConicClass classify(const OrbitElements& el) {
  const double e = energy_from_elements(el);
  if (std::abs(e) <= 1e-10 * (1.0 + el.A.squaredNorm())) return ConicClass::Parabola;
  return e < 0 ? ConicClass::Ellipse : ConicClass::HyperbolaBranch;
}

double implied_magnetic_charge(const OrbitElements& el) {
  validate(el);
  return std::sqrt(static_cast<double>(el.k)) * lbar_wedge_a(el).coefficient_norm();
}

ConicResidual conic_residuals(const Eigen::VectorXd& r, const OrbitElements& el) {
  validate(el);
  if (r.size() != el.A.size()) throw DomainError("point has the wrong dimension");
  const double rn = r.norm();
  const double level = square(el.Lbar) - square(lbar_wedge_a(el));
  ConicResidual out;
  out.scalar = rn - el.A.dot(r) - level;
  out.wedge = (el.Lbar ^ vec(el.Lbar.metric(), r - rn * el.A)).coefficient_norm();
  return out;
}

double orientation_cosine(const Eigen::VectorXd& v, const Eigen::VectorXd& a, const OrbitElements& el) {
  const Metric& m = el.Lbar.metric();
  const Multivectord tn = vec(m, v) ^ vec(m, a);
  const Multivectord plane = orbit_plane(el);
  const double denom = tn.coefficient_norm() * plane.coefficient_norm();
  if (denom == 0.0) throw DomainError("orientation undefined for a straight or degenerate motion");
  return inner(tn, plane) / denom;
}

OrbitElements rotate(const OrbitElements& el, const Eigen::MatrixXd& rotation) {
  return OrbitElements{el.k, rotation * el.A, transform(rotation, el.Lbar)};
}

InitialData construct_initial_data(const OrbitElements& el) {
  validate(el);
  const int k = el.k;
  const int n = 2 * k + 1;
  const double lb2 = square(el.Lbar);
  const Eigen::MatrixXd proj = plane_projector(el.Lbar);

  const Eigen::VectorXd a_par = proj * el.A;
  const Eigen::VectorXd a_perp = el.A - a_par;
  const double par_len = std::sqrt(std::max(0.0, 1.0 - a_perp.squaredNorm()));

  // n_par: the unit-sphere point of [Lbar] farthest from A_par; ties go to the
  // first Gram-Schmidt vector of the projected coordinate axes.
  Eigen::VectorXd dir;
  if (a_par.norm() > 1e-14 * (1.0 + el.A.norm())) {
    dir = -a_par.normalized();
  } else {
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd p = proj.col(i);
      if (p.norm() > 1e-6) {
        dir = p.normalized();
        break;
      }
    }
  }
  const Eigen::VectorXd nvec = par_len * dir + a_perp;

  const Eigen::MatrixXd lm = el.Lbar.as_antisymmetric();
  const Eigen::VectorXd v = lm.transpose() * (nvec - el.A) / lb2;
  const double one_minus_an = 1.0 - el.A.dot(nvec);
  const Eigen::VectorXd q = (one_minus_an / v.squaredNorm()) * nvec;
  const Eigen::VectorXd u = lm.transpose() * v + one_minus_an * nvec;

  const bool charged = lbar_wedge_a(el).coefficient_norm() > 1e-14 * std::sqrt(lb2) * (1.0 + el.A.norm());
  const double u_len = u.norm();

  // Rows of R: [complement; u-row; v/|v|; n].
  Eigen::MatrixXd fixed(2, n);
  fixed.row(0) = v.normalized().transpose();
  fixed.row(1) = nvec.transpose();
  Eigen::MatrixXd rot(n, n);
  const int sigma = kResolvedConvention.potential_sign;
  if (charged && k >= 2) {
    Eigen::MatrixXd three(3, n);
    three.row(0) = (-sigma * u / u_len).transpose();
    three.row(1) = fixed.row(0);
    three.row(2) = fixed.row(1);
    rot << complete_basis(three, n), three;
  } else {
    rot << complete_basis(fixed, n), fixed;
  }
  if (rot.determinant() < 0) rot.row(0) *= -1.0;

  InitialData out;
  out.q = rot * q;
  out.v = rot * v;
  out.rotation = rot;
  out.u = rot * u;
  out.eta = SkewMatrixd(k);
  if (charged) {
    const double sign_u = out.u(2 * k - 2) >= 0 ? 1.0 : -1.0;
    const double last = -sigma * sign_u;
    const double c = u_len / v.norm();
    for (int b = 0; b + 1 < k; ++b) out.eta += c * generator(2 * b + 1, 2 * b + 2, k);
    out.eta += (c * last) * generator(2 * k - 1, 2 * k, k);
    out.implied_mu = last * c * std::sqrt(static_cast<double>(k));
  }
  return out;
}

ConicFit conic_fit(const std::vector<Eigen::VectorXd>& points) {
  using Ld = long double;
  using MatrixL = Eigen::Matrix<Ld, Eigen::Dynamic, Eigen::Dynamic>;
  if (points.size() < 8) throw DomainError("conic fit needs at least 8 points");
  const Eigen::Index n = points.front().size();
  for (const auto& p : points)
    if (p.size() != n) throw DomainError("points have inconsistent dimensions");
  const Eigen::Index count = static_cast<Eigen::Index>(points.size());

  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(count);
  Eigen::MatrixXd centered(count, n);
  for (Eigen::Index i = 0; i < count; ++i) centered.row(i) = (points[static_cast<std::size_t>(i)] - centroid).transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> plane_svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = plane_svd.singularValues();
  if (sv.size() < 2 || !(sv(1) > 1e-9 * sv(0))) throw DomainError("points are collinear or coincident");
  const Eigen::MatrixXd basis = plane_svd.matrixV().leftCols(2);

  ConicFit out;
  out.centroid = centroid;
  out.planarity = sv.size() > 2 ? sv.tail(sv.size() - 2).norm() / sv.head(2).norm() : 0.0;
  const Metric metric = Metric::euclidean(static_cast<int>(n));
  out.plane = Multivectord::vector(metric, basis.col(0)) ^ Multivectord::vector(metric, basis.col(1));

  const Eigen::MatrixXd xy = centered * basis;
  const double scale = std::sqrt(xy.squaredNorm() / static_cast<double>(count));
  MatrixL design(count, 6);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Ld x = xy(i, 0) / scale, y = xy(i, 1) / scale;
    design.row(i) << x * x, x * y, y * y, x, y, Ld(1);
  }
  Eigen::JacobiSVD<MatrixL> svd(design, Eigen::ComputeFullV);
  const Eigen::Matrix<Ld, Eigen::Dynamic, 1> c = svd.matrixV().col(5);
  out.residual = static_cast<double>(svd.singularValues()(5) / std::sqrt(static_cast<Ld>(count)));

  const Ld a = c(0), b = c(1), cc = c(2), d = c(3), e = c(4), f = c(5);
  Eigen::Matrix<Ld, 3, 3> m3;
  m3 << a, b / 2, d / 2, b / 2, cc, e / 2, d / 2, e / 2, f;
  const Ld det3 = m3.determinant();
  if (std::abs(det3) <= Ld(1e-14)) throw DomainError("fitted conic is degenerate");
  const Ld t = std::sqrt((a - cc) * (a - cc) + b * b);
  const Ld eta = det3 < 0 ? Ld(1) : Ld(-1);
  const Ld ratio = 2 * t / (eta * (a + cc) + t);
  out.e = static_cast<double>(std::sqrt(std::max(Ld(0), ratio)));
  return out;
}

}  // namespace mkepler
