#include "mkepler/gauge.hpp"

#include <algorithm>
#include <cmath>

namespace mkepler {

namespace {

double relative(double residual, double scale) { return scale > 0 ? residual / scale : residual; }

void check_margin(const Eigen::VectorXd& r, double min_margin) {
  if (dirac_string_margin(r) < min_margin) throw DiracStringError("point too close to the Dirac string");
}

// sum_a x^a M_{a,b} for b < 2k, as a full matrix.
Eigen::MatrixXd contracted_generator(const Eigen::VectorXd& r, int b, int k) {
  const int m = 2 * k;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    if (a == b) continue;
    out(a, b) -= r(a);
    out(b, a) += r(a);
  }
  return out;
}

Eigen::MatrixXd generator_matrix(int a, int b, int k) {
  const int m = 2 * k;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  out(a, b) = -1.0;
  out(b, a) = 1.0;
  return out;
}

}  // namespace

double dirac_string_margin(const Eigen::VectorXd& r) {
  const double norm = r.norm();
  if (norm == 0.0) throw DomainError("string margin undefined at the origin");
  return (norm + r(r.size() - 1)) / norm;
}

int half_rank(const Eigen::VectorXd& r) {
  const auto n = r.size();
  if (n < 3 || n % 2 == 0) throw DomainError("points must live in odd dimension 2k+1 >= 3");
  return static_cast<int>((n - 1) / 2);
}

std::vector<SkewMatrixd> potential(const Eigen::VectorXd& r, const GaugeConvention& conv, double min_margin) {
  const int k = half_rank(r);
  check_margin(r, min_margin);
  const double rn = r.norm();
  const double f = conv.potential_sign / (rn * (rn + r(2 * k)));
  std::vector<SkewMatrixd> out;
  out.reserve(static_cast<std::size_t>(2 * k + 1));
  for (int b = 0; b < 2 * k; ++b) out.push_back(SkewMatrixd::from_matrix(f * contracted_generator(r, b, k)));
  out.emplace_back(k);
  return out;
}

SkewMatrixd potential_along(const Eigen::VectorXd& r, const Eigen::VectorXd& v, const GaugeConvention& conv,
                            double min_margin) {
  const int k = half_rank(r);
  check_margin(r, min_margin);
  const double rn = r.norm();
  const double f = conv.potential_sign / (rn * (rn + r(2 * k)));
  const auto x = r.head(2 * k);
  const auto w = v.head(2 * k);
  SkewMatrixd out(k);
  for (int i = 0; i < 2 * k; ++i)
    for (int j = i + 1; j < 2 * k; ++j) out.set(i, j, f * (w(i) * x(j) - x(i) * w(j)));
  return out;
}

Curvature::Curvature(int n, int k)
    : n_(n), k_(k), comps_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), SkewMatrixd(k)) {}

void Curvature::set(int j, int l, const SkewMatrixd& value) {
  comps_[index(j, l)] = value;
  comps_[index(l, j)] = -value;
}

Curvature curvature(const Eigen::VectorXd& r, const GaugeConvention& conv, double min_margin) {
  const int k = half_rank(r);
  const int n = 2 * k + 1;
  check_margin(r, min_margin);
  const double rn = r.norm();
  const double r2 = rn * rn;
  const double f = 1.0 / (rn * (rn + r(n - 1)));

  // Real forms of the field-strength formulas with gamma_ab -> M_{a,b};
  // the global sign is applied at the end.
  std::vector<Eigen::MatrixXd> a_unsigned(static_cast<std::size_t>(2 * k));
  for (int b = 0; b < 2 * k; ++b) a_unsigned[static_cast<std::size_t>(b)] = -f * contracted_generator(r, b, k);

  const double sign = -static_cast<double>(conv.potential_sign);
  Curvature out(n, k);
  for (int b = 0; b < 2 * k; ++b) {
    const Eigen::MatrixXd fnb = contracted_generator(r, b, k) / (r2 * rn);
    out.set(n - 1, b, SkewMatrixd::from_matrix(sign * fnb));
  }
  for (int a = 0; a < 2 * k; ++a)
    for (int b = a + 1; b < 2 * k; ++b) {
      const Eigen::MatrixXd fab = -(generator_matrix(a, b, k) + r(a) * a_unsigned[static_cast<std::size_t>(b)] -
                                    r(b) * a_unsigned[static_cast<std::size_t>(a)]) /
                                  r2;
      out.set(a, b, SkewMatrixd::from_matrix(sign * fab));
    }
  return out;
}

Eigen::MatrixXd paired_curvature(const Eigen::VectorXd& r, const SkewMatrixd& xi, const GaugeConvention& conv,
                                 double min_margin) {
  const int k = half_rank(r);
  if (xi.k() != k) throw DomainError("charge and point dimensions disagree");
  const int n = 2 * k + 1;
  check_margin(r, min_margin);
  const double rn = r.norm();
  const double r2 = rn * rn;
  const double f = 1.0 / (rn * (rn + r(n - 1)));
  const double sign = -static_cast<double>(conv.potential_sign);

  const Eigen::MatrixXd xm = xi.matrix();
  const Eigen::VectorXd x = r.head(2 * k);
  const Eigen::VectorXd z = xm * x;  // z_b = sum_c x^c (xi, M_{c,b})

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < 2 * k; ++a) {
    for (int b = a + 1; b < 2 * k; ++b) {
      const double value = sign * (xm(a, b) + f * (x(a) * z(b) - x(b) * z(a))) / r2;
      p(a, b) = value;
      p(b, a) = -value;
    }
    const double value = sign * z(a) / (r2 * rn);
    p(n - 1, a) = value;
    p(a, n - 1) = -value;
  }
  return p;
}

Eigen::MatrixXd paired_curvature_reference(const Curvature& f, const SkewMatrixd& xi) {
  const int n = f.dim();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) p(j, l) = pairing(xi, f(j, l));
  return p;
}

Eigen::VectorXd force_field(const Eigen::VectorXd& r, const Eigen::VectorXd& v, const SkewMatrixd& xi,
                            const GaugeConvention& conv, double min_margin) {
  if (v.size() != r.size()) throw DomainError("position and velocity sizes differ");
  return paired_curvature(r, xi, conv, min_margin).transpose() * v;
}

double LemmaResiduals::max_algebraic() const {
  return std::max({radial_potential, radial_curvature, quadratic, paired_norm, force_norm});
}

double covariant_derivative_residual(const Eigen::VectorXd& r, double h, int commutator_sign,
                                     const GaugeConvention& conv) {
  const int k = half_rank(r);
  const int n = 2 * k + 1;
  const double r2 = r.squaredNorm();
  // Dense forms; the skew norm is the Frobenius norm over sqrt 2.
  auto dense = [n](const Curvature& c) {
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(n * n));
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) out[static_cast<std::size_t>(j * n + l)] = c(j, l).matrix();
    return out;
  };
  const auto f = dense(curvature(r, conv));
  auto at = [n](const std::vector<Eigen::MatrixXd>& c, int j, int l) -> const Eigen::MatrixXd& {
    return c[static_cast<std::size_t>(j * n + l)];
  };
  std::vector<Eigen::MatrixXd> a;
  for (const auto& comp : potential(r, conv)) a.push_back(comp.matrix());

  double scale = 0.0;
  for (const auto& m : f) scale = std::max(scale, m.norm());
  scale /= std::sqrt(2.0 * r2);

  double worst = 0.0;
  Eigen::MatrixXd diff;
  for (int l = 0; l < n; ++l) {
    Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
    step(l) = h;
    const auto fp = dense(curvature(r + step, conv));
    const auto fm = dense(curvature(r - step, conv));
    const Eigen::MatrixXd& al = a[static_cast<std::size_t>(l)];
    for (int j = 0; j < n; ++j)
      for (int m = j + 1; m < n; ++m) {
        const Eigen::MatrixXd& fjm = at(f, j, m);
        diff = (at(fp, j, m) - at(fm, j, m)) * (0.5 / h);
        diff.noalias() += static_cast<double>(commutator_sign) * (al * fjm);
        diff.noalias() -= static_cast<double>(commutator_sign) * (fjm * al);
        diff += (r(j) * at(f, l, m) + r(m) * at(f, j, l) + 2.0 * r(l) * fjm) / r2;
        worst = std::max(worst, diff.norm() / std::sqrt(2.0));
      }
  }
  return relative(worst, scale);
}

LemmaResiduals lemma_residuals(const Eigen::VectorXd& r, const SkewMatrixd& xi, const Eigen::VectorXd& v,
                               double mu, double h, const GaugeConvention& conv) {
  const int k = half_rank(r);
  const int n = 2 * k + 1;
  if (xi.k() != k) throw DomainError("charge and point dimensions disagree");
  if (v.size() != n) throw DomainError("velocity has the wrong size");
  const double rn = r.norm();
  const double r2 = rn * rn;
  const double level = mu * mu / k;

  const auto a = potential(r, conv);
  const Curvature f = curvature(r, conv);
  LemmaResiduals out;

  SkewMatrixd radial(k);
  double radial_scale = 0.0;
  for (int j = 0; j < n; ++j) {
    radial += r(j) * a[static_cast<std::size_t>(j)];
    radial_scale += std::abs(r(j)) * a[static_cast<std::size_t>(j)].norm();
  }
  out.radial_potential = relative(radial.norm(), radial_scale);

  for (int m = 0; m < n; ++m) {
    SkewMatrixd acc(k);
    double acc_scale = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += r(j) * f(j, m);
      acc_scale += std::abs(r(j)) * f(j, m).norm();
    }
    out.radial_curvature = std::max(out.radial_curvature, relative(acc.norm(), acc_scale));
  }

  out.covariant = covariant_derivative_residual(r, h, conv.commutator_sign(), conv);

  const Eigen::MatrixXd p = paired_curvature_reference(f, xi);
  const Eigen::MatrixXd lhs = r2 * r2 * (p.transpose() * p);
  const Eigen::MatrixXd rhs = level * (Eigen::MatrixXd::Identity(n, n) - r * r.transpose() / r2);
  out.quadratic = relative((lhs - rhs).cwiseAbs().maxCoeff(), level);

  double paired = 0.0;
  for (int j = 0; j < n; ++j)
    for (int m = j + 1; m < n; ++m) paired += (r2 * p(j, m)) * (r2 * p(j, m));
  out.paired_norm = relative(std::abs(paired - mu * mu), mu * mu);

  const Eigen::VectorXd w = p.transpose() * v;
  const double cross = std::max(0.0, r2 * v.squaredNorm() - r.dot(v) * r.dot(v));
  const double expected = level * cross / r2;
  out.force_norm = relative(std::abs(r2 * r2 * w.squaredNorm() - expected), level * v.squaredNorm());
  return out;
}

}  // namespace mkepler
