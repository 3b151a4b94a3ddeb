#include "mkepler/invariants.hpp"

#include <algorithm>
#include <cmath>

namespace mkepler {

namespace {

double relative(double residual, double scale) { return scale > 0 ? residual / scale : residual; }

Multivectord vec(const Metric& m, const Eigen::VectorXd& x) { return Multivectord::vector(m, x); }

}  // namespace

bool is_colliding(const State& s) {
  const double rr = s.r.squaredNorm(), vv = s.v.squaredNorm(), rv = s.r.dot(s.v);
  const double cross = std::max(0.0, rr * vv - rv * rv);
  return cross <= 1e-24 * rr * vv || vv == 0.0;
}

InvariantRecord compute_invariants(const State& s, double mu, const GaugeConvention& conv) {
  s.validate();
  const int n = s.dim();
  const Metric metric = Metric::euclidean(n);
  const double r = s.r.norm();
  if (r == 0.0) throw DomainError("invariants are undefined at the origin");
  const double r2 = r * r;

  InvariantRecord rec;
  rec.k = s.k();
  rec.mu = mu;
  rec.E = 0.5 * s.v.squaredNorm() - 1.0 / r + (mu * mu / rec.k) / (2.0 * r2);

  // Uncharged states may sit on the string; their gauge term vanishes anyway.
  const Eigen::MatrixXd p = s.xi.is_zero() ? Eigen::MatrixXd::Zero(n, n) : paired_curvature(s.r, s.xi, conv);
  const Eigen::MatrixXd rv = s.r * s.v.transpose() - s.v * s.r.transpose();
  rec.L = Multivectord::from_antisymmetric(metric, rv + r2 * p);
  rec.A = interior(vec(metric, s.v), rec.L).as_vector() + s.r / r;

  const double dot = s.r.dot(s.v);
  rec.rv_normsq = std::max(0.0, r2 * s.v.squaredNorm() - dot * dot);
  if (is_colliding(s)) return rec;

  const Eigen::VectorXd w = p.transpose() * s.v;
  rec.V = vec(metric, s.r) ^ vec(metric, s.v) ^ vec(metric, (r2 * r) * w);
  const Eigen::VectorXd first = s.r - (r2 * r2 / rec.rv_normsq) * w;
  const Eigen::VectorXd second = s.v - (dot / r2) * s.r;
  rec.Lbar = vec(metric, first) ^ vec(metric, second);
  return rec;
}

Multivectord effective_angular_momentum_by_projection(const InvariantRecord& rec) {
  if (!rec.V) throw DomainError("colliding state has no effective angular momentum");
  const double scale = rec.L.coefficient_norm();
  if (rec.V->coefficient_norm() <= 1e-14 * scale * scale * scale) return rec.L;
  return project_onto_plane_square(rec.L, *rec.V);
}

double RelationResiduals::max() const {
  return std::max({angular_momentum, v_norm, lbar_wedge, lbar_norm, lbar_charge, energy, lbar_decomposable});
}

RelationResiduals relation_residuals(const InvariantRecord& rec, const State& s) {
  if (is_colliding(s) || !rec.V || !rec.Lbar) throw DomainError("relations require a non-colliding state");
  const double level = rec.mu * rec.mu / rec.k;
  const double c = rec.rv_normsq;
  const Multivectord& lbar = *rec.Lbar;
  const Multivectord& v = *rec.V;
  const Multivectord a = Multivectord::vector(lbar.metric(), rec.A);
  const double l2 = square(rec.L);
  const double lb2 = square(lbar);
  const double a2 = rec.A.squaredNorm();
  const Multivectord la = lbar ^ a;
  const double la2 = square(la);

  RelationResiduals out;
  out.angular_momentum = relative(std::abs(l2 - c - rec.mu * rec.mu), l2);
  out.v_norm = relative(std::abs(square(v) - level * c * c), (1.0 + level) * c * c);
  out.lbar_wedge = relative((la - v / c).coefficient_norm(), std::sqrt(lb2 * a2) + v.coefficient_norm() / c);
  out.lbar_norm = relative(std::abs(lb2 - la2 - c), lb2 + la2);
  out.lbar_charge = relative(std::abs(la2 - level), lb2 * a2 + level);
  out.energy = relative(std::abs(rec.E + (1.0 - a2) / (2.0 * c)), std::abs(rec.E) + (1.0 + a2) / (2.0 * c));
  out.lbar_decomposable = relative((lbar ^ lbar).coefficient_norm(), lb2);
  return out;
}

}  // namespace mkepler
