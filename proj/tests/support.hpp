#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mkepler/multivector.hpp"
#include "mkepler/sampling.hpp"

namespace mkepler::testing {

inline Multivectord random_multivector(const Metric& metric, int grade, Rng& rng) {
  Multivectord out(metric, grade);
  out.coeffs() = random_gaussian(static_cast<int>(out.size()), rng);
  return out;
}

inline Multivectord random_blade(const Metric& metric, int grade, Rng& rng, std::vector<Eigen::VectorXd>* legs = nullptr) {
  Multivectord out = Multivectord::scalar(metric, 1.0);
  for (int i = 0; i < grade; ++i) {
    const Eigen::VectorXd u = random_gaussian(metric.ambient(), rng);
    if (legs) legs->push_back(u);
    out = wedge(out, Multivectord::vector(metric, u));
  }
  return out;
}

inline double vector_dot(const Metric& metric, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  double sum = 0;
  for (int p = 0; p < metric.ambient(); ++p) sum += metric.basis_sign(p) * u(p) * v(p);
  return sum;
}

// Solves the adjoint identity <X ^ e_I, v> = <e_I, X _| v> against every basis blade.
inline Multivectord interior_by_adjoint(const Multivectord& x, const Multivectord& v) {
  const Metric& metric = x.metric();
  Multivectord out(metric, v.grade() - x.grade());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    Multivectord e(metric, out.grade());
    e.coeffs()(i) = 1.0;
    out.coeffs()(i) = inner(wedge(x, e), v) / metric.blade_sign(e.blade(i));
  }
  return out;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace mkepler::testing
