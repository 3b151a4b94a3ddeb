#pragma once

// Generalized Dirac monopole on U = R^{2k+1} minus the negative x_n axis, in
// real form. Points are Eigen vectors of size n = 2k+1; the last component is
// x_n. Gauge components are indexed 0..n-1 (component n-1 is the x_n one).

#include <vector>

#include <Eigen/Dense>

#include "mkepler/skew.hpp"

namespace mkepler {

/// Global signs of the real-form gauge objects.
///
/// potential_sign (sigma_A): A_b = sigma_A / (r (r + x_n)) * sum_a x^a M_{a,b}.
/// The curvature carries the same global sign, so that it satisfies
///   F_jk = d_j A_k - d_k A_j - sigma_A [A_j, A_k]
/// and the covariant derivative is nabla_l = d_l - sigma_A [A_l, .].
/// transport_sign (sigma_D): d xi / dt = sigma_D [A(v), xi].
struct GaugeConvention {
  int potential_sign = +1;
  int transport_sign = +1;

  int commutator_sign() const { return -potential_sign; }
  bool operator==(const GaugeConvention&) const = default;
};

/// The convention for which the k = 1 force reproduces the MICZ equation of
/// motion and the angular momentum is conserved (see the sign-resolution
/// tests).
inline constexpr GaugeConvention kResolvedConvention{+1, +1};

/// Default minimum string margin for evaluating gauge objects.
inline constexpr double kDefaultStringMargin = 1e-6;

/// (r + x_n) / r; zero exactly on the Dirac string.
double dirac_string_margin(const Eigen::VectorXd& r);

/// Number k for a point of dimension 2k + 1; throws for even or small sizes.
int half_rank(const Eigen::VectorXd& r);

/// Components A_1..A_n of the potential (A_n = 0).
std::vector<SkewMatrixd> potential(const Eigen::VectorXd& r, const GaugeConvention& conv = kResolvedConvention,
                                   double min_margin = kDefaultStringMargin);

/// A(v) = sum_j v^j A_j, evaluated without forming the component array.
SkewMatrixd potential_along(const Eigen::VectorXd& r, const Eigen::VectorXd& v,
                            const GaugeConvention& conv = kResolvedConvention,
                            double min_margin = kDefaultStringMargin);

/// Antisymmetric n x n array of curvature components F_jk.
class Curvature {
 public:
  Curvature(int n, int k);

  int dim() const { return n_; }
  int k() const { return k_; }
  const SkewMatrixd& operator()(int j, int l) const { return comps_[index(j, l)]; }
  SkewMatrixd& operator()(int j, int l) { return comps_[index(j, l)]; }

  // Sets F_jl and F_lj = -F_jl.
  void set(int j, int l, const SkewMatrixd& value);

 private:
  std::size_t index(int j, int l) const { return static_cast<std::size_t>(j) * n_ + l; }

  int n_;
  int k_;
  std::vector<SkewMatrixd> comps_;
};

/// Curvature from the closed-form field-strength formulas.
Curvature curvature(const Eigen::VectorXd& r, const GaugeConvention& conv = kResolvedConvention,
                    double min_margin = kDefaultStringMargin);

/// P_jk = (xi, F_jk) as an antisymmetric n x n matrix, by closed form in O(n^2).
Eigen::MatrixXd paired_curvature(const Eigen::VectorXd& r, const SkewMatrixd& xi,
                                 const GaugeConvention& conv = kResolvedConvention,
                                 double min_margin = kDefaultStringMargin);

/// Same quantity through the full curvature array; independent route.
Eigen::MatrixXd paired_curvature_reference(const Curvature& f, const SkewMatrixd& xi);

/// w_j = (xi, sum_i v^i F_ij), the magnetic part of the acceleration.
Eigen::VectorXd force_field(const Eigen::VectorXd& r, const Eigen::VectorXd& v, const SkewMatrixd& xi,
                            const GaugeConvention& conv = kResolvedConvention,
                            double min_margin = kDefaultStringMargin);

/// Residuals of the monopole lemma at one point. All are relative to the
/// natural scale of the quantity involved.
struct LemmaResiduals {
  double radial_potential = 0;   // (a) x^k A_k = 0
  double radial_curvature = 0;   // (b) x^j F_jk = 0
  double covariant = 0;          // (c) covariant derivative identity, finite differences
  double quadratic = 0;          // (d) r^4 sum_k (xi,F_kj)(xi,F_kj') = (mu^2/k)(delta - x x / r^2)
  double paired_norm = 0;        // (e) sum_{j<k} (xi, r^2 F_jk)^2 = mu^2
  double force_norm = 0;         // (f) |r^2 w|^2 = (mu^2/k) |r ^ v|^2 / r^2

  double max_algebraic() const;
};

/// Residual of nabla_l F_jk = (1/r^2)(-x^j F_lk - x^k F_jl - 2 x^l F_jk) with
/// d_l by central differences of step h and commutator coefficient
/// `commutator_sign` (nabla_l = d_l + commutator_sign [A_l, .]).
double covariant_derivative_residual(const Eigen::VectorXd& r, double h, int commutator_sign,
                                     const GaugeConvention& conv = kResolvedConvention);

LemmaResiduals lemma_residuals(const Eigen::VectorXd& r, const SkewMatrixd& xi, const Eigen::VectorXd& v,
                               double mu, double h = 1e-4, const GaugeConvention& conv = kResolvedConvention);

}  // namespace mkepler
