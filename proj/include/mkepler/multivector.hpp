#pragma once

// Graded exterior algebra over Euclidean R^n and Lorentz R^{1,n}.
//
// A Multivector has a single grade g and stores one coefficient per basis
// blade e_{i1} ^ ... ^ e_{ig} with i1 < ... < ig. Blades are bitmasks over
// basis *positions*; coefficients are kept in colexicographic blade order so
// that ranks can be computed without lookup tables.
//
// Index labels: Euclidean basis vectors are labelled 1..n, Lorentz basis
// vectors 0..n with 0 temporal, so a spatial label means the same vector in
// both metrics.

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mkepler/errors.hpp"

namespace mkepler {

enum class MetricKind { Euclidean, Lorentz };

using BladeMask = std::uint32_t;

struct Metric {
  MetricKind kind = MetricKind::Euclidean;
  int dim = 3;  // spatial dimension n

  static Metric euclidean(int n) { return make(MetricKind::Euclidean, n); }
  static Metric lorentz(int n) { return make(MetricKind::Lorentz, n); }

  bool is_lorentz() const { return kind == MetricKind::Lorentz; }
  int ambient() const { return is_lorentz() ? dim + 1 : dim; }

  // e_p . e_p for basis position p.
  int basis_sign(int position) const { return (is_lorentz() && position > 0) ? -1 : 1; }

  // Product of basis_sign over the blade; <e_I, e_I> for a basis blade.
  int blade_sign(BladeMask blade) const {
    if (!is_lorentz()) return 1;
    const int spatial = std::popcount(blade & ~BladeMask{1});
    return (spatial % 2 == 0) ? 1 : -1;
  }

  int label(int position) const { return is_lorentz() ? position : position + 1; }
  int position(int label) const { return is_lorentz() ? label : label - 1; }

  bool operator==(const Metric&) const = default;

 private:
  static Metric make(MetricKind kind, int n) {
    if (n < 2 || n > 24) throw DomainError("metric dimension must lie in [2, 24]");
    Metric m;
    m.kind = kind;
    m.dim = n;
    return m;
  }
};

namespace blades {

constexpr std::int64_t binomial(int n, int k) {
  if (k < 0 || n < k) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Colex rank of a blade among blades of the same grade.
inline Eigen::Index rank(BladeMask blade) {
  Eigen::Index r = 0;
  int j = 0;
  while (blade != 0) {
    const int p = std::countr_zero(blade);
    r += binomial(p, j + 1);
    blade &= blade - 1;
    ++j;
  }
  return r;
}

inline BladeMask unrank(Eigen::Index r, int grade) {
  BladeMask blade = 0;
  for (int j = grade; j >= 1; --j) {
    int p = j - 1;
    while (binomial(p + 1, j) <= r) ++p;
    blade |= BladeMask{1} << p;
    r -= binomial(p, j);
  }
  return blade;
}

// Sign of e_I ^ e_J relative to the sorted blade e_{I u J}; I, J disjoint.
inline int wedge_sign(BladeMask lhs, BladeMask rhs) {
  int swaps = 0;
  while (rhs != 0) {
    const int p = std::countr_zero(rhs);
    swaps += std::popcount(lhs >> (p + 1));
    rhs &= rhs - 1;
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

}  // namespace blades

template <typename Scalar>
class Multivector {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Multivector() : Multivector(Metric::euclidean(3), 0) {}

  Multivector(const Metric& metric, int grade) : metric_(metric), grade_(grade) {
    if (grade < 0 || grade > metric.ambient()) throw DomainError("grade exceeds ambient dimension");
    coeffs_ = Coefficients::Zero(blades::binomial(metric.ambient(), grade));
  }

  Multivector(const Metric& metric, int grade, Coefficients coeffs) : Multivector(metric, grade) {
    if (coeffs.size() != coeffs_.size()) throw DomainError("coefficient count does not match grade");
    coeffs_ = std::move(coeffs);
  }

  static Multivector scalar(const Metric& metric, Scalar value) {
    Multivector out(metric, 0);
    out.coeffs_(0) = value;
    return out;
  }

  // Basis blade from sorted-or-unsorted labels; repeated labels give zero.
  static Multivector basis(const Metric& metric, std::initializer_list<int> labels) {
    return basis(metric, std::vector<int>(labels));
  }

  static Multivector basis(const Metric& metric, const std::vector<int>& labels) {
    Multivector out(metric, static_cast<int>(labels.size()));
    BladeMask blade = 0;
    int sign = 1;
    for (int label : labels) {
      const int p = metric.position(label);
      if (p < 0 || p >= metric.ambient()) throw DomainError("basis label out of range");
      const BladeMask bit = BladeMask{1} << p;
      if (blade & bit) return out;
      sign *= blades::wedge_sign(blade, bit);
      blade |= bit;
    }
    out.coeffs_(blades::rank(blade)) = static_cast<Scalar>(sign);
    return out;
  }

  // Grade-1 element from components in basis-position order
  // (Euclidean: e_1..e_n, Lorentz: e_0..e_n).
  template <typename Derived>
  static Multivector vector(const Metric& metric, const Eigen::MatrixBase<Derived>& components) {
    if (components.size() != metric.ambient()) throw DomainError("vector size does not match metric");
    Multivector out(metric, 1);
    out.coeffs_ = components.template cast<Scalar>();
    return out;
  }

  // Grade-2 element from an antisymmetric ambient x ambient matrix X with
  // X(i, j) the coefficient of e_i ^ e_j (positions, i < j).
  template <typename Derived>
  static Multivector from_antisymmetric(const Metric& metric, const Eigen::MatrixBase<Derived>& m) {
    const int n = metric.ambient();
    if (m.rows() != n || m.cols() != n) throw DomainError("matrix size does not match metric");
    Multivector out(metric, 2);
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i)
        out.coeffs_(blades::rank((BladeMask{1} << i) | (BladeMask{1} << j))) = m(i, j);
    return out;
  }

  const Metric& metric() const { return metric_; }
  int grade() const { return grade_; }
  Eigen::Index size() const { return coeffs_.size(); }
  const Coefficients& coeffs() const { return coeffs_; }
  Coefficients& coeffs() { return coeffs_; }

  BladeMask blade(Eigen::Index rank) const { return blades::unrank(rank, grade_); }
  Scalar operator[](BladeMask blade) const { return coeffs_(blades::rank(blade)); }
  Scalar& operator[](BladeMask blade) { return coeffs_(blades::rank(blade)); }

  // Coefficient on the blade with the given strictly increasing labels.
  Scalar coeff(std::initializer_list<int> labels) const {
    BladeMask blade = 0;
    for (int label : labels) blade |= BladeMask{1} << metric_.position(label);
    if (std::popcount(blade) != grade_) throw DomainError("label count does not match grade");
    return (*this)[blade];
  }

  // Components of a grade-1 element in basis-position order.
  Vector as_vector() const {
    if (grade_ != 1) throw DomainError("as_vector requires a grade-1 element");
    return coeffs_;
  }

  Matrix as_antisymmetric() const {
    if (grade_ != 2) throw DomainError("as_antisymmetric requires a grade-2 element");
    const int n = metric_.ambient();
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index r = 0; r < coeffs_.size(); ++r) {
      const BladeMask b = blade(r);
      const int i = std::countr_zero(b);
      const int j = 31 - std::countl_zero(b);
      m(i, j) = coeffs_(r);
      m(j, i) = -coeffs_(r);
    }
    return m;
  }

  // Euclidean norm of the coefficient array (metric-independent size measure).
  Scalar coefficient_norm() const { return coeffs_.norm(); }
  bool is_zero() const { return coeffs_.isZero(0); }

  Multivector operator-() const { return Multivector(metric_, grade_, -coeffs_); }

  Multivector& operator+=(const Multivector& other) {
    check_compatible(other);
    coeffs_ += other.coeffs_;
    return *this;
  }
  Multivector& operator-=(const Multivector& other) {
    check_compatible(other);
    coeffs_ -= other.coeffs_;
    return *this;
  }
  Multivector& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }
  Multivector& operator/=(Scalar s) {
    coeffs_ /= s;
    return *this;
  }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, Scalar s) { return a *= s; }
  friend Multivector operator*(Scalar s, Multivector a) { return a *= s; }
  friend Multivector operator/(Multivector a, Scalar s) { return a /= s; }

 private:
  void check_compatible(const Multivector& other) const {
    if (!(metric_ == other.metric_)) throw MetricMismatch("multivectors over different metrics");
    if (grade_ != other.grade_) throw DomainError("adding multivectors of different grades");
  }

  Metric metric_;
  int grade_ = 0;
  Coefficients coeffs_;
};

using Multivectord = Multivector<double>;

namespace detail {
template <typename Scalar>
void require_same_metric(const Multivector<Scalar>& x, const Multivector<Scalar>& y) {
  if (!(x.metric() == y.metric())) throw MetricMismatch("operands live over different metrics");
}
}  // namespace detail

template <typename Scalar>
Multivector<Scalar> wedge(const Multivector<Scalar>& x, const Multivector<Scalar>& y) {
  detail::require_same_metric(x, y);
  const Metric& metric = x.metric();
  const int grade = x.grade() + y.grade();
  // Beyond the top grade the product vanishes; report it as the zero top-grade element.
  if (grade > metric.ambient()) return Multivector<Scalar>(metric, metric.ambient());
  Multivector<Scalar> out(metric, grade);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar xi = x.coeffs()(i);
    if (xi == Scalar(0)) continue;
    const BladeMask bx = x.blade(i);
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      const Scalar yj = y.coeffs()(j);
      if (yj == Scalar(0)) continue;
      const BladeMask by = y.blade(j);
      if (bx & by) continue;
      out[bx | by] += static_cast<Scalar>(blades::wedge_sign(bx, by)) * xi * yj;
    }
  }
  return out;
}

template <typename Scalar>
Multivector<Scalar> operator^(const Multivector<Scalar>& x, const Multivector<Scalar>& y) {
  return wedge(x, y);
}

// Gram-determinant inner product; zero for mismatched grades.
template <typename Scalar>
Scalar inner(const Multivector<Scalar>& x, const Multivector<Scalar>& y) {
  detail::require_same_metric(x, y);
  if (x.grade() != y.grade()) return Scalar(0);
  const Metric& metric = x.metric();
  if (!metric.is_lorentz()) return x.coeffs().dot(y.coeffs());
  Scalar sum(0);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    sum += static_cast<Scalar>(metric.blade_sign(x.blade(i))) * x.coeffs()(i) * y.coeffs()(i);
  return sum;
}

// X^2 := <X, X>.
template <typename Scalar>
Scalar square(const Multivector<Scalar>& x) {
  return inner(x, x);
}

// Interior product X _| v, the adjoint of wedging with X:
//   <X ^ u, v> = <u, X _| v>   for all u of grade g(v) - g(X).
template <typename Scalar>
Multivector<Scalar> interior(const Multivector<Scalar>& x, const Multivector<Scalar>& v) {
  detail::require_same_metric(x, v);
  if (x.grade() > v.grade()) throw DomainError("interior product requires grade(X) <= grade(v)");
  const Metric& metric = x.metric();
  Multivector<Scalar> out(metric, v.grade() - x.grade());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar xi = x.coeffs()(i);
    if (xi == Scalar(0)) continue;
    const BladeMask bx = x.blade(i);
    const Scalar sx = static_cast<Scalar>(metric.blade_sign(bx));
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      const Scalar vj = v.coeffs()(j);
      if (vj == Scalar(0)) continue;
      const BladeMask bv = v.blade(j);
      if ((bx & bv) != bx) continue;
      const BladeMask rest = bv & ~bx;
      out[rest] += static_cast<Scalar>(blades::wedge_sign(bx, rest)) * sx * xi * vj;
    }
  }
  return out;
}

// Decomposability test for grades 2 and 3, relative to |X|^2.
template <typename Scalar>
bool is_decomposable(const Multivector<Scalar>& x, Scalar tol) {
  if (x.grade() != 2 && x.grade() != 3) throw DomainError("decomposability test supports grades 2 and 3");
  const Scalar scale = x.coeffs().squaredNorm();
  if (scale == Scalar(0)) return true;
  if (x.grade() == 2) return wedge(x, x).coefficient_norm() <= tol * scale;
  const Metric& metric = x.metric();
  for (int p = 0; p < metric.ambient(); ++p) {
    const auto e = Multivector<Scalar>::basis(metric, {metric.label(p)});
    if (wedge(interior(e, x), x).coefficient_norm() > tol * scale) return false;
  }
  return true;
}

// Orthonormal (in coefficient space) basis of the subspace [X] of a nonzero
// decomposable X, as columns ordered so that their wedge is a positive
// multiple of X. Computed as the kernel of u -> u ^ X.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> span_basis(const Multivector<Scalar>& x) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Metric& metric = x.metric();
  const int n = metric.ambient();
  const int g = x.grade();
  if (g == 0 || x.is_zero()) throw DomainError("span_basis requires a nonzero element of positive grade");
  Matrix basis;
  if (g == n) {
    basis = Matrix::Identity(n, n);
  } else {
    Matrix wedge_map(blades::binomial(n, g + 1), n);
    for (int p = 0; p < n; ++p)
      wedge_map.col(p) = wedge(Multivector<Scalar>::basis(metric, {metric.label(p)}), x).coeffs();
    Eigen::JacobiSVD<Matrix> svd(wedge_map, Eigen::ComputeFullV);
    basis = svd.matrixV().rightCols(g);
  }
  Multivector<Scalar> blade = Multivector<Scalar>::vector(metric, basis.col(0));
  for (int c = 1; c < g; ++c) blade = wedge(blade, Multivector<Scalar>::vector(metric, basis.col(c)));
  if (blade.coeffs().dot(x.coeffs()) < Scalar(0)) basis.col(g - 1) *= Scalar(-1);
  return basis;
}

// Orthogonal projection of a Euclidean 2-vector onto the plane square
// Lambda^2[V] of a nonzero decomposable Euclidean 3-vector V.
template <typename Scalar>
Multivector<Scalar> project_onto_plane_square(const Multivector<Scalar>& l, const Multivector<Scalar>& v,
                                              Scalar tol = Scalar(1e-8)) {
  detail::require_same_metric(l, v);
  if (l.metric().is_lorentz()) throw DomainError("plane-square projection is Euclidean only");
  if (l.grade() != 2 || v.grade() != 3) throw DomainError("expected a 2-vector and a 3-vector");
  if (v.coefficient_norm() <= std::numeric_limits<Scalar>::min() * 1e4)
    throw DomainError("projection target 3-vector is zero");
  if (!is_decomposable(v, tol)) throw DomainError("projection target 3-vector is not decomposable");
  const auto frame = span_basis(v);
  const Metric& metric = l.metric();
  Multivector<Scalar> out(metric, 2);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const auto fab = wedge(Multivector<Scalar>::vector(metric, frame.col(a)),
                             Multivector<Scalar>::vector(metric, frame.col(b)));
      out += inner(l, fab) * fab;
    }
  return out;
}

// View a Euclidean poly-vector over R^n inside R^{1,n}.
template <typename Scalar>
Multivector<Scalar> embed_spatial(const Multivector<Scalar>& x) {
  if (x.metric().is_lorentz()) throw DomainError("embed_spatial expects a Euclidean multivector");
  const Metric lorentz = Metric::lorentz(x.metric().dim);
  Multivector<Scalar> out(lorentz, x.grade());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[x.blade(i) << 1] = x.coeffs()(i);
  return out;
}

// The part of a Lorentz poly-vector without e_0, as a Euclidean poly-vector.
template <typename Scalar>
Multivector<Scalar> spatial_part(const Multivector<Scalar>& x) {
  if (!x.metric().is_lorentz()) throw DomainError("spatial_part expects a Lorentz multivector");
  const Metric euclid = Metric::euclidean(x.metric().dim);
  Multivector<Scalar> out(euclid, x.grade());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const BladeMask b = x.blade(i);
    if (b & 1u) continue;
    out[b >> 1] = x.coeffs()(i);
  }
  return out;
}

// Induced action of a linear map M on poly-vectors:
// M(e_{i1} ^ ... ^ e_{ig}) = (M e_{i1}) ^ ... ^ (M e_{ig}).
template <typename Scalar, typename Derived>
Multivector<Scalar> transform(const Eigen::MatrixBase<Derived>& m, const Multivector<Scalar>& x) {
  const Metric& metric = x.metric();
  const int n = metric.ambient();
  if (m.rows() != n || m.cols() != n) throw DomainError("transform size does not match metric");
  Multivector<Scalar> out(metric, x.grade());
  if (x.grade() == 0) {
    out.coeffs() = x.coeffs();
    return out;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Scalar xi = x.coeffs()(i);
    if (xi == Scalar(0)) continue;
    BladeMask b = x.blade(i);
    Multivector<Scalar> image = Multivector<Scalar>::vector(metric, m.col(std::countr_zero(b)));
    b &= b - 1;
    for (; b != 0; b &= b - 1) image = wedge(image, Multivector<Scalar>::vector(metric, m.col(std::countr_zero(b))));
    out.coeffs() += xi * image.coeffs();
  }
  return out;
}

}  // namespace mkepler
