#pragma once

// so(2k) in real skew-symmetric matrix form.
//
// Generators M_{a,b} (1 <= a < b <= 2k) have entry (a,b) = -1 and (b,a) = +1.
// The invariant pairing (S, T) = tr(S^T T) / 2 makes them orthonormal.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "mkepler/errors.hpp"

namespace mkepler {

template <typename Scalar>
class SkewMatrix {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SkewMatrix() : SkewMatrix(1) {}

  explicit SkewMatrix(int k) : k_(k) {
    if (k < 1) throw DomainError("so(2k) requires k >= 1");
    upper_ = Coefficients::Zero(upper_size(k));
  }

  SkewMatrix(int k, Coefficients upper) : SkewMatrix(k) {
    if (upper.size() != upper_.size()) throw DomainError("upper-triangle size does not match k");
    upper_ = std::move(upper);
  }

  // Strict upper triangle of m; m must be skew within `tol` (relative).
  template <typename Derived>
  static SkewMatrix from_matrix(const Eigen::MatrixBase<Derived>& m, Scalar tol = Scalar(1e-12)) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() < 2)
      throw DomainError("so(2k) elements are even-sized square matrices");
    const Scalar scale = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
    if ((m + m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
      throw DomainError("matrix is not skew-symmetric");
    SkewMatrix out(static_cast<int>(m.rows() / 2));
    const int size = out.size();
    Eigen::Index idx = 0;
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) out.upper_(idx++) = (m(i, j) - m(j, i)) / Scalar(2);
    return out;
  }

  static Eigen::Index upper_size(int k) { return static_cast<Eigen::Index>(k) * (2 * k - 1); }

  int k() const { return k_; }
  int size() const { return 2 * k_; }

  // Position of entry (i, j), i < j (0-based), in the upper-triangle array.
  Eigen::Index upper_index(int i, int j) const {
    const int m = size();
    return static_cast<Eigen::Index>(i) * (2 * m - i - 1) / 2 + (j - i - 1);
  }

  // Entry (i, j), 0-based.
  Scalar operator()(int i, int j) const {
    if (i == j) return Scalar(0);
    return i < j ? upper_(upper_index(i, j)) : -upper_(upper_index(j, i));
  }

  // Sets entry (i, j) and, implicitly, (j, i) = -value.
  void set(int i, int j, Scalar value) {
    if (i == j) throw DomainError("diagonal of a skew matrix is zero");
    if (i < j)
      upper_(upper_index(i, j)) = value;
    else
      upper_(upper_index(j, i)) = -value;
  }

  const Coefficients& upper() const { return upper_; }
  Coefficients& upper() { return upper_; }

  Matrix matrix() const {
    const int m = size();
    Matrix out = Matrix::Zero(m, m);
    Eigen::Index idx = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        out(i, j) = upper_(idx);
        out(j, i) = -upper_(idx);
        ++idx;
      }
    return out;
  }

  Scalar norm() const { return upper_.norm(); }
  bool is_zero() const { return upper_.isZero(0); }

  SkewMatrix operator-() const { return SkewMatrix(k_, -upper_); }
  SkewMatrix& operator+=(const SkewMatrix& o) {
    check(o);
    upper_ += o.upper_;
    return *this;
  }
  SkewMatrix& operator-=(const SkewMatrix& o) {
    check(o);
    upper_ -= o.upper_;
    return *this;
  }
  SkewMatrix& operator*=(Scalar s) {
    upper_ *= s;
    return *this;
  }
  friend SkewMatrix operator+(SkewMatrix a, const SkewMatrix& b) { return a += b; }
  friend SkewMatrix operator-(SkewMatrix a, const SkewMatrix& b) { return a -= b; }
  friend SkewMatrix operator*(SkewMatrix a, Scalar s) { return a *= s; }
  friend SkewMatrix operator*(Scalar s, SkewMatrix a) { return a *= s; }

  void check(const SkewMatrix& o) const {
    if (o.k_ != k_) throw DomainError("so(2k) elements with different k");
  }

 private:
  int k_ = 1;
  Coefficients upper_;
};

using SkewMatrixd = SkewMatrix<double>;

// M_{a,b} with 1-based a < b.
template <typename Scalar = double>
SkewMatrix<Scalar> generator(int a, int b, int k) {
  if (k < 1) throw DomainError("so(2k) requires k >= 1");
  if (a < 1 || b > 2 * k || a >= b) throw DomainError("generator indices must satisfy 1 <= a < b <= 2k");
  SkewMatrix<Scalar> out(k);
  out.set(a - 1, b - 1, Scalar(-1));
  return out;
}

template <typename Scalar>
Scalar pairing(const SkewMatrix<Scalar>& s, const SkewMatrix<Scalar>& t) {
  s.check(t);
  return s.upper().dot(t.upper());
}

template <typename Scalar>
SkewMatrix<Scalar> commutator(const SkewMatrix<Scalar>& s, const SkewMatrix<Scalar>& t) {
  s.check(t);
  const auto a = s.matrix();
  const auto b = t.matrix();
  return SkewMatrix<Scalar>::from_matrix(a * b - b * a, Scalar(1e-9));
}

// (1/sqrt k)(|mu| M_{1,2} + ... + |mu| M_{2k-3,2k-2} + mu M_{2k-1,2k}).
template <typename Scalar = double>
SkewMatrix<Scalar> orbit_representative(Scalar mu, int k) {
  SkewMatrix<Scalar> out(k);
  const Scalar s = Scalar(1) / std::sqrt(static_cast<Scalar>(k));
  for (int block = 0; block < k; ++block) {
    const Scalar c = (block + 1 < k) ? std::abs(mu) : mu;
    out.set(2 * block, 2 * block + 1, -s * c);
  }
  return out;
}

namespace detail {
template <typename Scalar>
Scalar pfaffian_expand(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                       std::vector<int>& rows) {
  if (rows.empty()) return Scalar(1);
  const int first = rows.front();
  Scalar sum(0);
  for (std::size_t j = 1; j < rows.size(); ++j) {
    const Scalar entry = a(first, rows[j]);
    if (entry == Scalar(0)) continue;
    std::vector<int> rest;
    rest.reserve(rows.size() - 2);
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (i != j) rest.push_back(rows[i]);
    const Scalar sign = (j % 2 == 1) ? Scalar(1) : Scalar(-1);
    sum += sign * entry * pfaffian_expand(a, rest);
  }
  return sum;
}
}  // namespace detail

// Pfaffian oriented by the generator blocks: Pf(c_1 M_{1,2} + ... + c_k M_{2k-1,2k})
// = c_1 ... c_k. Equals the textbook Pfaffian of S^T. Recursive expansion.
template <typename Scalar>
Scalar pfaffian(const SkewMatrix<Scalar>& s) {
  std::vector<int> rows(static_cast<std::size_t>(s.size()));
  for (int i = 0; i < s.size(); ++i) rows[static_cast<std::size_t>(i)] = i;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> transposed = s.matrix().transpose();
  return detail::pfaffian_expand(transposed, rows);
}

template <typename Scalar>
struct OrbitResidual {
  bool on_orbit = false;
  Scalar spectral = 0;  // || xi xi^T - (mu^2/k) I ||_max / max(1, mu^2/k)
  Scalar pfaffian = 0;  // |Pf(xi) - Pf(xi_0)| / max(1, |Pf(xi_0)|)
};

// Membership of xi in O_mu: xi xi^T = (mu^2/k) I and Pf(xi) = Pf(xi_0).
template <typename Scalar>
OrbitResidual<Scalar> on_orbit_residual(const SkewMatrix<Scalar>& xi, Scalar mu, Scalar tol) {
  const int k = xi.k();
  const Scalar level = mu * mu / static_cast<Scalar>(k);
  const auto m = xi.matrix();
  const auto gram = (m * m.transpose()).eval();
  const auto target = (level * decltype(gram)::Identity(m.rows(), m.cols())).eval();
  OrbitResidual<Scalar> out;
  out.spectral = (gram - target).cwiseAbs().maxCoeff() / std::max(Scalar(1), level);
  const Scalar pf_ref = pfaffian(orbit_representative(mu, k));
  out.pfaffian = std::abs(pfaffian(xi) - pf_ref) / std::max(Scalar(1), std::abs(pf_ref));
  out.on_orbit = out.spectral <= tol && out.pfaffian <= tol;
  return out;
}

// g xi g^T for orthogonal g.
template <typename Scalar, typename Derived>
SkewMatrix<Scalar> conjugate(const Eigen::MatrixBase<Derived>& g, const SkewMatrix<Scalar>& xi) {
  const int m = xi.size();
  if (g.rows() != m || g.cols() != m) throw DomainError("conjugating matrix has the wrong size");
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix gm = g.template cast<Scalar>();
  if ((gm.transpose() * gm - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > Scalar(1e-10))
    throw DomainError("conjugating matrix is not orthogonal");
  const Matrix out = gm * xi.matrix() * gm.transpose();
  return SkewMatrix<Scalar>::from_matrix(out, Scalar(1e-9));
}

}  // namespace mkepler
