#pragma once

#include <Eigen/Dense>

#include "mkepler/invariants.hpp"
#include "mkepler/multivector.hpp"
#include "mkepler/skew.hpp"

namespace mkepler {

/// Classical data (A, Lbar) of an oriented orbit.
struct OrbitElements {
  int k = 1;
  Eigen::VectorXd A;
  Multivectord Lbar;
};

/// Throws DomainError on shape errors and MembershipError when Lbar is not
/// decomposable ("Lbar_decomposable") or |Lbar|^2 <= |Lbar ^ A|^2
/// ("Lbar_exceeds_wedge").
void validate(const OrbitElements& el, double tol = 1e-9);

/// (A, Lbar) read off an invariant record; requires a non-colliding state.
OrbitElements elements_of(const InvariantRecord& rec);

/// Lbar ^ A.
Multivectord lbar_wedge_a(const OrbitElements& el);

double eccentricity(const OrbitElements& el);
double energy_from_elements(const OrbitElements& el);

enum class ConicClass { Ellipse, Parabola, HyperbolaBranch };
const char* to_string(ConicClass c);

/// Sign of the energy; |E| <= 1e-10 (1 + |A|^2) counts as parabolic.
ConicClass classify(const OrbitElements& el);

/// sqrt(k) |Lbar ^ A| >= 0.
double implied_magnetic_charge(const OrbitElements& el);

struct ConicResidual {
  double scalar = 0;  // r - A.r - (|Lbar|^2 - |Lbar ^ A|^2)
  double wedge = 0;   // |Lbar ^ (r - r A)|
};
ConicResidual conic_residuals(const Eigen::VectorXd& r, const OrbitElements& el);

/// Lbar - A _| (A ^ Lbar), the oriented plane of the orbit.
Multivectord orbit_plane(const OrbitElements& el);

/// Cosine between v ^ a and the oriented orbit plane; positive when the motion
/// runs with the orientation of the elements.
double orientation_cosine(const Eigen::VectorXd& v, const Eigen::VectorXd& a, const OrbitElements& el);

/// Initial data reproducing given elements. q and v live in the construction
/// frame, where q is on the positive x_n axis; `rotation` maps caller-frame
/// vectors to it, so the caller-frame position is rotation^T q.
struct InitialData {
  Eigen::VectorXd q;
  Eigen::VectorXd v;
  SkewMatrixd eta;
  Eigen::MatrixXd rotation;
  double implied_mu = 0;  // signed: eta lies on O_{implied_mu}
  Eigen::VectorXd u;      // construction-frame target of v _| (eta, |q|^2 F(q))
};

InitialData construct_initial_data(const OrbitElements& el);

/// Elements mapped by a rotation of the ambient space.
OrbitElements rotate(const OrbitElements& el, const Eigen::MatrixXd& rotation);

/// Least-squares conic through coplanar points of R^n.
struct ConicFit {
  double e = 0;
  Multivectord plane;       // unit 2-vector of the fitted plane
  Eigen::VectorXd centroid;
  double residual = 0;      // RMS algebraic residual of the normalized conic
  double planarity = 0;     // out-of-plane RMS relative to the in-plane spread
};
ConicFit conic_fit(const std::vector<Eigen::VectorXd>& points);

}  // namespace mkepler
