#pragma once

// Light-cone parametrization of oriented orbits and the Lorentz-group action
// on it. Vectors of R^{1,n} are Eigen vectors (x_0, x_1, ..., x_n).

#include <Eigen/Dense>

#include "mkepler/multivector.hpp"
#include "mkepler/orbits.hpp"

namespace mkepler {

/// Pair (a, m): an oriented unit 3-vector m of R^{1,2k+1} and a future vector a in [m].
struct LightConeOrbit {
  int k = 1;
  Eigen::VectorXd a;
  Multivectord m;
};

/// Throws DomainError on shape errors and MembershipError naming the failing
/// condition: "m_decomposable", "m_unit", "a_future", "a_in_m", "a_interior_m".
void validate(const LightConeOrbit& lc, double tol = 1e-9);

/// Minkowski product with signature (+, -, ..., -).
double minkowski(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
Eigen::MatrixXd minkowski_metric(int n);

LightConeOrbit to_lightcone(const OrbitElements& el);
OrbitElements from_lightcone(const LightConeOrbit& lc);

/// E = -a^2 / (2 a_0).
double energy_lightcone(const LightConeOrbit& lc);

/// x = (r, r) on the future light cone.
Eigen::VectorXd lift_point(const Eigen::VectorXd& r);

struct LightConeResidual {
  double plane = 0;  // a.x - 1
  double span = 0;   // |m ^ x|
  double line = 0;   // |(x - (e_0 _| m) _| m / a_0) ^ (a _| m)|
};
LightConeResidual lightcone_residuals(const Eigen::VectorXd& x, const LightConeOrbit& lc);

enum class LightConeClass { Elliptic, Parabolic, Hyperbolic };
const char* to_string(LightConeClass c);
/// Sign of a^2, with |a^2| <= 1e-10 a_0^2 counted as null.
LightConeClass classify(const LightConeOrbit& lc);

struct LorentzTransform {
  Eigen::MatrixXd matrix;

  bool proper() const { return matrix.determinant() > 0; }
  bool orthochronous() const { return matrix(0, 0) > 0; }
  /// eta Lambda^T eta.
  LorentzTransform inverse() const;
};

/// Throws MembershipError "lorentz_metric" unless Lambda^T eta Lambda = eta to
/// `tol`, and "orthochronous" unless Lambda_00 > 0.
void validate(const LorentzTransform& t, double tol = 1e-10);

/// (Lambda, lambda) . (a, m) = (lambda Lambda a, Lambda m).
LightConeOrbit group_apply(const LorentzTransform& t, double lambda, const LightConeOrbit& lc);

enum class WitnessStyle {
  Scaled,      // (Lambda, lambda) with the scale carried by lambda
  PureLorentz  // lambda = 1; available for the parabolic class only
};

struct Witness {
  LorentzTransform transform;
  double lambda = 1;
};

/// (Lambda, lambda) in SO+(1, 2k+1) x R+ with (Lambda, lambda) . p1 = p2.
/// Both points must be in the same elliptic or parabolic class.
Witness transitivity_witness(const LightConeOrbit& p1, const LightConeOrbit& p2,
                             WitnessStyle style = WitnessStyle::Scaled);

/// Frame change (Lambda_p, lambda_p) taking the canonical representative of
/// the class of p to p; columns of Lambda_p are an adapted Lorentz frame.
Witness canonical_frame(const LightConeOrbit& p, WitnessStyle style = WitnessStyle::Scaled);

/// (e_0, e_0^e_1^e_2) or (e_0 + e_1, e_0^e_1^e_2).
LightConeOrbit canonical_representative(LightConeClass c, int k);

}  // namespace mkepler
