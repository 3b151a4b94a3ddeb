#pragma once

// Seeded random inputs shared by the CLI, the tests and the acceptance suite.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "mkepler/lorentz.hpp"
#include "mkepler/orbits.hpp"
#include "mkepler/skew.hpp"
#include "mkepler/state.hpp"

namespace mkepler {

using Rng = std::mt19937_64;

Eigen::VectorXd random_gaussian(int n, Rng& rng);
Eigen::VectorXd random_unit(int n, Rng& rng);
double random_uniform(double lo, double hi, Rng& rng);

/// Haar-distributed element of SO(m).
Eigen::MatrixXd random_rotation(int m, Rng& rng);

/// Random conjugate of the orbit representative, a point of O_mu.
SkewMatrixd random_charge(double mu, int k, Rng& rng);

/// Point of R^{2k+1} with |r| in [r_lo, r_hi] and string margin above `min_margin`.
Eigen::VectorXd random_point(int n, double min_margin, Rng& rng, double r_lo = 0.5, double r_hi = 2.0);

/// State with position from random_point, Gaussian velocity and a random charge on O_mu.
State random_state(int k, double mu, Rng& rng, double min_margin = 0.2, double speed = 0.8);

/// Elements of the orbit space with |A_perp| < 0.9 and |A_par| < max_parallel.
OrbitElements random_elements(int k, Rng& rng, double max_parallel = 1.5);

/// Bound elements with eccentricity in [e_lo, e_hi] and implied charge mu >= 0.
OrbitElements random_bound_elements(int k, double mu, Rng& rng, double e_lo = 0.1, double e_hi = 0.6);

/// Rotation composed with a boost of rapidity at most max_rapidity.
Eigen::MatrixXd random_lorentz(int n, Rng& rng, double max_rapidity = 1.0);

/// Random point of the elliptic or parabolic light-cone class.
LightConeOrbit random_lightcone(int k, LightConeClass c, Rng& rng);

}  // namespace mkepler
