#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mkepler/gauge.hpp"
#include "mkepler/invariants.hpp"
#include "mkepler/ode.hpp"
#include "mkepler/state.hpp"

namespace mkepler {

struct StateDerivative {
  Eigen::VectorXd dr;
  Eigen::VectorXd dv;
  SkewMatrixd dxi;
};

/// Right-hand side of the equation of motion with parallel transport of xi:
///   r' = v,  v' = -r/r^3 + (mu^2/k) r/r^4 + w(r, v, xi),  xi' = sigma_D [A(v), xi].
/// For xi = 0 the gauge terms vanish identically and are not evaluated.
StateDerivative state_derivative(const State& s, double mu, const GaugeConvention& conv = kResolvedConvention,
                                 double min_margin = kDefaultStringMargin);

/// Literal three-dimensional monopole equation, used as an oracle:
///   r'' = -r/r^3 + mu^2 r/r^4 - v x (mu r) / r^3.
Eigen::Vector3d micz_rhs_dim3(const Eigen::Vector3d& r, const Eigen::Vector3d& v, double mu);

/// Flat layout [r, v, upper(xi)] used by the integrator.
Eigen::VectorXd pack(const State& s);
State unpack(const Eigen::VectorXd& y, int k);

struct IntegrationOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double min_string_margin = 1e-4;
  double r_min = 1e-6;
  int samples = 101;                // uniform output grid on [0, t_end], used when sample_times is empty
  std::vector<double> sample_times; // explicit output times in [0, t_end], increasing
  bool record_invariants = true;
  double max_step = 0;              // 0: unbounded
  GaugeConvention conv = kResolvedConvention;
};

class IntegrationError : public Error {
 public:
  enum class Kind { StringProximity, Collision, StepUnderflow };

  IntegrationError(Kind kind, double t, const std::string& what) : Error(what), kind_(kind), t_(t) {}
  Kind kind() const { return kind_; }
  double t() const { return t_; }

 private:
  Kind kind_;
  double t_;
};

struct Sample {
  double t = 0;
  State state;
  std::optional<InvariantRecord> invariants;
};

struct Trajectory {
  int k = 1;
  double mu = 0;
  double rel_tol = 0, abs_tol = 0;
  std::vector<Sample> samples;
  ode::Stats stats;
  std::vector<double> perihelion_times;  // local minima of r(t), from sign changes of r.v
  double min_margin_seen = 2;
  double min_radius_seen = 0;
  State final_state;
};

/// Integrates from s0 at t = 0 to t_end. Aborts with IntegrationError when the
/// string margin or the radius drops below the guards (checked after every step).
Trajectory integrate(const State& s0, double mu, double t_end, const IntegrationOptions& options = {});
Trajectory integrate(const State& s0, double mu, int k, double t_end, double rel_tol, double abs_tol);

/// Largest relative deviation of each conserved quantity from its value at
/// the first sample, and the largest distance of xi from O_mu. Vector-valued
/// quantities are compared in norm; the Lenz vector is measured against
/// max(|A(0)|, 1e-3) since it vanishes on circles.
struct DriftReport {
  double E = 0;
  double L = 0;
  double A = 0;
  double V = 0;
  double Lbar = 0;
  double xi_orbit = 0;

  double max() const;
};

DriftReport drift_report(const Trajectory& traj);

/// Mean spacing of the detected perihelion passages; needs at least two.
double radial_period(const Trajectory& traj);

}  // namespace mkepler
