#include "mkepler/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace mkepler {

StateDerivative state_derivative(const State& s, double mu, const GaugeConvention& conv, double min_margin) {
  s.validate();
  const double r = s.r.norm();
  if (r == 0.0) throw DomainError("equation of motion is singular at the origin");
  const double r2 = r * r;
  StateDerivative d;
  d.dr = s.v;
  d.dv = (-1.0 / (r2 * r) + (mu * mu / s.k()) / (r2 * r2)) * s.r;
  if (s.xi.is_zero()) {
    d.dxi = SkewMatrixd(s.k());
    return d;
  }
  d.dv += paired_curvature(s.r, s.xi, conv, min_margin).transpose() * s.v;
  d.dxi = static_cast<double>(conv.transport_sign) * commutator(potential_along(s.r, s.v, conv, min_margin), s.xi);
  return d;
}

Eigen::Vector3d micz_rhs_dim3(const Eigen::Vector3d& r, const Eigen::Vector3d& v, double mu) {
  const double rn = r.norm();
  if (rn == 0.0) throw DomainError("equation of motion is singular at the origin");
  const double r3 = rn * rn * rn;
  return -r / r3 + mu * mu * r / (r3 * rn) - v.cross(mu * r) / r3;
}

Eigen::VectorXd pack(const State& s) {
  const Eigen::Index n = s.r.size();
  const Eigen::Index m = s.xi.upper().size();
  Eigen::VectorXd y(2 * n + m);
  y << s.r, s.v, s.xi.upper();
  return y;
}

State unpack(const Eigen::VectorXd& y, int k) {
  const Eigen::Index n = 2 * k + 1;
  const Eigen::Index m = SkewMatrixd::upper_size(k);
  if (y.size() != 2 * n + m) throw DomainError("packed state has the wrong size");
  return State{y.head(n), y.segment(n, n), SkewMatrixd(k, y.tail(m))};
}

namespace {

double radial_rate(const Eigen::VectorXd& y, Eigen::Index n) { return y.head(n).dot(y.segment(n, n)); }

double radial_tolerance(const Eigen::VectorXd& y, Eigen::Index n) {
  return 1e-9 * y.head(n).norm() * y.segment(n, n).norm();
}

// Root of r.v inside one step, by bisection on the interpolant.
double refine_perihelion(const ode::DenseStep& step, Eigen::Index n) {
  double lo = step.t0(), hi = step.t1();
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (radial_rate(step(mid), n) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Trajectory integrate(const State& s0, double mu, double t_end, const IntegrationOptions& options) {
  s0.validate();
  if (!(t_end > 0)) throw DomainError("t_end must be positive");
  for (double tol : {options.rel_tol, options.abs_tol})
    if (!(tol > 0 && tol <= 1e-3)) throw DomainError("tolerances must lie in (0, 1e-3]");
  const int k = s0.k();
  const Eigen::Index n = s0.dim();
  const bool charged = !s0.xi.is_zero();

  std::vector<double> times = options.sample_times;
  if (times.empty()) {
    const int count = std::max(options.samples, 2);
    for (int i = 0; i + 1 < count; ++i) times.push_back(t_end * i / (count - 1));
    times.push_back(t_end);
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0 || times[i] > t_end) throw DomainError("sample times must lie in [0, t_end]");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("sample times must increase strictly");
  }

  Trajectory traj;
  traj.k = k;
  traj.mu = mu;
  traj.rel_tol = options.rel_tol;
  traj.abs_tol = options.abs_tol;
  traj.min_radius_seen = s0.r.norm();

  auto guard = [&](double t, const Eigen::VectorXd& r) {
    const double radius = r.norm();
    traj.min_radius_seen = std::min(traj.min_radius_seen, radius);
    if (radius < options.r_min) throw IntegrationError(IntegrationError::Kind::Collision, t, "collision: radius below r_min");
    if (!charged) return;
    const double margin = dirac_string_margin(r);
    traj.min_margin_seen = std::min(traj.min_margin_seen, margin);
    if (margin < options.min_string_margin)
      throw IntegrationError(IntegrationError::Kind::StringProximity, t, "trajectory approached the Dirac string");
  };

  auto record = [&](double t, const State& s) {
    Sample sample{t, s, std::nullopt};
    if (options.record_invariants) sample.invariants = compute_invariants(s, mu, options.conv);
    traj.samples.push_back(std::move(sample));
  };

  guard(0.0, s0.r);
  std::size_t next = 0;
  if (!times.empty() && times[0] == 0.0) {
    record(0.0, s0);
    next = 1;
  }

  Eigen::VectorXd y = pack(s0);
  const double g0 = radial_rate(y, n);
  const double eps0 = radial_tolerance(y, n);
  bool armed = g0 < -eps0;
  if (std::abs(g0) <= eps0) {
    const StateDerivative d = state_derivative(s0, mu, options.conv);
    if (s0.v.squaredNorm() + s0.r.dot(d.dv) > 0) traj.perihelion_times.push_back(0.0);
  }

  auto rhs = [&](double, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
    const State s = unpack(yy, k);
    if (s.r.norm() == 0.0) throw IntegrationError(IntegrationError::Kind::Collision, 0, "collision at the origin");
    StateDerivative d;
    try {
      d = state_derivative(s, mu, options.conv);
    } catch (const DiracStringError&) {
      throw IntegrationError(IntegrationError::Kind::StringProximity, 0, "stage point on the Dirac string");
    }
    dy.resize(yy.size());
    dy << d.dr, d.dv, d.dxi.upper();
  };

  auto observer = [&](const ode::DenseStep& step) {
    const Eigen::VectorXd y1 = step(step.t1());
    guard(step.t1(), y1.head(n));
    const double g1 = radial_rate(y1, n);
    if (armed && g1 >= 0) {
      const double g_start = radial_rate(step(step.t0()), n);
      traj.perihelion_times.push_back(g_start < 0 ? refine_perihelion(step, n) : step.t0());
      armed = false;
    }
    if (g1 < -radial_tolerance(y1, n)) armed = true;
    while (next < times.size() && times[next] <= step.t1()) {
      record(times[next], unpack(step(times[next]), k));
      ++next;
    }
    return true;
  };

  ode::Options ode_options;
  ode_options.rel_tol = options.rel_tol;
  ode_options.abs_tol = options.abs_tol;
  if (options.max_step > 0) ode_options.max_step = options.max_step;
  try {
    traj.stats = ode::dopri5(rhs, 0.0, y, t_end, ode_options, observer);
  } catch (const ode::StepSizeUnderflow& e) {
    throw IntegrationError(IntegrationError::Kind::StepUnderflow, e.t(), e.what());
  }
  traj.final_state = unpack(y, k);
  return traj;
}

Trajectory integrate(const State& s0, double mu, int k, double t_end, double rel_tol, double abs_tol) {
  if (s0.k() != k) throw DomainError("state does not match k");
  IntegrationOptions options;
  options.rel_tol = rel_tol;
  options.abs_tol = abs_tol;
  return integrate(s0, mu, t_end, options);
}

double radial_period(const Trajectory& traj) {
  const auto& p = traj.perihelion_times;
  if (p.size() < 2) throw DomainError("fewer than two perihelion passages recorded");
  return (p.back() - p.front()) / static_cast<double>(p.size() - 1);
}

double DriftReport::max() const { return std::max({E, L, A, V, Lbar, xi_orbit}); }

DriftReport drift_report(const Trajectory& traj) {
  if (traj.samples.empty()) throw DomainError("trajectory has no samples");
  auto record = [&](const Sample& smp) {
    return smp.invariants ? *smp.invariants : compute_invariants(smp.state, traj.mu);
  };
  auto relative = [](double diff, double scale) { return scale > 0 ? diff / scale : diff; };
  const InvariantRecord first = record(traj.samples.front());
  const double e_scale = std::max(std::abs(first.E), 1e-3 * (0.5 * traj.samples.front().state.v.squaredNorm() +
                                                              1.0 / traj.samples.front().state.r.norm()));
  DriftReport out;
  for (const auto& smp : traj.samples) {
    const InvariantRecord rec = record(smp);
    out.E = std::max(out.E, relative(std::abs(rec.E - first.E), e_scale));
    out.L = std::max(out.L, relative((rec.L - first.L).coefficient_norm(), first.L.coefficient_norm()));
    out.A = std::max(out.A, relative((rec.A - first.A).norm(), std::max(first.A.norm(), 1e-3)));
    if (rec.V && first.V)
      out.V = std::max(out.V, relative((*rec.V - *first.V).coefficient_norm(), first.V->coefficient_norm()));
    if (rec.Lbar && first.Lbar)
      out.Lbar =
          std::max(out.Lbar, relative((*rec.Lbar - *first.Lbar).coefficient_norm(), first.Lbar->coefficient_norm()));
    const auto orbit = on_orbit_residual(smp.state.xi, traj.mu, 0.0);
    out.xi_orbit = std::max({out.xi_orbit, orbit.spectral, orbit.pfaffian});
  }
  return out;
}

}  // namespace mkepler
