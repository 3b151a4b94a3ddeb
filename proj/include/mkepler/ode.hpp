#pragma once

// Dormand-Prince 5(4) with PI step control and the standard quartic-plus
// continuous extension.

#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "mkepler/errors.hpp"

namespace mkepler::ode {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0;  // 0: automatic
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

class StepSizeUnderflow : public Error {
 public:
  StepSizeUnderflow(double t, const std::string& what) : Error(what), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

class DenseStep;

using Rhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;
/// Called after every accepted step; returning false stops the integration.
using StepObserver = std::function<bool(const DenseStep&)>;

/// Interpolant over one accepted step [t0, t1].
class DenseStep {
 public:
  double t0() const { return t0_; }
  double t1() const { return t0_ + h_; }
  Eigen::VectorXd operator()(double t) const;

 private:
  friend Stats dopri5(const Rhs&, double, Eigen::VectorXd&, double, const Options&, const StepObserver&);
  double t0_ = 0, h_ = 0;
  Eigen::VectorXd c1_, c2_, c3_, c4_, c5_;
};

/// Integrates y' = f(t, y) from t0 to t_end (t_end > t0); y is overwritten
/// with the final state. Exceptions thrown by f or the observer propagate.
Stats dopri5(const Rhs& f, double t0, Eigen::VectorXd& y, double t_end, const Options& options,
             const StepObserver& observer = {});

}  // namespace mkepler::ode
