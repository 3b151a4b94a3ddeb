#include "mkepler/ode.hpp"

#include <algorithm>
#include <cmath>

namespace mkepler::ode {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafe = 0.9, kFacMin = 0.2, kFacMax = 10.0, kBeta = 0.04;

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                  const Options& o) {
  const Eigen::VectorXd scale = (o.abs_tol + o.rel_tol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).matrix();
  return std::sqrt((err.array() / scale.array()).square().mean());
}

// Starting step from the local Lipschitz estimate.
double initial_step(const Rhs& f, double t0, const Eigen::VectorXd& y0, const Eigen::VectorXd& k1, double span,
                    const Options& o, Stats& stats) {
  const Eigen::ArrayXd sk = o.abs_tol + o.rel_tol * y0.cwiseAbs().array();
  const double dnf = (k1.array() / sk).square().mean();
  const double dny = (y0.array() / sk).square().mean();
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min({h, o.max_step, span});
  const Eigen::VectorXd y1 = y0 + h * k1;
  Eigen::VectorXd k2(y0.size());
  f(t0 + h, y1, k2);
  ++stats.evaluations;
  const double der2 = std::sqrt(((k2 - k1).array() / sk).square().mean()) / h;
  const double der = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der, 0.2);
  return std::min({100 * h, h1, o.max_step, span});
}

}  // namespace

Eigen::VectorXd DenseStep::operator()(double t) const {
  const double s = (t - t0_) / h_;
  const double s1 = 1.0 - s;
  return c1_ + s * (c2_ + s1 * (c3_ + s * (c4_ + s1 * c5_)));
}

Stats dopri5(const Rhs& f, double t0, Eigen::VectorXd& y, double t_end, const Options& o,
             const StepObserver& observer) {
  if (!(t_end > t0)) throw DomainError("integration interval must be non-empty");
  if (!(o.rel_tol > 0) || !(o.abs_tol > 0)) throw DomainError("tolerances must be positive");
  const Eigen::Index n = y.size();
  Stats stats;
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ys(n), y1(n), err(n);
  f(t0, y, k1);
  ++stats.evaluations;

  double t = t0;
  double h = o.initial_step > 0 ? std::min(o.initial_step, t_end - t0)
                                : initial_step(f, t0, y, k1, t_end - t0, o, stats);
  double fac_old = 1e-4;
  bool last_rejected = false;
  DenseStep dense;

  for (long step = 0;; ++step) {
    if (step >= o.max_steps) throw StepSizeUnderflow(t, "maximum number of steps exceeded");
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw StepSizeUnderflow(t, "step size underflow");
    const bool final_step = t + 1.01 * h >= t_end;
    if (final_step) h = t_end - t;

    ys = y + h * a21 * k1;
    f(t + c2 * h, ys, k2);
    ys = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ys, k3);
    ys = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ys, k4);
    ys = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ys, k5);
    ys = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ys, k6);
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, y1, k7);
    stats.evaluations += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double e = error_norm(err, y, y1, o);
    const double fac11 = std::pow(e, 0.2 - kBeta * 0.75);
    double fac = fac11 / std::pow(fac_old, kBeta);
    fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
    double h_new = h / fac;

    if (e <= 1.0 && std::isfinite(e)) {
      fac_old = std::max(e, 1e-4);
      ++stats.accepted;
      dense.t0_ = t;
      dense.h_ = h;
      dense.c1_ = y;
      dense.c2_ = y1 - y;
      dense.c3_ = h * k1 - dense.c2_;
      dense.c4_ = dense.c2_ - h * k7 - dense.c3_;
      dense.c5_ = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      k1 = k7;
      y = y1;
      t = final_step ? t_end : t + h;
      if (observer && !observer(dense)) return stats;
      if (final_step) return stats;
      h_new = std::min(h_new, o.max_step);
      if (last_rejected) h_new = std::min(h_new, h);
      last_rejected = false;
    } else {
      ++stats.rejected;
      h_new = std::isfinite(e) ? h / std::min(1.0 / kFacMin, fac11 / kSafe) : 0.1 * h;
      last_rejected = true;
    }
    h = h_new;
  }
}

}  // namespace mkepler::ode
