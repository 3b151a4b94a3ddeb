#pragma once

#include <Eigen/Dense>

#include "mkepler/skew.hpp"

namespace mkepler {

/// Position, velocity and internal charge of a particle over the chart U.
struct State {
  Eigen::VectorXd r;
  Eigen::VectorXd v;
  SkewMatrixd xi;

  int dim() const { return static_cast<int>(r.size()); }
  int k() const { return xi.k(); }

  /// Structural checks: odd dimension 2k+1 >= 3 matching xi, equal sizes.
  void validate() const {
    if (r.size() < 3 || r.size() % 2 == 0) throw DomainError("state dimension must be odd and >= 3");
    if (v.size() != r.size()) throw DomainError("position and velocity sizes differ");
    if (2 * xi.k() + 1 != r.size()) throw DomainError("charge does not match the state dimension");
  }
};

/// (r, v, xi) -> (r, -v, -xi). The force is bilinear in (v, xi), so the
/// reversed state retraces the forward motion. For odd k, -xi lies on O_{-mu}.
inline State time_reversed(const State& s) { return State{s.r, -s.v, -s.xi}; }

}  // namespace mkepler
