#pragma once

#include <optional>

#include <Eigen/Dense>

#include "mkepler/gauge.hpp"
#include "mkepler/multivector.hpp"
#include "mkepler/state.hpp"

namespace mkepler {

/// Conserved quantities of one state. V and Lbar are absent for colliding
/// states (r ^ v = 0).
struct InvariantRecord {
  int k = 1;
  double mu = 0;
  double E = 0;
  Multivectord L;
  Eigen::VectorXd A;
  std::optional<Multivectord> V;
  std::optional<Multivectord> Lbar;
  double rv_normsq = 0;  // |r ^ v|^2, which equals |L|^2 - mu^2
};

/// True when |r ^ v| is negligible against |r| |v|.
bool is_colliding(const State& s);

InvariantRecord compute_invariants(const State& s, double mu, const GaugeConvention& conv = kResolvedConvention);

/// Lbar recomputed as the projection of L onto Lambda^2[V] (L itself when V = 0).
Multivectord effective_angular_momentum_by_projection(const InvariantRecord& rec);

/// Relative residuals of the algebraic relations among the invariants.
struct RelationResiduals {
  double angular_momentum = 0;  // |L|^2 = |r ^ v|^2 + mu^2
  double v_norm = 0;            // |V|^2 = (mu^2/k)(|L|^2 - mu^2)^2
  double lbar_wedge = 0;        // Lbar ^ A = V / (|L|^2 - mu^2)
  double lbar_norm = 0;         // |Lbar|^2 - |Lbar ^ A|^2 = |L|^2 - mu^2
  double lbar_charge = 0;       // |Lbar ^ A|^2 = mu^2 / k
  double energy = 0;            // E = -(1 - |A|^2) / (2(|L|^2 - mu^2))
  double lbar_decomposable = 0; // |Lbar ^ Lbar| / |Lbar|^2

  double max() const;
};

RelationResiduals relation_residuals(const InvariantRecord& rec, const State& s);

}  // namespace mkepler
