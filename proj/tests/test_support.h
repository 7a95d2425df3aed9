#ifndef VACUUMFLOW_TEST_SUPPORT_H
#define VACUUMFLOW_TEST_SUPPORT_H

#include <cmath>
#include <vector>

#include "vacuumflow/solver.h"

namespace vacuumflow::testing {

inline SolverConfig small_config(int N = 64) {
  SolverConfig c;
  c.gamma = 1.5;
  c.mu = 1;
  c.delta = 1;
  c.alpha0 = 1;
  c.alpha1 = 4;
  c.tau_end = 0.2;
  c.N = N;
  return c;
}

inline PerturbationState zero_state(const Model& m) {
  PerturbationState s;
  const int N = m.cells();
  const auto a = m.alpha().at(0);
  s.alpha = a.alpha;
  s.alpha_tau = a.alpha_prime;
  s.eta.assign(N + 1, 0.0);
  s.v.assign(N + 1, 0.0);
  s.zeta.assign(N + 1, 0.0);
  s.eta_tt.assign(N + 1, 0.0);
  s.has_acceleration = true;
  return s;
}

// Equality that treats two NaNs as equal.
inline bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

inline bool same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

}  // namespace vacuumflow::testing

#endif
