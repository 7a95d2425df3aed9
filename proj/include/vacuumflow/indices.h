#ifndef VACUUMFLOW_INDICES_H
#define VACUUMFLOW_INDICES_H

#include <optional>

namespace vacuumflow {

/// Exponents of the alpha weights in the energy functionals.
struct IndexSet {
  double gamma = 0;
  double r1 = 0;
  double sigma1 = 0;
  double l1 = 0;
  double r2 = 0;
  double l2 = 0;
  double l3 = 0;
  double r3 = 0;
  double r4 = 0;
  double l4 = 0;
  double frak_a = 0;
  double frak_b = 0;
  bool case1 = false;
  bool case2 = false;
  bool case3 = false;

  bool holds(int which) const { return which == 1 ? case1 : which == 2 ? case2 : case3; }
};

IndexSet compute_index_set(double gamma, double r1, double sigma1);

/// Membership of gamma in I0 = (7/6, inf), I1 = (7/6, 7/3), I2 = (11/9, 5/3).
struct Regime {
  bool I0 = false;
  bool I1 = false;
  bool I2 = false;

  bool contains(int interval) const { return interval == 0 ? I0 : interval == 1 ? I1 : I2; }
};

Regime regime(double gamma);

struct FeasibleWindow {
  bool nonempty = false;
  /// The scanned point farthest from every constraint boundary.
  std::optional<IndexSet> witness;
  /// Smallest slack of the constraint chain at the witness.
  double margin = 0;
};

/// Brute-force scan of the (r1, sigma1) constraint chain for case 1, 2 or 3
/// on a grid x grid tensor lattice over 1 < r1 < 2, 0 < sigma1 < 1 (every
/// admissible pair lies in that box), graded toward r1 = 2, sigma1 = 1.
FeasibleWindow feasible_window(double gamma, int which, int grid);

/// Max-margin witness of the strongest case (3, then 2, then 1) that is
/// feasible at this gamma.
std::optional<IndexSet> default_index_set(double gamma, int grid = 200);

}  // namespace vacuumflow

#endif
