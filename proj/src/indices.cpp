#include "vacuumflow/indices.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vacuumflow {

namespace {

// Slack of the chain lower < 2 sigma1 < r1 < min(6 gamma - 6, 2); positive
// exactly when every inequality holds strictly.
double chain_slack(double lower, double gamma, double r1, double sigma1) {
  const double upper = std::min(6 * gamma - 6, 2.0);
  return std::min({2 * sigma1 - lower, r1 - 2 * sigma1, upper - r1});
}

double case_slack(int which, double gamma, double r1, double sigma1) {
  double lower = 2 - r1;
  if (which == 2) lower = std::max(3 * gamma - 3 - r1, lower);
  if (which == 3) lower = std::max(3 * gamma - 1 - r1, lower);
  return chain_slack(lower, gamma, r1, sigma1);
}

// Grid coordinate u in (0, 1) mapped to [hi - 1, hi), graded toward hi. Near
// gamma = 5/3 and 7/3 the feasible set is a thin triangle in the corner
// r1 -> 2, sigma1 -> 1 whose legs shrink like 1.5 |gamma - edge|, so that
// corner gets the finest spacing.
double graded(double u, double hi) { return hi - std::pow(1 - u, 1.3); }

}  // namespace

IndexSet compute_index_set(double gamma, double r1, double sigma1) {
  if (!(gamma > 1)) throw std::invalid_argument("compute_index_set: gamma must exceed 1");
  if (!std::isfinite(r1) || !std::isfinite(sigma1))
    throw std::invalid_argument("compute_index_set: r1 and sigma1 must be finite");
  IndexSet s;
  s.gamma = gamma;
  s.r1 = r1;
  s.sigma1 = sigma1;
  s.l1 = 6 * gamma - 6 - r1;
  s.r2 = r1 + 2 * sigma1 - 2;
  s.l2 = 6 * gamma - 6 - s.r2;
  s.l3 = s.l1 + 2;
  s.r3 = r1;
  s.r4 = 2 - s.r2;
  s.l4 = 6 * gamma - 6 + s.r4;
  s.frak_a = r1 + sigma1 + 1;
  s.frak_b = r1;
  s.case1 = case_slack(1, gamma, r1, sigma1) > 0;
  s.case2 = case_slack(2, gamma, r1, sigma1) > 0;
  s.case3 = case_slack(3, gamma, r1, sigma1) > 0;
  return s;
}

Regime regime(double gamma) {
  Regime r;
  r.I0 = gamma > 7.0 / 6.0;
  r.I1 = gamma > 7.0 / 6.0 && gamma < 7.0 / 3.0;
  r.I2 = gamma > 11.0 / 9.0 && gamma < 5.0 / 3.0;
  return r;
}

FeasibleWindow feasible_window(double gamma, int which, int grid) {
  if (grid < 100) throw std::invalid_argument("feasible_window: grid must be at least 100");
  if (which < 1 || which > 3) throw std::invalid_argument("feasible_window: case must be 1, 2 or 3");
  FeasibleWindow out;
  double best = 0;
  for (int i = 1; i <= grid; ++i) {
    const double r1 = graded(static_cast<double>(i) / (grid + 1), 2.0);
    for (int j = 1; j <= grid; ++j) {
      const double sigma1 = graded(static_cast<double>(j) / (grid + 1), 1.0);
      const double slack = case_slack(which, gamma, r1, sigma1);
      if (slack > best) {
        best = slack;
        out.witness = compute_index_set(gamma, r1, sigma1);
      }
    }
  }
  out.nonempty = out.witness.has_value();
  out.margin = best;
  return out;
}

std::optional<IndexSet> default_index_set(double gamma, int grid) {
  for (int which = 3; which >= 1; --which) {
    auto w = feasible_window(gamma, which, grid);
    if (w.nonempty) return w.witness;
  }
  return std::nullopt;
}

}  // namespace vacuumflow
