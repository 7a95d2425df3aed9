#ifndef VACUUMFLOW_SELFSIM_H
#define VACUUMFLOW_SELFSIM_H

#include <iosfwd>
#include <string_view>
#include <vector>

namespace vacuumflow {

enum class TimeCoord { t, tau };

std::string_view to_string(TimeCoord coord);

/// alpha_prime and alpha_second are derivatives with respect to the
/// trajectory's own time coordinate.
struct AlphaSample {
  double time = 0;
  double alpha = 0;
  double alpha_prime = 0;
  double alpha_second = 0;
};

struct AlphaTrajectory {
  TimeCoord coord = TimeCoord::t;
  double delta = 1;
  double gamma = 1.5;
  double alpha0 = 1;
  double alpha1 = 0;
  std::vector<AlphaSample> samples;
  double invariant0 = 0;
  double beta1 = 0;
  double beta2 = 0;

  /// (d alpha / dt)^2 + 2 delta alpha^{3-3 gamma} / (3 gamma - 3), expressed in
  /// this trajectory's coordinate (d alpha / dt = alpha_tau / alpha).
  double invariant(const AlphaSample& s) const;
  /// Largest |invariant - invariant0| relative to the size of its two terms.
  double max_invariant_drift() const;
  /// Dense output by quintic Hermite interpolation between samples (of alpha
  /// in the t coordinate, of log alpha in the tau coordinate).
  AlphaSample at(double time) const;
  double end_time() const { return samples.back().time; }
};

/// Solves alpha^{3 gamma - 2} alpha'' = delta with alpha(0) = alpha0,
/// alpha'(0) = alpha1 by an adaptive Dormand-Prince 5(4) pair.
AlphaTrajectory integrate_alpha_t(double delta, double gamma, double alpha0, double alpha1, double t_end,
                                  double tol);

/// Same trajectory in rescaled time, where alpha_tau(0) = alpha0 alpha1.
/// Integrated in log alpha and alpha_tau / alpha so that exponential growth
/// does not cost accuracy.
AlphaTrajectory integrate_alpha_tau(double delta, double gamma, double alpha0, double alpha1, double tau_end,
                                    double tol);

/// tau(t) = integral of 1 / alpha over [0, t] and its inverse.
class TimeMap {
 public:
  explicit TimeMap(const AlphaTrajectory& traj_t);
  double tau_of_t(double t) const;
  double t_of_tau(double tau) const;
  double tau_end() const { return tau_.back(); }

 private:
  double segment(std::size_t k, double t) const;

  AlphaTrajectory traj_;
  std::vector<double> tau_;
  std::vector<double> slope_;  // dt / dtau at the nodes after limiting
};

TimeMap rescale_time(const AlphaTrajectory& traj_t);

struct Asymptote {
  double c1 = 0;
  double c2 = 0;
  double sup_ratio = 0;
};

/// Fits alpha ~ c1 + c2 t on the tail t >= t_end / 2 and reports the largest
/// alpha / (c1 + c2 t) over that window. Throws when the final slope still
/// differs from the fitted c2 by more than `horizon_tol` (relative).
Asymptote asymptote_check(const AlphaTrajectory& traj_t, double horizon_tol = 0.05);

/// CSV with header `time,alpha,alpha_prime,invariant`.
void write_alpha_csv(std::ostream& out, const AlphaTrajectory& traj);

}  // namespace vacuumflow

#endif
