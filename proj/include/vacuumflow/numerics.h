#ifndef VACUUMFLOW_NUMERICS_H
#define VACUUMFLOW_NUMERICS_H

#include <cstddef>
#include <span>
#include <vector>

namespace vacuumflow {

/// Composite trapezoid rule on a uniform grid with spacing h.
double trapezoid(std::span<const double> f, double h);

/// Trapezoid rule over the nodes [first, last] (inclusive).
double trapezoid(std::span<const double> f, double h, std::size_t first, std::size_t last);

/// Nodal first derivative on a uniform grid: centered in the interior,
/// second-order one-sided at both ends.
std::vector<double> nodal_derivative(std::span<const double> f, double h);

/// Same as nodal_derivative but uses the even reflection f(-x) = f(x) at
/// x = 0, so the derivative vanishes there.
std::vector<double> nodal_derivative_even(std::span<const double> f, double h);

double sup_norm(std::span<const double> f);

/// Solves the symmetric system
///
///   mass[i] w[i] - (c[i] (w[i+1] - w[i]) - c[i-1] (w[i] - w[i-1])) = rhs[i]
///
/// with c[-1] = c[n-1] = 0, mass >= 0, c > 0 and at least one positive mass.
/// This is a diagonal plus weighted graph Laplacian. The elimination carries
/// the pivot surplus over the coupling coefficient explicitly, so no
/// difference of large coupling coefficients is ever formed. That keeps the
/// constant mode accurate when c exceeds mass by many orders of magnitude.
///
/// `c` has size n-1 (one coefficient per edge). Optionally returns the edge
/// fluxes c[i] (w[i+1] - w[i]) evaluated without differencing w.
std::vector<double> solve_mass_laplacian(std::span<const double> mass, std::span<const double> c,
                                         std::span<const double> rhs,
                                         std::vector<double>* edge_flux = nullptr);

/// Gauss-Legendre rule on [a, b] with `points` in {2, ..., 8}.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int points, double a, double b);

/// Least-squares line y = intercept + slope x.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace vacuumflow

#endif
