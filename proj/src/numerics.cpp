#include "vacuumflow/numerics.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vacuumflow {

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  return trapezoid(f, h, 0, f.size() - 1);
}

double trapezoid(std::span<const double> f, double h, std::size_t first, std::size_t last) {
  if (last <= first) return 0.0;
  double sum = 0.5 * (f[first] + f[last]);
  for (std::size_t i = first + 1; i < last; ++i) sum += f[i];
  return sum * h;
}

std::vector<double> nodal_derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw std::invalid_argument("nodal_derivative: need at least 3 nodes");
  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> nodal_derivative_even(std::span<const double> f, double h) {
  auto d = nodal_derivative(f, h);
  d[0] = 0.0;
  return d;
}

double sup_norm(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> solve_mass_laplacian(std::span<const double> mass, std::span<const double> c,
                                         std::span<const double> rhs,
                                         std::vector<double>* edge_flux) {
  const std::size_t n = mass.size();
  if (n == 0 || rhs.size() != n || c.size() + 1 != n)
    throw std::invalid_argument("solve_mass_laplacian: inconsistent sizes");

  // After elimination, row i reads (c[i] + e[i]) w[i] - c[i] w[i+1] = s[i].
  std::vector<double> e(n), s(n);
  e[0] = mass[0];
  s[0] = rhs[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double cl = c[i - 1];
    const double pl = cl + e[i - 1];
    if (!(pl > 0.0)) throw std::runtime_error("solve_mass_laplacian: zero pivot");
    e[i] = mass[i] + cl * (e[i - 1] / pl);
    s[i] = rhs[i] + cl * (s[i - 1] / pl);
  }
  if (!(e[n - 1] > 0.0)) throw std::runtime_error("solve_mass_laplacian: singular system (no mass)");

  std::vector<double> w(n);
  w[n - 1] = s[n - 1] / e[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    const double p = c[i] + e[i];
    w[i] = (s[i] + c[i] * w[i + 1]) / p;
  }
  if (edge_flux) {
    edge_flux->assign(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double p = c[i] + e[i];
      (*edge_flux)[i] = c[i] * ((e[i] * w[i + 1] - s[i]) / p);
    }
  }
  return w;
}

QuadratureRule gauss_legendre(int points, double a, double b) {
  if (points < 1 || points > 32) throw std::invalid_argument("gauss_legendre: unsupported order");
  QuadratureRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int k = 0; k < points; ++k) {
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    double z = std::cos(std::numbers::pi * (k + 0.75) / (points + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= points; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[k] = mid - half * z;
    rule.weights[k] = half * 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace vacuumflow
