#include "vacuumflow/profiles.h"

#include <cmath>
#include <fmt/format.h>
#include <ostream>
#include <stdexcept>

#include "vacuumflow/numerics.h"

namespace vacuumflow {

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::power: return "power";
    case ProfileKind::constant: return "constant";
    case ProfileKind::entropy_bounded: return "entropy_bounded";
  }
  return "power";
}

ProfileKind parse_profile_kind(std::string_view name) {
  if (name == "power") return ProfileKind::power;
  if (name == "constant") return ProfileKind::constant;
  if (name == "entropy_bounded") return ProfileKind::entropy_bounded;
  throw std::invalid_argument(fmt::format("unknown profile kind '{}'", name));
}

double DensityProfile::density_at(double x) const {
  if (varrho == 0.0) return scale;
  const double y = 1.0 - x;
  return y <= 0.0 ? 0.0 : scale * std::pow(y, varrho);
}

double DensityProfile::moment4(double a, double b) const {
  if (b <= a) return 0.0;
  if (varrho == 0.0) return scale * (std::pow(b, 5) - std::pow(a, 5)) / 5.0;
  // Near the vacuum boundary integrate in y = 1 - x, where
  // x^4 (1-x)^varrho = sum_k C(4,k) (-y)^k y^varrho has no cancellation for small y.
  const double ya = 1.0 - a, yb = 1.0 - b;
  if (ya <= 0.25) {
    constexpr double binom[5] = {1, 4, 6, 4, 1};
    double sum = 0.0;
    for (int k = 0; k <= 4; ++k) {
      const double p = varrho + k + 1.0;
      const double term = (std::pow(ya, p) - std::pow(std::max(yb, 0.0), p)) / p;
      sum += (k % 2 == 0 ? 1.0 : -1.0) * binom[k] * term;
    }
    return scale * sum;
  }
  const auto rule = gauss_legendre(8, a, b);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double x = rule.nodes[k];
    sum += rule.weights[k] * x * x * x * x * density_at(x);
  }
  return sum;
}

double DensityProfile::boundary_band_factor(double x_from) const {
  double worst = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < x_from || rho_bar[i] <= 0.0) continue;
    const double model = scale * std::pow(1.0 - grid[i], varrho);
    const double ratio = rho_bar[i] / model;
    worst = std::max({worst, ratio, 1.0 / ratio});
  }
  return worst;
}

DensityProfile build_density_profile(ProfileKind kind, double varrho, double scale, double gamma, int N) {
  if (!std::isfinite(varrho) || !std::isfinite(scale) || !std::isfinite(gamma))
    throw std::invalid_argument("density profile: non-finite input");
  if (N < 8) throw std::invalid_argument(fmt::format("density profile: N = {} is below the minimum of 8", N));
  if (!(scale > 0.0)) throw std::invalid_argument("density profile: scale must be positive");

  DensityProfile p;
  p.kind = kind;
  p.scale = scale;
  switch (kind) {
    case ProfileKind::power:
      if (varrho < 0.0) throw std::invalid_argument("density profile: varrho must be nonnegative");
      p.varrho = varrho;
      break;
    case ProfileKind::constant:
      p.varrho = 0.0;
      break;
    case ProfileKind::entropy_bounded:
      if (!(gamma > 1.0)) throw std::invalid_argument("density profile: entropy_bounded needs gamma > 1");
      p.varrho = 1.0 / (gamma - 1.0);
      break;
  }

  p.grid.resize(N + 1);
  p.rho_bar.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    p.grid[i] = static_cast<double>(i) / N;
    p.rho_bar[i] = p.density_at(p.grid[i]);
  }
  p.grid[N] = 1.0;
  p.rho_bar[N] = p.varrho > 0.0 ? 0.0 : scale;

  std::vector<double> integrand(N + 1);
  for (int i = 0; i <= N; ++i) integrand[i] = p.grid[i] * p.grid[i] * p.rho_bar[i];
  p.mass = trapezoid(integrand, p.spacing());
  return p;
}

PressureProfile pressure_profile(const DensityProfile& profile, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("pressure profile: delta must be positive");
  const int N = profile.cells();
  const double h = profile.spacing();
  PressureProfile out;
  out.delta = delta;
  out.p_bar.assign(N + 1, 0.0);
  for (int i = N - 1; i >= 0; --i) {
    const double f0 = profile.grid[i] * profile.rho_bar[i];
    const double f1 = profile.grid[i + 1] * profile.rho_bar[i + 1];
    out.p_bar[i] = out.p_bar[i + 1] + 0.5 * delta * h * (f0 + f1);
  }
  return out;
}

EntropyProfile entropy_profile(const DensityProfile& profile, const PressureProfile& pressure, double c_nu,
                               double s_bar, double gamma) {
  if (!(c_nu > 0.0)) throw std::invalid_argument("entropy profile: c_nu must be positive");
  const int N = profile.cells();
  EntropyProfile e;
  e.c_nu = c_nu;
  e.s_bar = s_bar;
  e.s.assign(N + 1, EntropyProfile::sentinel);
  e.valid.assign(N + 1, false);
  bool interior_finite = true;
  for (int i = 0; i <= N; ++i) {
    const double rho = profile.rho_bar[i], p = pressure.p_bar[i];
    if (rho > 0.0 && p > 0.0) {
      e.s[i] = c_nu * std::log(p / std::pow(rho, gamma)) + s_bar;
      e.valid[i] = std::isfinite(e.s[i]);
    }
    if (i < N && !e.valid[i]) interior_finite = false;
  }

  // One-sided limit at x = 1: compare s at distances k h and 2 k h from the
  // boundary. s ~ slope * log(1 - x) when the limit is infinite.
  const int k = std::max(2, N / 32);
  const int i1 = N - k, i2 = N - 2 * k;
  if (i2 >= 0 && e.valid[i1] && e.valid[i2]) {
    e.boundary_log_slope = (e.s[i1] - e.s[i2]) / (c_nu * std::log(0.5));
  } else {
    e.boundary_log_slope = INFINITY;
  }
  e.bounded = interior_finite && std::abs(e.boundary_log_slope) < 0.25;
  return e;
}

void write_profile_csv(std::ostream& out, const DensityProfile& profile, const PressureProfile& pressure,
                       const EntropyProfile& entropy) {
  out << "x,rho_bar,p_bar,s\n";
  for (std::size_t i = 0; i < profile.grid.size(); ++i) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", profile.grid[i], profile.rho_bar[i],
                       pressure.p_bar[i], entropy.s[i]);
  }
}

}  // namespace vacuumflow
