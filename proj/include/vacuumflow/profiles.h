#ifndef VACUUMFLOW_PROFILES_H
#define VACUUMFLOW_PROFILES_H

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vacuumflow {

enum class ProfileKind { power, constant, entropy_bounded };

std::string_view to_string(ProfileKind kind);
ProfileKind parse_profile_kind(std::string_view name);

/// Reference density rho_bar(x) = scale * (1 - x)^varrho on a uniform grid
/// x_i = i / N over [0, 1].
struct DensityProfile {
  ProfileKind kind = ProfileKind::power;
  double varrho = 0.0;
  double scale = 1.0;
  std::vector<double> grid;
  std::vector<double> rho_bar;
  double mass = 0.0;  // trapezoid rule for the integral of y^2 rho_bar

  int cells() const { return static_cast<int>(grid.size()) - 1; }
  double spacing() const { return 1.0 / cells(); }
  /// Closed-form density at an arbitrary point of [0, 1].
  double density_at(double x) const;
  /// Integral of x^4 rho_bar over [a, b], accurate to rounding for this family.
  double moment4(double a, double b) const;
  /// Largest deviation factor of rho_bar / (scale (1-x)^varrho) over nodes with
  /// x >= x_from and rho_bar > 0. The degeneracy assumption is checked against 2.
  double boundary_band_factor(double x_from = 0.5) const;
};

/// p_bar(x) = delta * int_x^1 s rho_bar(s) ds, so that p_bar' = -delta x rho_bar
/// and p_bar(1) = 0.
struct PressureProfile {
  double delta = 1.0;
  std::vector<double> p_bar;
};

/// s = c_nu log(p_bar / rho_bar^gamma) + s_bar, with a sentinel wherever the
/// logarithm is undefined.
struct EntropyProfile {
  static constexpr double sentinel = -1.0e300;

  double c_nu = 1.0;
  double s_bar = 0.0;
  std::vector<double> s;
  std::vector<bool> valid;
  bool bounded = false;
  /// Estimated d s / d log(1 - x) near the vacuum boundary; zero in the limit
  /// exactly when the boundary value of s is finite.
  double boundary_log_slope = 0.0;
};

DensityProfile build_density_profile(ProfileKind kind, double varrho, double scale, double gamma, int N);
PressureProfile pressure_profile(const DensityProfile& profile, double delta);
EntropyProfile entropy_profile(const DensityProfile& profile, const PressureProfile& pressure, double c_nu,
                               double s_bar, double gamma);

/// CSV with header `x,rho_bar,p_bar,s`. Sentinel entropy values are written as
/// the sentinel number so the file stays numeric.
void write_profile_csv(std::ostream& out, const DensityProfile& profile, const PressureProfile& pressure,
                       const EntropyProfile& entropy);

}  // namespace vacuumflow

#endif
