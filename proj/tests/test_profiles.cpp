#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vacuumflow/profiles.h"

using namespace vacuumflow;

TEST_CASE("constant profile has unit density and mass 1/3") {
  const auto p = build_density_profile(ProfileKind::constant, 5.0, 1.0, 1.5, 64);
  CHECK(p.varrho == 0);
  for (double r : p.rho_bar) CHECK(r == 1.0);
  // trapezoid of y^2 carries an h^2/6 error
  CHECK(p.mass == doctest::Approx(1.0 / 3).epsilon(1e-3));
  CHECK(p.boundary_band_factor() <= 2.0);
}

TEST_CASE("power profile evaluates the formula") {
  const auto p = build_density_profile(ProfileKind::power, 1.0, 1.0, 1.5, 64);
  CHECK(p.rho_bar[32] == doctest::Approx(0.5));
  CHECK(p.rho_bar[64] == 0.0);
  CHECK(p.density_at(0.25) == doctest::Approx(0.75));
  CHECK(p.mass > 0);
  CHECK(p.boundary_band_factor() <= 2.0);
}

TEST_CASE("entropy-bounded profile picks varrho = 1/(gamma-1)") {
  CHECK(build_density_profile(ProfileKind::entropy_bounded, 0, 1, 1.5, 64).varrho == doctest::Approx(2.0));
  CHECK(build_density_profile(ProfileKind::entropy_bounded, 0, 1, 1.25, 64).varrho == doctest::Approx(4.0));
}

TEST_CASE("profile construction rejects bad input") {
  CHECK_THROWS(build_density_profile(ProfileKind::power, 1, 1, 1.5, 4));
  CHECK_THROWS(build_density_profile(ProfileKind::power, -1, 1, 1.5, 64));
  CHECK_THROWS(build_density_profile(ProfileKind::power, 1, 0, 1.5, 64));
  CHECK_THROWS(build_density_profile(ProfileKind::power, NAN, 1, 1.5, 64));
  CHECK_THROWS(build_density_profile(ProfileKind::entropy_bounded, 0, 1, 1.0, 64));
  CHECK(parse_profile_kind(to_string(ProfileKind::entropy_bounded)) == ProfileKind::entropy_bounded);
  CHECK_THROWS(parse_profile_kind("gaussian"));
}

TEST_CASE("moment4 matches closed-form integrals") {
  const auto p = build_density_profile(ProfileKind::power, 1.0, 1.0, 1.5, 64);
  // int_a^b x^4 (1 - x) dx
  auto F = [](double x) { return std::pow(x, 5) / 5 - std::pow(x, 6) / 6; };
  CHECK(p.moment4(0.2, 0.7) == doctest::Approx(F(0.7) - F(0.2)).epsilon(1e-13));
  CHECK(p.moment4(0.99, 1.0) == doctest::Approx(F(1.0) - F(0.99)).epsilon(1e-12));
}

TEST_CASE("pressure of constant density") {
  const auto rho = build_density_profile(ProfileKind::constant, 0, 1, 1.5, 64);
  const auto p = pressure_profile(rho, 1.0);
  CHECK(p.p_bar[64] == 0.0);
  CHECK(p.p_bar[0] == doctest::Approx(0.5).epsilon(1e-12));
  for (int i = 0; i <= 64; ++i) {
    const double x = i / 64.0;
    CHECK(p.p_bar[i] == doctest::Approx((1 - x * x) / 2).epsilon(1e-12));
  }
  CHECK_THROWS(pressure_profile(rho, 0.0));
}

TEST_CASE("pressure of linear density") {
  const auto rho = build_density_profile(ProfileKind::power, 1, 1, 1.5, 128);
  const auto p = pressure_profile(rho, 1.0);
  CHECK(p.p_bar[128] == 0.0);
  CHECK(p.p_bar[0] == doctest::Approx(1.0 / 6).epsilon(1e-4));
  for (std::size_t i = 1; i < p.p_bar.size(); ++i) CHECK(p.p_bar[i] <= p.p_bar[i - 1]);
}

TEST_CASE("pressure derivative converges at second order") {
  auto err = [](int N) {
    const auto rho = build_density_profile(ProfileKind::power, 1, 1, 1.5, N);
    const auto p = pressure_profile(rho, 2.0);
    double e = 0;
    for (int i = 1; i < N; ++i) {
      const double x = rho.grid[i];
      const double dp = (p.p_bar[i + 1] - p.p_bar[i - 1]) * N / 2;
      e = std::max(e, std::abs(dp + 2.0 * x * rho.rho_bar[i]));
    }
    return e;
  };
  const double ratio = err(64) / err(128);
  CHECK(ratio == doctest::Approx(4).epsilon(0.15));
}

TEST_CASE("entropy of constant density is unbounded") {
  const auto rho = build_density_profile(ProfileKind::constant, 0, 1, 1.5, 64);
  const auto p = pressure_profile(rho, 1.0);
  const auto s = entropy_profile(rho, p, 1.0, 0.0, 1.5);
  CHECK(s.s[0] == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK_FALSE(s.bounded);
  CHECK_FALSE(s.valid[64]);
  CHECK(s.s[64] == EntropyProfile::sentinel);
  for (int i = 0; i < 64; ++i)
    CHECK(s.s[i] == doctest::Approx(std::log(p.p_bar[i] / std::pow(rho.rho_bar[i], 1.5))));
}

TEST_CASE("entropy scaling by density amplitude") {
  const double g = 1.5;
  auto s_of = [&](double scale) {
    const auto rho = build_density_profile(ProfileKind::constant, 0, scale, g, 32);
    return entropy_profile(rho, pressure_profile(rho, 1.0), 1.0, 0.0, g);
  };
  const auto a = s_of(1.0), b = s_of(2.0);
  for (int i = 0; i < 32; ++i) CHECK(b.s[i] - a.s[i] == doctest::Approx(std::log(2.0 / std::pow(2.0, g))));
}

TEST_CASE("entropy is bounded exactly for varrho = 1/(gamma - 1)") {
  const double g = 1.5;
  for (double varrho : {0.0, 1.0, 2.0, 3.0}) {
    const auto rho = build_density_profile(ProfileKind::power, varrho, 1, g, 256);
    const auto s = entropy_profile(rho, pressure_profile(rho, 1.0), 1.0, 0.0, g);
    CHECK_MESSAGE(s.bounded == (varrho == 2.0), "varrho = " << varrho);
  }
  const auto rho = build_density_profile(ProfileKind::entropy_bounded, 0, 1, g, 256);
  CHECK(entropy_profile(rho, pressure_profile(rho, 1.0), 1.0, 0.0, g).bounded);
}

TEST_CASE("profile CSV has a header and one row per node") {
  const auto rho = build_density_profile(ProfileKind::power, 1, 1, 1.5, 8);
  const auto p = pressure_profile(rho, 1.0);
  std::ostringstream out;
  write_profile_csv(out, rho, p, entropy_profile(rho, p, 1, 0, 1.5));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,rho_bar,p_bar,s");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 9);
}
