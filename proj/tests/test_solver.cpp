#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.h"
#include "vacuumflow/cli.h"
#include "vacuumflow/numerics.h"

using namespace vacuumflow;
using namespace vacuumflow::testing;

TEST_CASE("x_derivative of a linear function") {
  const int N = 16;
  std::vector<double> f(N + 1);
  for (int i = 0; i <= N; ++i) f[i] = 1 + double(i) / N;
  const auto d = x_derivative(f);
  for (int i = 1; i <= N; ++i) CHECK(d[i] == doctest::Approx(double(i) / N).epsilon(1e-12));
}

TEST_CASE("B of a pure dilation vanishes and of v = c x equals c x") {
  const auto m = make_model(small_config());
  auto s = zero_state(m);
  const int N = s.cells();
  for (int i = 0; i <= N; ++i) s.v[i] = 0.3;
  auto B = compute_B(s);
  for (double b : B.midpoint) CHECK(b == doctest::Approx(0.0).scale(1e-14));
  for (int i = 0; i <= N; ++i) s.v[i] = 0.3 * i / N;
  B = compute_B(s);
  for (int i = 0; i < N; ++i) CHECK(B.midpoint[i] == doctest::Approx(0.3 * (i + 0.5) / N).epsilon(1e-12));
  for (int i = 1; i < N; ++i) CHECK(B.nodal[i] == doctest::Approx(0.3 * i / N).epsilon(1e-12));
  CHECK(B.nodal[0] == 0.0);
  CHECK(B.nodal[N] == 0.0);
}

TEST_CASE("degenerate maps are reported") {
  const auto m = make_model(small_config());
  auto s = zero_state(m);
  s.eta[10] = -0.9995;
  CHECK_THROWS_AS(compute_B(s), DegenerateError);
  CHECK(geometry(s.eta).min_jacobian < 1e-3);
}

TEST_CASE("zero perturbation is a fixed point of step") {
  const auto m = make_model(small_config());
  auto s = zero_state(m);
  for (int k = 0; k < 200; ++k) s = step(s, 1e-3, m);
  for (int i = 0; i <= s.cells(); ++i) {
    CHECK(s.eta[i] == 0.0);
    CHECK(s.v[i] == 0.0);
    CHECK(s.zeta[i] == 0.0);
  }
  CHECK(s.tau == doctest::Approx(0.2));
  CHECK(s.alpha == doctest::Approx(m.alpha().at(0.2).alpha));
}

TEST_CASE("pressure gradient pushes the velocity outward") {
  auto c = small_config();
  const auto m = make_model(c);
  auto s = zero_state(m);
  const int N = s.cells();
  // zeta = p_bar q0 with q0 = 0.01 (1 - x^2): pressure excess decreasing outward
  for (int i = 0; i <= N; ++i) {
    const double x = double(i) / N;
    s.zeta[i] = m.pressure().p_bar[i] * 0.01 * (1 - x * x);
  }
  const auto next = step(s, 1e-3, m);
  for (int i = 1; i <= N; ++i) CHECK(next.v[i] > 0);
  CHECK(next.zeta[N] == 0.0);
}

TEST_CASE("viscous operator is linear in v") {
  const auto m = make_model(small_config());
  auto s = zero_state(m);
  const int N = s.cells();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i <= N; ++i) s.eta[i] = 0.01 * std::sin(3.0 * i / N);
  std::vector<double> v1(N + 1), v2(N + 1), mix(N + 1);
  for (int i = 0; i <= N; ++i) {
    v1[i] = u(rng);
    v2[i] = u(rng);
    mix[i] = 2.5 * v1[i] - 0.75 * v2[i];
  }
  const auto L1 = viscous_operator(s, v1, m), L2 = viscous_operator(s, v2, m), Lm = viscous_operator(s, mix, m);
  const double scale = sup_norm(L1) + sup_norm(L2);
  for (int i = 0; i <= N; ++i) CHECK(std::abs(Lm[i] - (2.5 * L1[i] - 0.75 * L2[i])) <= 1e-13 * scale);
}

TEST_CASE("initial data with pure pressure perturbation on constant density") {
  auto c = small_config();
  c.profile = ProfileKind::constant;
  c.a_eta = 0;
  c.a_eta1 = 0;
  c.a_q = 0.01;
  const auto m = make_model(c);
  const auto init = initialize_run(m);
  const int N = c.N;
  for (int i = 0; i <= N; ++i) {
    const double x = double(i) / N;
    CHECK(init.data.zeta0[i] == doctest::Approx(0.01 * (1 - x * x) * (1 - x * x) / 2).epsilon(1e-12));
    CHECK(init.data.zeta1[i] == 0.0);
  }
  CHECK(init.data.zeta0[N] == 0.0);
  CHECK(init.data.zeta0[0] == doctest::Approx(0.005));
}

TEST_CASE("zero amplitudes give zero initial energy") {
  auto c = small_config();
  c.a_eta = c.a_eta1 = c.a_q = 0;
  const auto init = initialize_run(make_model(c));
  CHECK(init.data.E_in == 0.0);
  for (double z : init.data.zeta0) CHECK(z == 0.0);
}

TEST_CASE("initial data respect the omega bound") {
  auto c = small_config();
  c.a_eta = 0.6;
  CHECK_THROWS_AS(initialize_run(make_model(c)), std::invalid_argument);
  c.a_eta = 0.2;
  const auto init = initialize_run(make_model(c));
  // eta0 = a x^2 (3 - 2x) has eta0_x(0) = 0 and eta0(1) = a
  CHECK(init.data.eta0[c.N] == doctest::Approx(0.2));
  CHECK(init.data.E_in > 0);
}

TEST_CASE("micro-step and direct eta2 agree in the interior") {
  auto c = small_config(128);
  c.a_eta = c.a_eta1 = c.a_q = 1e-3;
  const auto init = initialize_run(make_model(c));
  double num = 0, den = 0;
  for (int i = 1; i <= c.N / 2; ++i) {
    if (!init.data.eta2_direct_valid[i]) continue;
    num = std::max(num, std::abs(init.data.eta2[i] - init.data.eta2_direct[i]));
    den = std::max(den, std::abs(init.data.eta2_direct[i]));
  }
  REQUIRE(den > 0);
  CHECK(num / den < 0.05);
}

TEST_CASE("model rejects bad configuration") {
  auto c = small_config();
  c.N = 16;
  CHECK_THROWS(make_model(c));
  c = small_config();
  c.mu = 0;
  CHECK_THROWS(make_model(c));
  c = small_config();
  const auto prof = build_density_profile(c.profile, c.varrho, c.scale, c.gamma, 128);
  CHECK_THROWS(Model(c, prof, pressure_profile(prof, c.delta)));
}

TEST_CASE("zero perturbation run") {
  auto c = small_config();
  c.a_eta = c.a_eta1 = c.a_q = 0;
  c.tau_end = 1.0;
  const auto rec = run(make_model(c), std::nullopt);
  CHECK(rec.status == RunStatus::completed);
  CHECK(rec.series.size() == 1001);
  for (const auto& r : rec.series) {
    CHECK(r.sup_eta == 0.0);
    CHECK(r.sup_B == 0.0);
  }
  for (const auto& s : rec.snapshots) CHECK(sup_norm(s.zeta) == 0.0);
  CHECK(rec.snapshots.back().tau == 1.0);
}

TEST_CASE("small-data run keeps the entropy law and the boundary value") {
  auto c = small_config();
  c.a_eta = c.a_eta1 = c.a_q = 1e-2;
  c.snapshot_every = 10;
  const auto m = make_model(c);
  const auto rec = run(m, std::nullopt);
  REQUIRE(rec.status == RunStatus::completed);
  CHECK(std::isnan(rec.series.front().Z_min_increment));
  for (std::size_t k = 1; k < rec.series.size(); ++k) CHECK(rec.series[k].Z_min_increment >= -1e-10);
  for (const auto& s : rec.snapshots) CHECK(s.zeta.back() == 0.0);
  for (std::size_t k = 1; k < rec.snapshots.size(); ++k) CHECK(rec.snapshots[k].tau > rec.snapshots[k - 1].tau);
  CHECK(std::isnan(rec.series.back().E0));
}

TEST_CASE("entropy source is linear in the viscosity") {
  auto c = small_config();
  c.a_eta = c.a_eta1 = c.a_q = 1e-2;
  const auto m1 = make_model(c);
  c.mu = 2;
  const auto m2 = make_model(c);
  const auto s = initialize_run(m1).state;
  const auto S1 = m1.entropy_source(s), S2 = m2.entropy_source(s);
  double largest = 0;
  for (std::size_t i = 0; i < S1.size(); ++i) {
    CHECK(S1[i] >= 0);
    CHECK(S2[i] == doctest::Approx(2 * S1[i]).epsilon(1e-12));
    largest = std::max(largest, S1[i]);
  }
  CHECK(largest > 0);
}

TEST_CASE("identity residuals vanish for the zero state") {
  const auto m = make_model(small_config());
  const auto r = identity_residuals(zero_state(m), m);
  CHECK(r.res_center == 0.0);
  CHECK(r.res_boundary == 0.0);
  REQUIRE(r.probes.size() == 3);
  CHECK(r.probes[1] == 0.5);
  auto s = zero_state(m);
  s.has_acceleration = false;
  CHECK_THROWS(identity_residuals(s, m));
}

TEST_CASE("identity residuals are first order in dtau") {
  auto c = small_config(64);
  c.a_eta = c.a_eta1 = c.a_q = 1e-2;
  c.tau_end = 0.1;
  auto res = [&](double dt) {
    c.dtau = dt;
    const auto m = make_model(c);
    return identity_residuals(run(m, std::nullopt).snapshots.back(), m).res_center;
  };
  const double r1 = res(2e-3), r2 = res(1e-3);
  CHECK(r1 / r2 == doctest::Approx(2).epsilon(0.1));
}

TEST_CASE("Eulerian reconstruction of the unperturbed state") {
  auto c = small_config();
  const auto m = make_model(c);
  auto s = zero_state(m);
  s = step(s, 0.05, m);
  const auto e = reconstruct_eulerian(s, m);
  const double a = s.alpha;
  CHECK(e.rho[0] == doctest::Approx(m.profile().rho_bar[0] / (a * a * a)).epsilon(1e-12));
  CHECK(e.p.back() == 0.0);
  CHECK(e.r.back() == doctest::Approx(a));
  CHECK(std::abs(e.mass - e.reference_mass) <= 1e-10 * e.reference_mass);
}

TEST_CASE("Eulerian mass identity on a perturbed run") {
  auto c = small_config();
  c.a_eta = c.a_eta1 = c.a_q = 1e-2;
  c.snapshot_every = 20;
  const auto m = make_model(c);
  const auto rec = run(m, std::nullopt);
  for (const auto& s : rec.snapshots) {
    const auto e = reconstruct_eulerian(s, m);
    CHECK(std::abs(e.mass - e.reference_mass) <= 1e-10 * e.reference_mass);
  }
}

TEST_CASE("run status names round-trip") {
  for (auto st : {RunStatus::completed, RunStatus::aborted_degenerate, RunStatus::aborted_nan})
    CHECK(parse_run_status(to_string(st)) == st);
  CHECK_THROWS(parse_run_status("done"));
}
