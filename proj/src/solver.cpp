#include "vacuumflow/solver.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "vacuumflow/diagnostics.h"
#include "vacuumflow/numerics.h"

namespace vacuumflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> nodes(int N) {
  std::vector<double> x(N + 1);
  for (int i = 0; i <= N; ++i) x[i] = static_cast<double>(i) / N;
  x[N] = 1.0;
  return x;
}

bool all_finite(const std::vector<double>& f) {
  return std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); });
}

void require_nondegenerate(const Geometry& g, double eps_det, double tau) {
  if (!(g.min_jacobian >= eps_det))
    throw DegenerateError(fmt::format("Lagrangian map degenerate at tau = {:.6g} (min Jacobian {:.6g} < {:.6g})",
                                      tau, g.min_jacobian, eps_det));
}

// Differential operator of the momentum equation in cell-integrated flux form,
// one coefficient per edge: c (w_{k+1} - w_k) is the viscous flux.
std::vector<double> edge_coefficients(const std::vector<double>& J1, double alpha, double mu) {
  const int N = static_cast<int>(J1.size()) - 1;
  const double h = 1.0 / N;
  std::vector<double> c(N);
  const double pre = 4.0 / 3.0 * mu * alpha * alpha * alpha;
  for (int k = 0; k < N; ++k) {
    const double R0 = k * h * J1[k], R1 = (k + 1) * h * J1[k + 1];
    const double Rm = 0.5 * (R0 + R1);
    c[k] = pre * Rm * Rm * Rm * (Rm / (R1 - R0));
  }
  return c;
}

}  // namespace

std::vector<double> x_derivative(const std::vector<double>& f) {
  const int N = static_cast<int>(f.size()) - 1;
  if (N < 2) throw std::invalid_argument("x_derivative: need at least 3 nodes");
  const double h = 1.0 / N;
  std::vector<double> g(N + 1), out(N + 1);
  for (int i = 0; i <= N; ++i) g[i] = (i == N ? 1.0 : i * h) * f[i];
  out[0] = g[1] / h - f[0];
  for (int i = 1; i < N; ++i) out[i] = (g[i + 1] - g[i - 1]) / (2 * h) - f[i];
  out[N] = (3 * g[N] - 4 * g[N - 1] + g[N - 2]) / (2 * h) - f[N];
  return out;
}

Geometry geometry(const std::vector<double>& eta) {
  const int N = static_cast<int>(eta.size()) - 1;
  const double h = 1.0 / N;
  Geometry g;
  g.J1.resize(N + 1);
  g.J2.resize(N + 1);
  g.J.resize(N + 1);
  g.x_eta_x = x_derivative(eta);
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= N; ++i) {
    g.J1[i] = 1.0 + eta[i];
    g.J2[i] = g.J1[i] + g.x_eta_x[i];
    g.J[i] = g.J1[i] * g.J1[i] * g.J2[i];
    m = std::min({m, g.J1[i], g.J2[i]});
  }
  for (int k = 0; k < N; ++k) {
    const double Rx = ((k + 1) * h * g.J1[k + 1] - k * h * g.J1[k]) / h;
    m = std::min(m, Rx);
  }
  g.min_jacobian = m;
  return g;
}

BField compute_B(const PerturbationState& state, double eps_det) {
  const int N = state.cells();
  const double h = 1.0 / N;
  const Geometry g = geometry(state.eta);
  require_nondegenerate(g, eps_det, state.tau);
  BField b;
  b.midpoint.resize(N);
  b.nodal.assign(N + 1, 0.0);
  for (int k = 0; k < N; ++k) {
    const double R0 = k * h * g.J1[k], R1 = (k + 1) * h * g.J1[k + 1];
    const double dw = state.v[k + 1] / g.J1[k + 1] - state.v[k] / g.J1[k];
    b.midpoint[k] = 0.5 * (R0 + R1) * dw / (R1 - R0);
  }
  for (int i = 1; i < N; ++i) b.nodal[i] = 0.5 * (b.midpoint[i - 1] + b.midpoint[i]);
  return b;
}

Model::Model(const SolverConfig& config, const DensityProfile& profile, const PressureProfile& pressure)
    : config_(config), profile_(profile), pressure_(pressure) {
  if (profile_.cells() != config_.N || pressure_.p_bar.size() != profile_.grid.size())
    throw std::invalid_argument(fmt::format("grid mismatch: config N = {}, profile has {} cells", config_.N,
                                            profile_.cells()));
  if (config_.N < 32) throw std::invalid_argument("N must be at least 32");
  if (!(config_.mu > 0)) throw std::invalid_argument("mu must be positive");
  if (!(config_.dtau > 0)) throw std::invalid_argument("dtau must be positive");
  if (!(config_.tau_end > 0)) throw std::invalid_argument("tau_end must be positive");
  if (pressure_.delta != config_.delta) throw std::invalid_argument("pressure profile delta differs from config");

  alpha_ = integrate_alpha_tau(config_.delta, config_.gamma, config_.alpha0, config_.alpha1,
                               config_.tau_end + 4 * config_.dtau, config_.alpha_tol);

  const int N = config_.N;
  const double h = spacing();
  cell_moment_.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double a = std::max(0.0, (i - 0.5) * h), b = std::min(1.0, (i + 0.5) * h);
    cell_moment_[i] = profile_.moment4(a, b);
  }
}

double Model::stability_bound(const PerturbationState& state) const {
  const double vmax = sup_norm(state.v);
  const double transport = vmax > 0 ? spacing() / vmax : std::numeric_limits<double>::infinity();
  const double forcing = std::pow(state.alpha, 3 * config_.gamma - 4) / (config_.delta + 1);
  const double damping =
      state.alpha_tau > 0 ? state.alpha / state.alpha_tau : std::numeric_limits<double>::infinity();
  return config_.c_cfl * std::min({transport, forcing, damping});
}

std::vector<double> Model::entropy_source(const PerturbationState& state) const {
  const Geometry g = geometry(state.eta);
  const BField b = compute_B(state, config_.eps_det);
  const double gam = config_.gamma;
  const double pre = 4.0 / 3.0 * config_.mu * (gam - 1) * std::pow(state.alpha, 3 * gam - 1);
  std::vector<double> s(b.nodal.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = pre * std::pow(g.J[i], gam) * b.nodal[i] * b.nodal[i];
  return s;
}

std::vector<double> Model::zeta_tau(const PerturbationState& state) const {
  const Geometry g = geometry(state.eta);
  const auto xvx = x_derivative(state.v);
  const auto src = entropy_source(state);
  const double gam = config_.gamma;
  std::vector<double> out(g.J.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double J_tau = 2 * g.J1[i] * g.J2[i] * state.v[i] + g.J1[i] * g.J1[i] * (state.v[i] + xvx[i]);
    out[i] = src[i] - pressure_.p_bar[i] * gam * std::pow(g.J[i], gam - 1) * J_tau;
  }
  return out;
}

std::vector<double> viscous_operator(const PerturbationState& state, const std::vector<double>& v,
                                     const Model& model) {
  const Geometry g = geometry(state.eta);
  const auto c = edge_coefficients(g.J1, state.alpha, model.config().mu);
  const int N = state.cells();
  std::vector<double> out(N + 1, 0.0);
  for (int k = 0; k < N; ++k) {
    const double flux = c[k] * (v[k + 1] / g.J1[k + 1] - v[k] / g.J1[k]);
    out[k] += flux;
    out[k + 1] -= flux;
  }
  return out;
}

PerturbationState step(const PerturbationState& state, double dtau, const Model& model) {
  const SolverConfig& cfg = model.config();
  const int N = state.cells();
  const double gam = cfg.gamma;
  const auto& mu4 = model.cell_moment();
  const auto& p_bar = model.pressure().p_bar;

  const Geometry g = geometry(state.eta);
  require_nondegenerate(g, cfg.eps_det, state.tau);

  PerturbationState next;
  next.tau = state.tau + dtau;
  const AlphaSample a1 = model.alpha().at(next.tau);
  next.alpha = a1.alpha;
  next.alpha_tau = a1.alpha_prime;
  const double alpha = a1.alpha, alpha_tau = a1.alpha_prime;
  const double body = std::pow(alpha, 4 - 3 * gam);

  std::vector<double> Q(N + 1);
  for (int i = 0; i <= N; ++i) Q[i] = state.zeta[i] / std::pow(g.J[i], gam);

  std::vector<double> mass(N + 1), rhs(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double R = (i == N ? 1.0 : static_cast<double>(i) / N) * g.J1[i];
    const double W = R * R * R;
    double P = 0;
    if (i > 0 && i < N) P = 0.5 * W * (Q[i + 1] - Q[i - 1]);
    if (i == N) P = 0.5 * W * (Q[N] - Q[N - 1]);
    const double A = mu4[i] * g.J1[i];
    mass[i] = A * alpha * g.J1[i] / dtau;
    rhs[i] = A * (alpha / dtau - alpha_tau) * state.v[i] +
             body * (cfg.delta * mu4[i] * state.eta[i] * g.J1[i] * g.J1[i] - P);
  }
  const auto c = edge_coefficients(g.J1, alpha, cfg.mu);
  const auto w = solve_mass_laplacian(mass, c, rhs);

  next.v.resize(N + 1);
  next.eta.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    next.v[i] = g.J1[i] * w[i];
    next.eta[i] = state.eta[i] + dtau * next.v[i];
  }
  if (!all_finite(next.v) || !all_finite(next.eta))
    throw NonFiniteError(fmt::format("non-finite velocity at tau = {:.6g}", next.tau));

  const Geometry g1 = geometry(next.eta);
  require_nondegenerate(g1, cfg.eps_det, next.tau);

  next.zeta = state.zeta;  // entropy_source only reads eta, v and alpha
  const auto s0 = model.entropy_source(state);
  const auto s1 = model.entropy_source(next);
  for (int i = 0; i <= N; ++i) {
    const double work = p_bar[i] * (std::pow(g1.J[i], gam) - std::pow(g.J[i], gam));
    next.zeta[i] = state.zeta[i] - work + 0.5 * dtau * (s0[i] + s1[i]);
  }
  if (!all_finite(next.zeta)) throw NonFiniteError(fmt::format("non-finite zeta at tau = {:.6g}", next.tau));

  next.eta_tt.resize(N + 1);
  for (int i = 0; i <= N; ++i) next.eta_tt[i] = (next.v[i] - state.v[i]) / dtau;
  next.has_acceleration = true;
  return next;
}

Initialization initialize_run(const Model& model) {
  const SolverConfig& cfg = model.config();
  const int N = cfg.N;
  const double gam = cfg.gamma;
  const auto x = nodes(N);
  const auto& rho = model.profile().rho_bar;
  const auto& p_bar = model.pressure().p_bar;

  if (cfg.shape < 2) throw std::invalid_argument("shape must be at least 2");
  const double s = cfg.shape;
  const double xetax_peak = s * std::pow(s / (s + 1), s);
  const double bound = std::max({std::abs(cfg.a_eta), std::abs(cfg.a_eta) * xetax_peak, std::abs(cfg.a_eta1),
                                 std::abs(cfg.a_eta1) * xetax_peak, std::abs(cfg.a_q)});
  if (!(bound < cfg.omega))
    throw std::invalid_argument(fmt::format("initial amplitudes violate the omega bound ({:.6g} >= {:.6g})", bound,
                                            cfg.omega));

  InitialData d;
  d.eta0.resize(N + 1);
  d.eta1.resize(N + 1);
  d.q0.resize(N + 1);
  std::vector<double> xeta0x(N + 1), xeta1x(N + 1), J2a(N + 1), Qx(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double xs = std::pow(x[i], s);
    const double shape_val = xs * ((s + 1) - s * x[i]);
    const double shape_xdx = s * (s + 1) * xs * (1 - x[i]);
    d.eta0[i] = cfg.a_eta * shape_val;
    d.eta1[i] = cfg.a_eta1 * shape_val;
    xeta0x[i] = cfg.a_eta * shape_xdx;
    xeta1x[i] = cfg.a_eta1 * shape_xdx;
    d.q0[i] = cfg.a_q * (1 - x[i] * x[i]);
    J2a[i] = 1 + d.eta0[i] + xeta0x[i];
    Qx[i] = -cfg.delta * x[i] * rho[i] * d.q0[i] - 2 * cfg.a_q * x[i] * p_bar[i];
  }

  const Geometry g = geometry(d.eta0);
  require_nondegenerate(g, cfg.eps_det, 0.0);
  d.zeta0.resize(N + 1);
  for (int i = 0; i <= N; ++i) d.zeta0[i] = p_bar[i] * d.q0[i] * std::pow(g.J[i], gam);

  const double a0 = cfg.alpha0, a1 = cfg.alpha1;
  d.zeta1.resize(N + 1);
  std::vector<double> V(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double J1 = 1 + d.eta0[i], J2 = J2a[i];
    const double stretch = d.eta1[i] + xeta1x[i];
    const double B = stretch / J2 - d.eta1[i] / J1;
    const double J = J1 * J1 * J2;
    d.zeta1[i] = -gam * p_bar[i] * std::pow(J2, gam - 1) * std::pow(J1, 2 * gam) * stretch -
                 2 * gam * p_bar[i] * std::pow(J2, gam) * std::pow(J1, 2 * gam - 1) * d.eta1[i] +
                 4.0 / 3.0 * cfg.mu * (gam - 1) * std::pow(a0, 3 * gam - 1) * std::pow(J, gam) * B * B;
    V[i] = stretch / J2 + 2 * d.eta1[i] / J1;
  }

  PerturbationState st;
  st.tau = 0;
  st.alpha = a0;
  st.alpha_tau = a0 * a1;
  st.eta = d.eta0;
  st.v = d.eta1;
  st.zeta = d.zeta0;

  const PerturbationState micro = step(st, cfg.dtau / 100, model);
  d.eta2 = micro.eta_tt;

  const auto Vx = nodal_derivative(V, 1.0 / N);
  const double body0 = std::pow(a0, 4 - 3 * gam);
  d.eta2_direct.assign(N + 1, 0.0);
  d.eta2_direct_valid.assign(N + 1, false);
  for (int i = 0; i <= N; ++i) {
    const double weight = x[i] * rho[i];
    if (weight <= 1e-6) continue;
    const double J1 = 1 + d.eta0[i];
    const double force = body0 * cfg.delta * weight * d.eta0[i] / J1 - body0 * Qx[i] +
                         4.0 / 3.0 * cfg.mu * a0 * a0 * a0 * Vx[i];
    d.eta2_direct[i] = (force * J1 * J1 / weight - a0 * a1 * d.eta1[i]) / a0;
    d.eta2_direct_valid[i] = true;
  }

  const double h = 1.0 / N;
  std::vector<double> f(N + 1);
  auto integral = [&](auto term) {
    for (int i = 0; i <= N; ++i) f[i] = term(i);
    return trapezoid(f, h);
  };
  auto x4r = [&](int i) { return x[i] * x[i] * x[i] * x[i] * rho[i]; };
  d.E_in = integral([&](int i) { return x4r(i) * d.eta1[i] * d.eta1[i]; }) +
           integral([&](int i) { return x[i] * x[i] * d.zeta0[i] * d.zeta0[i]; }) +
           integral([&](int i) { return x4r(i) * d.eta2[i] * d.eta2[i]; }) +
           integral([&](int i) { return x[i] * x[i] * d.zeta1[i] * d.zeta1[i]; }) +
           integral([&](int i) { return x4r(i) * d.eta0[i] * d.eta0[i]; }) +
           integral([&](int i) { return chi_cutoff(x[i]) * d.zeta0[i] * d.zeta0[i]; }) +
           integral([&](int i) { return chi_cutoff(x[i]) * x[i] * x[i] * rho[i] * d.eta2[i] * d.eta2[i]; }) +
           integral([&](int i) { return chi_cutoff(x[i]) * d.zeta1[i] * d.zeta1[i]; });

  st.eta_tt = d.eta2;
  st.has_acceleration = true;
  return {std::move(st), std::move(d)};
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::aborted_degenerate: return "aborted_degenerate";
    case RunStatus::aborted_nan: return "aborted_nan";
  }
  return "completed";
}

RunStatus parse_run_status(std::string_view name) {
  if (name == "completed") return RunStatus::completed;
  if (name == "aborted_degenerate") return RunStatus::aborted_degenerate;
  if (name == "aborted_nan") return RunStatus::aborted_nan;
  throw std::invalid_argument(fmt::format("unknown run status '{}'", name));
}

namespace {

// Z = zeta / p_bar + J^gamma on nodes where p_bar > 0.
std::vector<double> entropy_quantity(const PerturbationState& s, const Model& model) {
  const Geometry g = geometry(s.eta);
  const auto& p_bar = model.pressure().p_bar;
  std::vector<double> Z(p_bar.size(), kNaN);
  for (std::size_t i = 0; i < Z.size(); ++i)
    if (p_bar[i] > 0) Z[i] = s.zeta[i] / p_bar[i] + std::pow(g.J[i], model.config().gamma);
  return Z;
}

double min_increment(const std::vector<double>& before, const std::vector<double>& after) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < before.size(); ++i)
    if (std::isfinite(before[i]) && std::isfinite(after[i])) m = std::min(m, after[i] - before[i]);
  return m;
}

SeriesRow series_row(const PerturbationState& s, const Model& model) {
  SeriesRow r;
  r.tau = s.tau;
  r.alpha = s.alpha;
  r.alpha_tau = s.alpha_tau;
  const Geometry g = geometry(s.eta);
  r.sup_eta = sup_norm(s.eta);
  r.sup_xetax = sup_norm(g.x_eta_x);
  r.sup_etatau = sup_norm(s.v);
  r.sup_xetaxtau = sup_norm(x_derivative(s.v));
  r.sup_B = sup_norm(compute_B(s, model.config().eps_det).nodal);
  r.sup_q = q_field(s, model.pressure(), model.config().gamma).sup_global;
  return r;
}

}  // namespace

RunRecord run(const SolverConfig& config, const DensityProfile& profile, const PressureProfile& pressure,
              const std::optional<IndexSet>& index_set) {
  return run(Model(config, profile, pressure), index_set);
}

RunRecord run(const Model& model, const std::optional<IndexSet>& index_set) {
  const SolverConfig& cfg = model.config();
  RunRecord rec;
  rec.config = cfg;

  Initialization init = initialize_run(model);
  rec.E_in = init.data.E_in;
  PerturbationState state = std::move(init.state);

  const bool weighted = index_set && index_set->case1;
  EnergyTerms terms;
  double E0 = kNaN, E1 = kNaN, D0 = kNaN, D1 = kNaN;
  if (weighted) {
    terms = energy_terms(state, model, *index_set);
    E0 = terms.e0_sum();
    E1 = terms.e1_sum();
    D0 = 0;
    D1 = 0;
  }

  SeriesRow row = series_row(state, model);
  row.Z_min_increment = kNaN;
  row.E0 = E0;
  row.E1 = E1;
  row.D0 = D0;
  row.D1 = D1;
  rec.series.push_back(row);
  rec.snapshots.push_back(state);

  long steps = 0;
  bool snapshot_current = true;
  try {
    // Step targets are n * dtau so that rounding in tau does not accumulate
    // into a sliver step at the end.
    const long total = static_cast<long>(std::ceil(cfg.tau_end / cfg.dtau * (1 - 1e-12)));
    while (steps < total) {
      const double target = steps + 1 == total ? cfg.tau_end : (steps + 1) * cfg.dtau;
      const double dt = target - state.tau;
      const double bound = model.stability_bound(state);
      const int sub = std::max(1, static_cast<int>(std::ceil(dt / bound)));
      double z_inc = std::numeric_limits<double>::infinity();
      for (int k = 0; k < sub; ++k) {
        const auto Z0 = entropy_quantity(state, model);
        PerturbationState next = step(state, k + 1 == sub ? target - state.tau : dt / sub, model);
        z_inc = std::min(z_inc, min_increment(Z0, entropy_quantity(next, model)));
        state = std::move(next);
      }
      state.tau = target;
      ++steps;

      row = series_row(state, model);
      row.Z_min_increment = z_inc;
      if (weighted) {
        const EnergyTerms next_terms = energy_terms(state, model, *index_set);
        E0 = std::max(E0, next_terms.e0_sum());
        E1 = std::max(E1, next_terms.e1_sum());
        D0 += 0.5 * dt * (terms.d0_sum() + next_terms.d0_sum());
        D1 += 0.5 * dt * (terms.d1_sum() + next_terms.d1_sum());
        terms = next_terms;
      }
      row.E0 = E0;
      row.E1 = E1;
      row.D0 = D0;
      row.D1 = D1;
      rec.series.push_back(row);

      snapshot_current = false;
      if (steps % cfg.snapshot_every == 0) {
        rec.snapshots.push_back(state);
        snapshot_current = true;
      }
    }
  } catch (const DegenerateError& e) {
    rec.status = RunStatus::aborted_degenerate;
    rec.message = e.what();
  } catch (const NonFiniteError& e) {
    rec.status = RunStatus::aborted_nan;
    rec.message = e.what();
  } catch (const std::runtime_error& e) {
    rec.status = RunStatus::aborted_nan;
    rec.message = e.what();
  }
  if (!snapshot_current) rec.snapshots.push_back(state);
  return rec;
}

IdentityResiduals identity_residuals(const PerturbationState& state, const Model& model) {
  if (!state.has_acceleration) throw std::invalid_argument("identity_residuals: missing acceleration history");
  const SolverConfig& cfg = model.config();
  const int N = state.cells();
  if (N % 4 != 0) throw std::invalid_argument("identity_residuals: N must be divisible by 4");
  const double h = 1.0 / N, gam = cfg.gamma, mu = cfg.mu, delta = cfg.delta;
  const auto x = nodes(N);
  const auto& rho = model.profile().rho_bar;
  const Geometry g = geometry(state.eta);
  require_nondegenerate(g, cfg.eps_det, state.tau);
  const BField B = compute_B(state, cfg.eps_det);
  const auto xvx = x_derivative(state.v);
  const double a = state.alpha, at = state.alpha_tau;
  const double a3 = a * a * a, body = std::pow(a, 4 - 3 * gam);

  std::vector<double> Q(N + 1);
  for (int i = 0; i <= N; ++i) Q[i] = state.zeta[i] / std::pow(g.J[i], gam);

  std::vector<double> f_grav(N + 1), f_acc(N + 1), f_vel(N + 1);
  std::vector<double> c_press(N + 1), c_acc(N + 1), c_vel(N + 1), c_grav(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double J1 = g.J1[i], M = x[i] * rho[i] / (J1 * J1);
    f_grav[i] = x[i] * rho[i] * state.eta[i] / J1;
    f_acc[i] = M * state.eta_tt[i];
    f_vel[i] = M * state.v[i];
    const double x4r = x[i] * x[i] * x[i] * x[i] * rho[i];
    c_press[i] = 3 * x[i] * x[i] * J1 * J1 * g.J2[i] * Q[i];
    c_acc[i] = x4r * J1 * state.eta_tt[i];
    c_vel[i] = x4r * J1 * state.v[i];
    c_grav[i] = x4r * state.eta[i] * J1 * J1;
  }

  IdentityResiduals out;
  const double w_boundary = state.v[N] / g.J1[N];
  for (int j = 1; j <= 3; ++j) {
    const std::size_t i = static_cast<std::size_t>(j * N / 4);
    out.probes.push_back(x[i]);

    const double lhs_boundary =
        4.0 / 3.0 * mu * a3 * ((state.v[i] + xvx[i]) / g.J2[i] + 2 * state.v[i] / g.J1[i]);
    const double rhs_boundary = 4 * mu * a3 * w_boundary + body * Q[i] + body * delta * trapezoid(f_grav, h, i, N) -
                          a * trapezoid(f_acc, h, i, N) - at * trapezoid(f_vel, h, i, N);
    out.signed_boundary.push_back(lhs_boundary - rhs_boundary);

    const double R = x[i] * g.J1[i], W = R * R * R;
    const double lhs_center = 4.0 / 3.0 * mu * a3 * W * B.nodal[i];
    const double rhs_center = body * (W * Q[i] - trapezoid(c_press, h, 0, i)) + a * trapezoid(c_acc, h, 0, i) +
                          at * trapezoid(c_vel, h, 0, i) - body * delta * trapezoid(c_grav, h, 0, i);
    out.signed_center.push_back(lhs_center - rhs_center);
  }
  for (double r : out.signed_center) out.res_center = std::max(out.res_center, std::abs(r));
  for (double r : out.signed_boundary) out.res_boundary = std::max(out.res_boundary, std::abs(r));
  return out;
}

EulerianFields reconstruct_eulerian(const PerturbationState& state, const Model& model) {
  const int N = state.cells();
  const double gam = model.config().gamma;
  const auto x = nodes(N);
  const auto& rho_bar = model.profile().rho_bar;
  const auto& p_bar = model.pressure().p_bar;
  const Geometry g = geometry(state.eta);
  const double a = state.alpha;
  EulerianFields e;
  e.r.resize(N + 1);
  e.u.resize(N + 1);
  e.rho.resize(N + 1);
  e.p.resize(N + 1);
  std::vector<double> dm(N + 1), ref(N + 1);
  for (int i = 0; i <= N; ++i) {
    if (!(g.J2[i] > 0) || !(g.J1[i] > 0))
      throw DegenerateError(fmt::format("reconstruct_eulerian: r_x <= 0 at node {}", i));
    const double r_x = a * g.J2[i];
    e.r[i] = g.J1[i] * a * x[i];
    e.u[i] = x[i] * (state.v[i] + g.J1[i] * state.alpha_tau / a);
    e.rho[i] = rho_bar[i] / (a * a * a * g.J1[i] * g.J1[i] * g.J2[i]);
    e.p[i] = std::pow(a, -3 * gam) * (p_bar[i] + state.zeta[i] / std::pow(g.J[i], gam));
    dm[i] = e.r[i] * e.r[i] * e.rho[i] * r_x;
    ref[i] = x[i] * x[i] * rho_bar[i];
  }
  e.mass = trapezoid(dm, 1.0 / N);
  e.reference_mass = trapezoid(ref, 1.0 / N);
  return e;
}

}  // namespace vacuumflow
