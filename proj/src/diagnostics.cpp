#include "vacuumflow/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "vacuumflow/numerics.h"

namespace vacuumflow {

double chi_cutoff(double x) {
  if (x <= 0.5) return 1.0;
  if (x >= 0.75) return 0.0;
  const double s = (x - 0.5) / 0.25;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

double chi_cutoff_derivative(double x) {
  if (x <= 0.5 || x >= 0.75) return 0.0;
  const double s = (x - 0.5) / 0.25;
  return -24.0 * s * (1.0 - s);
}

const std::array<std::string_view, 5> EnergyTerms::e0_names = {
    "alpha^r1*norm(x2 rho12 eta_tau)^2",
    "alpha^-l1*norm(x zeta)^2",
    "alpha^r2*norm(x2 rho12 eta_tautau)^2",
    "alpha^-l2*norm(x zeta_tau)^2",
    "norm(x2 rho12 eta)^2",
};
const std::array<std::string_view, 6> EnergyTerms::d0_names = {
    "alpha^(r1-1)*alpha_tau*norm(x2 rho12 eta_tau)^2",
    "alpha^(r1+2)*norm(x((1+eta)x eta_xtau - x eta_x eta_tau))^2",
    "alpha^(r2-1)*alpha_tau*norm(x2 rho12 eta_tautau)^2",
    "alpha^(r2+2)*norm(x((1+eta)x eta_xtautau - x eta_x eta_tautau))^2",
    "alpha^(-l1-1)*alpha_tau*norm(x zeta)^2",
    "alpha^(-l2-1)*alpha_tau*norm(x zeta_tau)^2",
};
const std::array<std::string_view, 3> EnergyTerms::e1_names = {
    "alpha^-l3*norm(chi12 zeta)^2",
    "alpha^-r4*norm(chi12 x rho12 eta_tautau)^2",
    "alpha^-l4*norm(chi12 zeta_tau)^2",
};
const std::array<std::string_view, 5> EnergyTerms::d1_names = {
    "alpha^(-l3-1)*alpha_tau*norm(chi12 zeta)^2",
    "alpha^r3*(norm(chi12 eta_tau)^2+norm(chi12 x eta_xtau)^2)",
    "alpha^(-r4-1)*alpha_tau*norm(chi12 x rho12 eta_tautau)^2",
    "alpha^(2-r4)*(norm(chi12 eta_tautau)^2+norm(chi12 x eta_xtautau)^2)",
    "alpha^(-l4-1)*alpha_tau*norm(chi12 zeta_tau)^2",
};

namespace {
template <std::size_t K>
double sum(const std::array<double, K>& a) {
  double s = 0;
  for (double v : a) s += v;
  return s;
}
}  // namespace

double EnergyTerms::e0_sum() const { return sum(e0); }
double EnergyTerms::d0_sum() const { return sum(d0); }
double EnergyTerms::e1_sum() const { return sum(e1); }
double EnergyTerms::d1_sum() const { return sum(d1); }

EnergyTerms energy_terms(const PerturbationState& state, const Model& model, const IndexSet& idx) {
  if (!idx.case1) throw std::invalid_argument("energy weights need an index set satisfying case 1");
  if (!state.has_acceleration) throw std::invalid_argument("energy terms need the acceleration eta_tautau");
  const int N = state.cells();
  const double h = 1.0 / N;
  const auto& rho = model.profile().rho_bar;
  const Geometry g = geometry(state.eta);
  const auto xvx = x_derivative(state.v);
  const auto xttx = x_derivative(state.eta_tt);
  const auto zt = model.zeta_tau(state);

  std::vector<double> f(N + 1);
  auto integral = [&](auto term) {
    for (int i = 0; i <= N; ++i) {
      const double x = i == N ? 1.0 : i * h;
      f[i] = term(i, x);
    }
    return trapezoid(f, h);
  };
  const auto& eta = state.eta;
  const auto& v = state.v;
  const auto& tt = state.eta_tt;
  const auto& z = state.zeta;
  auto sq = [](double a) { return a * a; };

  const double w_v = integral([&](int i, double x) { return sq(x * x) * rho[i] * sq(v[i]); });
  const double w_z = integral([&](int i, double x) { return sq(x * z[i]); });
  const double w_tt = integral([&](int i, double x) { return sq(x * x) * rho[i] * sq(tt[i]); });
  const double w_zt = integral([&](int i, double x) { return sq(x * zt[i]); });
  const double w_eta = integral([&](int i, double x) { return sq(x * x) * rho[i] * sq(eta[i]); });
  const double w_dv =
      integral([&](int i, double x) { return sq(x * (g.J1[i] * xvx[i] - g.x_eta_x[i] * v[i])); });
  const double w_dtt =
      integral([&](int i, double x) { return sq(x * (g.J1[i] * xttx[i] - g.x_eta_x[i] * tt[i])); });
  const double c_z = integral([&](int i, double x) { return chi_cutoff(x) * sq(z[i]); });
  const double c_tt = integral([&](int i, double x) { return chi_cutoff(x) * sq(x) * rho[i] * sq(tt[i]); });
  const double c_zt = integral([&](int i, double x) { return chi_cutoff(x) * sq(zt[i]); });
  const double c_v = integral([&](int i, double x) { return chi_cutoff(x) * (sq(v[i]) + sq(xvx[i])); });
  const double c_ttd = integral([&](int i, double x) { return chi_cutoff(x) * (sq(tt[i]) + sq(xttx[i])); });

  const double a = state.alpha, at = state.alpha_tau;
  auto P = [a](double p) { return std::pow(a, p); };
  EnergyTerms t;
  t.e0 = {P(idx.r1) * w_v, P(-idx.l1) * w_z, P(idx.r2) * w_tt, P(-idx.l2) * w_zt, w_eta};
  t.d0 = {P(idx.r1 - 1) * at * w_v,   P(idx.r1 + 2) * w_dv,        P(idx.r2 - 1) * at * w_tt,
          P(idx.r2 + 2) * w_dtt,      P(-idx.l1 - 1) * at * w_z,   P(-idx.l2 - 1) * at * w_zt};
  t.e1 = {P(-idx.l3) * c_z, P(-idx.r4) * c_tt, P(-idx.l4) * c_zt};
  t.d1 = {P(-idx.l3 - 1) * at * c_z, P(idx.r3) * c_v, P(-idx.r4 - 1) * at * c_tt, P(2 - idx.r4) * c_ttd,
          P(-idx.l4 - 1) * at * c_zt};
  return t;
}

EnergyReport energy_report(const RunRecord& run, const IndexSet& index_set, const Model& model) {
  EnergyReport rep;
  rep.E_in = run.E_in;
  std::array<double, 5> sup0{};
  std::array<double, 3> sup1{};
  std::array<double, 6> int0{};
  std::array<double, 5> int1{};
  rep.rows.reserve(run.snapshots.size());
  const EnergyRow* prev = nullptr;
  for (const auto& snap : run.snapshots) {
    if (!snap.has_acceleration) continue;
    EnergyRow row;
    row.tau = snap.tau;
    row.terms = energy_terms(snap, model, index_set);
    for (std::size_t k = 0; k < sup0.size(); ++k) sup0[k] = std::max(sup0[k], row.terms.e0[k]);
    for (std::size_t k = 0; k < sup1.size(); ++k) sup1[k] = std::max(sup1[k], row.terms.e1[k]);
    if (prev) {
      const double dt = row.tau - prev->tau;
      for (std::size_t k = 0; k < int0.size(); ++k) int0[k] += 0.5 * dt * (prev->terms.d0[k] + row.terms.d0[k]);
      for (std::size_t k = 0; k < int1.size(); ++k) int1[k] += 0.5 * dt * (prev->terms.d1[k] + row.terms.d1[k]);
    }
    row.E0 = prev ? std::max(prev->E0, row.terms.e0_sum()) : row.terms.e0_sum();
    row.E1 = prev ? std::max(prev->E1, row.terms.e1_sum()) : row.terms.e1_sum();
    row.D0 = sum(int0);
    row.D1 = sum(int1);
    rep.rows.push_back(row);
    prev = &rep.rows.back();
  }
  if (!rep.rows.empty()) {
    rep.E0 = rep.rows.back().E0;
    rep.E1 = rep.rows.back().E1;
    rep.D0 = rep.rows.back().D0;
    rep.D1 = rep.rows.back().D1;
  }
  for (std::size_t k = 0; k < sup0.size(); ++k) rep.breakdown[std::string(EnergyTerms::e0_names[k])] = sup0[k];
  for (std::size_t k = 0; k < int0.size(); ++k) rep.breakdown[std::string(EnergyTerms::d0_names[k])] = int0[k];
  for (std::size_t k = 0; k < sup1.size(); ++k) rep.breakdown[std::string(EnergyTerms::e1_names[k])] = sup1[k];
  for (std::size_t k = 0; k < int1.size(); ++k) rep.breakdown[std::string(EnergyTerms::d1_names[k])] = int1[k];
  return rep;
}

void write_energy_csv(std::ostream& out, const EnergyReport& report) {
  out << "tau";
  for (auto n : EnergyTerms::e0_names) out << ',' << n;
  for (auto n : EnergyTerms::d0_names) out << ',' << n;
  for (auto n : EnergyTerms::e1_names) out << ',' << n;
  for (auto n : EnergyTerms::d1_names) out << ',' << n;
  out << ",E0,E1,D0,D1\n";
  for (const auto& r : report.rows) {
    out << fmt::format("{:.17g}", r.tau);
    for (double v : r.terms.e0) out << fmt::format(",{:.17g}", v);
    for (double v : r.terms.d0) out << fmt::format(",{:.17g}", v);
    for (double v : r.terms.e1) out << fmt::format(",{:.17g}", v);
    for (double v : r.terms.d1) out << fmt::format(",{:.17g}", v);
    out << fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g}\n", r.E0, r.E1, r.D0, r.D1);
  }
}

QField q_field(const PerturbationState& state, const PressureProfile& pressure, double gamma, double eps0) {
  const int N = state.cells();
  const auto& p_bar = pressure.p_bar;
  const Geometry g = geometry(state.eta);
  QField out;
  out.q.assign(N + 1, 0.0);
  out.valid.assign(N + 1, false);
  const double threshold = eps0 * p_bar[0];
  int cut = N + 1;
  for (int i = 0; i <= N; ++i) {
    if (!(p_bar[i] >= threshold) || p_bar[i] <= 0) {
      cut = i;
      break;
    }
  }
  out.x_eps0 = cut <= N ? static_cast<double>(cut) / N : 1.0;
  for (int i = 0; i < cut; ++i) {
    out.q[i] = state.zeta[i] / (p_bar[i] * std::pow(g.J[i], gamma));
    out.valid[i] = true;
    out.sup_global = std::max(out.sup_global, std::abs(out.q[i]));
    if (static_cast<double>(i) / N <= 0.75) out.sup_interior = std::max(out.sup_interior, std::abs(out.q[i]));
  }
  return out;
}

EntropyMonitor entropy_monitor(const RunRecord& run, double tol) {
  EntropyMonitor m;
  bool any = false;
  for (const auto& row : run.series) {
    if (!std::isfinite(row.Z_min_increment)) continue;
    m.min_increment = any ? std::min(m.min_increment, row.Z_min_increment) : row.Z_min_increment;
    any = true;
    if (row.Z_min_increment < -tol) ++m.violation_count;
  }
  return m;
}

std::string_view to_string(DecayQuantity quantity) {
  switch (quantity) {
    case DecayQuantity::eta_tau: return "eta_tau";
    case DecayQuantity::x_eta_x_tau: return "x_eta_x_tau";
    case DecayQuantity::B: return "B";
  }
  return "eta_tau";
}

DecayFit fit_decay(DecayQuantity quantity, const std::vector<double>& tau, const std::vector<double>& alpha,
                   const std::vector<double>& values, double target) {
  const std::size_t n = tau.size();
  if (alpha.size() != n || values.size() != n) throw std::invalid_argument("fit_decay: inconsistent series");
  const std::size_t first = static_cast<std::size_t>(std::floor(0.4 * n));
  if (n - first < 3) throw std::runtime_error("fit_decay: insufficient window");
  std::vector<double> la, lv;
  for (std::size_t k = first; k < n; ++k) {
    if (!(values[k] > 0) || !(alpha[k] > 0))
      throw std::runtime_error(fmt::format("fit_decay: {} is not positive at tau = {:.6g}", to_string(quantity),
                                           tau[k]));
    la.push_back(std::log(alpha[k]));
    lv.push_back(std::log(values[k]));
  }
  if (la.back() - la.front() < 2) throw std::runtime_error("fit_decay: insufficient window (alpha spans < 2 e-folds)");
  const LinearFit fit = fit_line(la, lv);
  DecayFit out;
  out.quantity = quantity;
  out.fitted_exponent = fit.slope;
  out.target = target;
  out.tau_lo = tau[first];
  out.tau_hi = tau.back();
  out.r_squared = fit.r_squared;
  return out;
}

std::vector<DecayFit> decay_fit(const RunRecord& run, const IndexSet& index_set) {
  std::vector<double> tau, alpha, a, b, c;
  for (const auto& r : run.series) {
    tau.push_back(r.tau);
    alpha.push_back(r.alpha);
    a.push_back(r.sup_etatau);
    b.push_back(r.sup_xetaxtau);
    c.push_back(r.sup_B);
  }
  return {fit_decay(DecayQuantity::eta_tau, tau, alpha, a, index_set.sigma1),
          fit_decay(DecayQuantity::x_eta_x_tau, tau, alpha, b, index_set.sigma1),
          fit_decay(DecayQuantity::B, tau, alpha, c, 1.0)};
}

RelativeEntropy relative_entropy(const PerturbationState& state, double eps_det) {
  const int N = state.cells();
  const double h = 1.0 / N;
  const Geometry g = geometry(state.eta);
  if (!(g.min_jacobian >= eps_det)) throw DegenerateError("relative_entropy: degenerate state");
  RelativeEntropy out;
  out.H.resize(N + 1);
  std::vector<double> Ht(N + 1);
  const auto xvx = x_derivative(state.v);
  for (int i = 0; i <= N; ++i) {
    out.H[i] = std::log(g.J[i]);
    Ht[i] = 2 * state.v[i] / g.J1[i] + (state.v[i] + xvx[i]) / g.J2[i];
  }
  const auto Hx = nodal_derivative(out.H, h);
  const auto Htx = nodal_derivative(Ht, h);
  const auto ex = nodal_derivative(state.eta, h);
  const auto exx = nodal_derivative(ex, h);
  std::vector<double> f(N + 1), num(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double x = i == N ? 1.0 : i * h;
    f[i] = Hx[i] * Hx[i];
    num[i] = ex[i] * ex[i] + x * x * exx[i] * exx[i];
  }
  const double den = trapezoid(f, h);
  out.H_x_norm = std::sqrt(den);
  for (int i = 0; i <= N; ++i) f[i] = Htx[i] * Htx[i];
  out.H_xtau_norm = std::sqrt(trapezoid(f, h));
  out.lemma_ratio = den > 0 ? trapezoid(num, h) / den : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace vacuumflow
