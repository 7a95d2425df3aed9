// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "vacuumflow/cli.h"
#include "vacuumflow/diagnostics.h"
#include "vacuumflow/indices.h"
#include "vacuumflow/numerics.h"
#include "vacuumflow/selfsim.h"
#include "vacuumflow/solver.h"

using namespace vacuumflow;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

SolverConfig base_config() {
  SolverConfig c;
  c.gamma = 1.5;
  c.mu = 1;
  c.delta = 1;
  c.alpha0 = 1;
  c.alpha1 = 4;
  c.tau_end = 1;
  return c;
}

// Regression configs spanning I1 and I2 with amplitudes between 1e-3 and 1e-2.
std::vector<SolverConfig> regression_configs() {
  std::vector<SolverConfig> out;
  struct Row {
    double gamma, amp, alpha1, mu;
    ProfileKind kind;
  };
  const Row rows[] = {
      {1.5, 1e-3, 4, 1, ProfileKind::power},   {1.5, 1e-2, 2, 1, ProfileKind::entropy_bounded},
      {1.3, 5e-3, 4, 0.5, ProfileKind::power}, {1.2, 1e-2, 3, 1, ProfileKind::constant},
      {2.0, 1e-3, 4, 1, ProfileKind::power},   {2.2, 1e-2, 2, 2, ProfileKind::power},
  };
  for (const auto& r : rows) {
    SolverConfig c = base_config();
    c.gamma = r.gamma;
    c.a_eta = c.a_eta1 = c.a_q = r.amp;
    c.alpha1 = r.alpha1;
    c.mu = r.mu;
    c.profile = r.kind;
    c.N = 128;
    c.tau_end = 1.5;
    c.snapshot_every = 50;
    out.push_back(c);
  }
  return out;
}

const std::vector<RunRecord>& regression_runs() {
  static const std::vector<RunRecord> runs = [] {
    std::vector<RunRecord> r;
    for (const auto& c : regression_configs()) r.push_back(run(make_model(c), resolve_index_set(c)));
    return r;
  }();
  return runs;
}

SolverConfig decay_config(double tau_end) {
  SolverConfig c = base_config();
  c.gamma = 1.5;
  c.alpha1 = 4;
  c.a_eta = c.a_eta1 = c.a_q = 1e-3;
  c.N = 256;
  c.tau_end = tau_end;
  c.r1 = 1.8;
  c.sigma1 = 0.875;
  return c;
}

double max_over(const RunRecord& rec, double SeriesRow::*field) {
  double m = 0;
  for (const auto& r : rec.series) m = std::max(m, r.*field);
  return m;
}

// Self-convergence order from three successively refined terminal fields,
// compared on the coarsest grid.
double self_order(const std::vector<double>& coarse, const std::vector<double>& mid, const std::vector<double>& fine) {
  auto diff = [](const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t s = (a.size() - 1) / (b.size() - 1);
    double m = 0;
    for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(a[i * s] - b[i]));
    return m;
  };
  std::vector<double> mid_on_coarse(coarse.size());
  const std::size_t s = (mid.size() - 1) / (coarse.size() - 1);
  for (std::size_t i = 0; i < coarse.size(); ++i) mid_on_coarse[i] = mid[i * s];
  return std::log2(diff(mid, coarse) / diff(fine, mid_on_coarse));
}

}  // namespace

int main() {
  report(1, "closed-form alpha", [] {
    const auto t0 = Clock::now();
    const auto tt = integrate_alpha_t(1, 5.0 / 3, 1, 0, 10, 1e-10);
    const auto ta = integrate_alpha_tau(1, 5.0 / 3, 1, 0, 3, 1e-10);
    const double elapsed = seconds_since(t0);
    double et = 0, ea = 0;
    for (const auto& s : tt.samples) et = std::max(et, std::abs(s.alpha / std::sqrt(1 + s.time * s.time) - 1));
    for (const auto& s : ta.samples) ea = std::max(ea, std::abs(s.alpha / std::cosh(s.time) - 1));
    for (int k = 0; k <= 100; ++k) {
      const double t = 0.1 * k, tau = 0.03 * k;
      et = std::max(et, std::abs(tt.at(t).alpha / std::sqrt(1 + t * t) - 1));
      ea = std::max(ea, std::abs(ta.at(tau).alpha / std::cosh(tau) - 1));
    }
    return Verdict{et <= 1e-8 && ea <= 1e-7 && elapsed < 1.0,
                   "t rel err " + num(et) + ", tau rel err " + num(ea) + ", " + num(elapsed) + " s"};
  });

  report(2, "invariant conservation", [] {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> g(1.05, 2.5), d(0.2, 3), a0(0.5, 2), a1(0, 5);
    double worst = 0;
    for (int k = 0; k < 5; ++k) {
      const auto tr = integrate_alpha_t(d(rng), g(rng), a0(rng), a1(rng), 10, 1e-8);
      worst = std::max(worst, tr.max_invariant_drift());
    }
    return Verdict{worst <= 1e-8, "max relative drift " + num(worst)};
  });

  report(3, "rate sandwich", [] {
    long violations = 0, samples = 0;
    const double params[5][4] = {{1, 1.5, 1, 1}, {1, 1.5, 1, 2}, {0.5, 1.3, 2, 4}, {2, 2.0, 0.7, 1}, {1, 1.8, 1.5, 2}};
    for (const auto& p : params) {
      const auto tr = integrate_alpha_tau(p[0], p[1], p[2], p[3], 4, 1e-9);
      for (const auto& s : tr.samples) {
        ++samples;
        const double lo = tr.alpha0 * std::exp(tr.beta1 * s.time), hi = tr.alpha0 * std::exp(tr.beta2 * s.time);
        if (s.alpha < lo || s.alpha > hi || s.alpha_prime < tr.beta1 * s.alpha || s.alpha_prime > tr.beta2 * s.alpha)
          ++violations;
      }
    }
    return Verdict{violations == 0, std::to_string(violations) + " violations in " + std::to_string(samples) +
                                        " samples"};
  });

  report(4, "regime recovery", [] {
    const auto t0 = Clock::now();
    const int n = 400;
    const double lo = 1.01, hi = 3.0, step = (hi - lo) / (n + 1);
    // first and last gamma with a nonempty window for each case
    double first[3] = {NAN, NAN, NAN}, last[3] = {NAN, NAN, NAN};
    long disagreements = 0;
    for (int k = 1; k <= n; ++k) {
      const double g = lo + k * step;
      const Regime r = regime(g);
      for (int which = 1; which <= 3; ++which) {
        const bool ok = feasible_window(g, which, 200).nonempty;
        if (ok != r.contains(which - 1)) ++disagreements;
        if (ok) {
          if (std::isnan(first[which - 1])) first[which - 1] = g;
          last[which - 1] = g;
        }
      }
    }
    const double elapsed = seconds_since(t0);
    const double want_lo[3] = {7.0 / 6, 7.0 / 6, 11.0 / 9}, want_hi[3] = {INFINITY, 7.0 / 3, 5.0 / 3};
    bool edges = true;
    std::string detail;
    for (int c = 0; c < 3; ++c) {
      const bool lo_ok = std::abs(first[c] - want_lo[c]) <= step;
      const bool hi_ok = std::isinf(want_hi[c]) ? last[c] > hi - 2 * step : std::abs(last[c] - want_hi[c]) <= step;
      edges = edges && lo_ok && hi_ok;
      detail += "I" + std::to_string(c) + "=[" + num(first[c]) + "," + num(last[c]) + "] ";
    }
    return Verdict{edges && elapsed < 30, detail + std::to_string(disagreements) + " cells disagree, " +
                                              num(elapsed) + " s"};
  });

  report(5, "zero perturbation fixed point", [] {
    SolverConfig c = base_config();
    c.N = 64;
    c.tau_end = 10;
    c.dtau = 1e-3;
    const Model m = make_model(c);
    PerturbationState s;
    s.eta.assign(c.N + 1, 0.0);
    s.v = s.zeta = s.eta;
    const auto a = m.alpha().at(0);
    s.alpha = a.alpha;
    s.alpha_tau = a.alpha_prime;
    long nonzero = 0;
    for (int k = 0; k < 10000; ++k) {
      s = step(s, c.dtau, m);
      for (int i = 0; i <= c.N; ++i)
        if (s.eta[i] != 0.0 || s.v[i] != 0.0 || s.zeta[i] != 0.0) ++nonzero;
    }
    return Verdict{nonzero == 0, std::to_string(nonzero) + " nonzero node values over 1e4 steps"};
  });

  report(6, "discrete entropy law", [] {
    double worst = INFINITY;
    long bad = 0, rows = 0;
    int aborted = 0;
    for (const auto& rec : regression_runs()) {
      if (rec.status != RunStatus::completed) ++aborted;
      for (const auto& r : rec.series) {
        if (std::isnan(r.Z_min_increment)) continue;
        ++rows;
        worst = std::min(worst, r.Z_min_increment);
        if (r.Z_min_increment < -1e-10) ++bad;
      }
    }
    return Verdict{bad == 0 && aborted == 0 && rows > 0,
                   "min increment " + num(worst) + " over " + std::to_string(rows) + " steps, " +
                       std::to_string(aborted) + " aborted"};
  });

  report(7, "boundary value of zeta", [] {
    long bad = 0, seen = 0;
    for (const auto& rec : regression_runs()) {
      for (const auto& s : rec.snapshots) {
        ++seen;
        if (s.zeta.back() != 0.0) ++bad;
      }
    }
    return Verdict{bad == 0 && seen > 0, std::to_string(bad) + " of " + std::to_string(seen) + " snapshots nonzero"};
  });

  report(8, "self-convergence", [] {
    SolverConfig c = base_config();
    c.a_eta = c.a_eta1 = c.a_q = 1e-2;
    c.tau_end = 0.5;
    c.snapshot_every = 1000000;
    auto terminal = [&](int N, double dt, IdentityResiduals* res) {
      SolverConfig k = c;
      k.N = N;
      k.dtau = dt;
      const Model m = make_model(k);
      const auto rec = run(m, std::nullopt);
      if (rec.status != RunStatus::completed) throw std::runtime_error("convergence run aborted");
      if (res) *res = identity_residuals(rec.snapshots.back(), m);
      return rec.snapshots.back().eta;
    };
    // space: fixed dtau
    const auto h64 = terminal(64, 1e-3, nullptr), h128 = terminal(128, 1e-3, nullptr),
               h256 = terminal(256, 1e-3, nullptr);
    const double order_h = self_order(h64, h128, h256);
    // time: three halvings at fixed N
    const auto t1 = terminal(128, 4e-3, nullptr), t2 = terminal(128, 2e-3, nullptr), t3 = terminal(128, 1e-3, nullptr),
               t4 = terminal(128, 5e-4, nullptr);
    auto sup_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
      double m = 0;
      for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
      return m;
    };
    const double d1 = sup_diff(t1, t2), d2 = sup_diff(t2, t3), d3 = sup_diff(t3, t4);
    const double order_t = std::min(std::log2(d1 / d2), std::log2(d2 / d3));
    // residuals: dtau halvings at fixed N, and joint refinement dtau = 4 h^2 for h
    IdentityResiduals r[4];
    terminal(128, 4e-3, &r[0]);
    terminal(128, 2e-3, &r[1]);
    terminal(128, 1e-3, &r[2]);
    terminal(128, 5e-4, &r[3]);
    double res_t = INFINITY;
    for (int k = 0; k < 3; ++k) {
      res_t = std::min(res_t, std::log2(r[k].res_center / r[k + 1].res_center));
      res_t = std::min(res_t, std::log2(r[k].res_boundary / r[k + 1].res_boundary));
    }
    IdentityResiduals q[3];
    const int Ns[3] = {64, 128, 256};
    for (int k = 0; k < 3; ++k) terminal(Ns[k], 4.0 / (Ns[k] * Ns[k]), &q[k]);
    double res_h = INFINITY;
    for (int k = 0; k < 2; ++k) {
      res_h = std::min(res_h, std::log2(q[k].res_center / q[k + 1].res_center));
      res_h = std::min(res_h, std::log2(q[k].res_boundary / q[k + 1].res_boundary));
    }
    return Verdict{order_h >= 1.8 && order_t >= 0.9 && res_h >= 1.8 && res_t >= 0.9,
                   "eta order h " + num(order_h) + ", dtau " + num(order_t) + "; residual order h " + num(res_h) +
                       ", dtau " + num(res_t)};
  });

  // Criteria 9-11 share the two runs below.
  const auto t0 = Clock::now();
  const SolverConfig c4 = decay_config(4), c2 = decay_config(2);
  const Model m4 = make_model(c4);
  const RunRecord long_run = run(m4, resolve_index_set(c4));
  const double decay_seconds = seconds_since(t0);
  const RunRecord short_run = run(make_model(c2), resolve_index_set(c2));

  report(9, "decay exponents", [&] {
    if (long_run.status != RunStatus::completed) return Verdict{false, "run aborted: " + long_run.message};
    const auto fits = decay_fit(long_run, *resolve_index_set(c4));
    const double se = fits[0].fitted_exponent, sx = fits[1].fitted_exponent, sb = fits[2].fitted_exponent;
    const bool ok = se <= -0.875 + 0.1 && sx <= -0.875 + 0.1 && sb <= -0.9 && decay_seconds <= 120;
    return Verdict{ok, "eta_tau " + num(se) + ", x eta_x_tau " + num(sx) + ", B " + num(sb) + ", " +
                           num(decay_seconds) + " s"};
  });

  report(10, "bounded q", [&] {
    const double q2 = max_over(short_run, &SeriesRow::sup_q), q4 = max_over(long_run, &SeriesRow::sup_q);
    return Verdict{q4 < 1.1 * q2 && short_run.status == RunStatus::completed,
                   "sup q to tau 2: " + num(q2) + ", to tau 4: " + num(q4) + ", growth " + num(q4 / q2 - 1)};
  });

  report(11, "energy stability", [&] {
    const auto& a = short_run.series.back();
    const auto& b = long_run.series.back();
    const double e2 = a.E0 + a.E1, e4 = b.E0 + b.E1;
    return Verdict{std::isfinite(e2) && e4 < 1.1 * e2,
                   "E0+E1 at tau 2: " + num(e2) + ", at tau 4: " + num(e4) + ", growth " + num(e4 / e2 - 1)};
  });

  report(12, "Eulerian mass identity", [&] {
    double worst = 0;
    long dumps = 0;
    auto check_run = [&](const RunRecord& rec) {
      const Model m = make_model(rec.config);
      for (const auto& s : rec.snapshots) {
        const auto e = reconstruct_eulerian(s, m);
        worst = std::max(worst, std::abs(e.mass - e.reference_mass) / e.reference_mass);
        ++dumps;
      }
    };
    for (const auto& rec : regression_runs()) check_run(rec);
    check_run(long_run);
    return Verdict{worst <= 1e-10, "max relative mass error " + num(worst) + " over " + std::to_string(dumps) +
                                       " dumps"};
  });

  return failures;
}
