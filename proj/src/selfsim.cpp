#include "vacuumflow/selfsim.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <ostream>
#include <stdexcept>

#include "vacuumflow/numerics.h"

namespace vacuumflow {

namespace {

using State = std::array<double, 2>;

struct Quintic {
  std::array<double, 6> c{};
  double h = 1;

  Quintic(double h_, double y0, double d0, double s0, double y1, double d1, double s1) : h(h_) {
    const double hd0 = h * d0, hd1 = h * d1, hs0 = h * h * s0, hs1 = h * h * s1;
    c[0] = y0;
    c[1] = hd0;
    c[2] = 0.5 * hs0;
    c[3] = -10 * y0 - 6 * hd0 - 1.5 * hs0 + 10 * y1 - 4 * hd1 + 0.5 * hs1;
    c[4] = 15 * y0 + 8 * hd0 + 1.5 * hs0 - 15 * y1 + 7 * hd1 - hs1;
    c[5] = -6 * y0 - 3 * hd0 - 0.5 * hs0 + 6 * y1 - 3 * hd1 + 0.5 * hs1;
  }

  // Value, first and second derivative at s in [0, 1].
  std::array<double, 3> eval(double s) const {
    double p = c[5], dp = 5 * c[5], ddp = 20 * c[5];
    for (int k = 4; k >= 0; --k) p = p * s + c[k];
    for (int k = 4; k >= 1; --k) dp = dp * s + k * c[k];
    for (int k = 4; k >= 2; --k) ddp = ddp * s + k * (k - 1) * c[k];
    return {p, dp / h, ddp / (h * h)};
  }
};

void check_inputs(double delta, double gamma, double alpha0, double end) {
  if (!std::isfinite(delta) || !std::isfinite(gamma) || !std::isfinite(alpha0) || !std::isfinite(end))
    throw std::invalid_argument("alpha integration: non-finite input");
  if (!(delta > 0)) throw std::invalid_argument("alpha integration: delta must be positive");
  if (!(gamma >= 1.01)) throw std::invalid_argument("alpha integration: gamma must be at least 1.01");
  if (!(alpha0 > 0)) throw std::invalid_argument("alpha integration: alpha0 must be positive");
  if (!(end > 0)) throw std::invalid_argument("alpha integration: end time must be positive");
}

// Dormand-Prince 5(4) with first-same-as-last. `accept` sees every accepted
// step and may veto it (returning false halves the step). `project` may move
// the accepted state back onto a known manifold before it is used.
template <class Rhs, class Accept, class Project>
void dopri5(Rhs f, State y, double t_end, double rtol, Accept accept, Project project) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double atol = rtol;
  const double h_max = t_end / 64;
  double t = 0;
  double h = std::min(h_max, 1e-3);
  State k1 = f(y);
  while (t < t_end) {
    if (t + h > t_end) h = t_end - t;
    if (h < 1e-14 * std::max(1.0, t)) throw std::runtime_error("alpha integration: step size underflow");

    State k2, k3, k4, k5, k6, k7, tmp, y5;
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    k2 = f(tmp);
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(tmp);
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(tmp);
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(tmp);
    for (int i = 0; i < 2; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(tmp);
    for (int i = 0; i < 2; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(y5);

    double err = 0;
    bool finite = true;
    for (int i = 0; i < 2; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err += (ei / sc) * (ei / sc);
      finite = finite && std::isfinite(y5[i]);
    }
    err = std::sqrt(err / 2);

    if (finite && err <= 1.0 && project(y5)) k7 = f(y5);
    if (finite && err <= 1.0 && accept(t + h, y5, k7)) {
      t = (t_end - (t + h) < 1e-12 * h) ? t_end : t + h;
      y = y5;
      k1 = k7;
      const double grow = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(h_max, h * grow);
    } else {
      const double shrink = (finite && err > 1.0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9) : 0.5;
      h *= shrink;
    }
  }
}

double invariant_potential(double delta, double gamma, double alpha) {
  return 2 * delta * std::pow(alpha, 3 - 3 * gamma) / (3 * gamma - 3);
}

void finish(AlphaTrajectory& traj, double tol) {
  traj.invariant0 = traj.alpha1 * traj.alpha1 + invariant_potential(traj.delta, traj.gamma, traj.alpha0);
  if (traj.alpha1 > 0) {
    traj.beta1 = traj.alpha1;
    traj.beta2 = std::sqrt(traj.invariant0);
  }
  const double drift = traj.max_invariant_drift();
  if (drift > 10 * tol)
    throw std::runtime_error(fmt::format("alpha integration: invariant drift {:.3g} exceeds 10 tol", drift));
}

}  // namespace

std::string_view to_string(TimeCoord coord) { return coord == TimeCoord::t ? "t" : "tau"; }

double AlphaTrajectory::invariant(const AlphaSample& s) const {
  const double rate = coord == TimeCoord::t ? s.alpha_prime : s.alpha_prime / s.alpha;
  return rate * rate + invariant_potential(delta, gamma, s.alpha);
}

double AlphaTrajectory::max_invariant_drift() const {
  double worst = 0;
  for (const auto& s : samples) {
    const double rate = coord == TimeCoord::t ? s.alpha_prime : s.alpha_prime / s.alpha;
    const double scale = rate * rate + invariant_potential(delta, gamma, s.alpha);
    worst = std::max(worst, std::abs(invariant(s) - invariant0) / scale);
  }
  return worst;
}

AlphaSample AlphaTrajectory::at(double time) const {
  if (samples.empty()) throw std::logic_error("AlphaTrajectory::at: empty trajectory");
  if (time <= samples.front().time) return samples.front();
  if (time >= samples.back().time) return samples.back();
  const auto it = std::upper_bound(samples.begin(), samples.end(), time,
                                   [](double t, const AlphaSample& s) { return t < s.time; });
  const AlphaSample& s1 = *it;
  const AlphaSample& s0 = *(it - 1);
  const double h = s1.time - s0.time;
  const double s = (time - s0.time) / h;

  AlphaSample out;
  out.time = time;
  if (coord == TimeCoord::t) {
    const auto v = Quintic(h, s0.alpha, s0.alpha_prime, s0.alpha_second, s1.alpha, s1.alpha_prime,
                           s1.alpha_second).eval(s);
    out.alpha = v[0];
    out.alpha_prime = v[1];
    out.alpha_second = v[2];
  } else {
    auto log_parts = [](const AlphaSample& p) {
      const double d = p.alpha_prime / p.alpha;
      return std::array<double, 3>{std::log(p.alpha), d, p.alpha_second / p.alpha - d * d};
    };
    const auto l0 = log_parts(s0), l1 = log_parts(s1);
    const auto v = Quintic(h, l0[0], l0[1], l0[2], l1[0], l1[1], l1[2]).eval(s);
    out.alpha = std::exp(v[0]);
    out.alpha_prime = out.alpha * v[1];
    out.alpha_second = out.alpha * (v[2] + v[1] * v[1]);
  }
  return out;
}

AlphaTrajectory integrate_alpha_t(double delta, double gamma, double alpha0, double alpha1, double t_end,
                                  double tol) {
  check_inputs(delta, gamma, alpha0, t_end);
  if (!std::isfinite(alpha1)) throw std::invalid_argument("alpha integration: non-finite alpha1");
  if (!(tol > 0)) throw std::invalid_argument("alpha integration: tol must be positive");

  AlphaTrajectory traj;
  traj.coord = TimeCoord::t;
  traj.delta = delta;
  traj.gamma = gamma;
  traj.alpha0 = alpha0;
  traj.alpha1 = alpha1;
  const double power = 2 - 3 * gamma;
  auto rhs = [&](const State& y) { return State{y[1], delta * std::pow(y[0], power)}; };
  traj.samples.push_back({0, alpha0, alpha1, delta * std::pow(alpha0, power)});
  dopri5(rhs, State{alpha0, alpha1}, t_end, 0.01 * tol, [&](double t, const State& y, const State& dy) {
    if (!(y[0] > 0)) return false;
    traj.samples.push_back({t, y[0], y[1], dy[1]});
    return true;
  }, [](State&) { return false; });
  finish(traj, tol);
  return traj;
}

AlphaTrajectory integrate_alpha_tau(double delta, double gamma, double alpha0, double alpha1, double tau_end,
                                    double tol) {
  check_inputs(delta, gamma, alpha0, tau_end);
  if (!std::isfinite(alpha1)) throw std::invalid_argument("alpha integration: non-finite alpha1");
  if (!(tol > 0)) throw std::invalid_argument("alpha integration: tol must be positive");

  AlphaTrajectory traj;
  traj.coord = TimeCoord::tau;
  traj.delta = delta;
  traj.gamma = gamma;
  traj.alpha0 = alpha0;
  traj.alpha1 = alpha1;
  // a = log alpha, b = alpha_tau / alpha (which is d alpha / dt):
  //   a' = b,  b' = delta alpha^{3 - 3 gamma}.
  const double power = 3 - 3 * gamma;
  auto rhs = [&](const State& y) { return State{y[1], delta * std::exp(power * y[0])}; };
  auto sample = [&](double tau, const State& y, const State& dy) {
    const double alpha = std::exp(y[0]);
    return AlphaSample{tau, alpha, alpha * y[1], alpha * (dy[1] + y[1] * y[1])};
  };
  const State y0{std::log(alpha0), alpha1};
  traj.samples.push_back(sample(0, y0, rhs(y0)));
  // While b stays nonnegative the invariant fixes it from a alone:
  //   b^2 = alpha1^2 + P(alpha0) (1 - (alpha / alpha0)^{3 - 3 gamma}),
  // with P the potential term. Projecting onto this keeps the invariant exact
  // and b inside [alpha1, sqrt(invariant0)] in floating point.
  const double p0 = invariant_potential(delta, gamma, alpha0);
  auto project = [&](State& y) {
    if (alpha1 < 0) return false;
    y[1] = std::sqrt(alpha1 * alpha1 + p0 * -std::expm1(power * (y[0] - y0[0])));
    return true;
  };
  dopri5(rhs, y0, tau_end, 0.01 * tol, [&](double tau, const State& y, const State& dy) {
    traj.samples.push_back(sample(tau, y, dy));
    return true;
  }, project);
  finish(traj, tol);
  return traj;
}

TimeMap::TimeMap(const AlphaTrajectory& traj_t) : traj_(traj_t) {
  if (traj_.coord != TimeCoord::t) throw std::invalid_argument("rescale_time: trajectory must use t");
  const auto& s = traj_.samples;
  if (s.size() < 2) throw std::invalid_argument("rescale_time: need at least two samples");
  tau_.assign(s.size(), 0.0);
  slope_.assign(s.size(), 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!(s[k].alpha > 0)) throw std::invalid_argument("rescale_time: alpha must stay positive");
    if (k > 0 && !(s[k].time > s[k - 1].time)) throw std::invalid_argument("rescale_time: non-monotone samples");
    slope_[k] = s[k].alpha;
    if (k > 0) tau_[k] = tau_[k - 1] + segment(k - 1, s[k].time);
  }
  // Fritsch-Carlson limiter on the exact slopes dt/dtau = alpha.
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double secant = (s[k + 1].time - s[k].time) / (tau_[k + 1] - tau_[k]);
    const double a = slope_[k] / secant, b = slope_[k + 1] / secant;
    const double r = a * a + b * b;
    if (r > 9) {
      const double t = 3 / std::sqrt(r);
      slope_[k] = t * a * secant;
      slope_[k + 1] = t * b * secant;
    }
  }
}

double TimeMap::segment(std::size_t k, double t) const {
  const auto rule = gauss_legendre(6, traj_.samples[k].time, t);
  double sum = 0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) sum += rule.weights[j] / traj_.at(rule.nodes[j]).alpha;
  return sum;
}

double TimeMap::tau_of_t(double t) const {
  const auto& s = traj_.samples;
  if (t <= 0) return t / s.front().alpha;
  if (t >= s.back().time) return tau_.back() + (t - s.back().time) / s.back().alpha;
  const std::size_t k =
      std::upper_bound(s.begin(), s.end(), t, [](double v, const AlphaSample& p) { return v < p.time; }) -
      s.begin() - 1;
  return tau_[k] + segment(k, t);
}

double TimeMap::t_of_tau(double tau) const {
  const auto& s = traj_.samples;
  if (tau <= 0) return tau * s.front().alpha;
  if (tau >= tau_.back()) return s.back().time + (tau - tau_.back()) * s.back().alpha;
  const std::size_t k = std::upper_bound(tau_.begin(), tau_.end(), tau) - tau_.begin() - 1;
  const double h = tau_[k + 1] - tau_[k];
  const double u = (tau - tau_[k]) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
  return h00 * s[k].time + h10 * h * slope_[k] + h01 * s[k + 1].time + h11 * h * slope_[k + 1];
}

TimeMap rescale_time(const AlphaTrajectory& traj_t) { return TimeMap(traj_t); }

Asymptote asymptote_check(const AlphaTrajectory& traj_t, double horizon_tol) {
  if (traj_t.coord != TimeCoord::t) throw std::invalid_argument("asymptote_check: trajectory must use t");
  const double t_end = traj_t.end_time();
  std::vector<double> ts, as;
  for (const auto& s : traj_t.samples) {
    if (s.time >= 0.5 * t_end) {
      ts.push_back(s.time);
      as.push_back(s.alpha);
    }
  }
  if (ts.size() < 3) throw std::runtime_error("asymptote_check: insufficient horizon (too few tail samples)");
  const LinearFit fit = fit_line(ts, as);
  Asymptote out;
  out.c1 = fit.intercept;
  out.c2 = fit.slope;
  if (!(out.c2 > 0)) throw std::runtime_error("asymptote_check: insufficient horizon (tail not expanding)");
  const double final_slope = traj_t.samples.back().alpha_prime;
  if (std::abs(final_slope - out.c2) > horizon_tol * out.c2)
    throw std::runtime_error(fmt::format("asymptote_check: insufficient horizon (final slope {:.6g} vs fitted {:.6g})",
                                         final_slope, out.c2));
  for (std::size_t k = 0; k < ts.size(); ++k) out.sup_ratio = std::max(out.sup_ratio, as[k] / (out.c1 + out.c2 * ts[k]));
  return out;
}

void write_alpha_csv(std::ostream& out, const AlphaTrajectory& traj) {
  out << "time,alpha,alpha_prime,invariant\n";
  for (const auto& s : traj.samples)
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", s.time, s.alpha, s.alpha_prime, traj.invariant(s));
}

}  // namespace vacuumflow
