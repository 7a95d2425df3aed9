#include "vacuumflow/config.h"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <set>
#include <sstream>

namespace vacuumflow {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(int line) { return line > 0 ? fmt::format(" (line {})", line) : std::string(); }

double to_double(std::string_view key, std::string_view value, int line) {
  double out = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty())
    throw ConfigError(fmt::format("{} must be a number, got '{}'{}", key, value, where(line)));
  if (!std::isfinite(out)) throw ConfigError(fmt::format("{} must be finite{}", key, where(line)));
  return out;
}

int to_int(std::string_view key, std::string_view value, int line) {
  int out = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty())
    throw ConfigError(fmt::format("{} must be an integer, got '{}'{}", key, value, where(line)));
  return out;
}

void require(bool ok, std::string_view key, std::string_view what, int line) {
  if (!ok) throw ConfigError(fmt::format("{} {}{}", key, what, where(line)));
}

constexpr std::string_view kRequired[] = {"gamma", "mu", "delta", "alpha0", "alpha1", "tau_end"};

}  // namespace

void set_config_value(SolverConfig& c, std::string_view key, std::string_view value, int line) {
  auto num = [&] { return to_double(key, value, line); };
  if (key == "gamma") {
    c.gamma = num();
    require(c.gamma > 1, key, "must exceed 1", line);
    require(c.gamma >= 1.01, key, "must be at least 1.01", line);
  } else if (key == "mu") {
    c.mu = num();
    require(c.mu > 0, key, "must be positive", line);
  } else if (key == "delta") {
    c.delta = num();
    require(c.delta > 0, key, "must be positive", line);
  } else if (key == "alpha0") {
    c.alpha0 = num();
    require(c.alpha0 > 0, key, "must be positive", line);
  } else if (key == "alpha1") {
    c.alpha1 = num();
  } else if (key == "tau_end") {
    c.tau_end = num();
    require(c.tau_end > 0, key, "must be positive", line);
  } else if (key == "N") {
    c.N = to_int(key, value, line);
    require(c.N >= 32, key, "must be at least 32", line);
  } else if (key == "dtau") {
    c.dtau = num();
    require(c.dtau > 0, key, "must be positive", line);
  } else if (key == "c_nu") {
    c.c_nu = num();
    require(c.c_nu > 0, key, "must be positive", line);
  } else if (key == "s_bar") {
    c.s_bar = num();
  } else if (key == "profile") {
    try {
      c.profile = parse_profile_kind(value);
    } catch (const std::invalid_argument&) {
      throw ConfigError(
          fmt::format("profile must be one of power, constant, entropy_bounded, got '{}'{}", value, where(line)));
    }
  } else if (key == "varrho") {
    c.varrho = num();
    require(c.varrho >= 0, key, "must be nonnegative", line);
  } else if (key == "scale") {
    c.scale = num();
    require(c.scale > 0, key, "must be positive", line);
  } else if (key == "a_eta") {
    c.a_eta = num();
    require(std::abs(c.a_eta) < 1, key, "must be smaller than 1 in magnitude", line);
  } else if (key == "a_eta1") {
    c.a_eta1 = num();
    require(std::abs(c.a_eta1) < 1, key, "must be smaller than 1 in magnitude", line);
  } else if (key == "a_q") {
    c.a_q = num();
    require(std::abs(c.a_q) < 1, key, "must be smaller than 1 in magnitude", line);
  } else if (key == "shape") {
    c.shape = to_int(key, value, line);
    require(c.shape >= 2, key, "must be at least 2", line);
  } else if (key == "eps_det") {
    c.eps_det = num();
    require(c.eps_det > 0 && c.eps_det < 1, key, "must lie in (0, 1)", line);
  } else if (key == "omega") {
    c.omega = num();
    require(c.omega > 0, key, "must be positive", line);
  } else if (key == "c_cfl") {
    c.c_cfl = num();
    require(c.c_cfl > 0 && c.c_cfl <= 1, key, "must lie in (0, 1]", line);
  } else if (key == "alpha_tol") {
    c.alpha_tol = num();
    require(c.alpha_tol > 0 && c.alpha_tol < 1e-2, key, "must lie in (0, 0.01)", line);
  } else if (key == "snapshot_every") {
    c.snapshot_every = to_int(key, value, line);
    require(c.snapshot_every >= 1, key, "must be at least 1", line);
  } else if (key == "r1") {
    c.r1 = num();
  } else if (key == "sigma1") {
    c.sigma1 = num();
  } else {
    throw ConfigError(fmt::format("unknown key '{}'{}", key, where(line)));
  }
}

void validate_config(const SolverConfig& c) {
  if (c.r1.has_value() != c.sigma1.has_value()) throw ConfigError("r1 and sigma1 must be given together");
}

SolverConfig parse_config(std::string_view text) {
  SolverConfig c;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("expected 'key = value' (line {})", line_no));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("missing key (line {})", line_no));
    if (!seen.insert(std::string(key)).second)
      throw ConfigError(fmt::format("duplicate key '{}' (line {})", key, line_no));
    set_config_value(c, key, value, line_no);
  }
  for (auto key : kRequired)
    if (!seen.contains(key)) throw ConfigError(fmt::format("missing required key '{}'", key));
  validate_config(c);
  return c;
}

std::string emit_config(const SolverConfig& c) {
  std::ostringstream o;
  auto num = [&](std::string_view key, double v) { o << fmt::format("{} = {:.17g}\n", key, v); };
  num("gamma", c.gamma);
  num("mu", c.mu);
  num("delta", c.delta);
  num("alpha0", c.alpha0);
  num("alpha1", c.alpha1);
  num("tau_end", c.tau_end);
  o << fmt::format("N = {}\n", c.N);
  num("dtau", c.dtau);
  num("c_nu", c.c_nu);
  num("s_bar", c.s_bar);
  o << fmt::format("profile = {}\n", to_string(c.profile));
  num("varrho", c.varrho);
  num("scale", c.scale);
  num("a_eta", c.a_eta);
  num("a_eta1", c.a_eta1);
  num("a_q", c.a_q);
  o << fmt::format("shape = {}\n", c.shape);
  num("eps_det", c.eps_det);
  num("omega", c.omega);
  num("c_cfl", c.c_cfl);
  num("alpha_tol", c.alpha_tol);
  o << fmt::format("snapshot_every = {}\n", c.snapshot_every);
  if (c.r1) num("r1", *c.r1);
  if (c.sigma1) num("sigma1", *c.sigma1);
  return o.str();
}

}  // namespace vacuumflow
