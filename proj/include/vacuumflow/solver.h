#ifndef VACUUMFLOW_SOLVER_H
#define VACUUMFLOW_SOLVER_H

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vacuumflow/indices.h"
#include "vacuumflow/profiles.h"
#include "vacuumflow/selfsim.h"

namespace vacuumflow {

struct SolverConfig {
  double gamma = 0;
  double mu = 0;
  double delta = 0;
  double alpha0 = 0;
  double alpha1 = 0;
  double tau_end = 0;

  int N = 256;
  double dtau = 1e-3;
  double c_nu = 1;
  double s_bar = 0;

  ProfileKind profile = ProfileKind::power;
  double varrho = 1;
  double scale = 1;

  // eta0 = a_eta x^s ((s+1) - s x), eta1 the same shape with a_eta1,
  // q0 = a_q (1 - x^2).
  double a_eta = 1e-3;
  double a_eta1 = 1e-3;
  double a_q = 1e-3;
  int shape = 2;

  double eps_det = 1e-3;
  double omega = 0.5;
  double c_cfl = 0.5;
  double alpha_tol = 1e-10;
  int snapshot_every = 100;

  std::optional<double> r1;
  std::optional<double> sigma1;

  bool operator==(const SolverConfig&) const = default;
};

/// Fields on the nodes x_i = i / N. `eta_tt` is the acceleration over the
/// step that produced this state.
struct PerturbationState {
  double tau = 0;
  double alpha = 1;
  double alpha_tau = 0;
  std::vector<double> eta;
  std::vector<double> v;
  std::vector<double> zeta;
  std::vector<double> eta_tt;
  bool has_acceleration = false;

  int cells() const { return static_cast<int>(eta.size()) - 1; }
  bool operator==(const PerturbationState&) const = default;
};

/// Geometric factors of the Lagrangian map: J1 = 1 + eta,
/// J2 = 1 + eta + x eta_x, J = J1^2 J2.
struct Geometry {
  std::vector<double> J1;
  std::vector<double> J2;
  std::vector<double> x_eta_x;
  std::vector<double> J;
  double min_jacobian = 0;  // smallest of J1, J2 at nodes and (x J1)_x at midpoints
};

/// x f_x on the grid, from differences of x f so that x = 0 needs no special
/// treatment (x f is odd there).
std::vector<double> x_derivative(const std::vector<double>& f);

Geometry geometry(const std::vector<double>& eta);

struct BField {
  std::vector<double> midpoint;  // size N, at x_{i+1/2}
  std::vector<double> nodal;     // size N+1, zero at both ends
};

/// Throws DegenerateError when the map is degenerate.
BField compute_B(const PerturbationState& state, double eps_det = 1e-3);

struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a step needs that does not change in time.
class Model {
 public:
  Model(const SolverConfig& config, const DensityProfile& profile, const PressureProfile& pressure);

  const SolverConfig& config() const { return config_; }
  const DensityProfile& profile() const { return profile_; }
  const PressureProfile& pressure() const { return pressure_; }
  const AlphaTrajectory& alpha() const { return alpha_; }
  const std::vector<double>& cell_moment() const { return cell_moment_; }
  int cells() const { return profile_.cells(); }
  double spacing() const { return profile_.spacing(); }

  /// Largest step allowed by the explicit pressure and gravity terms.
  double stability_bound(const PerturbationState& state) const;
  /// Entropy source (4/3) mu (gamma - 1) alpha^{3 gamma - 1} J^gamma B^2 at nodes.
  std::vector<double> entropy_source(const PerturbationState& state) const;
  /// zeta_tau from the transport equation at this state.
  std::vector<double> zeta_tau(const PerturbationState& state) const;

 private:
  SolverConfig config_;
  DensityProfile profile_;
  PressureProfile pressure_;
  AlphaTrajectory alpha_;
  std::vector<double> cell_moment_;  // integral of x^4 rho_bar over each dual cell
};

struct InitialData {
  std::vector<double> eta0;
  std::vector<double> eta1;
  std::vector<double> q0;
  std::vector<double> zeta0;
  std::vector<double> zeta1;
  std::vector<double> eta2;  // from one implicit micro step
  std::vector<double> eta2_direct;  // from the momentum relation where x rho_bar > 1e-6, else 0
  std::vector<bool> eta2_direct_valid;
  double E_in = 0;
};

struct Initialization {
  PerturbationState state;
  InitialData data;
};

Initialization initialize_run(const Model& model);

/// One first-order IMEX step: implicit viscosity, explicit pressure and
/// gravity, then eta and zeta. The zeta update telescopes the pressure work so
/// that zeta / p_bar + J^gamma changes only by the nonnegative source.
PerturbationState step(const PerturbationState& state, double dtau, const Model& model);

/// Assembles L(eta) v = (4/3) mu alpha^3 B_x + 4 mu alpha^3 (v / (1 + eta))_x in
/// the cell-integrated form used by step, multiplied by x^3 (1+eta)^3.
std::vector<double> viscous_operator(const PerturbationState& state, const std::vector<double>& v,
                                     const Model& model);

enum class RunStatus { completed, aborted_degenerate, aborted_nan };

std::string_view to_string(RunStatus status);
RunStatus parse_run_status(std::string_view name);

struct SeriesRow {
  double tau = 0;
  double alpha = 0;
  double alpha_tau = 0;
  double sup_eta = 0;
  double sup_xetax = 0;
  double sup_etatau = 0;
  double sup_xetaxtau = 0;
  double sup_B = 0;
  double Z_min_increment = 0;
  double E0 = 0;
  double E1 = 0;
  double D0 = 0;
  double D1 = 0;
  double sup_q = 0;

  bool operator==(const SeriesRow&) const = default;
};

struct RunRecord {
  SolverConfig config;
  RunStatus status = RunStatus::completed;
  std::string message;
  double E_in = 0;
  std::vector<PerturbationState> snapshots;
  std::vector<SeriesRow> series;
};

/// Time loop with snapshots every `snapshot_every` steps (and at both ends).
/// Energies are NaN when no index set satisfying case 1 is supplied.
RunRecord run(const SolverConfig& config, const DensityProfile& profile, const PressureProfile& pressure,
              const std::optional<IndexSet>& index_set);
RunRecord run(const Model& model, const std::optional<IndexSet>& index_set);

struct IdentityResiduals {
  double res_center = 0;
  double res_boundary = 0;
  std::vector<double> probes;
  std::vector<double> signed_center;
  std::vector<double> signed_boundary;
};

/// Both integrated forms of the momentum equation at x in {1/4, 1/2, 3/4}:
/// from the center outward (weighted by x^3 (1+eta)^3) and from x to the
/// boundary. Needs the acceleration of the last step.
IdentityResiduals identity_residuals(const PerturbationState& state, const Model& model);

struct EulerianFields {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> rho;
  std::vector<double> p;
  double mass = 0;            // trapezoid of r^2 rho r_x over x
  double reference_mass = 0;  // trapezoid of x^2 rho_bar
};

EulerianFields reconstruct_eulerian(const PerturbationState& state, const Model& model);

}  // namespace vacuumflow

#endif
