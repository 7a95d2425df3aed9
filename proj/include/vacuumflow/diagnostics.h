#ifndef VACUUMFLOW_DIAGNOSTICS_H
#define VACUUMFLOW_DIAGNOSTICS_H

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vacuumflow/indices.h"
#include "vacuumflow/solver.h"

namespace vacuumflow {

/// 1 on [0, 1/2], 0 on [3/4, 1], cubic smoothstep in between.
double chi_cutoff(double x);
double chi_cutoff_derivative(double x);

/// Instantaneous integrands of the energy and dissipation functionals at one
/// state: E0 has 5 terms, D0 6, E1 3, D1 5.
struct EnergyTerms {
  std::array<double, 5> e0{};
  std::array<double, 6> d0{};
  std::array<double, 3> e1{};
  std::array<double, 5> d1{};

  double e0_sum() const;
  double d0_sum() const;
  double e1_sum() const;
  double d1_sum() const;

  static const std::array<std::string_view, 5> e0_names;
  static const std::array<std::string_view, 6> d0_names;
  static const std::array<std::string_view, 3> e1_names;
  static const std::array<std::string_view, 5> d1_names;
};

/// eta_tt comes from the stored acceleration and zeta_tau from the transport
/// equation. Throws when the state has no acceleration or the index set
/// violates case 1.
EnergyTerms energy_terms(const PerturbationState& state, const Model& model, const IndexSet& index_set);

struct EnergyRow {
  double tau = 0;
  EnergyTerms terms;
  double E0 = 0;
  double E1 = 0;
  double D0 = 0;
  double D1 = 0;
};

struct EnergyReport {
  std::vector<EnergyRow> rows;
  double E0 = 0;
  double E1 = 0;
  double D0 = 0;
  double D1 = 0;
  double E_in = 0;
  /// Running supremum of each E term and time integral of each D term.
  std::map<std::string, double> breakdown;
};

/// Evaluates the functionals over the snapshots of a run: E as running
/// suprema, D as trapezoid integrals in tau.
EnergyReport energy_report(const RunRecord& run, const IndexSet& index_set, const Model& model);

void write_energy_csv(std::ostream& out, const EnergyReport& report);

struct QField {
  std::vector<double> q;
  std::vector<bool> valid;
  /// First node where p_bar drops below eps0 p_bar(0); nodes from there on are masked.
  double x_eps0 = 1;
  double sup_global = 0;    // over valid nodes
  double sup_interior = 0;  // over valid nodes with x <= 3/4 (support of the cutoff)
};

QField q_field(const PerturbationState& state, const PressureProfile& pressure, double gamma,
               double eps0 = 1e-6);

struct EntropyMonitor {
  double min_increment = 0;
  long violation_count = 0;
};

/// Reads the per-step minimum increments of Z = zeta / p_bar + J^gamma.
EntropyMonitor entropy_monitor(const RunRecord& run, double tol = 1e-10);

enum class DecayQuantity { eta_tau, x_eta_x_tau, B };

std::string_view to_string(DecayQuantity quantity);

struct DecayFit {
  DecayQuantity quantity = DecayQuantity::eta_tau;
  double fitted_exponent = 0;
  double target = 0;
  double tau_lo = 0;
  double tau_hi = 0;
  double r_squared = 0;
};

/// Slope of log sup|f| against log alpha over the last 60% of the samples.
/// Throws when a value is not positive or alpha spans less than two
/// e-foldings.
DecayFit fit_decay(DecayQuantity quantity, const std::vector<double>& tau, const std::vector<double>& alpha,
                   const std::vector<double>& values, double target);

std::vector<DecayFit> decay_fit(const RunRecord& run, const IndexSet& index_set);

struct RelativeEntropy {
  std::vector<double> H;  // log((1+eta)^2 (1+eta+x eta_x))
  double H_x_norm = 0;
  double H_xtau_norm = 0;
  /// (int eta_x^2 + x^2 eta_xx^2) / int H_x^2; NaN when H_x vanishes.
  double lemma_ratio = 0;
};

RelativeEntropy relative_entropy(const PerturbationState& state, double eps_det = 1e-3);

}  // namespace vacuumflow

#endif
