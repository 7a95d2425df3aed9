#include "vacuumflow/cli.h"

#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <thread>

#include "vacuumflow/config.h"
#include "vacuumflow/diagnostics.h"
#include "vacuumflow/numerics.h"
#include "vacuumflow/record.h"

namespace vacuumflow {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kUsage = 1, kConfig = 2, kAborted = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read {}", path));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", p.string()));
  return out;
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VACUUMFLOW_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(fmt::format("--set expects key=v1,v2,..., got '{}'", text));
  SweepAxis a;
  a.key = text.substr(0, eq);
  std::stringstream rest(text.substr(eq + 1));
  std::string v;
  while (std::getline(rest, v, ',')) a.values.push_back(v);
  if (a.values.empty()) throw ConfigError(fmt::format("--set {} has no values", a.key));
  return a;
}

std::string summary_numbers(const RunRecord& rec) {
  const SeriesRow last = rec.series.empty() ? SeriesRow{} : rec.series.back();
  const auto mon = entropy_monitor(rec);
  return fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", last.tau,
                     last.sup_eta, last.sup_q, last.E0, last.E1, last.D0, last.D1, mon.min_increment, rec.E_in);
}

}  // namespace

std::optional<IndexSet> resolve_index_set(const SolverConfig& config) {
  if (config.r1 && config.sigma1) return compute_index_set(config.gamma, *config.r1, *config.sigma1);
  return default_index_set(config.gamma);
}

Model make_model(const SolverConfig& config) {
  const auto profile = build_density_profile(config.profile, config.varrho, config.scale, config.gamma, config.N);
  return Model(config, profile, pressure_profile(profile, config.delta));
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free-boundary viscous flow: self-similar expansion and perturbation runs", "vacuumflow"};
  app.require_subcommand(1);

  // selfsim
  auto* selfsim = app.add_subcommand("selfsim", "integrate the scale factor and write alpha and profile CSVs");
  double ss_delta = 1, ss_gamma = 1.5, ss_alpha0 = 1, ss_alpha1 = 1, ss_end = 10, ss_tol = 1e-8;
  std::string ss_coord = "t", ss_out, ss_profile = "power";
  double ss_varrho = 1, ss_scale = 1, ss_cnu = 1, ss_sbar = 0;
  int ss_N = 256;
  selfsim->add_option("--delta", ss_delta, "delta")->capture_default_str();
  selfsim->add_option("--gamma", ss_gamma, "adiabatic exponent")->capture_default_str();
  selfsim->add_option("--alpha0", ss_alpha0, "alpha at time 0")->capture_default_str();
  selfsim->add_option("--alpha1", ss_alpha1, "d alpha / dt at time 0")->capture_default_str();
  selfsim->add_option("--end", ss_end, "final t or tau")->capture_default_str();
  selfsim->add_option("--tol", ss_tol, "integrator tolerance")->capture_default_str();
  selfsim->add_option("--coord", ss_coord, "t or tau")->check(CLI::IsMember({"t", "tau"}))->capture_default_str();
  selfsim->add_option("--profile", ss_profile, "power, constant or entropy_bounded")->capture_default_str();
  selfsim->add_option("--varrho", ss_varrho, "vacuum exponent")->capture_default_str();
  selfsim->add_option("--scale", ss_scale, "density amplitude")->capture_default_str();
  selfsim->add_option("--N", ss_N, "grid cells")->capture_default_str();
  selfsim->add_option("--c-nu", ss_cnu, "entropy prefactor")->capture_default_str();
  selfsim->add_option("--s-bar", ss_sbar, "entropy offset")->capture_default_str();
  selfsim->add_option("--out", ss_out, "directory for alpha.csv and profile.csv (default: alpha CSV on stdout)");

  // indices
  auto* indices = app.add_subcommand("indices", "regime table with feasibility witnesses");
  std::vector<double> ix_gamma;
  int ix_grid = 200;
  indices->add_option("--gamma", ix_gamma, "one or more gamma values")->required();
  indices->add_option("--grid", ix_grid, "scan resolution per axis")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "evolve a perturbation and persist the run record");
  std::string sim_config, sim_out = "run";
  simulate->add_option("--config", sim_config, "config file")->required();
  simulate->add_option("--out", sim_out, "run directory")->capture_default_str();

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "energy report, decay fits and entropy monitor of a run");
  std::string dg_run, dg_out;
  diagnose->add_option("--run", dg_run, "run directory")->required();
  diagnose->add_option("--out", dg_out, "directory for energy.csv and decay.csv (default: the run directory)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a grid of configs concurrently");
  std::string sw_config, sw_out = "sweep";
  std::vector<std::string> sw_sets;
  sweep->add_option("--config", sw_config, "base config file")->required();
  sweep->add_option("--set", sw_sets, "key=v1,v2,... (repeatable; the grid is their product)");
  sweep->add_option("--out", sw_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*selfsim) {
      const auto traj = ss_coord == "t" ? integrate_alpha_t(ss_delta, ss_gamma, ss_alpha0, ss_alpha1, ss_end, ss_tol)
                                        : integrate_alpha_tau(ss_delta, ss_gamma, ss_alpha0, ss_alpha1, ss_end, ss_tol);
      if (ss_out.empty()) {
        write_alpha_csv(out, traj);
        return kOk;
      }
      fs::create_directories(ss_out);
      auto a = open_out(fs::path(ss_out) / "alpha.csv");
      write_alpha_csv(a, traj);
      const auto prof = build_density_profile(parse_profile_kind(ss_profile), ss_varrho, ss_scale, ss_gamma, ss_N);
      const auto pres = pressure_profile(prof, ss_delta);
      const auto ent = entropy_profile(prof, pres, ss_cnu, ss_sbar, ss_gamma);
      auto p = open_out(fs::path(ss_out) / "profile.csv");
      write_profile_csv(p, prof, pres, ent);
      out << fmt::format("samples = {}\ninvariant_drift = {:.3g}\nentropy_bounded = {}\n", traj.samples.size(),
                         traj.max_invariant_drift(), ent.bounded);
      return kOk;
    }

    if (*indices) {
      out << "gamma,I0,I1,I2,case1,case2,case3,r1,sigma1\n";
      for (double g : ix_gamma) {
        if (!(g > 1)) throw ConfigError(fmt::format("gamma must exceed 1, got {}", g));
        const Regime r = regime(g);
        std::array<FeasibleWindow, 3> w{feasible_window(g, 1, ix_grid), feasible_window(g, 2, ix_grid),
                                        feasible_window(g, 3, ix_grid)};
        std::string witness = ",";
        for (int k = 2; k >= 0; --k) {
          if (w[k].nonempty) {
            witness = fmt::format("{:.6g},{:.6g}", w[k].witness->r1, w[k].witness->sigma1);
            break;
          }
        }
        out << fmt::format("{:.17g},{},{},{},{},{},{},{}\n", g, r.I0, r.I1, r.I2, w[0].nonempty, w[1].nonempty,
                           w[2].nonempty, witness);
      }
      return kOk;
    }

    if (*simulate) {
      SolverConfig cfg = parse_config(read_file(sim_config));
      const Model model = make_model(cfg);
      const RunRecord rec = run(model, resolve_index_set(cfg));
      write_run_record(sim_out, rec, model.pressure());
      const SeriesRow& last = rec.series.back();
      out << fmt::format("status = {}\n", to_string(rec.status));
      if (!rec.message.empty()) out << "message = " << rec.message << '\n';
      out << fmt::format("tau = {:.17g}\nsup_eta = {:.17g}\nsup_zeta = {:.17g}\nE_in = {:.17g}\n", last.tau,
                         last.sup_eta, sup_norm(rec.snapshots.back().zeta), rec.E_in);
      return rec.status == RunStatus::completed ? kOk : kAborted;
    }

    if (*diagnose) {
      const RunRecord rec = read_run_record(dg_run);
      const Model model = make_model(rec.config);
      const auto idx = resolve_index_set(rec.config);
      if (!idx || !idx->case1) throw ConfigError("no index set satisfying case 1 for this gamma");
      const EnergyReport rep = energy_report(rec, *idx, model);
      const fs::path dir = dg_out.empty() ? fs::path(dg_run) : fs::path(dg_out);
      fs::create_directories(dir);
      auto e = open_out(dir / "energy.csv");
      write_energy_csv(e, rep);
      out << fmt::format("E0 = {:.17g}\nE1 = {:.17g}\nD0 = {:.17g}\nD1 = {:.17g}\nE_in = {:.17g}\n", rep.E0, rep.E1,
                         rep.D0, rep.D1, rep.E_in);
      const auto mon = entropy_monitor(rec);
      out << fmt::format("entropy_min_increment = {:.17g}\nentropy_violations = {}\n", mon.min_increment,
                         mon.violation_count);
      auto d = open_out(dir / "decay.csv");
      d << "quantity,fitted_exponent,target,tau_lo,tau_hi,r_squared\n";
      try {
        for (const auto& f : decay_fit(rec, *idx)) {
          d << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", to_string(f.quantity), f.fitted_exponent,
                           f.target, f.tau_lo, f.tau_hi, f.r_squared);
          out << fmt::format("decay_{} = {:.6g}\n", to_string(f.quantity), f.fitted_exponent);
        }
      } catch (const std::runtime_error& ex) {
        out << "decay_fit = unavailable (" << ex.what() << ")\n";
      }
      return kOk;
    }

    if (*sweep) {
      const SolverConfig base = parse_config(read_file(sw_config));
      std::vector<SweepAxis> axes;
      for (const auto& s : sw_sets) axes.push_back(parse_axis(s));
      std::vector<SolverConfig> configs{base};
      std::vector<std::vector<std::string>> labels{{}};
      for (const auto& axis : axes) {
        std::vector<SolverConfig> next;
        std::vector<std::vector<std::string>> next_labels;
        for (std::size_t k = 0; k < configs.size(); ++k) {
          for (const auto& v : axis.values) {
            SolverConfig c = configs[k];
            set_config_value(c, axis.key, v);
            validate_config(c);
            next.push_back(c);
            auto l = labels[k];
            l.push_back(v);
            next_labels.push_back(std::move(l));
          }
        }
        configs = std::move(next);
        labels = std::move(next_labels);
      }

      fs::create_directories(sw_out);
      std::vector<std::string> rows(configs.size());
      std::vector<int> codes(configs.size(), kOk);
      std::atomic<std::size_t> next_job{0};
      auto worker = [&] {
        for (std::size_t k = next_job++; k < configs.size(); k = next_job++) {
          const std::string name = fmt::format("run_{:04d}", k);
          std::string row = name;
          for (const auto& l : labels[k]) row += "," + l;
          try {
            const Model model = make_model(configs[k]);
            const RunRecord rec = run(model, resolve_index_set(configs[k]));
            write_run_record(fs::path(sw_out) / name, rec, model.pressure());
            row += fmt::format(",{},{}", to_string(rec.status), summary_numbers(rec));
            if (rec.status != RunStatus::completed) codes[k] = kAborted;
          } catch (const std::exception& ex) {
            std::string msg = ex.what();
            for (auto& ch : msg)
              if (ch == ',' || ch == '\n') ch = ';';
            row += ",error," + msg;
            codes[k] = kConfig;
          }
          rows[k] = row;
        }
      };
      std::vector<std::thread> pool;
      const unsigned n = worker_count(configs.size());
      for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();

      std::string header = "run";
      for (const auto& a : axes) header += "," + a.key;
      header += ",status,tau,sup_eta,sup_q,E0,E1,D0,D1,Z_min_increment,E_in";
      auto summary = open_out(fs::path(sw_out) / "summary.csv");
      summary << header << '\n';
      out << header << '\n';
      for (const auto& r : rows) {
        summary << r << '\n';
        out << r << '\n';
      }
      int code = kOk;
      for (int c : codes) code = std::max(code, c);
      return code;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const RecordError& e) {
    err << "record error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kAborted;
  }
  return kUsage;
}

}  // namespace vacuumflow
