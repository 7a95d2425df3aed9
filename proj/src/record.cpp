#include "vacuumflow/record.h"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "vacuumflow/config.h"
#include "vacuumflow/diagnostics.h"

namespace vacuumflow {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSeriesHeader =
    "tau,alpha,alpha_tau,sup_eta,sup_xetax,sup_etatau,sup_xetaxtau,sup_B,Z_min_increment,E0,E1,D0,D1,sup_q";
constexpr std::string_view kSnapshotHeader = "x,eta,v,zeta,B,q,eta_tt";
constexpr std::string_view kIndexHeader = "file,tau,alpha,alpha_tau,has_acceleration";

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw RecordError(fmt::format("cannot write {}", p.string()));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw RecordError(fmt::format("missing {}", p.string()));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  auto out = split(text, '\n');
  if (!out.empty() && out.back().empty()) out.pop_back();
  for (auto& l : out)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  return out;
}

bool parse_number(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

// Rows of a numeric CSV with the expected header; errors name the first bad row.
std::vector<std::vector<double>> read_table(const fs::path& p, std::string_view header, std::size_t first_numeric = 0) {
  const std::string text = slurp(p);
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != header) throw RecordError(fmt::format("{}: unexpected header", p.string()));
  const std::size_t cols = split(header, ',').size();
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto fields = split(lines[k], ',');
    std::vector<double> row(cols, 0.0);
    bool ok = fields.size() == cols;
    for (std::size_t j = first_numeric; ok && j < cols; ++j) ok = parse_number(fields[j], row[j]);
    if (!ok) throw RecordError(fmt::format("{}: malformed row {} (line {})", p.string(), k, k + 1));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void write_run_record(const fs::path& dir, const RunRecord& rec, const PressureProfile& pressure) {
  std::error_code ec;
  fs::create_directories(dir / "snapshots", ec);
  if (ec) throw RecordError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));

  open_out(dir / "config.txt") << emit_config(rec.config);

  {
    auto out = open_out(dir / "series.csv");
    out << kSeriesHeader << '\n';
    for (const auto& r : rec.series) {
      out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", g17(r.tau), g17(r.alpha), g17(r.alpha_tau),
                         g17(r.sup_eta), g17(r.sup_xetax), g17(r.sup_etatau), g17(r.sup_xetaxtau), g17(r.sup_B),
                         g17(r.Z_min_increment), g17(r.E0), g17(r.E1), g17(r.D0), g17(r.D1), g17(r.sup_q));
    }
  }

  auto index = open_out(dir / "snapshots" / "index.csv");
  index << kIndexHeader << '\n';
  for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
    const auto& s = rec.snapshots[k];
    const std::string name = fmt::format("{:06d}.csv", k);
    index << fmt::format("{},{},{},{},{}\n", name, g17(s.tau), g17(s.alpha), g17(s.alpha_tau),
                         s.has_acceleration ? 1 : 0);
    const int N = s.cells();
    BField B;
    B.nodal.assign(N + 1, std::numeric_limits<double>::quiet_NaN());
    try {
      B = compute_B(s, 0.0);
    } catch (const DegenerateError&) {
    }
    const QField q = q_field(s, pressure, rec.config.gamma);
    auto out = open_out(dir / "snapshots" / name);
    out << kSnapshotHeader << '\n';
    for (int i = 0; i <= N; ++i) {
      const double x = i == N ? 1.0 : static_cast<double>(i) / N;
      const double qi = q.valid[i] ? q.q[i] : std::numeric_limits<double>::quiet_NaN();
      const double tt = s.has_acceleration ? s.eta_tt[i] : 0.0;
      out << fmt::format("{},{},{},{},{},{},{}\n", g17(x), g17(s.eta[i]), g17(s.v[i]), g17(s.zeta[i]),
                         g17(B.nodal[i]), g17(qi), g17(tt));
    }
  }

  auto status = open_out(dir / "status.txt");
  std::string message = rec.message;
  for (auto& ch : message)
    if (ch == '\n') ch = ' ';
  status << "format = " << kRecordFormat << '\n'
         << "status = " << to_string(rec.status) << '\n'
         << "message = " << message << '\n'
         << "E_in = " << g17(rec.E_in) << '\n';
}

RunRecord read_run_record(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw RecordError(fmt::format("{} is not a run directory", dir.string()));
  RunRecord rec;

  const std::string status = slurp(dir / "status.txt");
  bool format_ok = false, have_status = false;
  for (auto line : lines_of(status)) {
    const auto eq = line.find(" = ");
    if (eq == std::string_view::npos) throw RecordError("status.txt: malformed line");
    const auto key = line.substr(0, eq), value = line.substr(eq + 3);
    if (key == "format") {
      if (value != kRecordFormat)
        throw RecordError(fmt::format("status.txt: format '{}' is not {}", value, kRecordFormat));
      format_ok = true;
    } else if (key == "status") {
      try {
        rec.status = parse_run_status(value);
      } catch (const std::invalid_argument& e) {
        throw RecordError(fmt::format("status.txt: {}", e.what()));
      }
      have_status = true;
    } else if (key == "message") {
      rec.message = std::string(value);
    } else if (key == "E_in") {
      if (!parse_number(value, rec.E_in)) throw RecordError("status.txt: malformed E_in");
    }
  }
  if (!format_ok) throw RecordError(fmt::format("status.txt: missing format line (expected {})", kRecordFormat));
  if (!have_status) throw RecordError("status.txt: missing status");

  try {
    rec.config = parse_config(slurp(dir / "config.txt"));
  } catch (const ConfigError& e) {
    throw RecordError(fmt::format("config.txt: {}", e.what()));
  }

  for (const auto& r : read_table(dir / "series.csv", kSeriesHeader)) {
    SeriesRow s{r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8], r[9], r[10], r[11], r[12], r[13]};
    rec.series.push_back(s);
  }

  if (!fs::is_directory(dir / "snapshots")) throw RecordError(fmt::format("{}: missing snapshots directory", dir.string()));
  const std::string index_text = slurp(dir / "snapshots" / "index.csv");
  const auto index_lines = lines_of(index_text);
  if (index_lines.empty() || index_lines[0] != kIndexHeader) throw RecordError("snapshots/index.csv: unexpected header");
  for (std::size_t k = 1; k < index_lines.size(); ++k) {
    const auto f = split(index_lines[k], ',');
    PerturbationState s;
    double acc = 0;
    if (f.size() != 5 || !parse_number(f[1], s.tau) || !parse_number(f[2], s.alpha) ||
        !parse_number(f[3], s.alpha_tau) || !parse_number(f[4], acc))
      throw RecordError(fmt::format("snapshots/index.csv: malformed row {} (line {})", k, k + 1));
    s.has_acceleration = acc != 0;
    const auto rows = read_table(dir / "snapshots" / std::string(f[0]), kSnapshotHeader);
    if (rows.size() != static_cast<std::size_t>(rec.config.N) + 1)
      throw RecordError(fmt::format("snapshots/{}: expected {} rows, found {}", f[0], rec.config.N + 1, rows.size()));
    for (const auto& r : rows) {
      s.eta.push_back(r[1]);
      s.v.push_back(r[2]);
      s.zeta.push_back(r[3]);
      s.eta_tt.push_back(r[6]);
    }
    if (!s.has_acceleration) s.eta_tt.clear();
    if (!rec.snapshots.empty() && !(s.tau > rec.snapshots.back().tau))
      throw RecordError(fmt::format("snapshots/index.csv: tau not increasing at row {}", k));
    rec.snapshots.push_back(std::move(s));
  }
  return rec;
}

}  // namespace vacuumflow
