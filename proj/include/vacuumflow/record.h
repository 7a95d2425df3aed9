#ifndef VACUUMFLOW_RECORD_H
#define VACUUMFLOW_RECORD_H

#include <filesystem>
#include <stdexcept>

#include "vacuumflow/solver.h"

namespace vacuumflow {

struct RecordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kRecordFormat = "vacuumflow-record-1";

/// Layout: config.txt, series.csv, snapshots/index.csv, snapshots/NNNNNN.csv
/// (x, eta, v, zeta, B, q, eta_tt) and status.txt. Numbers use 17 significant
/// digits so that reading back reproduces every double exactly.
void write_run_record(const std::filesystem::path& dir, const RunRecord& record, const PressureProfile& pressure);

RunRecord read_run_record(const std::filesystem::path& dir);

}  // namespace vacuumflow

#endif
