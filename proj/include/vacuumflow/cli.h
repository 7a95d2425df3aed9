#ifndef VACUUMFLOW_CLI_H
#define VACUUMFLOW_CLI_H

#include <iosfwd>
#include <optional>

#include "vacuumflow/indices.h"
#include "vacuumflow/solver.h"

namespace vacuumflow {

/// Explicit (r1, sigma1) from the config, otherwise the default witness.
std::optional<IndexSet> resolve_index_set(const SolverConfig& config);

Model make_model(const SolverConfig& config);

/// Exit codes: 0 success, 1 usage error, 2 config error, 3 aborted run.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vacuumflow

#endif
