#pragma once

#include <string>

#include "encal/scenario.hpp"
#include "encal/validate.hpp"

namespace encal {

// Command implementations behind the CLI. Each writes CSV files into `outdir`
// and returns a process exit code (0 on success, 4 on validation failure).
// Parse/semantic/analytical errors propagate as exceptions.

// Analytical bounds only: writes bounds.csv with columns metric,x,value.
int cmd_bounds(const Scenario& scenario, const std::string& outdir);

// Monte-Carlo validation: writes validate.csv (plus replication-0 traces when
// dump_traces is set).
int cmd_validate(const Scenario& scenario, const std::string& outdir, bool dump_traces,
                 unsigned threads = 0);

// One replication of every trace, written as trace_*.csv.
int cmd_simulate(const Scenario& scenario, const std::string& outdir);

// Long-format analytical + empirical series for external plotting:
// plotdata.csv with columns metric,series,x,value.
int cmd_plotdata(const Scenario& scenario, const std::string& outdir, unsigned threads = 0);

}  // namespace encal
