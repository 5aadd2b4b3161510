#pragma once

#include <iosfwd>

#include "qwork/config.hpp"
#include "qwork/sweep.hpp"

namespace qwork::experiments {

inline constexpr const char* version = "0.1.0";

// Runs one experiment over its grid (grid points dispatched to the worker
// pool, rows assembled in grid order) and returns the labeled table with
// the resolved configuration embedded as metadata.
sweep::SweepResult run(const config::ExperimentConfig& cfg, config::Experiment e);

// Runs the library invariant suite; prints one PASS/FAIL line per property
// and returns true when all hold.
bool selftest(std::ostream& out);

}  // namespace qwork::experiments
