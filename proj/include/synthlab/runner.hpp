#pragma once

#include "synthlab/config.hpp"
#include "synthlab/report.hpp"
#include "synthlab/window.hpp"

namespace synthlab {

// Shared default window (smooth bump profile), built once per process.
const Window& default_window();

// Executes one experiment command and assembles its report. Throws
// ArgumentError / ResolutionError / HypothesisError on invalid inputs; the
// caller maps those to exit code 1 and assertion failures to exit code 2.
Report run_experiment(const ExperimentConfig& cfg);

// Runs and writes <out_dir>/<basename>.{csv,jsonl}; returns the process exit
// code (0 success, 2 assertion failure).
int run_and_write(const ExperimentConfig& cfg);

} // namespace synthlab
