#ifndef NARLAB_RUNNER_HPP
#define NARLAB_RUNNER_HPP

#include <string>

#include "narlab/config.hpp"
#include "narlab/report_json.hpp"

namespace narlab {

struct RunOutput {
    nlohmann::ordered_json report;
    std::string trace_csv;  // empty unless a trace was requested and produced
    bool pass = false;
};

// Executes one experiment; deterministic for a fixed config (including seed).
RunOutput execute_experiment(const ExperimentConfig& cfg, bool want_trace);

// Writes <out_dir>/report.json (and trace.csv with --trace). Returns 0 when
// all requested verdicts pass, 2 on a verdict failure; execution errors throw
// (the CLI maps them to exit 1).
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, bool want_trace);

}  // namespace narlab

#endif
