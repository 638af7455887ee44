#pragma once

#include "kslab/config.hpp"

#include <string>
#include <vector>

namespace kslab {

// Exit codes: 0 Completed, 10 BlowUp, 20 NumericalFailure, 2 config error,
// 1 I/O or internal error.
enum ExitCode : int {
    kExitOk = 0,
    kExitIoError = 1,
    kExitConfigError = 2,
    kExitBlowUp = 10,
    kExitNumericalFailure = 20,
};

// Executes one action (run, flow, kernel, certify, volterra, rescale, sweep,
// check) against a parsed configuration, writing artifacts under output.dir.
int run_action(const std::string& action, ConfigMap cfg);

// Worker-pool size for sweeps: the KSLAB_WORKERS environment variable, or
// one worker per run when unset.
int sweep_workers(int run_count);

} // namespace kslab
