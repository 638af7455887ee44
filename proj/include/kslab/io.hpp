#pragma once

#include "kslab/evolve.hpp"
#include "kslab/grid.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kslab {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Snapshot format: header line "KSLB1", one decimal-text line holding
// dim, points per axis and extent per axis, then raw IEEE-754 binary64
// little-endian values in row-major order.
void save_snapshot(const Field& f, const std::string& path);
Field load_snapshot(const std::string& path);

// Checkpoint: a small text header (kind, step, time, seed, dissipation
// order, field count) followed by per-field origin lines and snapshot
// blocks. Restoring a run from it continues bit-identically.
struct Checkpoint {
    std::string kind = "run"; // run | flow
    long long step = 0;
    double time = 0.0;
    std::uint64_t seed = 0;
    int m = 0;
    double e0 = -1.0; // E(0) of the originating run, for resumed bound ratios
    std::vector<Field> fields;
};
void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path, const Grid& expected_grid);

// Monitor series as CSV: column t then the trajectory's monitor order;
// every double printed with %.17g so identical runs give identical bytes.
void write_monitor_csv(const Trajectory& traj, const std::string& path);

struct RunManifest {
    std::string digest;
    std::uint64_t seed = 0;
    std::string tool_version;
    int workers = 1;
    std::vector<std::string> outputs;
};
void write_manifest(const RunManifest& m, const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

extern const char* const kTOOL_VERSION;

} // namespace kslab
