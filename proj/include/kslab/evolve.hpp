#pragma once

#include "kslab/models.hpp"
#include "kslab/norms.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kslab {

struct RunConfig {
    ModelSpec spec;
    Field v0;
    double dt = 1e-3;
    double t_end = 1.0;
    int snapshot_every = 0;            // 0 = no snapshots
    double blowup_threshold = 1e6;
    std::vector<std::string> monitors; // e.g. sup_norm,l2,l2_bound_ratio,lp_3,hminus1,energy_residual,J_lambda
    double capacity_lambda = 8.0;      // weight exponent for the J_lambda monitor
    long long start_step = 0;          // resume offset: v0 is the state at start_step*dt
    double e0_override = -1.0;         // resumed runs carry E(0) of the original run
    void validate() const;
};

enum class Outcome { Completed, BlowUp, NumericalFailure };

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> monitor_names;            // column order
    std::map<std::string, std::vector<double>> series; // aligned with times
    std::vector<Field> snapshots;
    std::vector<double> snapshot_times;
    Outcome outcome = Outcome::Completed;
    double t_low = 0.0, t_high = 0.0; // blow-up bracket; failure time in t_high
    std::uint64_t seed = 0;           // recorded for reproducibility
    int workers = 1;
    VectorField final_state;          // last finite state (components for flows)

    const std::vector<double>& at(const std::string& name) const;
    bool has(const std::string& name) const { return series.count(name) > 0; }
};

// One Strang step: exact exponential of the full linear symbol, explicit
// midpoint for the nonlinear term (Crank-Nicolson linear half-steps for the
// Dirichlet finite-difference scheme). Deterministic in (spec, v, dt).
Field step(const ModelSpec& spec, const Field& v, double dt);

Trajectory integrate(const RunConfig& cfg);

struct L2GrowthReport {
    double max_ratio = 0.0; // max_t E(t) / (E(0) e^{t/2})
    double t_at_max = 0.0;
    bool ok = false;
};
L2GrowthReport l2_growth_check(const Trajectory& traj, double tol = 1e-6);

struct PicardResult {
    Field v;                   // final iterate at time t
    std::vector<double> diffs; // sup-norm of successive iterate differences
    bool diverged = false;
};

// Fixed-point iteration of the Duhamel integral form of the mKSE: the
// heat propagator applied to v0 plus product-integrated destabilizing and
// drift terms (left-endpoint rule on `subintervals` panels). Independent of
// the Strang stepper; used as a local oracle against it.
PicardResult picard_local_solve(const ModelSpec& spec, const Field& v0, double t, int iterations,
                                int subintervals = 64, bool include_destabilizing = true);

// Convenience used by runner and tests: evaluate the monitor set on a field.
std::vector<std::string> canonical_monitor_order(const std::vector<std::string>& requested);

} // namespace kslab
