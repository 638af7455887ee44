#pragma once

#include "kslab/evolve.hpp"
#include "kslab/grid.hpp"

#include <cstdint>
#include <vector>

namespace kslab {

// Incompressible velocity state: dim components on a periodic grid evolving
// under v_t = -(-Lap)^m v - P (v.grad) v with the Leray-Hopf projector P.
struct FlowState {
    VectorField v;
    int m = 1;
    double time = 0.0;

    const Grid& grid() const { return v.at(0).grid(); }
    void validate() const;
};

// Fourier-space projection u - xi (xi . u)/|xi|^2; the zero mode is untouched.
VectorField leray_project(const VectorField& u);

Field divergence(const VectorField& u);

// -(-Lap)^m v - P (v.grad) v with dealiased advection. Throws if the input
// divergence exceeds tolerance.
VectorField rhs_flow(const FlowState& state);

struct FlowConfig {
    FlowState state0;
    double dt = 1e-3;
    double t_end = 1.0;
    std::vector<std::string> monitors; // energy, enstrophy, sup_norm, l2, lp_<p>, energy_residual, mean
    double blowup_threshold = 1e6;
    int snapshot_every = 0;
    std::uint64_t seed = 0; // recorded in the trajectory for reproducibility
    void validate() const;
};

// Exponential treatment of the dissipation symbol, explicit midpoint for the
// projected advection, projection applied every step.
Trajectory integrate_flow(const FlowConfig& cfg);
FlowState flow_step(const FlowState& state, double dt);

struct RegularityReport {
    double sup_lp = 0.0;     // sup_t |v(t)|_p
    double p0 = 0.0;         // N/(2m-1)
    bool p_exceeds_p0 = false;
    std::vector<double> serrin_t;   // evaluation times
    std::vector<double> serrin_val; // (1/(T-t)) int_t^T int |v|^3
};

// Consumes a trajectory carrying the lp_<p> monitor (and lp_3 for the Serrin
// integral) for a user-supplied horizon T.
RegularityReport regularity_monitor(const Trajectory& traj, double p, int m, int N, double T);

// Zero-mean pressure making the projected system match the primitive one:
// -Lap p = div((v.grad)v).
Field recover_pressure(const FlowState& state);

// Canonical test flows.
VectorField taylor_green(const Grid& g);
VectorField random_solenoidal(const Grid& g, std::uint64_t seed, int kband, double amplitude);

} // namespace kslab
