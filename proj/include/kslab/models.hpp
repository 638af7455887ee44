#pragma once

#include "kslab/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kslab {

// v_t = L v + N(v) with
//   KseIbvp:       L = -D^4 - D^2              N = (1/2) D(v^2)        (interval)
//   Mkse:          L = -(-Lap)^{2l} + (-Lap)^l N = B1(|v|^p)
//   MkseZeroOrder: L = -(-Lap)^m + 1/4         N = B1(|v|^p)
//   NonDivergent:  L = -(-Lap)^m               N = -|v|^{p-1} v
//   PureDivergent: L = -(-Lap)^m               N = B1(|v|^p)
//   Dispersion3:   L = -(-Lap)^m               N = -Lap B1(|v|^p)
//   CahnHilliard:  L = -Lap^2                  N = -Lap(|v|^{p-1} v)
// where B1(u) = (1/p) sum_k d_k D_k u.
enum class Family {
    KseIbvp,
    Mkse,
    MkseZeroOrder,
    NonDivergent,
    PureDivergent,
    Dispersion3,
    CahnHilliard,
};

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& s);

struct ModelSpec {
    Family family = Family::Mkse;
    int l = 1;                  // Mkse diffusion half-order, m = 2l
    int m = 2;                  // diffusion order where used directly
    double p = 2.0;
    std::vector<double> drift;  // d_k per axis; empty means all ones
    BoundaryKind bc = BoundaryKind::Navier; // KseIbvp only

    int diffusion_order() const;
    double drift_coeff(int axis) const;
    void validate(const Grid& g) const;
};

Field rhs(const ModelSpec& spec, const Field& v);

// Linear symbol per spectral mode on a periodic grid (KseIbvp: on the odd
// extension grid, where it coincides with Mkse l=1).
std::vector<double> linear_symbol_table(const ModelSpec& spec, const Grid& g);

// Dealiased nonlinear term N(v) on a periodic grid.
Field nonlinear_term(const ModelSpec& spec, const Field& v);

// The periodic working form of a spec: KseIbvp/Navier evolves its odd
// extension under the equivalent Mkse(l=1, p=2, d=1) right-hand side.
ModelSpec periodic_equivalent(const ModelSpec& spec);

// Impose the boundary constraints on an interval field: sine-series
// truncation for Navier, clamped endpoints for Dirichlet.
Field apply_bcs(const ModelSpec& spec, const Field& v);

enum class BurnettRange { Global, CriticalIncluded, CriticalOpen, Open };

struct ExponentReport {
    double p0_mkse = 0.0;                 // 1 + 2(2m-1)/N
    std::optional<double> p0_h1n3;        // 1 + 2(2m-3)/(N+2), needs 2m > 3
    std::optional<double> p_sobolev;      // (N+2m)/(N-2m), needs N > 2m
    double p0_burnett = 0.0;              // N/(2m-1)
    std::optional<double> gamma0;         // (2m-1)/(2N(p0-p)), needs p < p0_mkse
    BurnettRange burnett_range = BurnettRange::Open; // N vs 2(2m-1)
};

ExponentReport critical_exponents(int m, int N, std::optional<double> p = std::nullopt);

} // namespace kslab
