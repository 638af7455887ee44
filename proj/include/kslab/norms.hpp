#pragma once

#include "kslab/grid.hpp"

#include <map>
#include <optional>
#include <span>

namespace kslab {

struct NormReport {
    double l2 = 0.0;
    double linf = 0.0;
    double mean = 0.0;
    std::map<double, double> lp;
    std::optional<double> hminus1; // present only for (near) zero-mean data
};

// Trapezoidal quadrature on the uniform grid; spectrally accurate for
// periodic data and for the sine basis on Navier intervals.
double integrate(const Field& f);
double lp_norm(const Field& f, double p);
double l2_norm(const Field& f);
double hminus1_norm(const Field& f);

// int |D^order f|^2 dx. Computed by Parseval on periodic and Navier-interval
// grids (derivative traces need not vanish at the interval ends, so the plain
// trapezoid would miss boundary terms there); FD quadrature for Dirichlet.
double deriv_energy(const Field& f, int order);

NormReport norms(const Field& f, std::span<const double> ps = {});

struct InterpolationReport {
    // |Dv|_2^2 <= |v|_2 |D^2 v|_2  (Cauchy-Schwarz chain)
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    // sup-embedding |v|_inf^2 <= c_inf |Dv|_2^2: the constant is never pinned
    // down, so the observed ratio is reported instead of asserted.
    double sup_sq = 0.0;
    double grad_energy = 0.0;
    double embedding_ratio = 0.0;
};

// Preconditions: interval grid with homogeneous BCs, or zero-mean periodic.
InterpolationReport interpolation_check(const Field& v);

} // namespace kslab
