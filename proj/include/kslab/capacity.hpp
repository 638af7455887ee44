#pragma once

#include "kslab/grid.hpp"

#include <optional>
#include <span>
#include <vector>

namespace kslab {

// Boundary traces of v at x = 0 for the weighted-functional machinery; the
// IBVP the certificates speak about carries its boundary data as a functional
// constraint, so traces are supplied rather than read off a solver state.
struct BoundaryTraces {
    double v = 0.0;
    double dv = 0.0;
    double d2v = 0.0;
    double d3v = 0.0;
};

struct CapacityReport {
    double J = 0.0;        // int_0^L v |x-L|^lambda dx
    double B0 = 0.0;
    double C_lambda = 0.0;
    double H_lambda = 0.0; // B0 - C_lambda
    double kappa = 0.0;
};

double capacity_kappa(double lambda, double L);
double capacity_c_lambda(double lambda, double L);
double capacity_b0(const BoundaryTraces& tr, double lambda, double L);
// Weighted quadrature of v against |x-L|^lambda over (0, min(L, domain)).
double capacity_weighted_integral(const Field& v, double lambda, double L);

CapacityReport capacity_functional(const Field& v, const BoundaryTraces& tr, double lambda, double L);

enum class BlowupCase { Strict, Zero, Negative };

struct BlowupCertificate {
    double lambda = 0.0;
    double L = 0.0;
    double kappa = 0.0;
    double c_lambda = 0.0;
    double J0 = 0.0;
    BlowupCase kind = BlowupCase::Strict;
    double a = 0.0; // sqrt(|H|); 0 in the Zero case
    double t_infinity_bound = 0.0;
};

// Closed-form lower envelopes of J and the associated divergence-time bounds
// for the Riccati inequality J' >= kappa^2 J^2 + H:
//   Strict   (H = a^2 > 0):           J >= (a/k) tan(a k t + c0), c0 = atan(kJ0/a)
//   Zero     (H = 0, J0 > 0):         J >= J0 / (1 - J0 k^2 t)
//   Negative (H = -a^2, J0 > a/k):    J >= (a/k)(1 + c0 e^{2akt})/(1 - c0 e^{2akt})
double closed_form_envelope(BlowupCase c, double J0, double kappa, double a, double t);
double closed_form_t_infinity(BlowupCase c, double J0, double kappa, double a);

// Grid search over (lambda, L) with one refinement pass; returns the
// certificate minimizing the divergence-time bound, if any point certifies.
std::optional<BlowupCertificate> certify_blowup(const Field& v0, const BoundaryTraces& tr,
                                                double lambda_lo, double lambda_hi,
                                                double L_lo, double L_hi, int lattice = 64);

struct RiccatiResult {
    std::vector<double> t;
    std::vector<double> J;
    bool diverged = false;
    double t_div_low = 0.0, t_div_high = 0.0;
};

// Fourth-order integration of J' = kappa^2 J^2 + H (H = +a^2, 0, -a^2) with
// step 1e-5 * t_guess; the independent oracle for the closed forms above.
RiccatiResult riccati_oracle(BlowupCase c, double J0, double kappa, double a,
                             std::span<const double> t_grid, double t_guess);

} // namespace kslab
