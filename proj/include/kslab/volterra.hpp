#pragma once

#include <vector>

namespace kslab {

struct VolterraResult {
    double beta = 0.0;          // (4m - 2 - N(p-1)) / 4m
    bool supercritical = false; // beta <= 0: the bounded-regime hypothesis fails
    std::vector<double> t;
    std::vector<double> V;     // solution of the weighted Gronwall equality
    std::vector<double> V_hat; // doubly exponential supersolution
    bool bounded_by_hat = false;
    bool monotone = false;
};

// Solves V(t) = 1 + int_0^t e^{(p-1)s/4} (t-s)^{beta-1} V(s) ds by product
// integration of the weakly singular kernel (piecewise-linear in the smooth
// factor, exact moments of (t-s)^{beta-1}), and compares against
// V_hat(t) = exp{ [4/(beta(p-1)) + eps] t^beta e^{(p-1)t/4} }.
VolterraResult volterra_bound(double p, int m, int N, double t_end, int steps = 1200,
                              double eps = 0.01);

} // namespace kslab
