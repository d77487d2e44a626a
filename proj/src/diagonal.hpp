#pragma once

#include <span>
#include <vector>

#include "ode.hpp"
#include "series.hpp"

namespace hgm::diagonal {

using series::HypParams;

// Companion-system derivative for f(y) = F(y,y):  s = (f, f', f'').
void diag_rhs_m2(double y, std::span<const double> s, std::span<double> ds, const HypParams& p);

// Same for f(y) = F(y,y,y):  s = (f, f', f'', f''').
void diag_rhs_m3(double y, std::span<const double> s, std::span<double> ds, const HypParams& p);

struct DiagonalSolution {
    std::vector<double> state; // exp(-shift*y) (f, f', ...), renormalized
    double log_scale = 0.0;    // accumulated renormalization
};

// Integrate the companion system from a series-initialized start point y0 to
// y_target, carrying s = exp(-shift*y) (f, f', ...).  The plain f and its
// derivatives are state * exp(log_scale + shift*y_target).
DiagonalSolution solve_diagonal(const HypParams& p, int m, double y_target,
                                const ode::IntegrationPlan& plan, double shift,
                                double y0 = 1e-2, int degree = 0);

// F(y I_m) for m in {2, 3} via the restricted ordinary differential equation.
double hyp1f1_diagonal(const HypParams& p, double y, int m, const ode::IntegrationPlan& plan);

// F(y I_m) for any dimension: the restricted equation for m = 2 and 3, the
// plain series for m = 1 and wherever it still converges, and otherwise a
// perturbed off-diagonal evaluation (relative spread delta, single run);
// *approximate is set on that last path.  Spreads much below 1e-3 are
// numerically useless there: the near-tied coefficients amplify roundoff.
double hyp1f1_equal_args(const HypParams& p, double y, int m, double delta = 1e-3,
                         bool* approximate = nullptr);

} // namespace hgm::diagonal
