#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hgm::ode {

enum class Method { euler, rk4, rk4_adaptive };

struct IntegrationPlan {
    double x_start = 0.0;
    double x_end = 0.0;
    double step = 0.0;    // fixed-step methods
    double rel_tol = 0.0; // adaptive method, in (0, 1e-2]
    Method method = Method::rk4;

    void validate() const;
};

using Rhs = std::function<void(double x, std::span<const double> v, std::span<double> dv)>;

// Advance v from x_start to x_end.  Throws NumericalError with the offending
// x if the state stops being finite.
std::vector<double> integrate(const Rhs& rhs, std::span<const double> v0,
                              const IntegrationPlan& plan);

// Snapshots at the given sorted grid points (integration stops exactly on
// each of them).  An empty grid yields an empty trace.
std::vector<std::pair<double, std::vector<double>>>
integrate_with_trace(const Rhs& rhs, std::span<const double> v0, const IntegrationPlan& plan,
                     std::span<const double> grid);

} // namespace hgm::ode
