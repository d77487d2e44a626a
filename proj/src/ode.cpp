#include "ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hgm::ode {

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x))
            return false;
    return true;
}

struct Stepper {
    const Rhs& rhs;
    size_t n;
    std::vector<double> k1, k2, k3, k4, tmp;

    explicit Stepper(const Rhs& r, size_t n_)
        : rhs(r), n(n_), k1(n_), k2(n_), k3(n_), k4(n_), tmp(n_) {}

    void euler(double x, double h, std::vector<double>& v) {
        rhs(x, v, k1);
        for (size_t i = 0; i < n; ++i)
            v[i] += h * k1[i];
    }

    void rk4(double x, double h, std::vector<double>& v) {
        rhs(x, v, k1);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = v[i] + 0.5 * h * k1[i];
        rhs(x + 0.5 * h, tmp, k2);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = v[i] + 0.5 * h * k2[i];
        rhs(x + 0.5 * h, tmp, k3);
        for (size_t i = 0; i < n; ++i)
            tmp[i] = v[i] + h * k3[i];
        rhs(x + h, tmp, k4);
        for (size_t i = 0; i < n; ++i)
            v[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
};

void check_finite(std::span<const double> v, double x) {
    if (!all_finite(v))
        throw NumericalError("non-finite state at x = " + std::to_string(x));
}

void integrate_fixed(const Rhs& rhs, std::vector<double>& v, double x0, double x1, double step,
                     bool use_rk4) {
    const double span = x1 - x0;
    if (span == 0.0)
        return;
    long long nsteps = std::max<long long>(1, static_cast<long long>(std::ceil(std::abs(span) / step)));
    const double h = span / static_cast<double>(nsteps);
    Stepper st(rhs, v.size());
    double x = x0;
    for (long long i = 0; i < nsteps; ++i) {
        if (use_rk4)
            st.rk4(x, h, v);
        else
            st.euler(x, h, v);
        x = (i + 1 == nsteps) ? x1 : x0 + h * static_cast<double>(i + 1);
        check_finite(v, x);
    }
}

// Step doubling: one full step against two half steps, error ~ |d|/15,
// advanced with the locally extrapolated value; PI step-size control.
void integrate_adaptive(const Rhs& rhs, std::vector<double>& v, double x0, double x1,
                        double rel_tol) {
    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    double h = span / 100.0;
    double x = x0;
    double prev_err = 1.0;
    Stepper st(rhs, v.size());
    std::vector<double> v1(v.size()), v2(v.size());
    const double hmin = span * 1e-14;
    int rejected_in_a_row = 0;

    while (dir * (x1 - x) > 0.0) {
        h = std::min(h, std::abs(x1 - x));
        if (h < hmin)
            throw NumericalError("adaptive step collapsed at x = " + std::to_string(x));
        v1 = v;
        st.rk4(x, dir * h, v1);
        v2 = v;
        st.rk4(x, dir * 0.5 * h, v2);
        st.rk4(x + dir * 0.5 * h, dir * 0.5 * h, v2);

        double err = 0.0, scale = 1e-300;
        for (size_t i = 0; i < v.size(); ++i) {
            err = std::max(err, std::abs(v1[i] - v2[i]));
            scale = std::max(scale, std::abs(v2[i]));
        }
        err /= 15.0 * rel_tol * scale;

        if (err <= 1.0 || rejected_in_a_row > 30) {
            x += dir * h;
            for (size_t i = 0; i < v.size(); ++i)
                v[i] = v2[i] + (v2[i] - v1[i]) / 15.0;
            check_finite(v, x);
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2) *
                         std::pow(std::max(prev_err, 1e-10), 0.08);
            h *= std::clamp(fac, 0.2, 5.0);
            prev_err = std::max(err, 1e-10);
            rejected_in_a_row = 0;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.25));
            ++rejected_in_a_row;
        }
    }
}

} // namespace

void IntegrationPlan::validate() const {
    if (!std::isfinite(x_start) || !std::isfinite(x_end) || x_start == x_end)
        throw InvalidArgument("IntegrationPlan: bad interval");
    if (method == Method::rk4_adaptive) {
        if (!(rel_tol > 0.0) || rel_tol > 1e-2)
            throw InvalidArgument("IntegrationPlan: rel_tol must be in (0, 1e-2]");
    } else if (!(step > 0.0)) {
        throw InvalidArgument("IntegrationPlan: step must be positive");
    }
}

std::vector<double> integrate(const Rhs& rhs, std::span<const double> v0,
                              const IntegrationPlan& plan) {
    plan.validate();
    std::vector<double> v(v0.begin(), v0.end());
    switch (plan.method) {
    case Method::euler:
        integrate_fixed(rhs, v, plan.x_start, plan.x_end, plan.step, false);
        break;
    case Method::rk4:
        integrate_fixed(rhs, v, plan.x_start, plan.x_end, plan.step, true);
        break;
    case Method::rk4_adaptive:
        integrate_adaptive(rhs, v, plan.x_start, plan.x_end, plan.rel_tol);
        break;
    }
    return v;
}

std::vector<std::pair<double, std::vector<double>>>
integrate_with_trace(const Rhs& rhs, std::span<const double> v0, const IntegrationPlan& plan,
                     std::span<const double> grid) {
    plan.validate();
    std::vector<std::pair<double, std::vector<double>>> out;
    if (grid.empty())
        return out;
    const double lo = std::min(plan.x_start, plan.x_end);
    const double hi = std::max(plan.x_start, plan.x_end);
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < lo || grid[i] > hi)
            throw InvalidArgument("integrate_with_trace: grid point outside the interval");
        if (i > 0 && grid[i] < grid[i - 1])
            throw InvalidArgument("integrate_with_trace: grid must be sorted");
    }

    std::vector<double> v(v0.begin(), v0.end());
    double x = plan.x_start;
    for (double g : grid) {
        if (g != x) {
            IntegrationPlan seg = plan;
            seg.x_start = x;
            seg.x_end = g;
            v = integrate(rhs, v, seg);
            x = g;
        }
        out.emplace_back(g, v);
    }
    return out;
}

} // namespace hgm::ode
