#include "diagonal.hpp"

#include <algorithm>
#include <cmath>

#include "pfaffian.hpp"

namespace hgm::diagonal {

void diag_rhs_m2(double y, std::span<const double> s, std::span<double> ds, const HypParams& p) {
    if (!(y > 0.0))
        throw SingularPoint("diag_rhs_m2: y must be positive");
    const double a = p.a, c = p.c;
    const double h2 = -3.0 * (c - 1.0 - y) / y - 2.0 / y;
    const double h1 = 4.0 * a / y - 2.0 * (c - y) * (c - 1.0 - y) / (y * y);
    const double h0 = 4.0 * a * (c - 1.0 - y) / (y * y);
    ds[0] = s[1];
    ds[1] = s[2];
    ds[2] = h2 * s[2] + h1 * s[1] + h0 * s[0];
}

void diag_rhs_m3(double y, std::span<const double> s, std::span<double> ds, const HypParams& p) {
    if (!(y > 0.0))
        throw SingularPoint("diag_rhs_m3: y must be positive");
    const double a = p.a, c = p.c;
    const double y2 = y * y, y3 = y2 * y;
    const double c3 = -6.0 * y3 + (6.0 * c - 4.0) * y2;
    const double c2 = 11.0 * y3 + (-10.0 * a - 22.0 * c + 18.0) * y2 +
                      (11.0 * c * c - 17.0 * c + 4.0) * y;
    const double c1 = -6.0 * y3 + (30.0 * a + 18.0 * c - 18.0) * y2 +
                      ((-30.0 * c + 34.0) * a - 18.0 * c * c + 34.0 * c - 12.0) * y +
                      6.0 * c * c * c - 16.0 * c * c + 10.0 * c;
    const double c0 = -18.0 * a * y2 + (9.0 * a * a + (36.0 * c - 51.0) * a) * y +
                      (-18.0 * c * c + 48.0 * c - 30.0) * a;
    ds[0] = s[1];
    ds[1] = s[2];
    ds[2] = s[3];
    ds[3] = -(c3 * s[3] + c2 * s[2] + c1 * s[1] + c0 * s[0]) / y3;
}

DiagonalSolution solve_diagonal(const HypParams& p, int m, double y_target,
                                const ode::IntegrationPlan& plan, double shift, double y0,
                                int degree) {
    if (m != 2 && m != 3)
        throw UnsupportedDimension("diagonal ODE only available for m = 2 or 3");
    if (!(y_target > 0.0))
        throw InvalidArgument("solve_diagonal: y must be positive");

    const int order = m + 1; // companion dimension
    if (degree <= 0) {
        std::vector<double> pt(m, std::min(y0, y_target));
        degree = series::auto_truncation_degree(p, pt, m);
    }

    DiagonalSolution sol;
    if (y_target <= y0) {
        sol.state = series::diagonal_series_state(p, m, y_target, degree, order - 1);
        for (double& v : sol.state)
            v *= std::exp(-shift * y_target);
        return sol;
    }

    sol.state = series::diagonal_series_state(p, m, y0, degree, order - 1);
    for (double& v : sol.state)
        v *= std::exp(-shift * y0);

    auto rhs = [&](double y, std::span<const double> s, std::span<double> ds) {
        // s = exp(-shift*y) v  =>  s' = (A(y) - shift I) s
        if (m == 2)
            diag_rhs_m2(y, s, ds, p);
        else
            diag_rhs_m3(y, s, ds, p);
        for (int i = 0; i < order; ++i)
            ds[i] -= shift * s[i];
    };

    const int nchunks = 64;
    const double chunk = (y_target - y0) / nchunks;
    double y = y0;
    ode::IntegrationPlan seg = plan;
    for (int ci = 0; ci < nchunks; ++ci) {
        double yn = (ci + 1 == nchunks) ? y_target : y0 + chunk * (ci + 1);
        seg.x_start = y;
        seg.x_end = yn;
        // y = 0 is a regular singular point of the restricted equation
        if (seg.method != ode::Method::rk4_adaptive)
            seg.step = std::min(plan.step, std::max(0.005 * y, 1e-3 * plan.step));
        sol.state = ode::integrate(rhs, sol.state, seg);
        y = yn;
        double norm = 0.0;
        for (double v : sol.state)
            norm = std::max(norm, std::abs(v));
        if (norm > 1e60 || (norm > 0.0 && norm < 1e-60)) {
            for (double& v : sol.state)
                v /= norm;
            sol.log_scale += std::log(norm);
        }
    }
    return sol;
}

double hyp1f1_diagonal(const HypParams& p, double y, int m, const ode::IntegrationPlan& plan) {
    if (m != 2 && m != 3)
        throw UnsupportedDimension("hyp1f1_diagonal: m must be 2 or 3");
    if (!(y > 0.0))
        throw InvalidArgument("hyp1f1_diagonal: y must be positive");
    auto sol = solve_diagonal(p, m, y, plan, 0.0);
    return sol.state[0] * std::exp(sol.log_scale);
}

double hyp1f1_equal_args(const HypParams& p, double y, int m, double delta, bool* approximate) {
    if (approximate)
        *approximate = false;
    if (m < 1)
        throw InvalidArgument("hyp1f1_equal_args: bad dimension");
    if (m == 1) {
        std::vector<double> pt{y};
        int k = series::auto_truncation_degree(p, pt, 1);
        if (y <= 25.0)
            return series::hyp1f1_series(p, pt, {k, 1});
        return std::exp(pfaffian::hyp1f1_hgm_log(p, pt, {}));
    }
    if (m == 2 || m == 3) {
        ode::IntegrationPlan plan;
        plan.method = ode::Method::rk4;
        plan.step = 1e-4;
        return hyp1f1_diagonal(p, y, m, plan);
    }
    // no restricted equation beyond m = 3: take the expansion when it still
    // converges at this radius, otherwise fall back to a perturbed
    // off-diagonal evaluation (approximate; spread reported via the flag)
    std::vector<double> diag_pt(m, y);
    bool capped = false;
    int k = series::auto_truncation_degree(p, diag_pt, m, 1e-13, &capped);
    if (!capped)
        return series::hyp1f1_series(p, diag_pt, {k, m});
    if (approximate)
        *approximate = true;
    std::vector<double> pt(m);
    for (int i = 0; i < m; ++i)
        pt[i] = y * (1.0 + i * delta);
    return std::exp(pfaffian::hyp1f1_hgm_log(p, pt, {}));
}

} // namespace hgm::diagonal
