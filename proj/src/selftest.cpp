#include "selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "diagonal.hpp"
#include "wishart.hpp"

namespace hgm::selftest {

namespace {

using series::HypParams;

struct Runner {
    const std::function<void(const std::string&)>& sink;
    int verbosity;
    int failed = 0;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        if (!ok)
            ++failed;
        if (!ok || verbosity > 0) {
            std::ostringstream os;
            os << (ok ? "[ok]   " : "[FAIL] ") << name;
            if (!detail.empty())
                os << "  (" << detail << ")";
            sink(os.str());
        }
    }

    void near(const std::string& name, double got, double want, double tol) {
        std::ostringstream os;
        os.precision(15);
        os << "got " << got << ", want " << want << ", tol " << tol;
        check(name, std::isfinite(got) && std::abs(got - want) <= tol, os.str());
    }
};

std::vector<double> random_point(std::mt19937& rng, int m, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> y(m);
    bool ok = false;
    while (!ok) {
        for (auto& v : y)
            v = u(rng);
        ok = true;
        for (int i = 0; i < m && ok; ++i)
            for (int j = i + 1; j < m; ++j)
                if (std::abs(y[i] - y[j]) < 1e-3)
                    ok = false;
    }
    return y;
}

} // namespace

int run(const std::function<void(const std::string&)>& sink, int verbosity) {
    Runner r{sink, verbosity};
    std::mt19937 rng(20130909);

    // partition counts against the first values of the counting sequence
    {
        const int expected[] = {1, 1, 2, 3, 5, 7, 11, 15, 22};
        bool ok = true;
        for (int k = 0; k <= 8; ++k)
            ok = ok && static_cast<int>(partitions::partitions_of(k, std::max(k, 1)).size()) ==
                           expected[k];
        r.check("partition counts k<=8", ok);
    }

    // zonal coefficient tables for k <= 3
    {
        auto c2 = series::zonal_to_monomial_coeffs(2, 2);
        auto c3 = series::zonal_to_monomial_coeffs(3, 3);
        bool ok = c2[0][0] == 1 && c2[0][1] == Rational(2, 3) && c2[1][0] == 0 &&
                  c2[1][1] == Rational(4, 3);
        ok = ok && c3[0][0] == 1 && c3[0][1] == Rational(3, 5) && c3[0][2] == Rational(2, 5) &&
             c3[1][1] == Rational(12, 5) && c3[1][2] == Rational(18, 5) && c3[2][2] == 2 &&
             c3[1][0] == 0 && c3[2][0] == 0 && c3[2][1] == 0;
        r.check("zonal->monomial tables k<=3", ok);
    }

    // normalization: sum_kappa C_kappa(y) = (sum y)^k
    {
        bool ok = true;
        for (int k = 1; k <= 5 && ok; ++k) {
            auto y = random_point(rng, 3, 0.2, 1.7);
            auto ps = partitions::partitions_of(k, 3);
            auto slice = series::zonal_to_monomial_coeffs(k, 3);
            double total = 0.0;
            for (size_t i = 0; i < ps.size(); ++i)
                for (size_t j = 0; j < ps.size(); ++j)
                    if (slice[i][j] != 0)
                        total += to_double(slice[i][j]) * series::monomial_symmetric(ps[j], y);
            double want = std::pow(y[0] + y[1] + y[2], k);
            ok = std::abs(total - want) <= 1e-12 * std::abs(want);
        }
        r.check("C-normalization k<=5", ok);
    }

    // closed-form q columns against the generic coefficient
    {
        HypParams p{1.7, 3.9};
        bool ok = true;
        for (int k = 1; k <= 5; ++k) {
            double a = series::q_ones_closed_form(k, p);
            double b = series::q_coefficient(Partition(std::vector<int>(k, 1)), p);
            ok = ok && std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1e-30);
        }
        for (int k = 2; k <= 5; ++k) {
            std::vector<int> parts(k - 1, 1);
            parts[0] = 2;
            double a = series::q_two_ones_closed_form(k, p);
            double b = series::q_coefficient(Partition(std::move(parts)), p);
            ok = ok && std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1e-30);
        }
        r.check("closed-form q consistency k<=5", ok);
    }

    // Kummer relation at a small point
    {
        std::vector<double> y{0.11, 0.23};
        double res = wishart::kummer_check({1.5, 3.0}, y, 30);
        r.near("Kummer relation residual", res, 0.0, 1e-10);
    }

    // origin derivatives against their closed forms
    {
        std::uniform_real_distribution<double> u(1.1, 4.0);
        bool ok = true;
        for (int trial = 0; trial < 4 && ok; ++trial) {
            double a = u(rng);
            double c = a + u(rng);
            HypParams p{a, c};
            auto rf = partitions::rising_factorial;
            double d11 = series::q_coefficient(Partition{1, 1}, p);
            double want = rf(a, 2) / (3 * rf(c, 2)) +
                          2 * a * (a - 0.5) / (3 * c * (c - 0.5));
            ok = std::abs(d11 - want) < 1e-12 * std::abs(want);
            double d2 = 2 * series::q_coefficient(Partition{2}, p);
            ok = ok && std::abs(d2 - rf(a, 2) / rf(c, 2)) < 1e-12 * std::abs(d2);
        }
        r.check("origin derivative closed forms", ok);
    }

    // series derivative vector against the Pfaffian system by central
    // differences
    {
        HypParams p{1.5, 3.0};
        std::vector<double> y{0.17, 0.31};
        series::TruncationConfig tc{40, 2};
        auto f = series::squarefree_derivatives_at(p, y, tc);
        pfaffian::EvaluationPoint pt(y);
        bool ok = true;
        const double h = 1e-5;
        for (int i = 0; i < 2 && ok; ++i) {
            auto pf = pfaffian::apply_pfaffian(i, pt, p, f);
            auto yp = y, ym = y;
            yp[i] += h;
            ym[i] -= h;
            auto fp = series::squarefree_derivatives_at(p, yp, tc);
            auto fm = series::squarefree_derivatives_at(p, ym, tc);
            for (SubsetIndex j = 0; j < f.size(); ++j) {
                double fd = (fp[j] - fm[j]) / (2 * h);
                if (std::abs(fd - pf[j]) > 1e-6 * std::max(1.0, std::abs(fd)))
                    ok = false;
            }
        }
        r.check("apply_pfaffian vs finite differences", ok);
    }

    // limiting spectrum
    {
        std::vector<double> beta{1.0, 2.0};
        auto ev = pfaffian::a0_spectrum(beta);
        bool ok = ev.size() == 4 && ev[0] == -3.0 && ev[1] == -2.0 && ev[2] == -1.0 &&
                  ev[3] == 0.0;
        r.check("A0 spectrum m=2", ok);
    }

    // permutation equivariance of the Pfaffian action
    {
        const int m = 4;
        auto y = random_point(rng, m, 0.3, 2.4);
        HypParams p{2.0, 5.5};
        DerivVector f(m);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : f.v)
            v = u(rng);
        std::vector<int> perm{2, 0, 3, 1};
        std::vector<double> yp(m);
        for (int i = 0; i < m; ++i)
            yp[perm[i]] = y[i];
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            auto lhs = pfaffian::apply_pfaffian(perm[i], pfaffian::EvaluationPoint(yp), p,
                                                permute_coordinates(f, perm));
            auto rhs = permute_coordinates(
                pfaffian::apply_pfaffian(i, pfaffian::EvaluationPoint(y), p, f), perm);
            for (SubsetIndex j = 0; j < lhs.size(); ++j)
                if (std::abs(lhs[j] - rhs[j]) > 1e-9 * std::max(1.0, std::abs(rhs[j])))
                    ok = false;
        }
        r.check("permutation equivariance m=4", ok);
    }

    // path independence: two staircase paths to the same target
    {
        HypParams p{1.5, 3.0};
        series::TruncationConfig tc{40, 2};
        std::vector<double> y0{0.3, 0.1}, yt{1.1, 0.25};
        auto f0 = series::squarefree_derivatives_at(p, y0, tc);

        auto leg = [&](DerivVector f, std::vector<double> from, std::vector<double> to) {
            std::vector<double> dir(2);
            for (int i = 0; i < 2; ++i)
                dir[i] = to[i] - from[i];
            auto rhs = [&](double t, std::span<const double> v, std::span<double> dv) {
                std::vector<double> yy(2);
                for (int i = 0; i < 2; ++i)
                    yy[i] = from[i] + t * dir[i];
                DerivVector vv(2);
                vv.v.assign(v.begin(), v.end());
                auto d = pfaffian::directional_derivative(dir, pfaffian::EvaluationPoint(yy), p, vv);
                for (size_t i = 0; i < dv.size(); ++i)
                    dv[i] = d.v[i];
            };
            ode::IntegrationPlan plan;
            plan.x_start = 0.0;
            plan.x_end = 1.0;
            plan.step = 1e-3;
            f.v = ode::integrate(rhs, f.v, plan);
            return f;
        };

        auto a = leg(leg(f0, y0, {yt[0], y0[1]}), {yt[0], y0[1]}, yt);
        auto b = leg(leg(f0, y0, {y0[0], yt[1]}), {y0[0], yt[1]}, yt);
        bool ok = true;
        for (SubsetIndex j = 0; j < a.size(); ++j)
            if (std::abs(a[j] - b[j]) > 1e-6 * std::max(1.0, std::abs(b[j])))
                ok = false;
        r.check("path independence m=2", ok);
    }

    // known percentile of the largest root for m=2
    {
        wishart::WishartProblem prob(2, 3.0, {1.0, 2.0});
        wishart::HgmConfig cfg;
        auto res = wishart::cdf_largest_root(4.31600, prob, cfg);
        r.near("cdf(4.31600) m=2 n=3", res.prob, 0.95, 1e-4);
    }

    // chi-square values
    {
        r.near("chi2 cdf n=2 closed form", wishart::chi2_cdf(1.3, 2.0),
               1.0 - std::exp(-0.65), 1e-14);
        r.near("chi2 cdf n=7 x=40", wishart::chi2_cdf(40.0, 7.0), 0.9999987, 5e-8);
    }

    if (r.failed == 0 && verbosity == 0)
        sink("selftest: all checks passed");
    return r.failed;
}

} // namespace hgm::selftest
