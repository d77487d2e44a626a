#include <doctest.h>

#include <cmath>
#include <random>

#include "wishart.hpp"

using namespace hgm;
using namespace hgm::wishart;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// chi-square distribution with even dof has an elementary closed form
double chi2_even_closed(double x, int n) {
    double sum = 0.0, term = 1.0;
    for (int j = 0; j < n / 2; ++j) {
        sum += term;
        term *= (x / 2) / (j + 1);
    }
    return 1.0 - std::exp(-x / 2) * sum;
}

} // namespace

TEST_SUITE_BEGIN("wishart");

TEST_CASE("multivariate gamma") {
    CHECK(rel_err(multivariate_gamma_log(1, 2.3), std::lgamma(2.3)) < 1e-15);
    // two-term product at a = 2: pi^{1/2} Gamma(2) Gamma(3/2) = pi/2
    CHECK(rel_err(multivariate_gamma_log(2, 2.0), std::log(M_PI / 2)) < 1e-14);
    // splitting identity from the product form
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(2.6, 7.0);
    for (int m = 2; m <= 5; ++m)
        for (int trial = 0; trial < 4; ++trial) {
            double a = u(rng);
            double want = 0.5 * (m - 1) * std::log(M_PI) + std::lgamma(a) +
                          multivariate_gamma_log(m - 1, a - 0.5);
            CHECK(rel_err(multivariate_gamma_log(m, a), want) < 1e-13);
        }
    CHECK_THROWS_AS(multivariate_gamma_log(3, 1.0), InvalidArgument); // a - 1 = 0 pole
}

TEST_CASE("chi-square cdf") {
    CHECK(chi2_cdf(0.0, 5.0) == 0.0);
    for (double x : {0.3, 1.7, 4.0, 11.0})
        CHECK(rel_err(chi2_cdf(x, 2.0), 1.0 - std::exp(-x / 2)) < 1e-14);
    for (int n : {4, 6, 10})
        for (double x : {0.5, 3.0, 9.0, 25.0})
            CHECK(std::abs(chi2_cdf(x, n) - chi2_even_closed(x, n)) < 1e-13);
    // one degree of freedom via the error function
    for (double x : {0.2, 1.0, 4.0})
        CHECK(std::abs(chi2_cdf(x, 1.0) - std::erf(std::sqrt(x / 2))) < 1e-13);
    CHECK(std::abs(chi2_cdf(40.0, 7.0) - 0.9999987) < 5e-8);
    // quantile inverts the cdf
    for (double p : {0.1, 0.5, 0.95, 0.999})
        CHECK(rel_err(chi2_cdf(chi2_quantile(p, 7.0), 7.0), p) < 1e-10);
}

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(WishartProblem(2, 3.0, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(WishartProblem(2, 0.5, {1.0, 2.0}), InvalidArgument); // n <= m-1
    CHECK_THROWS_AS(WishartProblem(2, 3.0, {-1.0, 2.0}), InvalidArgument);
    WishartProblem prob(2, 3.0, {2.0, 1.0});
    CHECK(prob.beta == std::vector<double>{1.0, 2.0}); // sorted ascending
    CHECK(prob.params().a == 1.5);
    CHECK(prob.params().c == 3.0);
}

TEST_CASE("kummer check") {
    CHECK(kummer_check({1.5, 3.0}, std::vector<double>{0.0, 0.0}) == 0.0);
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> u(0.03, 0.25);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> y{u(rng), u(rng), u(rng)};
        CHECK(kummer_check({1.5, 3.5}, y) < 1e-10);
    }
    // a = c in one variable: both sides are exactly 1 vs exp(-y) e^y
    CHECK(kummer_check({2.5, 2.5}, std::vector<double>{0.2}) < 1e-13);
}

TEST_CASE("largest-root cdf percentile for m=2") {
    WishartProblem prob(2, 3.0, {1.0, 2.0});
    HgmConfig cfg;
    auto r = cdf_largest_root(4.31600, prob, cfg);
    CHECK(std::abs(r.prob - 0.95) < 1e-5);
    CHECK(r.warnings == 0);
}

TEST_CASE("quantiles reproduce the percentage-point table") {
    WishartProblem prob(2, 3.0, {1.0, 2.0});
    HgmConfig cfg;
    const double want[] = {1.63785, 3.54999, 4.31600, 6.05836};
    const double ps[] = {0.5, 0.9, 0.95, 0.99};
    for (int i = 0; i < 4; ++i) {
        double x = quantile(ps[i], prob, cfg);
        CHECK(std::abs(x - want[i]) < 0.5e-5 * std::pow(10, static_cast<int>(std::log10(want[i]))+1) );
        // 6 significant digits
        CHECK(rel_err(x, want[i]) < 5e-6);
    }
    // round trip
    auto r = cdf_largest_root(3.0, prob, cfg);
    CHECK(rel_err(quantile(r.prob, prob, cfg), 3.0) < 1e-5);
}

TEST_CASE("series route matches the ODE route for m=2") {
    WishartProblem prob(2, 3.0, {1.0, 2.0});
    HgmConfig cfg;
    for (double x : {0.5, 2.0, 5.0}) {
        double ode_route = cdf_largest_root(x, prob, cfg).prob_raw;
        double series_route = cdf_series_route(x, prob, 150);
        CHECK(std::abs(ode_route - series_route) < 1e-6);
    }
}

TEST_CASE("euler at the documented step count lands near the reference") {
    WishartProblem prob(2, 3.0, {1.0, 2.0});
    HgmConfig cfg;
    cfg.method = Method::euler;
    cfg.step = 4.31600 / 10000;
    auto r = cdf_largest_root(4.31600, prob, cfg);
    CHECK(std::abs(r.prob_raw - 0.95) < 1e-4);
}

TEST_CASE("adaptive integration agrees with fixed step") {
    WishartProblem prob(2, 3.0, {1.0, 2.0});
    HgmConfig fixed;
    HgmConfig adaptive;
    adaptive.method = Method::rk4_adaptive;
    adaptive.rel_tol = 1e-10;
    CHECK(std::abs(cdf_largest_root(3.0, prob, fixed).prob_raw -
                   cdf_largest_root(3.0, prob, adaptive).prob_raw) < 1e-7);
}

TEST_CASE("cdf is monotone and approaches one") {
    WishartProblem prob(3, 5.0, {0.5, 1.1, 2.3});
    HgmConfig cfg;
    std::vector<double> xs;
    for (int i = 1; i <= 24; ++i)
        xs.push_back(i * 1.25);
    auto rs = cdf_curve(xs, prob, cfg);
    for (size_t i = 1; i < rs.size(); ++i)
        CHECK(rs[i].prob_raw >= rs[i - 1].prob_raw - 1e-12);
    CHECK(rs.back().prob_raw > 1.0 - 1e-3);
    CHECK(rs.back().prob_raw < 1.0 + 1e-4);
    // one-pass curve agrees with pointwise evaluation
    auto one = cdf_largest_root(xs[7], prob, cfg);
    CHECK(rel_err(rs[7].prob_raw, one.prob_raw) < 1e-9);
}

TEST_CASE("scale equivariance") {
    // scaling Sigma by t and x by t leaves the probability unchanged
    WishartProblem prob(2, 4.0, {0.7, 1.9});
    const double t = 2.5;
    WishartProblem scaled(2, 4.0, {0.7 / t, 1.9 / t});
    HgmConfig cfg;
    for (double x : {1.0, 3.0}) {
        double p1 = cdf_largest_root(x, prob, cfg).prob_raw;
        double p2 = cdf_largest_root(t * x, scaled, cfg).prob_raw;
        CHECK(rel_err(p1, p2) < 1e-8);
    }
}

TEST_CASE("sandwich bounds") {
    HgmConfig cfg;
    // m=2: the equal-variance case runs through the restricted equation
    {
        WishartProblem prob(2, 3.0, {1.0, 2.0});
        for (double x : {1.0, 2.5, 5.0}) {
            auto b = bounds(x, prob, cfg);
            double p = cdf_largest_root(x, prob, cfg).prob;
            CHECK(b.lower <= p + 1e-9);
            CHECK(p <= b.upper + 1e-9);
            CHECK(rel_err(b.upper, chi2_cdf(2.0 * x, 3.0)) < 1e-12);
        }
    }
    // m=4 runs through the perturbed route
    {
        WishartProblem prob(4, 6.0, {0.5, 1.0, 1.5, 2.0});
        for (double x : {8.0, 14.0}) {
            auto b = bounds(x, prob, cfg);
            double p = cdf_largest_root(x, prob, cfg).prob;
            CHECK(b.lower <= p + 1e-7);
            CHECK(p <= b.upper + 1e-7);
        }
    }
}

TEST_CASE("m=5 reference run and bounds") {
    WishartProblem prob(5, 7.0, {1, 2, 3, 4, 5});
    HgmConfig cfg;
    cfg.x0 = 0.01;
    cfg.step = 1e-4;
    // the converged probability sits inside the reference bounds
    auto r = cdf_largest_root(20.0, prob, cfg);
    CHECK(r.prob_raw > 0.9996034);
    CHECK(r.prob_raw < 0.9999987);
    // plain fixed-step integration of the literal system reproduces the
    // reference value at the documented settings
    HgmConfig lit = cfg;
    lit.strip_power = false;
    lit.origin_refine = 0.0;
    auto rl = cdf_largest_root(20.0, prob, lit);
    CHECK(std::abs(rl.prob_raw - 0.999972) < 5e-6);
    // sandwich values as printed
    auto b = bounds(20.0, prob, cfg);
    CHECK(std::abs(b.upper - 0.9999987) < 5e-8);
    CHECK(std::abs(b.lower - 0.9996034) < 5e-7);
}

TEST_CASE("tie policies") {
    HgmConfig cfg;
    // all-equal betas with m <= 3 go through the restricted equation
    {
        WishartProblem prob(2, 3.0, {1.0, 1.0});
        auto r = cdf_largest_root(3.0, prob, cfg);
        CHECK(r.prob > 0.0);
        CHECK(r.prob < 1.0);
        // agreement with a slightly perturbed full-system run
        WishartProblem pert(2, 3.0, {1.0, 1.0 + 1e-4});
        auto rp = cdf_largest_root(3.0, pert, cfg);
        CHECK(std::abs(r.prob - rp.prob) < 1e-3);
    }
    // partial tie at m=3 is perturbed apart with a warning
    {
        WishartProblem prob(3, 5.0, {1.0, 1.0, 2.0});
        auto r = cdf_largest_root(4.0, prob, cfg);
        CHECK((r.warnings & WARN_TIES_PERTURBED) != 0);
        HgmConfig err = cfg;
        err.tie_policy = TiePolicy::error;
        CHECK_THROWS_AS(cdf_largest_root(4.0, prob, err), SingularPoint);
    }
}

TEST_CASE("warnings surface configuration hazards") {
    WishartProblem prob(2, 3.0, {1.0, 2.0});
    HgmConfig cfg;
    cfg.step = 0.5; // step * sum(beta) = 1.5 > 1
    auto r = cdf_largest_root(1.0, prob, cfg);
    CHECK((r.warnings & WARN_STEP_LARGE) != 0);
}

TEST_CASE("invalid evaluation points") {
    WishartProblem prob(2, 3.0, {1.0, 2.0});
    HgmConfig cfg;
    CHECK_THROWS_AS(cdf_largest_root(-1.0, prob, cfg), InvalidArgument);
    CHECK_THROWS_AS(quantile(1.5, prob, cfg), InvalidArgument);
    CHECK_THROWS_AS(bounds(0.0, prob, cfg), InvalidArgument);
}

TEST_SUITE_END();
