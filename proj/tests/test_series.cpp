#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "series.hpp"

using namespace hgm;
using namespace hgm::series;
using partitions::rising_factorial;

namespace {

// brute-force monomial symmetric polynomial: sum over distinct permutations
// of the padded exponent vector
double monomial_brute(const Partition& lambda, const std::vector<double>& y) {
    if (lambda.length() > static_cast<int>(y.size()))
        return 0.0;
    std::vector<int> expo(y.size(), 0);
    for (int i = 0; i < lambda.length(); ++i)
        expo[i] = lambda.parts[i];
    std::sort(expo.begin(), expo.end());
    double total = 0.0;
    do {
        double term = 1.0;
        for (size_t i = 0; i < y.size(); ++i)
            term *= std::pow(y[i], expo[i]);
        total += term;
    } while (std::next_permutation(expo.begin(), expo.end()));
    return total;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

} // namespace

TEST_SUITE_BEGIN("series");

TEST_CASE("zonal to monomial tables match the k<=3 references exactly") {
    auto c1 = zonal_to_monomial_coeffs(1, 1);
    CHECK(c1[0][0] == 1);

    auto c2 = zonal_to_monomial_coeffs(2, 2);
    CHECK(c2[0][0] == Rational(1));
    CHECK(c2[0][1] == Rational(2, 3));
    CHECK(c2[1][0] == Rational(0));
    CHECK(c2[1][1] == Rational(4, 3));

    auto c3 = zonal_to_monomial_coeffs(3, 3);
    CHECK(c3[0][0] == Rational(1));
    CHECK(c3[0][1] == Rational(3, 5));
    CHECK(c3[0][2] == Rational(2, 5));
    CHECK(c3[1][1] == Rational(12, 5));
    CHECK(c3[1][2] == Rational(18, 5));
    CHECK(c3[2][2] == Rational(2));
    CHECK(c3[1][0] == Rational(0));
    CHECK(c3[2][0] == Rational(0));
    CHECK(c3[2][1] == Rational(0));
}

TEST_CASE("C-normalization: sum of zonal polynomials is the trace power") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int m : {2, 3, 5}) {
        std::vector<double> y(m);
        for (auto& v : y)
            v = u(rng);
        double tr = 0.0;
        for (double v : y)
            tr += v;
        for (int k = 1; k <= 6; ++k) {
            auto ps = partitions::partitions_of(k, m);
            auto slice = zonal_to_monomial_coeffs(k, m);
            double total = 0.0;
            for (size_t i = 0; i < ps.size(); ++i)
                for (size_t j = 0; j < ps.size(); ++j)
                    if (slice[i][j] != 0)
                        total += to_double(slice[i][j]) * monomial_symmetric(ps[j], y);
            CHECK(rel_err(total, std::pow(tr, k)) < 1e-12);
        }
    }
}

TEST_CASE("row sums of the coefficient table count monomials") {
    // sum_kappa c_{kappa,lambda} = k! / prod lambda_i!
    for (int k = 1; k <= 7; ++k) {
        auto ps = partitions::partitions_of(k, k);
        auto slice = zonal_to_monomial_coeffs(k, k);
        for (size_t j = 0; j < ps.size(); ++j) {
            Rational sum = 0;
            for (size_t i = 0; i < ps.size(); ++i)
                sum += slice[i][j];
            BigInt den = 1;
            for (int part : ps[j].parts)
                den *= factorial_big(part);
            CHECK(sum == Rational(factorial_big(k), den));
        }
    }
}

TEST_CASE("monomial symmetric polynomial") {
    CHECK(monomial_symmetric(Partition{1}, std::vector<double>{2.0, 3.0}) == 5.0);
    CHECK(monomial_symmetric(Partition{1, 1}, std::vector<double>{2.0, 3.0}) == 6.0);
    // exponent multiset (2,1) over (1,2,3): brute-force enumeration gives 48
    std::vector<double> y{1.0, 2.0, 3.0};
    CHECK(monomial_brute(Partition{2, 1}, y) == 48.0);
    CHECK(monomial_symmetric(Partition{2, 1}, y) == doctest::Approx(48.0).epsilon(1e-15));
    // too long for the variable count
    CHECK(monomial_symmetric(Partition{1, 1, 1}, std::vector<double>{1.0, 2.0}) == 0.0);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 1 + trial % 4;
        std::vector<double> pt(m);
        for (auto& v : pt)
            v = u(rng);
        for (int k = 1; k <= 5; ++k)
            for (const auto& lam : partitions::partitions_of(k, m))
                CHECK(rel_err(monomial_symmetric(lam, pt), monomial_brute(lam, pt)) < 1e-12);
    }
}

TEST_CASE("monomial coefficients q_lambda against the reference list") {
    const HypParams p{1.37, 2.91};
    const double a = p.a, c = p.c;
    auto gp = [&](double base, const Partition& k) { return partitions::gen_pochhammer(base, k); };

    CHECK(q_coefficient(Partition{}, p) == 1.0);
    CHECK(rel_err(q_coefficient(Partition{1}, p), a / c) < 1e-14);
    CHECK(rel_err(q_coefficient(Partition{2}, p), rising_factorial(a, 2) / (2 * rising_factorial(c, 2))) < 1e-14);
    CHECK(rel_err(q_coefficient(Partition{1, 1}, p),
                  rising_factorial(a, 2) / (3 * rising_factorial(c, 2)) +
                      2 * gp(a, {1, 1}) / (3 * gp(c, {1, 1}))) < 1e-14);
    CHECK(rel_err(q_coefficient(Partition{2, 1}, p),
                  rising_factorial(a, 3) / (10 * rising_factorial(c, 3)) +
                      2 * gp(a, {2, 1}) / (5 * gp(c, {2, 1}))) < 1e-14);
    CHECK(rel_err(q_coefficient(Partition{1, 1, 1}, p),
                  rising_factorial(a, 3) / (15 * rising_factorial(c, 3)) +
                      3 * gp(a, {2, 1}) / (5 * gp(c, {2, 1})) +
                      gp(a, {1, 1, 1}) / (3 * gp(c, {1, 1, 1}))) < 1e-14);
    CHECK(rel_err(q_coefficient(Partition{2, 1, 1}, p),
                  rising_factorial(a, 4) / (70 * rising_factorial(c, 4)) +
                      4 * gp(a, {2, 2}) / (45 * gp(c, {2, 2})) +
                      11 * gp(a, {3, 1}) / (63 * gp(c, {3, 1})) +
                      2 * gp(a, {2, 1, 1}) / (9 * gp(c, {2, 1, 1}))) < 1e-14);
}

TEST_CASE("exact q coefficients agree with the floating route") {
    Rational a(137, 100), c(291, 100);
    HypParams p{1.37, 2.91};
    for (int k = 0; k <= 5; ++k)
        for (const auto& lam : partitions::partitions_of(k, k > 0 ? k : 1)) {
            double exact = to_double(q_coefficient_exact(lam, a, c));
            CHECK(rel_err(q_coefficient(lam, p), exact) < 1e-13);
        }
}

TEST_CASE("closed-form q columns") {
    const HypParams p{1.61, 4.27};
    CHECK(rel_err(q_ones_closed_form(1, p), p.a / p.c) < 1e-14);
    for (int k = 1; k <= 6; ++k)
        CHECK(rel_err(q_ones_closed_form(k, p),
                      q_coefficient(Partition(std::vector<int>(k, 1)), p)) < 1e-12);
    CHECK(rel_err(q_two_ones_closed_form(2, p),
                  rising_factorial(p.a, 2) / (2 * rising_factorial(p.c, 2))) < 1e-14);
    for (int k = 2; k <= 6; ++k) {
        std::vector<int> parts(k - 1, 1);
        parts[0] = 2;
        CHECK(rel_err(q_two_ones_closed_form(k, p), q_coefficient(Partition(std::move(parts)), p)) <
              1e-12);
    }
}

TEST_CASE("series value at the origin and the scalar exponential limit") {
    CHECK(hyp1f1_series({1.3, 2.9}, std::vector<double>{0.0, 0.0}, {12, 2}) == 1.0);
    // a = c collapses the one-variable series to exp
    for (double y : {0.3, 1.0, 2.5}) {
        double got = hyp1f1_series({1.7, 1.7}, std::vector<double>{y}, {40, 1});
        CHECK(rel_err(got, std::exp(y)) < 1e-13);
    }
}

TEST_CASE("Kummer relation on the truncated series") {
    const HypParams p{1.5, 3.0};
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.02, 0.3);
    for (int m : {1, 2, 3}) {
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> y(m);
            for (auto& v : y)
                v = u(rng);
            double tr = 0.0;
            for (double v : y)
                tr += v;
            std::vector<double> neg(y);
            for (auto& v : neg)
                v = -v;
            double lhs = std::exp(-tr) * hyp1f1_series(p, y, {30, m});
            double rhs = hyp1f1_series({p.c - p.a, p.c}, neg, {30, m});
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("permutation symmetry of the series") {
    const HypParams p{2.1, 4.4};
    std::vector<double> y{0.21, 0.08, 0.33};
    std::vector<double> yp{0.33, 0.21, 0.08};
    CHECK(rel_err(hyp1f1_series(p, y, {20, 3}), hyp1f1_series(p, yp, {20, 3})) < 1e-13);
}

TEST_CASE("rectangular derivatives at the origin") {
    const HypParams p{1.44, 3.17};
    const double a = p.a, c = p.c;
    std::vector<double> zero{0.0, 0.0};
    CHECK(rel_err(rect_derivative_series(1, 1, p, zero, {10, 2}), a / c) < 1e-14);
    CHECK(rel_err(rect_derivative_series(2, 1, p, zero, {10, 2}),
                  rising_factorial(a, 2) / rising_factorial(c, 2)) < 1e-14);
    CHECK(rel_err(rect_derivative_series(1, 2, p, zero, {10, 2}),
                  rising_factorial(a, 2) / (3 * rising_factorial(c, 2)) +
                      2 * a * (a - 0.5) / (3 * c * (c - 0.5))) < 1e-14);
}

TEST_CASE("rectangular derivatives against central differences") {
    const HypParams p{1.5, 3.0};
    const TruncationConfig tc{40, 2};
    std::vector<double> y{0.17, 0.29};
    const double h = 1e-4;
    auto F = [&](double y1, double y2) {
        return hyp1f1_series(p, std::vector<double>{y1, y2}, tc);
    };
    double d1 = (F(y[0] + h, y[1]) - F(y[0] - h, y[1])) / (2 * h);
    CHECK(rel_err(rect_derivative_series(1, 1, p, y, tc), d1) < 1e-6);
    double d2 = (F(y[0] + h, y[1]) - 2 * F(y[0], y[1]) + F(y[0] - h, y[1])) / (h * h);
    CHECK(rel_err(rect_derivative_series(2, 1, p, y, tc), d2) < 1e-6);
    double d11 = (F(y[0] + h, y[1] + h) - F(y[0] + h, y[1] - h) - F(y[0] - h, y[1] + h) +
                  F(y[0] - h, y[1] - h)) /
                 (4 * h * h);
    CHECK(rel_err(rect_derivative_series(1, 2, p, y, tc), d11) < 1e-6);
}

TEST_CASE("linear initial values match the first-order construction") {
    const HypParams p{1.5, 3.0};
    const double a = p.a, c = p.c;
    // entry J = {1..l} at the origin is q_(1^l)
    {
        DerivVector at0 = squarefree_derivatives_at(p, std::vector<double>{0.0, 0.0}, {10, 2},
                                                    InitMode::linear);
        CHECK(at0[0] == 1.0);
        CHECK(rel_err(at0[1], a / c) < 1e-14);
        CHECK(rel_err(at0[3], q_coefficient(Partition{1, 1}, p)) < 1e-14);
    }
    // first-order coefficients written out longhand
    double x1 = 0.013, x2 = 0.026;
    double fi1 = a / c;
    double fi2 = a * (a + 1) / (c * (c + 1));
    double fi3 = a * (a + 1) / (3 * c * (c + 1)) + 2 * a * (a - 0.5) / (3 * c * (c - 0.5));
    double fi4 = a * (a + 1) * (a + 2) / (5 * c * (c + 1) * (c + 2)) +
                 4 * a * (a + 1) * (a - 0.5) / (5 * c * (c + 1) * (c - 0.5));
    DerivVector lin =
        squarefree_derivatives_at(p, std::vector<double>{x1, x2}, {10, 2}, InitMode::linear);
    CHECK(rel_err(lin[0], 1 + (x1 + x2) * fi1) < 1e-13);
    CHECK(rel_err(lin[1], fi1 + x1 * fi2 + x2 * fi3) < 1e-13);
    CHECK(rel_err(lin[2], fi1 + x2 * fi2 + x1 * fi3) < 1e-13);
    CHECK(rel_err(lin[3], fi3 + (x1 + x2) * fi4) < 1e-13);
}

TEST_CASE("full derivative vector against central differences") {
    const HypParams p{1.5, 3.0};
    for (int m : {2, 3}) {
        TruncationConfig tc{36, m};
        std::vector<double> y(m);
        for (int i = 0; i < m; ++i)
            y[i] = 0.08 + 0.07 * i;
        auto f = squarefree_derivatives_at(p, y, tc);
        const double h = 1e-4;
        // check every entry with one derivative peeled off by differences
        for (int i = 0; i < m; ++i) {
            auto yp = y, ym = y;
            yp[i] += h;
            ym[i] -= h;
            auto fp = squarefree_derivatives_at(p, yp, tc);
            auto fm = squarefree_derivatives_at(p, ym, tc);
            for (SubsetIndex j = 0; j < f.size(); ++j) {
                if (j & (SubsetIndex(1) << i))
                    continue;
                double fd = (fp[j] - fm[j]) / (2 * h);
                CHECK(rel_err(f[j | (SubsetIndex(1) << i)], fd) < 1e-6);
            }
        }
    }
}

TEST_CASE("derivative vector permutes with the coordinates") {
    const HypParams p{2.0, 5.5};
    const int m = 4;
    TruncationConfig tc{14, m};
    std::vector<double> y{0.05, 0.11, 0.02, 0.08};
    std::vector<int> perm{3, 1, 0, 2};
    std::vector<double> yp(m);
    for (int i = 0; i < m; ++i)
        yp[perm[i]] = y[i];
    auto f = squarefree_derivatives_at(p, y, tc);
    auto fp = squarefree_derivatives_at(p, yp, tc);
    auto mapped = permute_coordinates(f, perm);
    for (SubsetIndex j = 0; j < fp.size(); ++j)
        CHECK(rel_err(fp[j], mapped[j]) < 1e-12);
}

TEST_CASE("tied coordinates are rejected in full mode") {
    CHECK_THROWS_AS(
        squarefree_derivatives_at({1.5, 3.0}, std::vector<double>{0.1, 0.1}, {10, 2}),
        SingularPoint);
    // linear mode accepts them
    CHECK_NOTHROW(squarefree_derivatives_at({1.5, 3.0}, std::vector<double>{0.1, 0.1}, {10, 2},
                                            InitMode::linear));
}

TEST_CASE("pole of (c)_kappa is reported with the partition") {
    // c = 1/2 makes (c)_kappa vanish for kappa = (1,1)
    try {
        q_coefficient(Partition{1, 1}, {1.0, 0.5});
        FAIL("expected an error");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("1.1") != std::string::npos);
    }
}

TEST_CASE("automatic truncation degree") {
    std::vector<double> tiny{0.01, 0.02};
    int k1 = auto_truncation_degree({1.5, 3.0}, tiny, 2);
    CHECK(k1 >= 6);
    CHECK(k1 <= 20);
    std::vector<double> wide{0.5, 1.0};
    int k2 = auto_truncation_degree({1.5, 3.0}, wide, 2);
    CHECK(k2 > k1);
    bool capped = false;
    std::vector<double> big10(10, 2.0);
    auto_truncation_degree({5.5, 11.5}, big10, 10, 1e-13, &capped);
    CHECK(capped);
}

TEST_CASE("diagonal restriction coefficients") {
    const HypParams p{1.5, 3.0};
    // f(y) = F(y,y): compare the power-series state with the full series
    auto st = diagonal_series_state(p, 2, 0.04, 30, 3);
    double f = hyp1f1_series(p, std::vector<double>{0.04, 0.04}, {30, 2});
    CHECK(rel_err(st[0], f) < 1e-12);
    const double h = 1e-4;
    double fp = hyp1f1_series(p, std::vector<double>{0.04 + h, 0.04 + h}, {30, 2});
    double fm = hyp1f1_series(p, std::vector<double>{0.04 - h, 0.04 - h}, {30, 2});
    CHECK(rel_err(st[1], (fp - fm) / (2 * h)) < 1e-7);
    // origin values
    auto s0 = diagonal_series_state(p, 2, 0.0, 10, 3);
    const double a = p.a, c = p.c;
    CHECK(s0[0] == 1.0);
    CHECK(rel_err(s0[1], 2 * a / c) < 1e-14);
    CHECK(rel_err(s0[2], 8 * rising_factorial(a, 2) / (3 * rising_factorial(c, 2)) +
                             4 * a * (a - 0.5) / (3 * c * (c - 0.5))) < 1e-14);
    CHECK(rel_err(s0[3], 2 * rising_factorial(a, 3) / rising_factorial(c, 3) +
                             6 * (rising_factorial(a, 3) / (5 * rising_factorial(c, 3)) +
                                  4 * rising_factorial(a, 2) * (a - 0.5) /
                                      (5 * rising_factorial(c, 2) * (c - 0.5)))) < 1e-14);
}

TEST_CASE("verification dumps") {
    std::ostringstream zs;
    dump_zonal_tsv(3, 3, zs);
    CHECK(zs.str().find("2.1\t1.1.1\t18/5") != std::string::npos);
    std::ostringstream qs;
    dump_q_tsv(Rational(3, 2), Rational(3), 2, 2, qs);
    CHECK(qs.str().find("1\t1/2") != std::string::npos); // q_(1) = a/c = 1/2
}

TEST_SUITE_END();
