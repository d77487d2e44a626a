#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "hgm1f1/hgm1f1.h"

namespace {

struct ProblemGuard {
    hgm_problem* p;
    ~ProblemGuard() { hgm_problem_free(p); }
};

struct ConfigGuard {
    hgm_config* c;
    ~ConfigGuard() { hgm_config_free(c); }
};

} // namespace

TEST_SUITE_BEGIN("c_api");

TEST_CASE("problem lifecycle and validation") {
    double beta[] = {1.0, 2.0};
    ProblemGuard ok{hgm_problem_new(2, 3.0, beta)};
    CHECK(ok.p != nullptr);

    CHECK(hgm_problem_new(2, 3.0, nullptr) == nullptr);
    CHECK(std::string(hgm_last_error()).find("beta") != std::string::npos);

    double bad[] = {-1.0, 2.0};
    CHECK(hgm_problem_new(2, 3.0, bad) == nullptr);
    CHECK(hgm_problem_new(2, 0.5, beta) == nullptr); // n <= m-1
}

TEST_CASE("config keys") {
    ConfigGuard c{hgm_config_new()};
    CHECK(hgm_config_set(c.c, "step", 1e-4) == HGM_OK);
    CHECK(hgm_config_set(c.c, "K", 20) == HGM_OK);
    CHECK(hgm_config_set(c.c, "no_such_key", 1.0) == HGM_EINVAL);
    CHECK(hgm_config_set_string(c.c, "method", "rk4") == HGM_OK);
    CHECK(hgm_config_set_string(c.c, "method", "leapfrog") == HGM_EINVAL);
    CHECK(hgm_config_set_string(c.c, "tie_policy", "error") == HGM_OK);
    CHECK(hgm_config_set_string(c.c, "format", "csv") == HGM_OK);
    CHECK(std::string(hgm_config_get_string(c.c, "format")) == "csv");
}

TEST_CASE("cdf, bounds, quantile through the shared surface") {
    double beta[] = {1.0, 2.0};
    ProblemGuard p{hgm_problem_new(2, 3.0, beta)};
    ConfigGuard c{hgm_config_new()};

    hgm_cdf_result r;
    REQUIRE(hgm_cdf(p.p, c.c, 4.31600, &r) == HGM_OK);
    CHECK(std::abs(r.prob - 0.95) < 1e-5);
    CHECK(r.prob_raw == doctest::Approx(r.prob).epsilon(1e-9));

    double lo = 0, hi = 0;
    REQUIRE(hgm_bounds(p.p, c.c, 4.31600, &lo, &hi) == HGM_OK);
    CHECK(lo <= r.prob);
    CHECK(r.prob <= hi);

    double x = 0;
    REQUIRE(hgm_quantile(p.p, c.c, 0.95, &x) == HGM_OK);
    CHECK(std::abs(x - 4.31600) < 1e-4);

    double sv = 0;
    REQUIRE(hgm_cdf_series(p.p, 4.31600, 150, &sv) == HGM_OK);
    CHECK(std::abs(sv - r.prob_raw) < 1e-6);

    CHECK(hgm_cdf(p.p, c.c, -1.0, &r) == HGM_EINVAL);
    CHECK(std::string(hgm_last_error()).size() > 0);
}

TEST_CASE("table evaluation in one pass") {
    double beta[] = {1.0, 2.0};
    ProblemGuard p{hgm_problem_new(2, 3.0, beta)};
    ConfigGuard c{hgm_config_new()};
    double xs[5] = {1.0, 2.0, 3.0, 4.0, 5.0};
    hgm_cdf_result out[5];
    REQUIRE(hgm_cdf_table(p.p, c.c, xs, 5, out) == HGM_OK);
    for (int i = 1; i < 5; ++i)
        CHECK(out[i].prob >= out[i - 1].prob);
    hgm_cdf_result single;
    REQUIRE(hgm_cdf(p.p, c.c, 3.0, &single) == HGM_OK);
    CHECK(std::abs(out[2].prob - single.prob) < 1e-9);
}

TEST_CASE("special functions") {
    double v = 0;
    REQUIRE(hgm_chi2_cdf(40.0, 7.0, &v) == HGM_OK);
    CHECK(std::abs(v - 0.9999987) < 5e-8);

    double y[] = {0.2, 0.2};
    REQUIRE(hgm_hyp1f1(1.5, 3.0, 2, y, 40, &v) == HGM_OK);
    double d = 0;
    REQUIRE(hgm_hyp1f1_diagonal(1.5, 3.0, 2, 0.2, &d) == HGM_OK);
    CHECK(std::abs(v - d) < 1e-8);
    CHECK(hgm_hyp1f1_diagonal(1.5, 3.0, 5, 0.2, &d) == HGM_EUNSUPPORTED);

    REQUIRE(hgm_mv_gamma_log(2, 2.0, &v) == HGM_OK);
    CHECK(std::abs(v - std::log(M_PI / 2)) < 1e-13);
}

TEST_CASE("tie policy error surfaces as a singular status") {
    double beta[] = {1.0, 1.0, 1.0, 1.0};
    ProblemGuard p{hgm_problem_new(4, 6.0, beta)};
    ConfigGuard c{hgm_config_new()};
    REQUIRE(hgm_config_set_string(c.c, "tie_policy", "error") == HGM_OK);
    hgm_cdf_result r;
    CHECK(hgm_cdf(p.p, c.c, 8.0, &r) == HGM_ESINGULAR);
}

TEST_CASE("dumps write parseable files") {
    const char* zpath = "/tmp/hgm1f1_test_zonal.tsv";
    REQUIRE(hgm_dump_zonal(3, 3, zpath) == HGM_OK);
    std::ifstream zf(zpath);
    std::string text((std::istreambuf_iterator<char>(zf)), std::istreambuf_iterator<char>());
    CHECK(text.find("2.1\t1.1.1\t18/5") != std::string::npos);

    const char* qpath = "/tmp/hgm1f1_test_q.tsv";
    REQUIRE(hgm_dump_q("3/2", "3", 2, 2, qpath) == HGM_OK);
    std::ifstream qf(qpath);
    std::string qtext((std::istreambuf_iterator<char>(qf)), std::istreambuf_iterator<char>());
    CHECK(qtext.find("1\t1/2") != std::string::npos);

    const char* ppath = "/tmp/hgm1f1_test_p.tsv";
    double y[] = {1.0, 2.0};
    REQUIRE(hgm_dump_pfaffian(1.5, 3.0, 2, y, 1, ppath) == HGM_OK);
    std::ifstream pf(ppath);
    std::string ptext((std::istreambuf_iterator<char>(pf)), std::istreambuf_iterator<char>());
    CHECK(ptext.find("0\t1\t0\t0") != std::string::npos);

    CHECK(hgm_dump_zonal(3, 3, "/no/such/dir/z.tsv") == HGM_EINVAL);
    std::remove(zpath);
    std::remove(qpath);
    std::remove(ppath);
}

TEST_CASE("version string") {
    CHECK(std::string(hgm_version()) == "0.1.0");
}

TEST_SUITE_END();
