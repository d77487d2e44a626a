#include "hgm1f1/hgm1f1.h"

#include <cstring>
#include <fstream>
#include <string>

#include "selftest.hpp"
#include "wishart.hpp"

using namespace hgm;

struct hgm_problem {
    wishart::WishartProblem p;
};

struct hgm_config {
    wishart::HgmConfig c;
};

namespace {

thread_local std::string t_last_error;

hgm_status fail(hgm_status s, const char* what) {
    t_last_error = what;
    return s;
}

template <typename F> hgm_status guarded(F&& f) {
    try {
        f();
        return HGM_OK;
    } catch (const InvalidArgument& e) {
        return fail(HGM_EINVAL, e.what());
    } catch (const SingularPoint& e) {
        return fail(HGM_ESINGULAR, e.what());
    } catch (const UnsupportedDimension& e) {
        return fail(HGM_EUNSUPPORTED, e.what());
    } catch (const std::exception& e) {
        return fail(HGM_ENUMERIC, e.what());
    }
}

hgm_cdf_result convert(const wishart::CdfResult& r) {
    return {r.prob, r.prob_raw, r.warnings};
}

} // namespace

extern "C" {

const char* hgm_version(void) { return "0.1.0"; }

const char* hgm_last_error(void) { return t_last_error.c_str(); }

hgm_problem* hgm_problem_new(int m, double n, const double* beta) {
    hgm_problem* out = nullptr;
    auto s = guarded([&] {
        if (!beta)
            throw InvalidArgument("beta must not be null");
        out = new hgm_problem{wishart::WishartProblem(m, n, std::vector<double>(beta, beta + m))};
    });
    return s == HGM_OK ? out : nullptr;
}

void hgm_problem_free(hgm_problem* p) { delete p; }

hgm_config* hgm_config_new(void) { return new hgm_config{}; }

void hgm_config_free(hgm_config* c) { delete c; }

hgm_status hgm_config_set(hgm_config* c, const char* key, double value) {
    return guarded([&] {
        if (!c || !key)
            throw InvalidArgument("null config or key");
        std::string k = key;
        auto& cfg = c->c;
        if (k == "K")
            cfg.K = static_cast<int>(value);
        else if (k == "x0")
            cfg.x0 = value;
        else if (k == "step")
            cfg.step = value;
        else if (k == "rel_tol")
            cfg.rel_tol = value;
        else if (k == "tie_eps")
            cfg.tie_eps = value;
        else if (k == "tie_perturb")
            cfg.tie_perturb = value;
        else if (k == "bounds_perturb")
            cfg.bounds_perturb = value;
        else if (k == "tol_p")
            cfg.tol_p = value;
        else if (k == "tol_x")
            cfg.tol_x = value;
        else if (k == "quantile_max_x")
            cfg.quantile_max_x = value;
        else if (k == "strip_power")
            cfg.strip_power = value != 0.0;
        else if (k == "origin_refine")
            cfg.origin_refine = value;
        else
            throw InvalidArgument("unknown numeric config key: " + k);
    });
}

hgm_status hgm_config_set_string(hgm_config* c, const char* key, const char* value) {
    return guarded([&] {
        if (!c || !key || !value)
            throw InvalidArgument("null config, key, or value");
        std::string k = key, v = value;
        auto& cfg = c->c;
        if (k == "method") {
            if (v == "euler")
                cfg.method = wishart::Method::euler;
            else if (v == "rk4")
                cfg.method = wishart::Method::rk4;
            else if (v == "rk4_adaptive")
                cfg.method = wishart::Method::rk4_adaptive;
            else
                throw InvalidArgument("unknown method: " + v);
        } else if (k == "tie_policy") {
            if (v == "perturb")
                cfg.tie_policy = wishart::TiePolicy::perturb;
            else if (v == "diagonal")
                cfg.tie_policy = wishart::TiePolicy::diagonal;
            else if (v == "error")
                cfg.tie_policy = wishart::TiePolicy::error;
            else
                throw InvalidArgument("unknown tie policy: " + v);
        } else if (k == "init") {
            if (v == "full")
                cfg.init = series::InitMode::full_series;
            else if (v == "linear")
                cfg.init = series::InitMode::linear;
            else
                throw InvalidArgument("unknown init mode: " + v);
        } else if (k == "format") {
            if (v != "tsv" && v != "csv" && v != "json-lines")
                throw InvalidArgument("unknown output format: " + v);
            cfg.output_format = v;
        } else {
            throw InvalidArgument("unknown string config key: " + k);
        }
    });
}

const char* hgm_config_get_string(const hgm_config* c, const char* key) {
    if (!c || !key)
        return nullptr;
    if (std::strcmp(key, "format") == 0)
        return c->c.output_format.c_str();
    return nullptr;
}

hgm_status hgm_cdf(const hgm_problem* p, const hgm_config* c, double x, hgm_cdf_result* out) {
    return guarded([&] {
        if (!p || !out)
            throw InvalidArgument("null problem or output");
        wishart::HgmConfig cfg = c ? c->c : wishart::HgmConfig{};
        *out = convert(wishart::cdf_largest_root(x, p->p, cfg));
    });
}

hgm_status hgm_cdf_table(const hgm_problem* p, const hgm_config* c, const double* xs,
                         size_t npoints, hgm_cdf_result* out) {
    return guarded([&] {
        if (!p || !xs || !out)
            throw InvalidArgument("null argument");
        wishart::HgmConfig cfg = c ? c->c : wishart::HgmConfig{};
        auto rs = wishart::cdf_curve(std::span<const double>(xs, npoints), p->p, cfg);
        for (size_t i = 0; i < rs.size(); ++i)
            out[i] = convert(rs[i]);
    });
}

hgm_status hgm_quantile(const hgm_problem* p, const hgm_config* c, double prob, double* x_out) {
    return guarded([&] {
        if (!p || !x_out)
            throw InvalidArgument("null argument");
        wishart::HgmConfig cfg = c ? c->c : wishart::HgmConfig{};
        *x_out = wishart::quantile(prob, p->p, cfg);
    });
}

hgm_status hgm_bounds(const hgm_problem* p, const hgm_config* c, double x, double* lower,
                      double* upper) {
    return guarded([&] {
        if (!p || !lower || !upper)
            throw InvalidArgument("null argument");
        wishart::HgmConfig cfg = c ? c->c : wishart::HgmConfig{};
        auto b = wishart::bounds(x, p->p, cfg);
        *lower = b.lower;
        *upper = b.upper;
    });
}

hgm_status hgm_cdf_series(const hgm_problem* p, double x, int degree, double* out) {
    return guarded([&] {
        if (!p || !out)
            throw InvalidArgument("null argument");
        *out = wishart::cdf_series_route(x, p->p, degree);
    });
}

hgm_status hgm_hyp1f1(double a, double c, int m, const double* y, int degree, double* out) {
    return guarded([&] {
        if (!y || !out || m < 1)
            throw InvalidArgument("bad arguments");
        *out = series::hyp1f1_series({a, c}, std::span<const double>(y, m), {degree, m});
    });
}

hgm_status hgm_hyp1f1_diagonal(double a, double c, int m, double y, double* out) {
    return guarded([&] {
        if (!out)
            throw InvalidArgument("null output");
        ode::IntegrationPlan plan;
        plan.method = ode::Method::rk4;
        plan.step = 1e-4;
        *out = diagonal::hyp1f1_diagonal({a, c}, y, m, plan);
    });
}

hgm_status hgm_chi2_cdf(double x, double n, double* out) {
    return guarded([&] {
        if (!out)
            throw InvalidArgument("null output");
        *out = wishart::chi2_cdf(x, n);
    });
}

hgm_status hgm_mv_gamma_log(int m, double a, double* out) {
    return guarded([&] {
        if (!out)
            throw InvalidArgument("null output");
        *out = wishart::multivariate_gamma_log(m, a);
    });
}

namespace {

std::ofstream open_or_throw(const char* path) {
    if (!path)
        throw InvalidArgument("null path");
    std::ofstream os(path);
    if (!os)
        throw InvalidArgument(std::string("cannot open ") + path);
    return os;
}

} // namespace

hgm_status hgm_dump_zonal(int degree, int max_length, const char* path) {
    return guarded([&] {
        auto os = open_or_throw(path);
        series::dump_zonal_tsv(degree, max_length, os);
    });
}

hgm_status hgm_dump_q(const char* a, const char* c, int degree, int max_length,
                      const char* path) {
    return guarded([&] {
        if (!a || !c)
            throw InvalidArgument("null parameter literal");
        auto os = open_or_throw(path);
        series::dump_q_tsv(rational_from_string(a), rational_from_string(c), degree, max_length,
                           os);
    });
}

hgm_status hgm_dump_pfaffian(double a, double c, int m, const double* y, int direction,
                             const char* path) {
    return guarded([&] {
        if (!y || m < 1 || direction < 1 || direction > m)
            throw InvalidArgument("bad arguments");
        auto os = open_or_throw(path);
        pfaffian::EvaluationPoint pt(std::vector<double>(y, y + m));
        pfaffian::dump_pfaffian_tsv(direction - 1, pt, {a, c}, os);
    });
}

int hgm_selftest(void (*report)(const char* line, void* user), void* user, int verbosity) {
    auto sink = [&](const std::string& line) {
        if (report)
            report(line.c_str(), user);
    };
    try {
        return selftest::run(sink, verbosity);
    } catch (const std::exception& e) {
        sink(std::string("[FAIL] selftest aborted: ") + e.what());
        return 1;
    }
}

} // extern "C"
