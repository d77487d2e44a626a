// Command-line front end for the largest-root distribution library.  Talks to
// the shared library exclusively through the public C interface.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hgm1f1/hgm1f1.h"

namespace {

int g_verbosity = 0;

void logv(int level, const std::string& msg) {
    if (g_verbosity >= level)
        std::fprintf(stderr, "hgm1f1: %s\n", msg.c_str());
}

// 0 ok, 1 validation, 2 numerical failure
int exit_code_for(hgm_status s) {
    switch (s) {
    case HGM_OK:
        return 0;
    case HGM_EINVAL:
    case HGM_EUNSUPPORTED:
        return 1;
    default:
        return 2;
    }
}

int report(hgm_status s) {
    if (s != HGM_OK)
        std::fprintf(stderr, "hgm1f1: error: %s\n", hgm_last_error());
    return exit_code_for(s);
}

struct ProblemArgs {
    int m = 0;
    double n = 0.0;
    std::vector<double> beta;
    std::vector<double> sigma; // variances; converted to beta = 1/(2 sigma_i^2)
};

struct ConfigArgs {
    double x0 = 0.0, step = 0.0, rel_tol = 0.0;
    int K = 0;
    std::string method, tie_policy, init, format = "tsv";
    double tol_p = 0.0, tol_x = 0.0;
};

void add_problem_options(CLI::App* cmd, ProblemArgs& p) {
    cmd->add_option("--m", p.m, "dimension")->required();
    cmd->add_option("--n", p.n, "degrees of freedom")->required();
    auto* beta = cmd->add_option("--beta", p.beta, "diagonal of Sigma^-1/2 (comma separated)")
                     ->delimiter(',');
    cmd->add_option("--sigma", p.sigma, "diagonal variances of Sigma (comma separated)")
        ->delimiter(',')
        ->excludes(beta);
}

void add_config_options(CLI::App* cmd, ConfigArgs& c) {
    cmd->add_option("--x0", c.x0, "start of the radial integration");
    cmd->add_option("--step", c.step, "integrator step size");
    cmd->add_option("--K", c.K, "series truncation degree (0 = automatic)");
    cmd->add_option("--rel-tol", c.rel_tol, "relative tolerance (adaptive integrator)");
    cmd->add_option("--method", c.method, "euler | rk4 | rk4_adaptive")
        ->check(CLI::IsMember({"euler", "rk4", "rk4_adaptive"}));
    cmd->add_option("--tie-policy", c.tie_policy, "perturb | diagonal | error")
        ->check(CLI::IsMember({"perturb", "diagonal", "error"}));
    cmd->add_option("--init", c.init, "initial values: full | linear")
        ->check(CLI::IsMember({"full", "linear"}));
    cmd->add_option("--format", c.format, "tsv | csv | json-lines")
        ->check(CLI::IsMember({"tsv", "csv", "json-lines"}));
    cmd->add_option("--tol-p", c.tol_p, "quantile probability tolerance");
    cmd->add_option("--tol-x", c.tol_x, "quantile bracket tolerance (relative)");
}

struct Handles {
    hgm_problem* prob = nullptr;
    hgm_config* cfg = nullptr;
    ~Handles() {
        hgm_problem_free(prob);
        hgm_config_free(cfg);
    }
};

hgm_status build_handles(const ProblemArgs& pa, const ConfigArgs& ca, Handles& h) {
    std::vector<double> beta = pa.beta;
    if (beta.empty() && !pa.sigma.empty()) {
        for (double s : pa.sigma) {
            if (!(s > 0.0)) {
                std::fprintf(stderr, "hgm1f1: error: --sigma entries must be positive\n");
                return HGM_EINVAL;
            }
            beta.push_back(1.0 / (2.0 * s));
        }
    }
    if (static_cast<int>(beta.size()) != pa.m) {
        std::fprintf(stderr, "hgm1f1: error: need %d entries in --beta/--sigma, got %zu\n",
                     pa.m, beta.size());
        return HGM_EINVAL;
    }
    h.prob = hgm_problem_new(pa.m, pa.n, beta.data());
    if (!h.prob) {
        std::fprintf(stderr, "hgm1f1: error: %s\n", hgm_last_error());
        return HGM_EINVAL;
    }
    h.cfg = hgm_config_new();
    hgm_status s = HGM_OK;
    auto set = [&](const char* key, double v) {
        if (s == HGM_OK && v != 0.0)
            s = hgm_config_set(h.cfg, key, v);
    };
    set("x0", ca.x0);
    set("step", ca.step);
    set("K", ca.K);
    set("rel_tol", ca.rel_tol);
    set("tol_p", ca.tol_p);
    set("tol_x", ca.tol_x);
    auto sets = [&](const char* key, const std::string& v) {
        if (s == HGM_OK && !v.empty())
            s = hgm_config_set_string(h.cfg, key, v.c_str());
    };
    sets("method", ca.method);
    sets("tie_policy", ca.tie_policy);
    sets("init", ca.init == "full" ? "full" : ca.init);
    sets("format", ca.format);
    return s;
}

// one output record; numbers rendered with 10 significant digits
struct Emitter {
    std::string format;
    std::vector<std::string> columns;
    bool header_done = false;

    void comment(const std::string& line) {
        if (format != "json-lines")
            std::printf("# %s\n", line.c_str());
    }

    void row(const std::vector<double>& values) {
        if (format == "json-lines") {
            std::printf("{");
            for (size_t i = 0; i < values.size(); ++i)
                std::printf("%s\"%s\": %.10g", i ? ", " : "", columns[i].c_str(), values[i]);
            std::printf("}\n");
            return;
        }
        const char sep = format == "csv" ? ',' : '\t';
        if (!header_done) {
            std::printf("#");
            for (size_t i = 0; i < columns.size(); ++i)
                std::printf("%c%s", i ? sep : ' ', columns[i].c_str());
            std::printf("\n");
            header_done = true;
        }
        for (size_t i = 0; i < values.size(); ++i)
            std::printf("%s%.10g", i ? std::string(1, sep).c_str() : "", values[i]);
        std::printf("\n");
    }
};

std::string describe(const ProblemArgs& pa, const ConfigArgs& ca) {
    std::string s = "m=" + std::to_string(pa.m) + " n=" + std::to_string(pa.n) + " beta=";
    char buf[64];
    std::vector<double> beta = pa.beta;
    if (beta.empty())
        for (double v : pa.sigma)
            beta.push_back(1.0 / (2.0 * v));
    for (size_t i = 0; i < beta.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.10g", i ? "," : "", beta[i]);
        s += buf;
    }
    std::snprintf(buf, sizeof buf, " x0=%.10g step=%.10g K=%d", ca.x0, ca.step, ca.K);
    s += buf;
    s += " method=" + (ca.method.empty() ? "rk4" : ca.method);
    return s;
}

void warn_bits(unsigned w) {
    if (w & HGM_WARN_OVERSHOOT)
        std::fprintf(stderr,
                     "hgm1f1: warning: probability overshoots 1 beyond tolerance; "
                     "use a smaller --step or larger --K\n");
    if (w & HGM_WARN_TIES_PERTURBED)
        logv(1, "tied beta values were perturbed apart");
    if (w & HGM_WARN_STEP_LARGE)
        std::fprintf(stderr, "hgm1f1: warning: step * sum(beta) > 1, integration may be unstable\n");
    if (w & HGM_WARN_TRUNCATION_CAPPED)
        logv(1, "automatic series degree hit its cap; pass --K to override");
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

void selftest_report(const char* line, void*) { std::printf("%s\n", line); }

} // namespace

int main(int argc, char** argv) {
    if (const char* lv = std::getenv("HGM_LOG"))
        g_verbosity = std::atoi(lv);

    CLI::App app{"largest-eigenvalue distribution of a Wishart matrix via the "
                 "holonomic gradient method"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key=value file");
    app.set_version_flag("--version", std::string(hgm_version()));

    ProblemArgs pa;
    ConfigArgs ca;

    // cdf
    auto* cdf = app.add_subcommand("cdf", "Pr[l1 < x] with sandwich bounds");
    double arg_x = 0.0;
    bool no_bounds = false;
    add_problem_options(cdf, pa);
    add_config_options(cdf, ca);
    cdf->add_option("--x", arg_x, "evaluation point")->required();
    cdf->add_flag("--no-bounds", no_bounds, "skip the sandwich bounds");

    // quantile
    auto* quant = app.add_subcommand("quantile", "percentage points of l1");
    std::vector<double> arg_p;
    add_problem_options(quant, pa);
    add_config_options(quant, ca);
    quant->add_option("--p", arg_p, "probabilities (comma separated)")->required()->delimiter(',');

    // table
    auto* table = app.add_subcommand("table", "cdf values on a grid, one integration pass");
    double arg_xmax = 0.0, arg_xmin = 0.0;
    int arg_points = 100;
    add_problem_options(table, pa);
    add_config_options(table, ca);
    table->add_option("--xmax", arg_xmax, "largest grid point")->required();
    table->add_option("--xmin", arg_xmin, "smallest grid point (default: just above x0)");
    table->add_option("--points", arg_points, "number of grid points");

    // compare
    auto* comp = app.add_subcommand("compare", "ODE route against the truncated series");
    int arg_cmp_points = 20;
    int arg_cmp_K = 150;
    add_problem_options(comp, pa);
    add_config_options(comp, ca);
    comp->add_option("--xmax", arg_xmax, "largest grid point")->required();
    comp->add_option("--xmin", arg_xmin, "smallest grid point (default 0.5)");
    comp->add_option("--points", arg_cmp_points, "number of grid points");
    comp->add_option("--series-K", arg_cmp_K, "series truncation for the reference column");

    // selftest
    auto* self = app.add_subcommand("selftest", "run the invariant suite");

    // dump
    auto* dump = app.add_subcommand("dump", "verification dumps (TSV)");
    std::string dump_what, dump_out = "-", dump_a = "3/2", dump_c = "3";
    int dump_k = 6, dump_m = 3, dump_dir = 1;
    std::vector<double> dump_y;
    double dump_af = 1.5, dump_cf = 3.0;
    dump->add_option("--what", dump_what, "zonal | q | pfaffian")
        ->required()
        ->check(CLI::IsMember({"zonal", "q", "pfaffian"}));
    dump->add_option("--K", dump_k, "maximum weight");
    dump->add_option("--m", dump_m, "maximum partition length / dimension");
    dump->add_option("--a", dump_a, "parameter a, exact (e.g. 3/2)");
    dump->add_option("--c", dump_c, "parameter c, exact (e.g. 7/2)");
    dump->add_option("--af", dump_af, "parameter a for pfaffian dumps");
    dump->add_option("--cf", dump_cf, "parameter c for pfaffian dumps");
    dump->add_option("--y", dump_y, "evaluation point for pfaffian dumps")->delimiter(',');
    dump->add_option("--i", dump_dir, "direction index (1-based)");
    dump->add_option("--out", dump_out, "output path ('-' for stdout)");

    CLI11_PARSE(app, argc, argv);

    if (self->parsed()) {
        int failures = hgm_selftest(selftest_report, nullptr, g_verbosity);
        if (failures) {
            std::fprintf(stderr, "hgm1f1: selftest: %d check(s) failed\n", failures);
            return 3;
        }
        return 0;
    }

    if (dump->parsed()) {
        std::string path = dump_out;
        bool to_stdout = path == "-";
        if (to_stdout)
            path = "/dev/stdout";
        hgm_status s;
        if (dump_what == "zonal")
            s = hgm_dump_zonal(dump_k, dump_m, path.c_str());
        else if (dump_what == "q")
            s = hgm_dump_q(dump_a.c_str(), dump_c.c_str(), dump_k, dump_m, path.c_str());
        else {
            if (static_cast<int>(dump_y.size()) != dump_m) {
                std::fprintf(stderr, "hgm1f1: error: --y must have --m entries\n");
                return 1;
            }
            s = hgm_dump_pfaffian(dump_af, dump_cf, dump_m, dump_y.data(), dump_dir, path.c_str());
        }
        return report(s);
    }

    Handles h;
    if (hgm_status s = build_handles(pa, ca, h); s != HGM_OK)
        return exit_code_for(s);

    Emitter out{ca.format, {}, false};

    if (cdf->parsed()) {
        out.comment(describe(pa, ca));
        out.columns = {"x", "prob", "lower", "upper", "seconds"};
        double t0 = now_seconds();
        hgm_cdf_result r;
        if (hgm_status s = hgm_cdf(h.prob, h.cfg, arg_x, &r); s != HGM_OK)
            return report(s);
        double lower = r.prob, upper = r.prob;
        if (!no_bounds) {
            if (hgm_status s = hgm_bounds(h.prob, h.cfg, arg_x, &lower, &upper); s != HGM_OK)
                return report(s);
        }
        warn_bits(r.warnings);
        out.row({arg_x, r.prob, lower, upper, now_seconds() - t0});
        return 0;
    }

    if (quant->parsed()) {
        out.comment(describe(pa, ca));
        out.columns = {"p", "x", "seconds"};
        for (double p : arg_p) {
            double t0 = now_seconds();
            double x;
            if (hgm_status s = hgm_quantile(h.prob, h.cfg, p, &x); s != HGM_OK)
                return report(s);
            out.row({p, x, now_seconds() - t0});
        }
        return 0;
    }

    if (table->parsed()) {
        out.comment(describe(pa, ca));
        out.columns = {"x", "prob"};
        if (arg_points < 1) {
            std::fprintf(stderr, "hgm1f1: error: --points must be positive\n");
            return 1;
        }
        double xmin = arg_xmin;
        if (xmin <= 0.0)
            xmin = arg_xmax / arg_points;
        std::vector<double> xs(arg_points);
        for (int i = 0; i < arg_points; ++i)
            xs[i] = arg_points == 1
                        ? arg_xmax
                        : xmin + (arg_xmax - xmin) * i / static_cast<double>(arg_points - 1);
        std::vector<hgm_cdf_result> rs(xs.size());
        if (hgm_status s = hgm_cdf_table(h.prob, h.cfg, xs.data(), xs.size(), rs.data());
            s != HGM_OK)
            return report(s);
        unsigned warned = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            warned |= rs[i].warnings;
            out.row({xs[i], rs[i].prob});
        }
        warn_bits(warned);
        return 0;
    }

    if (comp->parsed()) {
        out.comment(describe(pa, ca));
        out.columns = {"x", "hgm", "series", "absdiff"};
        double xmin = arg_xmin > 0.0 ? arg_xmin : 0.5;
        double maxdiff = 0.0;
        for (int i = 0; i < arg_cmp_points; ++i) {
            double x = arg_cmp_points == 1 ? arg_xmax
                                           : xmin + (arg_xmax - xmin) * i /
                                                        static_cast<double>(arg_cmp_points - 1);
            hgm_cdf_result r;
            if (hgm_status s = hgm_cdf(h.prob, h.cfg, x, &r); s != HGM_OK)
                return report(s);
            double sv;
            if (hgm_status s = hgm_cdf_series(h.prob, x, arg_cmp_K, &sv); s != HGM_OK)
                return report(s);
            double diff = std::abs(r.prob_raw - sv);
            maxdiff = std::max(maxdiff, diff);
            out.row({x, r.prob_raw, sv, diff});
        }
        out.comment("max |hgm - series| = " + std::to_string(maxdiff));
        return 0;
    }

    return 0;
}
