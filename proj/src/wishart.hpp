#pragma once

#include <span>
#include <string>
#include <vector>

#include "diagonal.hpp"
#include "pfaffian.hpp"

namespace hgm::wishart {

using series::HypParams;
using series::InitMode;

// Largest-eigenvalue problem for an m x m Wishart matrix with n degrees of
// freedom and diagonal covariance; beta is the diagonal of Sigma^{-1}/2,
// kept sorted ascending.
struct WishartProblem {
    int m = 0;
    double n = 0.0;
    std::vector<double> beta;

    WishartProblem(int m_, double n_, std::vector<double> beta_);

    HypParams params() const { return {0.5 * (m + 1), 0.5 * (n + m + 1)}; }
    double beta_sum() const;
    double beta_min() const { return beta.front(); }
};

enum class Method { euler, rk4, rk4_adaptive };
enum class TiePolicy { perturb, diagonal, error };

struct HgmConfig {
    int K = 0;            // series truncation; 0 = automatic
    double x0 = 0.0;      // start of the radial integration; 0 = max(0.01, 0.002 m^2)
    double step = 0.0;    // 0 = min(0.5/sum beta, span/1e4)
    double rel_tol = 1e-10;
    Method method = Method::rk4;
    TiePolicy tie_policy = TiePolicy::perturb;
    double tie_eps = 1e-8;      // relative separation below which betas count as tied
    double tie_perturb = 1e-6;  // relative spread applied to tied betas
    double bounds_perturb = 0.0;  // spread for the equal-beta lower bound (m >= 4);
                                  // 0 = max(3e-3, 1e-3 m)
    double tol_p = 1e-7;        // quantile: |cdf - p| target
    double tol_x = 1e-8;        // quantile: relative bracket width target
    double quantile_max_x = 0.0; // 0 = 1e4 * chi-square bracket
    InitMode init = InitMode::full_series;
    // fidelity knobs: strip_power integrates exp(-x sum beta) F(beta x) and
    // keeps x^{mn/2} analytic (better conditioned near x0); origin_refine
    // shrinks steps to eta*x near the start.  Setting strip_power=false and
    // origin_refine=0 integrates the literal radial system with a plain
    // fixed step.
    bool strip_power = true;
    double origin_refine = 0.002;
    std::string output_format = "tsv"; // presentation hint carried for clients
};

// Warning bits reported alongside results.
enum : unsigned {
    WARN_CLAMPED = 1u,        // probability clamped into [0,1]
    WARN_OVERSHOOT = 2u,      // overshoot beyond 1 + 1e-4: reduce step / raise K
    WARN_TIES_PERTURBED = 4u, // tied betas were spread apart
    WARN_STEP_LARGE = 8u,     // step * sum(beta) > 1, explicit RK may be unstable
    WARN_TRUNCATION_CAPPED = 16u, // automatic K hit the per-dimension cap
};

struct CdfResult {
    double prob = 0.0;     // clamped to [0,1]
    double prob_raw = 0.0; // as integrated
    unsigned warnings = 0;
};

// log Gamma_m(a)
double multivariate_gamma_log(int m, double a);

// P(chi^2_n <= x), regularized lower incomplete gamma.
double chi2_cdf(double x, double n);
double chi2_quantile(double p, double n);

CdfResult cdf_largest_root(double x, const WishartProblem& prob, const HgmConfig& cfg);

// One integration pass, probabilities at every grid point (sorted, > x0).
std::vector<CdfResult> cdf_curve(std::span<const double> xs, const WishartProblem& prob,
                                 const HgmConfig& cfg);

double quantile(double p, const WishartProblem& prob, const HgmConfig& cfg);

// Stochastic-ordering sandwich: lower = probability under the equal-variance
// covariance sigma_1^2 I, upper = chi-square with n degrees of freedom.
struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
    unsigned warnings = 0;
};
Bounds bounds(double x, const WishartProblem& prob, const HgmConfig& cfg);

// |exp(-tr Y) F(a;c;Y) - F(c-a;c;-Y)| on the truncated series.
double kummer_check(const HypParams& p, std::span<const double> y, int degree = 30);

// Probability by direct series evaluation of the hypergeometric factor
// (useful as a cross-check against the ODE route for small dimensions).
double cdf_series_route(double x, const WishartProblem& prob, int degree);

// Exact largest-root probability for the equal-variance case Sigma = s2 I_m:
// the ordered-eigenvalue density integrates to a Pfaffian of incomplete-gamma
// cross moments.  This is the reference value behind the sandwich lower
// bound.
double null_case_cdf(double x, int m, double n, double s2);

} // namespace hgm::wishart
