#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "deriv_vector.hpp"
#include "series.hpp"

namespace hgm::pfaffian {

using series::HypParams;

// A point in the non-diagonal region: all coordinates nonzero, pairwise
// separation at least tie_eps relative to the largest magnitude.
struct EvaluationPoint {
    std::vector<double> y;

    explicit EvaluationPoint(std::vector<double> y_, double tie_eps = 1e-8);
    int m() const { return static_cast<int>(y.size()); }
};

// r(i,J;y) applied to a derivative vector: the square-free part of the
// second-order reduction in direction i (0-based), J a subset without i.
double r_apply(int i, SubsetIndex J, const EvaluationPoint& pt, const HypParams& p,
               const DerivVector& F);

// Memo table of y_i d_i^2 d_J F for every i and J with i not in J, filled in
// increasing |J| order; entry layout is [i * 2^m + J].
struct SecondDerivTable {
    int m = 0;
    std::vector<double> t;
    double operator()(int i, SubsetIndex J) const { return t[(size_t(i) << m) | J]; }
};

SecondDerivTable second_derivs_table(const EvaluationPoint& pt, const HypParams& p,
                                     const DerivVector& F);

// d_i applied to the whole vector: P_i(y) F.
DerivVector apply_pfaffian(int i, const EvaluationPoint& pt, const HypParams& p,
                           const DerivVector& F);

// sum_i dir_i P_i(y) F with a single table fill.
DerivVector directional_derivative(std::span<const double> dir, const EvaluationPoint& pt,
                                   const HypParams& p, const DerivVector& F);

// Eigenvalues of the limiting coefficient matrix of the radial system:
// -sum_{i not in I} beta_i, in subset order.
std::vector<double> a0_spectrum(std::span<const double> beta);

// Right-hand side of the radial ODE for the rescaled vector
// G(x) = exp(-x sum beta) x^{mn/2} F(beta x).  Reusable: owns its scratch, so
// one instance must not be shared across threads.
//
// with_power = false integrates exp(-x sum beta) F(beta x) instead, leaving
// the x^{mn/2} factor to the caller's prefactor; that removes the dominant
// indicial exponent at x = 0 and keeps the integrator's error constant small
// near the start point.
class GRhs {
public:
    GRhs(HypParams p, std::vector<double> beta, double n, bool with_power = true);

    int m() const { return static_cast<int>(beta_.size()); }
    void operator()(double x, std::span<const double> g, std::span<double> out);

private:
    HypParams p_;
    std::vector<double> beta_;
    double n_;
    bool with_power_;
    double beta_sum_ = 0.0;
    // per-call scratch
    std::vector<double> y_, w_, invd_, vv_, wsum_, table_;
};

// Convenience wrapper for a single evaluation (Wishart parameters: the
// hypergeometric pair is a = (m+1)/2, c = (n+m+1)/2).
DerivVector g_rhs(double x, const DerivVector& G, std::span<const double> beta, double n);

// Dense 2^m x 2^m realization of P_i(y), column by column, as TSV.
void dump_pfaffian_tsv(int i, const EvaluationPoint& pt, const HypParams& p, std::ostream& os);

struct RadialPlan {
    double step = 0.0;
    double rel_tol = 1e-10;
    int method = 1; // 0 euler, 1 rk4, 2 rk4_adaptive (kept int to avoid ode include here)
    // near x = 0 steps shrink to eta * x (0 keeps the plain fixed step)
    double origin_refine = 0.002;
};

// Integrate the radial system with the state rescaled whenever it leaves
// [1e-60, 1e60]; returns the accumulated log scale.
double integrate_renormalized(GRhs& rhs, std::vector<double>& v, double x0, double x1,
                              const RadialPlan& plan);

struct RadialOptions {
    double x0 = 0.02;  // largest start coordinate
    double step = 0.0; // 0: span/1e4 capped by stability
    int degree = 0;    // series truncation; 0 = automatic
};

// log of 1F1(a;c;Y) at a point with positive distinct coordinates, by series
// initial values near the origin and radial integration of the rescaled
// vector.
double hyp1f1_hgm_log(const HypParams& p, std::span<const double> y, const RadialOptions& opts);

} // namespace hgm::pfaffian
