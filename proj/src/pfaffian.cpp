#include "pfaffian.hpp"

#include <cmath>
#include <ostream>

#include "ode.hpp"

namespace hgm::pfaffian {

namespace {

inline SubsetIndex bit(int i) { return SubsetIndex(1) << i; }

// next subset of the same popcount (Gosper); returns 0 when exhausted
inline SubsetIndex next_same_popcount(SubsetIndex v, SubsetIndex full) {
    SubsetIndex c = v & -v;
    SubsetIndex r = v + c;
    SubsetIndex next = (((r ^ v) >> 2) / c) | r;
    return next > full ? 0 : next;
}

// Pairwise coefficient tables at a fixed point:
//   w[i][k]    = y_k / (y_i - y_k)
//   invd[i][k] = 1 / (y_i - y_k)
//   vv[i][k]   = y_i / (y_i - y_k)^2
//   wsum[i]    = sum_{k != i} w[i][k]
void fill_pair_tables(std::span<const double> y, std::vector<double>& w,
                      std::vector<double>& invd, std::vector<double>& vv,
                      std::vector<double>& wsum) {
    const int m = static_cast<int>(y.size());
    w.assign(size_t(m) * m, 0.0);
    invd.assign(size_t(m) * m, 0.0);
    vv.assign(size_t(m) * m, 0.0);
    wsum.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) {
            if (k == i)
                continue;
            double d = y[i] - y[k];
            double id = 1.0 / d;
            w[size_t(i) * m + k] = y[k] * id;
            invd[size_t(i) * m + k] = id;
            vv[size_t(i) * m + k] = y[i] * id * id;
            wsum[i] += y[k] * id;
        }
    }
}

// Fill the memo table of y_i d_i^2 d_J F values.  One entry combines the
// square-free reduction r(i,J;y)F with already-filled entries at smaller J.
void fill_table(int m, std::span<const double> y, const HypParams& p,
                std::span<const double> F, std::span<const double> w,
                std::span<const double> invd, std::span<const double> vv,
                std::span<const double> wsum, std::span<double> table) {
    const SubsetIndex full = (SubsetIndex(1) << m) - 1;
    for (int s = 0; s <= m - 1; ++s) {
        SubsetIndex J = (SubsetIndex(1) << s) - 1; // first subset of size s
        if (s == 0)
            J = 0;
        while (true) {
            const double fJ = F[J];
            SubsetIndex rem0 = full & ~J;
            for (SubsetIndex remi = rem0; remi; remi &= remi - 1) {
                const int i = __builtin_ctz(remi);
                const SubsetIndex I = J | bit(i);
                const double* wi = &w[size_t(i) * m];
                const double* di = &invd[size_t(i) * m];
                const double* vi = &vv[size_t(i) * m];

                double acc = p.a * fJ - (p.c - y[i] + 0.5 * wsum[i]) * F[I];
                for (SubsetIndex rest = full & ~I; rest; rest &= rest - 1) {
                    const int k = __builtin_ctz(rest);
                    acc += 0.5 * wi[k] * F[J | bit(k)];
                }
                for (SubsetIndex inJ = J; inJ; inJ &= inJ - 1) {
                    const int k = __builtin_ctz(inJ);
                    const SubsetIndex Jk = J ^ bit(k);
                    acc -= 0.5 * vi[k] * (F[Jk | bit(i)] - fJ);
                    acc += 0.5 * di[k] * table[(size_t(k) << m) | Jk];
                }
                table[(size_t(i) << m) | J] = acc;
            }
            if (s == 0)
                break;
            J = next_same_popcount(J, full);
            if (J == 0)
                break;
        }
    }
}

} // namespace

EvaluationPoint::EvaluationPoint(std::vector<double> y_, double tie_eps) : y(std::move(y_)) {
    if (y.empty() || y.size() > 20)
        throw InvalidArgument("EvaluationPoint: dimension out of range");
    double ymax = 0.0;
    for (double v : y) {
        if (!std::isfinite(v))
            throw InvalidArgument("EvaluationPoint: non-finite coordinate");
        ymax = std::max(ymax, std::abs(v));
    }
    for (size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 0.0)
            throw SingularPoint("EvaluationPoint: zero coordinate");
        for (size_t j = i + 1; j < y.size(); ++j)
            if (std::abs(y[i] - y[j]) < tie_eps * ymax)
                throw SingularPoint("EvaluationPoint: tied coordinates");
    }
}

double r_apply(int i, SubsetIndex J, const EvaluationPoint& pt, const HypParams& p,
               const DerivVector& F) {
    const int m = pt.m();
    if (i < 0 || i >= m || (J & bit(i)) || F.m != m)
        throw InvalidArgument("r_apply: bad direction or subset");
    const auto& y = pt.y;
    const SubsetIndex I = J | bit(i);
    double acc = p.a * F[J] - (p.c - y[i]) * F[I];
    for (int k = 0; k < m; ++k) {
        if (k == i)
            continue;
        const double wik = y[k] / (y[i] - y[k]);
        if (J & bit(k)) {
            acc -= 0.5 * wik * F[I];
            const double vik = y[i] / ((y[i] - y[k]) * (y[i] - y[k]));
            acc -= 0.5 * vik * (F[(J ^ bit(k)) | bit(i)] - F[J]);
        } else {
            acc -= 0.5 * wik * (F[I] - F[J | bit(k)]);
        }
    }
    return acc;
}

SecondDerivTable second_derivs_table(const EvaluationPoint& pt, const HypParams& p,
                                     const DerivVector& F) {
    const int m = pt.m();
    if (F.m != m)
        throw InvalidArgument("second_derivs_table: dimension mismatch");
    std::vector<double> w, invd, vv, wsum;
    fill_pair_tables(pt.y, w, invd, vv, wsum);
    SecondDerivTable out;
    out.m = m;
    out.t.assign(size_t(m) << m, 0.0);
    fill_table(m, pt.y, p, F.v, w, invd, vv, wsum, out.t);
    return out;
}

DerivVector apply_pfaffian(int i, const EvaluationPoint& pt, const HypParams& p,
                           const DerivVector& F) {
    const int m = pt.m();
    if (i < 0 || i >= m || F.m != m)
        throw InvalidArgument("apply_pfaffian: bad arguments");
    auto table = second_derivs_table(pt, p, F);
    DerivVector out(m);
    for (SubsetIndex J = 0; J < out.size(); ++J) {
        if (J & bit(i))
            out[J] = table(i, J ^ bit(i)) / pt.y[i];
        else
            out[J] = F[J | bit(i)];
    }
    return out;
}

DerivVector directional_derivative(std::span<const double> dir, const EvaluationPoint& pt,
                                   const HypParams& p, const DerivVector& F) {
    const int m = pt.m();
    if (static_cast<int>(dir.size()) != m || F.m != m)
        throw InvalidArgument("directional_derivative: dimension mismatch");
    auto table = second_derivs_table(pt, p, F);
    DerivVector out(m);
    for (SubsetIndex J = 0; J < out.size(); ++J) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            if (J & bit(i))
                acc += dir[i] * table(i, J ^ bit(i)) / pt.y[i];
            else
                acc += dir[i] * F[J | bit(i)];
        }
        out[J] = acc;
    }
    return out;
}

std::vector<double> a0_spectrum(std::span<const double> beta) {
    const int m = static_cast<int>(beta.size());
    double total = 0.0;
    for (double b : beta)
        total += b;
    std::vector<double> ev(size_t(1) << m);
    ev[0] = -total;
    for (SubsetIndex s = 1; s < ev.size(); ++s) {
        SubsetIndex low = s & -s;
        ev[s] = ev[s ^ low] + beta[__builtin_ctz(low)];
    }
    return ev;
}

GRhs::GRhs(HypParams p, std::vector<double> beta, double n, bool with_power)
    : p_(p), beta_(std::move(beta)), n_(n), with_power_(with_power) {
    if (beta_.empty() || beta_.size() > 20)
        throw InvalidArgument("GRhs: dimension out of range");
    for (double b : beta_) {
        if (!(b > 0.0))
            throw InvalidArgument("GRhs: beta must be positive");
        beta_sum_ += b;
    }
    for (size_t i = 0; i < beta_.size(); ++i)
        for (size_t j = i + 1; j < beta_.size(); ++j)
            if (beta_[i] == beta_[j])
                throw SingularPoint("GRhs: tied beta");
    y_.resize(beta_.size());
    table_.resize(beta_.size() << beta_.size());
}

void GRhs::operator()(double x, std::span<const double> g, std::span<double> out) {
    const int m = this->m();
    if (!(x > 0.0))
        throw InvalidArgument("GRhs: x must be positive");
    for (int i = 0; i < m; ++i)
        y_[i] = beta_[i] * x;
    fill_pair_tables(y_, w_, invd_, vv_, wsum_);
    fill_table(m, y_, p_, g, w_, invd_, vv_, wsum_, table_);

    const double diag = -beta_sum_ + (with_power_ ? 0.5 * m * n_ / x : 0.0);
    const SubsetIndex size = SubsetIndex(1) << m;
    for (SubsetIndex J = 0; J < size; ++J) {
        double acc = diag * g[J];
        for (int i = 0; i < m; ++i) {
            if (J & bit(i))
                acc += table_[(size_t(i) << m) | (J ^ bit(i))] / x; // beta_i / y_i = 1/x
            else
                acc += beta_[i] * g[J | bit(i)];
        }
        out[J] = acc;
    }
}

DerivVector g_rhs(double x, const DerivVector& G, std::span<const double> beta, double n) {
    GRhs rhs(HypParams{0.5 * (G.m + 1), 0.5 * (n + G.m + 1)},
             std::vector<double>(beta.begin(), beta.end()), n);
    if (rhs.m() != G.m)
        throw InvalidArgument("g_rhs: dimension mismatch");
    DerivVector out(G.m);
    rhs(x, G.v, out.v);
    return out;
}

double integrate_renormalized(GRhs& rhs, std::vector<double>& v, double x0, double x1,
                              const RadialPlan& plan) {
    ode::IntegrationPlan seg;
    seg.method = plan.method == 0   ? ode::Method::euler
                 : plan.method == 2 ? ode::Method::rk4_adaptive
                                    : ode::Method::rk4;
    seg.step = plan.step;
    seg.rel_tol = plan.rel_tol;

    const int nchunks = 256;
    const double chunk = (x1 - x0) / nchunks;
    double log_scale = 0.0;
    auto wrapped = [&rhs](double x, std::span<const double> g, std::span<double> out) {
        rhs(x, g, out);
    };
    double x = x0;
    for (int ci = 0; ci < nchunks; ++ci) {
        double xn = (ci + 1 == nchunks) ? x1 : x0 + chunk * (ci + 1);
        seg.x_start = x;
        seg.x_end = xn;
        // x = 0 is a regular singular point of the system; keep steps a small
        // fraction of x there so the error constant stays uniform
        if (seg.method != ode::Method::rk4_adaptive && plan.origin_refine > 0.0)
            seg.step = std::min(plan.step,
                                std::max(plan.origin_refine * x, 1e-3 * plan.step));
        v = ode::integrate(wrapped, v, seg);
        x = xn;
        double norm = 0.0;
        for (double t : v)
            norm = std::max(norm, std::abs(t));
        if (norm > 1e60 || (norm > 0.0 && norm < 1e-60)) {
            for (double& t : v)
                t /= norm;
            log_scale += std::log(norm);
        }
    }
    return log_scale;
}

double hyp1f1_hgm_log(const HypParams& p, std::span<const double> y, const RadialOptions& opts) {
    const int m = static_cast<int>(y.size());
    std::vector<double> beta(y.begin(), y.end());
    double bmax = 0.0, bsum = 0.0;
    for (double b : beta) {
        if (!(b > 0.0))
            throw InvalidArgument("hyp1f1_hgm_log: coordinates must be positive");
        bmax = std::max(bmax, b);
        bsum += b;
    }
    const double nu = 2.0 * p.c - m - 1; // prefactor exponent pair of (a,c)
    const double t0 = std::min(0.5, opts.x0 / bmax);

    int degree = opts.degree;
    std::vector<double> y0(m);
    for (int i = 0; i < m; ++i)
        y0[i] = beta[i] * t0;
    if (degree <= 0)
        degree = series::auto_truncation_degree(p, y0, m);
    auto f0 = series::squarefree_derivatives_at(p, y0, {degree, m});

    GRhs rhs(p, beta, nu, /*with_power=*/false);
    RadialPlan plan;
    plan.step = opts.step > 0.0 ? opts.step
                                : std::min(0.5 / bsum, (1.0 - t0) / 1e4);
    std::vector<double> v = f0.v;
    double log_scale = integrate_renormalized(rhs, v, t0, 1.0, plan);
    const double l0 = -t0 * bsum;
    if (!(v[0] > 0.0))
        throw NumericalError("hyp1f1_hgm_log: nonpositive leading component");
    return std::log(v[0]) + log_scale + l0 + bsum;
}

void dump_pfaffian_tsv(int i, const EvaluationPoint& pt, const HypParams& p, std::ostream& os) {
    const int m = pt.m();
    const SubsetIndex size = SubsetIndex(1) << m;
    os << "# P_" << (i + 1) << "(y) rows over subset order, y =";
    for (double v : pt.y)
        os << ' ' << v;
    os << "\n";
    // column j = P_i e_j
    std::vector<DerivVector> cols;
    for (SubsetIndex j = 0; j < size; ++j) {
        DerivVector e(m);
        e[j] = 1.0;
        cols.push_back(apply_pfaffian(i, pt, p, e));
    }
    for (SubsetIndex r = 0; r < size; ++r) {
        for (SubsetIndex j = 0; j < size; ++j) {
            if (j)
                os << '\t';
            os << cols[j][r];
        }
        os << '\n';
    }
}

} // namespace hgm::pfaffian
