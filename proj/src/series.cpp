#include "series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>

namespace hgm::series {

namespace {

std::mutex g_cache_mutex;
std::map<std::pair<int, int>, std::shared_ptr<const SeriesContext>> g_cache;

Partition ones_partition(int l) {
    return Partition(std::vector<int>(l, 1));
}

Partition two_ones_partition(int l) {
    std::vector<int> p(l, 1);
    p[0] = 2;
    return Partition(std::move(p));
}

// (a)_kappa / (c)_kappa as a product of bounded factors; zero denominator
// factors are reported by the caller
bool pochhammer_ratio(double a, double c, const Partition& kappa, double* out) {
    double r = 1.0;
    for (int i = 0; i < kappa.length(); ++i) {
        double ai = a - 0.5 * i;
        double ci = c - 0.5 * i;
        for (int j = 0; j < kappa.parts[i]; ++j) {
            if (ci + j == 0.0)
                return false;
            r *= (ai + j) / (ci + j);
        }
    }
    *out = r;
    return true;
}

} // namespace

std::shared_ptr<const SeriesContext> SeriesContext::get(int degree, int max_length) {
    if (degree < 0 || max_length < 1)
        throw InvalidArgument("SeriesContext: bad truncation");
    std::lock_guard lock(g_cache_mutex);
    auto key = std::make_pair(degree, max_length);
    auto it = g_cache.find(key);
    if (it != g_cache.end())
        return it->second;

    auto ctx = std::make_shared<SeriesContext>();
    ctx->table_ = PartitionTable::make(degree, max_length);
    const auto& pt = *ctx->table_;
    ctx->rows_.resize(pt.count());
    for (int k = 0; k <= degree; ++k) {
        auto slice = zonal_to_monomial_coeffs(k, max_length);
        const int base = pt.weight_begin(k);
        const int n = pt.weight_end(k) - base;
        Rational kfact(factorial_big(k));
        for (int r = 0; r < n; ++r) {
            auto& row = ctx->rows_[base + r];
            for (int s = 0; s < n; ++s) {
                if (slice[r][s] == 0)
                    continue;
                row.push_back({base + s, to_double(slice[r][s] / kfact)});
            }
        }
    }
    g_cache.emplace(key, ctx);
    return ctx;
}

std::vector<double> SeriesContext::q_values(const HypParams& p) const {
    const auto& pt = *table_;
    std::vector<double> q(pt.count(), 0.0);
    for (int r = 0; r < pt.count(); ++r) {
        double ratio;
        if (!pochhammer_ratio(p.a, p.c, pt.items[r], &ratio))
            throw InvalidArgument("(c)_kappa vanishes for kappa = " + pt.items[r].to_string());
        if (ratio == 0.0)
            continue;
        for (const auto& e : rows_[r])
            q[e.col] += ratio * e.cdk;
    }
    return q;
}

double monomial_symmetric(const Partition& lambda, std::span<const double> y) {
    if (lambda.length() > static_cast<int>(y.size()))
        return 0.0;
    if (lambda.empty())
        return 1.0;
    auto pt = PartitionTable::make(lambda.weight(), lambda.length());
    auto m = monomial_table(*pt, y);
    return m[pt->index_of(lambda)];
}

double q_coefficient(const Partition& lambda, const HypParams& p) {
    int len = std::max(1, lambda.length());
    auto ctx = SeriesContext::get(lambda.weight(), len);
    auto q = ctx->q_values(p);
    return q[ctx->table().index_of(lambda)];
}

Rational q_coefficient_exact(const Partition& lambda, const Rational& a, const Rational& c) {
    const int k = lambda.weight();
    const int len = std::max(1, lambda.length());
    auto ps = partitions::partitions_of(k, len);
    auto slice = zonal_to_monomial_coeffs(k, len);
    int col = -1;
    for (size_t i = 0; i < ps.size(); ++i)
        if (ps[i] == lambda)
            col = static_cast<int>(i);
    Rational kfact(factorial_big(k));
    Rational q = 0;
    for (size_t r = 0; r < ps.size(); ++r) {
        if (slice[r][col] == 0)
            continue;
        Rational cp = gen_pochhammer_exact(c, ps[r]);
        if (cp == 0)
            throw InvalidArgument("(c)_kappa vanishes for kappa = " + ps[r].to_string());
        q += gen_pochhammer_exact(a, ps[r]) * slice[r][col] / (cp * kfact);
    }
    return q;
}

namespace {

double stanley_weight(const Partition& kappa) {
    const auto& k = kappa.parts;
    const int l = kappa.length();
    double num = 1.0;
    for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j)
            num *= 2.0 * k[i] - 2.0 * k[j] - (i + 1) + (j + 1);
    double den = 1.0;
    for (int i = 0; i < l; ++i) {
        int e = 2 * k[i] + l - (i + 1);
        for (int t = 2; t <= e; ++t)
            den *= t;
    }
    return num / den;
}

} // namespace

double q_ones_closed_form(int k, const HypParams& p) {
    if (k < 1)
        throw InvalidArgument("q_ones_closed_form: k >= 1 required");
    double pref = std::pow(2.0, k);
    for (int t = 2; t <= k; ++t)
        pref *= t;
    double sum = 0.0;
    for (const auto& kappa : partitions::partitions_of(k, k)) {
        double ratio;
        if (!pochhammer_ratio(p.a, p.c, kappa, &ratio))
            throw InvalidArgument("(c)_kappa vanishes for kappa = " + kappa.to_string());
        sum += stanley_weight(kappa) * ratio;
    }
    return pref * sum;
}

double q_two_ones_closed_form(int k, const HypParams& p) {
    if (k < 2)
        throw InvalidArgument("q_two_ones_closed_form: k >= 2 required");
    double pref = std::pow(2.0, k);
    for (int t = 2; t <= k - 2; ++t)
        pref *= t;
    double sum = 0.0;
    for (const auto& kappa : partitions::partitions_of(k, k)) {
        double ratio;
        if (!pochhammer_ratio(p.a, p.c, kappa, &ratio))
            throw InvalidArgument("(c)_kappa vanishes for kappa = " + kappa.to_string());
        double extra = 0.5 * k * (k - 1);
        for (int i = 0; i < kappa.length(); ++i)
            extra += static_cast<double>(kappa.parts[i]) * (kappa.parts[i] - (i + 1));
        sum += stanley_weight(kappa) * extra * ratio;
    }
    return pref * sum;
}

double hyp1f1_series(const HypParams& p, std::span<const double> y, const TruncationConfig& cfg) {
    const int m = static_cast<int>(y.size());
    if (cfg.m != 0 && cfg.m != m)
        throw InvalidArgument("hyp1f1_series: dimension mismatch");
    if (m == 0)
        return 1.0;
    auto ctx = SeriesContext::get(cfg.degree, m);
    auto q = ctx->q_values(p);
    auto mv = monomial_table(ctx->table(), y);
    // accumulate per total-degree block, low degrees first
    double sum = 0.0;
    for (int k = 0; k <= cfg.degree; ++k) {
        double block = 0.0;
        for (int i = ctx->table().weight_begin(k); i < ctx->table().weight_end(k); ++i)
            block += q[i] * mv[i];
        sum += block;
    }
    return sum;
}

int auto_truncation_degree(const HypParams& p, std::span<const double> y0, int m, double tol,
                           bool* capped) {
    int cap;
    if (m <= 3)
        cap = 150;
    else if (m <= 5)
        cap = 60;
    else if (m <= 8)
        cap = 32;
    else
        cap = 24;
    if (capped)
        *capped = false;

    double tr = 0.0;
    for (double v : y0)
        tr += std::abs(v);

    const int floor_k = std::min(m + 4, cap);
    double u = 1.0, prev = 1e308;
    for (int k = 1; k <= cap; ++k) {
        u *= std::abs((p.a + k - 1) / (p.c + k - 1)) * tr / k;
        if (u < tol && prev < tol)
            return std::max(k, floor_k);
        prev = u;
    }
    if (capped)
        *capped = true;
    return cap;
}

namespace {

// One term of the derivative expansion: q_lambda picks up factor *
// M_{kappa - tau}(front vars) * M_nu(back vars).
struct Split {
    int lambda;
    int kappa_minus; // index of kappa - (t,...,t)
    int nu;
    double factor; // prod over kappa parts of p!/(p-t)!
};

void enumerate_splits(const PartitionTable& pt, int lambda_idx, int t, int l,
                      std::vector<Split>& out) {
    const Partition& lam = pt.items[lambda_idx];
    if (lam.length() < l)
        return;
    // distinct values with multiplicities
    std::vector<std::pair<int, int>> vals;
    for (size_t i = 0; i < lam.parts.size();) {
        size_t j = i;
        while (j < lam.parts.size() && lam.parts[j] == lam.parts[i])
            ++j;
        vals.emplace_back(lam.parts[i], static_cast<int>(j - i));
        i = j;
    }
    std::vector<int> take(vals.size(), 0);
    // choose how many parts of each value go into kappa
    auto rec = [&](auto&& self, size_t d, int remaining) -> void {
        if (remaining == 0) {
            for (size_t e = d; e < vals.size(); ++e)
                take[e] = 0;
            std::vector<int> km, nu;
            double factor = 1.0;
            for (size_t e = 0; e < vals.size(); ++e) {
                int v = vals[e].first;
                for (int r = 0; r < take[e]; ++r) {
                    if (v < t)
                        return; // tau not contained in kappa
                    if (v - t > 0)
                        km.push_back(v - t);
                    double f = 1.0;
                    for (int u = v - t + 1; u <= v; ++u)
                        f *= u;
                    factor *= f;
                }
                for (int r = take[e]; r < vals[e].second; ++r)
                    nu.push_back(v);
            }
            std::sort(km.begin(), km.end(), std::greater<int>());
            std::sort(nu.begin(), nu.end(), std::greater<int>());
            Partition pkm, pnu;
            pkm.parts = std::move(km);
            pnu.parts = std::move(nu);
            int ikm = pt.index_of(pkm);
            int inu = pt.index_of(pnu);
            if (ikm >= 0 && inu >= 0)
                out.push_back({lambda_idx, ikm, inu, factor});
            return;
        }
        if (d == vals.size())
            return;
        int hi = std::min(vals[d].second, remaining);
        for (int c = 0; c <= hi; ++c) {
            take[d] = c;
            if (c > 0 && vals[d].first < t)
                break; // parts below t cannot enter kappa
            self(self, d + 1, remaining - c);
        }
    };
    rec(rec, 0, l);
}

std::vector<Split> build_splits(const PartitionTable& pt, int t, int l) {
    std::vector<Split> out;
    for (int i = 0; i < pt.count(); ++i)
        if (pt.items[i].weight() >= t * l)
            enumerate_splits(pt, i, t, l, out);
    return out;
}

} // namespace

double rect_derivative_series(int t, int l, const HypParams& p, std::span<const double> y,
                              const TruncationConfig& cfg) {
    const int m = static_cast<int>(y.size());
    if (l < 0 || l > m || t < 1)
        throw InvalidArgument("rect_derivative_series: bad rectangle");
    auto ctx = SeriesContext::get(cfg.degree, std::max(m, l));
    const auto& pt = ctx->table();
    auto q = ctx->q_values(p);
    auto splits = build_splits(pt, t, l);
    std::vector<double> front(y.begin(), y.begin() + l);
    std::vector<double> back(y.begin() + l, y.end());
    auto mf = monomial_table(pt, front);
    auto mb = monomial_table(pt, back);
    double acc = 0.0;
    for (const auto& s : splits)
        acc += q[s.lambda] * s.factor * mf[s.kappa_minus] * mb[s.nu];
    return acc;
}

DerivVector squarefree_derivatives_at(const HypParams& p, std::span<const double> y0,
                                      const TruncationConfig& cfg, InitMode mode) {
    const int m = static_cast<int>(y0.size());
    if (m < 1 || m > 20)
        throw InvalidArgument("squarefree_derivatives_at: dimension out of range");
    auto ctx = SeriesContext::get(cfg.degree, m);
    const auto& pt = ctx->table();
    auto q = ctx->q_values(p);
    DerivVector out(m);

    if (mode == InitMode::linear) {
        if (cfg.degree < m + 1)
            throw InvalidArgument("linear initial values need truncation degree >= m+1");
        std::vector<double> qo(m + 2, 0.0), qt(m + 1, 0.0);
        for (int l = 0; l <= m + 1; ++l) {
            int idx = pt.index_of(ones_partition(l));
            qo[l] = idx >= 0 ? q[idx] : 0.0;
        }
        for (int l = 1; l <= m; ++l)
            qt[l] = q[pt.index_of(two_ones_partition(l))];
        double total = 0.0;
        for (double v : y0)
            total += v;
        for (SubsetIndex j = 0; j < out.size(); ++j) {
            int l = popcount(j);
            double inside = 0.0;
            for (int i = 0; i < m; ++i)
                if (j & (SubsetIndex(1) << i))
                    inside += y0[i];
            double val = qo[l];
            if (l >= 1)
                val += 2.0 * qt[l] * inside;
            if (l < m)
                val += qo[l + 1] * (total - inside);
            out[j] = val;
        }
        return out;
    }

    // full series: the expansion is differentiated exactly, so the point must
    // be usable downstream where tied coordinates are singular
    double ymax = 0.0;
    for (double v : y0)
        ymax = std::max(ymax, std::abs(v));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::abs(y0[i] - y0[j]) <= 1e-14 * std::max(1.0, ymax))
                throw SingularPoint("squarefree_derivatives_at: tied coordinates");

    std::vector<std::vector<Split>> splits(m + 1);
    for (int l = 0; l <= m; ++l)
        splits[l] = build_splits(pt, 1, l);

    std::vector<double> front, back;
    for (SubsetIndex j = 0; j < out.size(); ++j) {
        front.clear();
        back.clear();
        for (int i = 0; i < m; ++i) {
            if (j & (SubsetIndex(1) << i))
                front.push_back(y0[i]);
            else
                back.push_back(y0[i]);
        }
        auto mf = monomial_table(pt, front);
        auto mb = monomial_table(pt, back);
        double acc = 0.0;
        for (const auto& s : splits[popcount(j)])
            acc += q[s.lambda] * s.factor * mf[s.kappa_minus] * mb[s.nu];
        out[j] = acc;
    }
    return out;
}

std::vector<double> diagonal_series_coeffs(const HypParams& p, int m, int degree) {
    auto ctx = SeriesContext::get(degree, m);
    const auto& pt = ctx->table();
    auto q = ctx->q_values(p);
    std::vector<double> b(degree + 1, 0.0);
    for (int i = 0; i < pt.count(); ++i) {
        const auto& lam = pt.items[i];
        // number of distinct monomials with exponent multiset lam in m slots
        double count = 1.0;
        for (int r = 0; r < lam.length(); ++r)
            count *= m - r;
        for (size_t r = 0; r < lam.parts.size();) {
            size_t s = r;
            while (s < lam.parts.size() && lam.parts[s] == lam.parts[r])
                ++s;
            for (size_t t = 2; t <= s - r; ++t)
                count /= static_cast<double>(t);
            r = s;
        }
        b[lam.weight()] += q[i] * count;
    }
    return b;
}

std::vector<double> diagonal_series_state(const HypParams& p, int m, double y0, int degree,
                                          int nderiv) {
    auto b = diagonal_series_coeffs(p, m, degree);
    std::vector<double> state(nderiv + 1, 0.0);
    for (int d = 0; d <= nderiv; ++d) {
        double acc = 0.0;
        for (int k = degree; k >= d; --k) {
            double coef = b[k];
            for (int j = 0; j < d; ++j)
                coef *= k - j;
            acc = acc * y0 + coef; // Horner in y0 over k-d
        }
        state[d] = acc;
    }
    return state;
}

void dump_zonal_tsv(int degree, int max_length, std::ostream& os) {
    os << "# zonal -> monomial coefficients c[kappa][lambda], exact\n";
    os << "k\tkappa\tlambda\tc\n";
    for (int k = 0; k <= degree; ++k) {
        auto ps = partitions::partitions_of(k, max_length);
        auto slice = zonal_to_monomial_coeffs(k, max_length);
        for (size_t r = 0; r < ps.size(); ++r)
            for (size_t s = 0; s < ps.size(); ++s)
                if (slice[r][s] != 0)
                    os << k << '\t' << ps[r].to_string() << '\t' << ps[s].to_string() << '\t'
                       << rational_to_string(slice[r][s]) << '\n';
    }
}

void dump_q_tsv(const Rational& a, const Rational& c, int degree, int max_length,
                std::ostream& os) {
    os << "# monomial-basis coefficients q_lambda(a,c), exact\n";
    os << "lambda\tq\n";
    for (int k = 0; k <= degree; ++k)
        for (const auto& lam : partitions::partitions_of(k, max_length))
            os << lam.to_string() << '\t' << rational_to_string(q_coefficient_exact(lam, a, c))
               << '\n';
}

} // namespace hgm::series
