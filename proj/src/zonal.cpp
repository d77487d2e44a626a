#include "zonal.hpp"

#include <algorithm>

#include "errors.hpp"

namespace hgm::series {

namespace {

std::string key_of(const std::vector<int>& parts) {
    std::string k;
    for (int p : parts) {
        k += static_cast<char>(p & 0xff);
        k += static_cast<char>((p >> 8) & 0xff);
    }
    return k;
}

// rho_kappa = sum_i k_i (k_i - i), strictly decreasing along downward
// dominance moves, so the recurrence denominators below never vanish
long long rho(const Partition& p) {
    long long r = 0;
    for (int i = 0; i < p.length(); ++i)
        r += static_cast<long long>(p.parts[i]) * (p.parts[i] - (i + 1));
    return r;
}

} // namespace

int PartitionTable::index_of(const Partition& p) const {
    auto it = lookup_.find(key_of(p.parts));
    return it == lookup_.end() ? -1 : it->second;
}

std::shared_ptr<const PartitionTable> PartitionTable::make(int max_weight, int max_length) {
    if (max_weight < 0 || max_length < 1)
        throw InvalidArgument("PartitionTable: bad bounds");
    auto pt = std::make_shared<PartitionTable>();
    pt->max_weight = max_weight;
    pt->max_length = max_length;
    pt->first_of_weight.assign(max_weight + 2, 0);
    for (int k = 0; k <= max_weight; ++k) {
        pt->first_of_weight[k] = pt->count();
        auto ps = partitions::partitions_of(k, max_length);
        for (auto& p : ps)
            pt->items.push_back(std::move(p));
    }
    pt->first_of_weight[max_weight + 1] = pt->count();

    for (int i = 0; i < pt->count(); ++i)
        pt->lookup_.emplace(key_of(pt->items[i].parts), i);

    pt->links.resize(pt->count());
    std::vector<int> scratch;
    for (int i = 0; i < pt->count(); ++i) {
        const auto& parts = pt->items[i].parts;
        size_t j = 0;
        while (j < parts.size()) {
            size_t j2 = j;
            while (j2 < parts.size() && parts[j2] == parts[j])
                ++j2;
            scratch.assign(parts.begin(), parts.end());
            scratch.erase(scratch.begin() + j);
            int child = pt->lookup_.at(key_of(scratch));
            pt->links[i].push_back({parts[j], static_cast<int>(j2 - j), child});
            j = j2;
        }
    }
    return pt;
}

std::vector<std::vector<Rational>> zonal_to_monomial_coeffs(int k, int max_length) {
    auto ps = partitions::partitions_of(k, max_length);
    const int n = static_cast<int>(ps.size());

    std::unordered_map<std::string, int> pos;
    for (int i = 0; i < n; ++i)
        pos.emplace(key_of(ps[i].parts), i);
    std::vector<long long> rhos(n);
    for (int i = 0; i < n; ++i)
        rhos[i] = rho(ps[i]);

    // row-sum targets: sum_kappa c_{kappa,lambda} = k! / prod lambda_i!
    std::vector<Rational> target(n);
    for (int i = 0; i < n; ++i) {
        BigInt den = 1;
        for (int p : ps[i].parts)
            den *= factorial_big(p);
        target[i] = Rational(factorial_big(k), den);
    }

    std::vector<std::vector<Rational>> c(n, std::vector<Rational>(n, Rational(0)));
    std::vector<Rational> colsum(n, Rational(0));
    std::vector<int> mu;

    // rows top-down; reverse-lexicographic order refines dominance, so every
    // same-row reference below is to an already filled entry
    for (int r = 0; r < n; ++r) {
        c[r][r] = target[r] - colsum[r];
        for (int s = r + 1; s < n; ++s) {
            if (!partitions::dominates(ps[r], ps[s]))
                continue;
            const auto& l = ps[s].parts;
            const int L = static_cast<int>(l.size());
            Rational acc = 0;
            for (int i = 0; i < L; ++i) {
                for (int j = i + 1; j < L; ++j) {
                    for (int t = 1; t <= l[j]; ++t) {
                        mu.assign(l.begin(), l.end());
                        mu[i] += t;
                        mu[j] -= t;
                        std::sort(mu.begin(), mu.end(), std::greater<int>());
                        while (!mu.empty() && mu.back() == 0)
                            mu.pop_back();
                        int midx = pos.at(key_of(mu));
                        if (c[r][midx] != 0)
                            acc += (l[i] - l[j] + 2 * t) * c[r][midx];
                    }
                }
            }
            if (acc != 0)
                c[r][s] = acc / Rational(rhos[r] - rhos[s]);
        }
        for (int s = 0; s < n; ++s)
            if (c[r][s] != 0)
                colsum[s] += c[r][s];
    }
    return c;
}

std::vector<double> monomial_table(const PartitionTable& pt, std::span<const double> vars) {
    std::vector<double> m(pt.count(), 0.0);
    if (pt.count() == 0)
        return m;
    m[0] = 1.0; // empty partition

    std::vector<double> powers(pt.max_weight + 1);
    for (double v : vars) {
        powers[0] = 1.0;
        for (int t = 1; t <= pt.max_weight; ++t)
            powers[t] = powers[t - 1] * v;
        // descending weight so children still hold previous-variable values
        for (int i = pt.count() - 1; i >= 1; --i) {
            double add = 0.0;
            for (const auto& link : pt.links[i])
                add += powers[link.value] * m[link.child];
            m[i] += add;
        }
    }
    return m;
}

} // namespace hgm::series
