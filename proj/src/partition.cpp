#include "partition.hpp"

#include <numeric>

#include "errors.hpp"

namespace hgm {

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
    for (size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 1)
            throw InvalidArgument("partition parts must be positive");
        if (i > 0 && parts[i] > parts[i - 1])
            throw InvalidArgument("partition parts must be weakly decreasing");
    }
}

int Partition::weight() const {
    return std::accumulate(parts.begin(), parts.end(), 0);
}

std::string Partition::to_string() const {
    if (parts.empty())
        return "-";
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i)
            s += '.';
        s += std::to_string(parts[i]);
    }
    return s;
}

namespace partitions {

namespace {

void generate(int remaining, int max_part, int max_len, std::vector<int>& cur,
              std::vector<Partition>& out) {
    if (remaining == 0) {
        Partition p;
        p.parts = cur;
        out.push_back(std::move(p));
        return;
    }
    if (max_len == 0)
        return;
    // largest first part first gives reverse-lexicographic order
    int hi = std::min(remaining, max_part);
    for (int p = hi; p >= 1; --p) {
        // the rest must fit into max_len-1 parts of size <= p
        if (static_cast<long long>(p) * max_len < remaining)
            break;
        cur.push_back(p);
        generate(remaining - p, p, max_len - 1, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<Partition> partitions_of(int k, int max_length) {
    if (k < 0)
        throw InvalidArgument("partitions_of: k must be nonnegative");
    if (max_length < 1)
        throw InvalidArgument("partitions_of: max_length must be positive");
    std::vector<Partition> out;
    std::vector<int> cur;
    generate(k, k, max_length, cur, out);
    if (k == 0)
        out.assign(1, Partition{});
    return out;
}

bool dominates(const Partition& kappa, const Partition& lambda) {
    if (kappa.weight() != lambda.weight())
        throw InvalidArgument("dominates: partitions must have equal weight");
    int n = std::max(kappa.length(), lambda.length());
    long long sk = 0, sl = 0;
    for (int i = 0; i < n; ++i) {
        sk += kappa.part(i);
        sl += lambda.part(i);
        if (sl > sk)
            return false;
    }
    return true;
}

double rising_factorial(double a, int n) {
    double r = 1.0;
    for (int j = 0; j < n; ++j)
        r *= a + j;
    return r;
}

double gen_pochhammer(double a, const Partition& kappa) {
    double r = 1.0;
    for (int i = 0; i < kappa.length(); ++i)
        r *= rising_factorial(a - 0.5 * i, kappa.parts[i]);
    return r;
}

} // namespace partitions
} // namespace hgm
