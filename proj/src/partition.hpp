#pragma once

#include <string>
#include <vector>

namespace hgm {

// Integer partition: weakly decreasing positive parts.  The empty partition
// (weight 0) is represented by an empty part list.
struct Partition {
    std::vector<int> parts;

    Partition() = default;
    explicit Partition(std::vector<int> p);
    Partition(std::initializer_list<int> p) : Partition(std::vector<int>(p)) {}

    int weight() const;
    int length() const { return static_cast<int>(parts.size()); }
    // 0-based access; parts beyond the length read as 0
    int part(int i) const { return i < length() ? parts[i] : 0; }
    bool empty() const { return parts.empty(); }

    bool operator==(const Partition&) const = default;

    // "2.1.1" for (2,1,1); "-" for the empty partition
    std::string to_string() const;
};

namespace partitions {

// All partitions of k with at most max_length parts, each exactly once, in
// reverse-lexicographic order: (k) first, (1,1,...,1) last.
std::vector<Partition> partitions_of(int k, int max_length);

// Dominance order on partitions of equal weight: every prefix sum of lambda
// is <= the corresponding prefix sum of kappa.  Throws on unequal weights.
bool dominates(const Partition& kappa, const Partition& lambda);

// a(a+1)...(a+n-1), with the empty product equal to 1
double rising_factorial(double a, int n);

// (a)_kappa = prod_i (a - (i-1)/2)_{k_i}
double gen_pochhammer(double a, const Partition& kappa);

} // namespace partitions
} // namespace hgm
