#pragma once

#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "partition.hpp"
#include "rational.hpp"

namespace hgm::series {

// All partitions of weight <= max_weight with at most max_length parts,
// grouped by weight (reverse-lexicographic within a weight), plus the links
// needed by the monomial-polynomial recursion.
struct PartitionTable {
    int max_weight = 0;
    int max_length = 0;
    std::vector<Partition> items;
    std::vector<int> first_of_weight; // size max_weight + 2

    // one link per distinct part value: the partition with one such part
    // removed, and that value's multiplicity
    struct Link {
        int value;
        int multiplicity;
        int child; // global index of the partition minus one part `value`
    };
    std::vector<std::vector<Link>> links;

    int count() const { return static_cast<int>(items.size()); }
    int weight_begin(int k) const { return first_of_weight[k]; }
    int weight_end(int k) const { return first_of_weight[k + 1]; }
    // -1 when absent (too long or too heavy)
    int index_of(const Partition& p) const;

    static std::shared_ptr<const PartitionTable> make(int max_weight, int max_length);

private:
    std::unordered_map<std::string, int> lookup_;
};

// Exact zonal -> monomial change of basis for one weight: row-major matrix
// c[kappa][lambda] over the weight-k partitions of length <= max_length, in
// table order.  Entries with lambda not dominated by kappa are zero.
std::vector<std::vector<Rational>> zonal_to_monomial_coeffs(int k, int max_length);

// Values of every monomial symmetric polynomial in the table at one point,
// indexed like the table.  Variables beyond the partition length contribute
// per the usual definition; partitions longer than the variable count get 0.
std::vector<double> monomial_table(const PartitionTable& pt, std::span<const double> vars);

} // namespace hgm::series
