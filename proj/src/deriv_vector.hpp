#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace hgm {

// Subsets of {1..m} as bitmasks: bit i-1 set means the derivative in
// direction i is taken.  Entry order of a DerivVector is plain integer order
// of the mask: {}, {1}, {2}, {1,2}, {3}, ...
using SubsetIndex = std::uint32_t;

inline int popcount(SubsetIndex s) { return __builtin_popcount(s); }

// The 2^m square-free mixed derivatives of a function at one point.
struct DerivVector {
    int m = 0;
    std::vector<double> v;

    DerivVector() = default;
    explicit DerivVector(int m_) : m(m_), v(static_cast<size_t>(1) << m_, 0.0) {
        if (m_ < 0 || m_ > 20)
            throw InvalidArgument("DerivVector: dimension out of range");
    }

    size_t size() const { return v.size(); }
    double& operator[](SubsetIndex j) { return v[j]; }
    double operator[](SubsetIndex j) const { return v[j]; }
};

// Relabel coordinates: perm[i] is the new label of old coordinate i (0-based).
// Entry J of the input lands at the relabeled subset.
inline DerivVector permute_coordinates(const DerivVector& f, const std::vector<int>& perm) {
    DerivVector out(f.m);
    for (SubsetIndex j = 0; j < f.size(); ++j) {
        SubsetIndex mapped = 0;
        for (int i = 0; i < f.m; ++i)
            if (j & (SubsetIndex(1) << i))
                mapped |= SubsetIndex(1) << perm[i];
        out[mapped] = f[j];
    }
    return out;
}

} // namespace hgm
