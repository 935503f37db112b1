#pragma once
// Explicit exclusion sets over 1-based positions, kept sorted.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rational.hpp"

namespace cantor {

class IndexSet {
public:
    IndexSet() = default;

    explicit IndexSet(std::vector<std::uint64_t> indices) : idx_(std::move(indices)) {
        std::sort(idx_.begin(), idx_.end());
        idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
    }

    static IndexSet range(std::uint64_t first, std::uint64_t last) { // inclusive
        std::vector<std::uint64_t> v;
        for (std::uint64_t i = first; i <= last; ++i) v.push_back(i);
        return IndexSet(std::move(v));
    }

    bool contains(std::uint64_t i) const {
        return std::binary_search(idx_.begin(), idx_.end(), i);
    }

    std::uint64_t count_up_to(std::uint64_t n) const {
        return static_cast<std::uint64_t>(
            std::upper_bound(idx_.begin(), idx_.end(), n) - idx_.begin());
    }

    // realized density of the exclusion over [1, n]
    Rational density(std::uint64_t n) const {
        if (n == 0) return Rational(0);
        return make_rational(big_from_u64(count_up_to(n)), big_from_u64(n));
    }

    bool empty() const { return idx_.empty(); }
    std::size_t size() const { return idx_.size(); }
    const std::vector<std::uint64_t>& indices() const { return idx_; }

private:
    std::vector<std::uint64_t> idx_;
};

} // namespace cantor
