#pragma once

#include "amcount/matula.hpp"
#include "amcount/primes.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace amc::testing {

/// One table per limit, built on first use and kept for the process.
inline const PrimeTable& shared_table(std::uint64_t limit = std::uint64_t{1} << 22) {
    static std::map<std::uint64_t, PrimeTable> tables;
    auto it = tables.find(limit);
    if (it == tables.end()) it = tables.emplace(limit, PrimeTable::build(limit)).first;
    return it->second;
}

/// Plain sieve of Eratosthenes.
inline std::vector<std::uint64_t> naive_primes(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

namespace detail {

// children drawn from pool in non-increasing index order
inline void grow(const std::vector<std::vector<RootedTree>>& by_size, std::size_t remaining,
                 std::size_t max_size, std::size_t max_index, std::vector<RootedTree>& children,
                 std::vector<RootedTree>& out) {
    if (remaining == 0) {
        out.push_back(RootedTree{children});
        return;
    }
    for (std::size_t s = std::min(remaining, max_size); s >= 1; --s) {
        const auto& pool = by_size[s];
        std::size_t top = s == max_size ? max_index : pool.size() - 1;
        for (std::size_t i = 0; i <= top && i < pool.size(); ++i) {
            children.push_back(pool[i]);
            grow(by_size, remaining - s, s, i, children, out);
            children.pop_back();
        }
    }
}

}  // namespace detail

/// All non-isomorphic rooted trees grouped by vertex count, up to n vertices.
/// Built without reference to Matula codes.
inline std::vector<std::vector<RootedTree>> trees_up_to(std::size_t n) {
    std::vector<std::vector<RootedTree>> by_size(n + 1);
    if (n >= 1) by_size[1].push_back(RootedTree::leaf());
    for (std::size_t v = 2; v <= n; ++v) {
        std::vector<RootedTree> children;
        detail::grow(by_size, v - 1, v - 1, by_size[v - 1].size() - 1, children, by_size[v]);
    }
    return by_size;
}

}  // namespace amc::testing
