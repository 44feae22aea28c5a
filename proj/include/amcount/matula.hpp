#pragma once

// Matula coding of finite non-planar rooted trees: n(leaf) = 1 and
// n(T) = p_{n(T_1)} ... p_{n(T_l)} over the subtrees hanging from the root.

#include "amcount/errors.hpp"
#include "amcount/integer.hpp"
#include "amcount/primes.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace amc {

struct RootedTree {
    std::vector<RootedTree> children;

    static RootedTree leaf() { return {}; }

    std::size_t vertex_count() const {
        std::size_t n = 1;
        for (const auto& c : children) n += c.vertex_count();
        return n;
    }

    int height() const {
        int h = 0;
        for (const auto& c : children) h = std::max(h, 1 + c.height());
        return h;
    }

    /// Order-free key: two trees are isomorphic iff their keys are equal.
    std::string structural_key() const {
        std::vector<std::string> keys;
        keys.reserve(children.size());
        for (const auto& c : children) keys.push_back(c.structural_key());
        std::sort(keys.begin(), keys.end());
        std::string out = "(";
        for (const auto& k : keys) out += k;
        out += ')';
        return out;
    }

    /// Equality of non-planar trees (children compared as a multiset).
    friend bool operator==(const RootedTree& a, const RootedTree& b) {
        return a.structural_key() == b.structural_key();
    }
};

// ---------------------------------------------------------------------------
// Notation: tree := "(" tree* ")"
// ---------------------------------------------------------------------------

inline RootedTree parse_tree(std::string_view text) {
    if (text.empty()) throw ParseError("empty tree notation", 0);
    if (text[0] != '(') throw ParseError(std::string("expected '(' but found '") + text[0] + "'", 0);
    std::vector<RootedTree> stack;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == '(') {
            stack.emplace_back();
        } else if (ch == ')') {
            if (stack.empty()) throw ParseError("unmatched ')'", i);
            RootedTree done = std::move(stack.back());
            stack.pop_back();
            if (stack.empty()) {
                if (i + 1 != text.size()) throw ParseError("trailing characters after tree", i + 1);
                return done;
            }
            stack.back().children.push_back(std::move(done));
        } else {
            throw ParseError(std::string("unexpected character '") + ch + "'", i);
        }
    }
    throw ParseError("unbalanced '(': " + std::to_string(stack.size()) + " unclosed", text.size());
}

/// Emits children in stored order; canonical trees (from decode or
/// canonicalize) print with ascending child codes.
inline std::string format_tree(const RootedTree& tree) {
    std::string out = "(";
    for (const auto& c : tree.children) out += format_tree(c);
    out += ')';
    return out;
}

// ---------------------------------------------------------------------------
// Encoding / decoding
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t child_prime(const BigInt& code, const PrimeTable& table) {
    if (code > table.count())
        throw CapacityError("subtree code " + code.str() + " exceeds the table's nth-prime range (" +
                            std::to_string(table.count()) + " primes <= " + std::to_string(table.limit()) +
                            ")");
    return table.nth_prime(static_cast<std::uint64_t>(code));
}

inline std::uint64_t rank_of(const BigInt& p, const PrimeTable& table) {
    if (p > table.limit())
        throw CapacityError("prime factor " + p.str() + " beyond table limit " + std::to_string(table.limit()) +
                            "; its index is unresolvable");
    return table.prime_index(static_cast<std::uint64_t>(p));
}

inline BigInt encode_sorted(RootedTree& tree, const PrimeTable& table) {
    std::vector<std::pair<BigInt, std::size_t>> codes;
    codes.reserve(tree.children.size());
    for (std::size_t i = 0; i < tree.children.size(); ++i)
        codes.emplace_back(encode_sorted(tree.children[i], table), i);
    std::stable_sort(codes.begin(), codes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<RootedTree> ordered;
    ordered.reserve(codes.size());
    BigInt n = 1;
    for (const auto& [code, idx] : codes) {
        n *= detail::child_prime(code, table);
        ordered.push_back(std::move(tree.children[idx]));
    }
    tree.children = std::move(ordered);
    return n;
}

}  // namespace detail

/// Matula number n(T).
inline BigInt encode(const RootedTree& tree, const PrimeTable& table) {
    BigInt n = 1;
    for (const auto& c : tree.children) n *= detail::child_prime(encode(c, table), table);
    return n;
}

/// Same tree with children ordered by ascending Matula code at every node.
inline RootedTree canonicalize(RootedTree tree, const PrimeTable& table) {
    detail::encode_sorted(tree, table);
    return tree;
}

/// Inverse of encode; the result is canonical.
inline RootedTree decode(const BigInt& n, const PrimeTable& table) {
    if (n < 1) throw ContractError("Matula decode needs n >= 1");
    RootedTree tree;
    if (n == 1) return tree;
    for (const auto& [p, e] : factorize(n, table)) {
        RootedTree child = decode(BigInt(detail::rank_of(p, table)), table);
        for (std::uint32_t i = 0; i < e; ++i) tree.children.push_back(child);
    }
    return tree;
}

/// code -> height cache for codes up to a fixed bound. Inserts are idempotent
/// relaxed stores, so one instance may be shared between threads.
class HeightMemo {
public:
    explicit HeightMemo(std::uint64_t bound = 1'000'000)
        : bound_(bound), heights_(std::make_unique<std::atomic<std::int16_t>[]>(bound + 1)) {
        for (std::uint64_t i = 0; i <= bound_; ++i) heights_[i].store(-1, std::memory_order_relaxed);
    }

    std::uint64_t bound() const noexcept { return bound_; }

    int get(std::uint64_t n) const {
        return n <= bound_ ? heights_[n].load(std::memory_order_relaxed) : -1;
    }
    void put(std::uint64_t n, int h) {
        if (n <= bound_) heights_[n].store(static_cast<std::int16_t>(h), std::memory_order_relaxed);
    }

private:
    std::uint64_t bound_;
    std::unique_ptr<std::atomic<std::int16_t>[]> heights_;
};

/// height(decode(n)) without building the tree.
inline int height_of_code(const BigInt& n, const PrimeTable& table, HeightMemo* memo = nullptr) {
    if (n < 1) throw ContractError("height_of_code needs n >= 1");
    if (n == 1) return 0;
    bool small = memo && n <= memo->bound();
    if (small) {
        int h = memo->get(static_cast<std::uint64_t>(n));
        if (h >= 0) return h;
    }
    int h = 0;
    for (const auto& pe : factorize(n, table))
        h = std::max(h, 1 + height_of_code(BigInt(detail::rank_of(pe.prime, table)), table, memo));
    if (small) memo->put(static_cast<std::uint64_t>(n), h);
    return h;
}

inline bool is_power_of(std::uint64_t v, int m) {
    if (v == 0) return false;
    while (v % static_cast<std::uint64_t>(m) == 0) v /= static_cast<std::uint64_t>(m);
    return v == 1;
}

/// n in A_m: n >= 2 and every prime factor of n is p_{m^k} for some k >= 0.
inline bool is_in_Am(const BigInt& n, int m, const PrimeTable& table) {
    if (m < 2) throw DomainError("A_m needs m >= 2");
    if (n < 2) return false;
    for (const auto& pe : factorize(n, table))
        if (!is_power_of(detail::rank_of(pe.prime, table), m)) return false;
    return true;
}

inline constexpr std::uint64_t kHeightScanCap = 100'000'000;

/// #{1 <= n <= x : height(decode(n)) <= 2}, code 1 included. Equals
/// M_{2,2}(x) + 1.
inline std::uint64_t count_height_le2(std::uint64_t x, const PrimeTable& table) {
    if (x < 1) throw ContractError("count_height_le2 needs x >= 1");
    if (x > kHeightScanCap)
        throw ContractError("count_height_le2 scans at most " + std::to_string(kHeightScanCap) + " codes");
    if (x > table.limit())
        throw CapacityError("count_height_le2(" + std::to_string(x) + ") needs primes up to x; table limit is " +
                            std::to_string(table.limit()));
    // h[n] = max over primes p | n of 1 + h[pi(p)]; pi(p) < p so primes are
    // processed in increasing order.
    std::vector<std::uint8_t> h(x + 1, 0);
    std::uint64_t rank = 0;
    for (std::uint64_t p = 2; p <= x; ++p) {
        if (!table.is_prime(p)) continue;
        ++rank;
        auto v = static_cast<std::uint8_t>(std::min(1 + h[rank], 255));
        for (std::uint64_t n = p; n <= x; n += p) h[n] = std::max(h[n], v);
    }
    std::uint64_t c = 0;
    for (std::uint64_t n = 1; n <= x; ++n) c += h[n] <= 2;
    return c;
}

}  // namespace amc
