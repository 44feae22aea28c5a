#pragma once

#include "amcount/errors.hpp"
#include "amcount/integer.hpp"
#include "amcount/prime_count.hpp"
#include "amcount/primes.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace amc {

// ---------------------------------------------------------------------------
// LambdaSystem
// ---------------------------------------------------------------------------

struct LambdaValue {
    double value;
    bool exact;
    double error_bound;  // 0 when exact
};

/// The sequence lambda_k, k >= 0. For the prime system lambda_k = log p_{m^k}:
/// exact from the sieve for k <= crossover(), inverse-li estimates beyond. The
/// integer system lambda_k = k + 1 (N(u) = floor(u)) is the classical
/// unrestricted-partition case.
class LambdaSystem {
public:
    static LambdaSystem prime_powers(int m, const PrimeTable& table) {
        if (m < 2) throw DomainError("lambda system needs m >= 2");
        if (table.count() < 1) throw CapacityError("empty prime table");
        LambdaSystem s;
        s.kind_ = Kind::PrimePowers;
        s.m_ = m;
        s.table_ = &table;
        std::uint32_t k0 = max_power_index(m, table.count());
        s.exact_.reserve(k0 + 1);
        for (std::uint32_t k = 0; k <= k0; ++k)
            s.exact_.push_back(std::log(static_cast<double>(table.nth_prime(ipow(m, k)))));
        return s;
    }

    static LambdaSystem integers() {
        LambdaSystem s;
        s.kind_ = Kind::Integers;
        s.m_ = 0;
        return s;
    }

    bool is_prime_system() const noexcept { return kind_ == Kind::PrimePowers; }
    int m() const noexcept { return m_; }
    const PrimeTable* table() const noexcept { return table_; }

    /// Largest k with a sieve-exact lambda_k.
    std::uint64_t crossover() const noexcept {
        return kind_ == Kind::Integers ? std::numeric_limits<std::uint64_t>::max() : exact_.size() - 1;
    }

    LambdaValue at(std::uint64_t k) const {
        if (kind_ == Kind::Integers) return {static_cast<double>(k + 1), true, 0.0};
        if (k < exact_.size()) return {exact_[k], true, 0.0};
        double log_n = static_cast<double>(k) * std::log(static_cast<double>(m_));
        double lam = log_prime_estimate(log_n);
        return {lam, false, log_prime_estimate_error(lam)};
    }

    double operator[](std::uint64_t k) const { return at(k).value; }

private:
    enum class Kind { PrimePowers, Integers };
    Kind kind_ = Kind::Integers;
    int m_ = 0;
    const PrimeTable* table_ = nullptr;
    std::vector<double> exact_;
};

struct StepCount {
    std::uint64_t n;
    /// log(pi(e^u)) / log m for the prime system (NaN otherwise);
    /// N(u) = floor(y) + 1 whenever both are exact.
    double y;
    bool exact;
};

/// N(u) = #{k >= 0 : lambda_k <= u}.
inline StepCount N_of_u(const LambdaSystem& sys, double u) {
    StepCount out{0, std::numeric_limits<double>::quiet_NaN(), true};
    for (std::uint64_t k = 0;; ++k) {
        LambdaValue v = sys.at(k);
        if (!v.exact && std::abs(v.value - u) <= v.error_bound) out.exact = false;
        if (v.value > u) break;
        if (!v.exact) out.exact = false;
        ++out.n;
    }
    if (sys.is_prime_system()) {
        const double lm = std::log(static_cast<double>(sys.m()));
        const PrimeTable& t = *sys.table();
        if (u < std::log(2.0)) {
            out.y = -std::numeric_limits<double>::infinity();
        } else if (u <= std::log(static_cast<double>(t.limit()))) {
            auto x = static_cast<std::uint64_t>(std::floor(std::exp(u)));
            out.y = std::log(static_cast<double>(t.prime_pi(std::min(x, t.limit())))) / lm;
        } else {
            out.y = log_li_of_exp(u) / lm;
        }
    }
    return out;
}

struct IntegralValue {
    double value;
    bool exact;
    double error_bound;
};

/// int_0^u N(t)/t dt = N(u) log u - sum_{lambda_k <= u} log lambda_k.
inline IntegralValue avg_integral_exact(const LambdaSystem& sys, double u) {
    IntegralValue out{0.0, true, 0.0};
    if (!(u > sys[0])) return out;
    std::uint64_t n = 0;
    double logs = 0;
    for (std::uint64_t k = 0;; ++k) {
        LambdaValue v = sys.at(k);
        if (v.value > u) break;
        logs += std::log(v.value);
        if (!v.exact) {
            out.exact = false;
            out.error_bound += v.error_bound / v.value;
        }
        ++n;
    }
    out.value = static_cast<double>(n) * std::log(u) - logs;
    return out;
}

// ---------------------------------------------------------------------------
// M_{2,m}(x)
// ---------------------------------------------------------------------------

struct CountResult {
    u128 value = 0;
    std::uint64_t nodes_visited = 0;
};

/// q_j = p_{m^j} for every j with p_{m^j} <= x, ascending.
inline std::vector<std::uint64_t> Am_generators(int m, u128 x, const PrimeResolver& primes) {
    if (m < 2) throw DomainError("A_m needs m >= 2");
    std::vector<std::uint64_t> q;
    const PrimeTable& table = primes.table();
    u128 rank = 1;
    for (;;) {
        if (rank > std::numeric_limits<std::uint64_t>::max())
            throw CapacityError("prime index m^k overflows 64 bits");
        auto r = static_cast<std::uint64_t>(rank);
        if (r <= table.count()) {
            std::uint64_t p = table.nth_prime(r);
            if (p > x) break;
            q.push_back(p);
        } else if (x <= table.limit()) {
            break;
        } else if (x <= primes.cap()) {
            if (!primes.nth_prime_at_most(r, static_cast<std::uint64_t>(x))) break;
            q.push_back(primes.nth_prime(r));
        } else {
            std::uint64_t p = primes.nth_prime(r);  // throws once past the cap
            if (p > x) break;
            q.push_back(p);
        }
        rank *= static_cast<u128>(m);
    }
    return q;
}

namespace detail {

// products of q[0..j] that are <= x, the empty product included
inline u128 count_products(u128 x, std::size_t j, const std::vector<std::uint64_t>& q, std::uint64_t& nodes) {
    ++nodes;
    if (j == 0) {
        u128 c = 0;  // powers of 2 up to x: bit length of x
        while (x != 0) {
            x >>= 1;
            ++c;
        }
        return c;
    }
    u128 total = 0;
    const u128 p = q[j];
    for (u128 y = x;; y /= p) {
        total += count_products(y, j - 1, q, nodes);
        if (y < p) break;
    }
    return total;
}

}  // namespace detail

/// M_{2,m}(x) = #{n in A_m : n <= x} by largest-prime-first descent with
/// floor division; all arithmetic is exact.
inline CountResult count_M2m(int m, u128 x, const PrimeResolver& primes) {
    if (x < 1) throw ContractError("count_M2m needs x >= 1");
    CountResult out;
    auto q = Am_generators(m, x, primes);
    if (q.empty()) return out;
    out.value = detail::count_products(x, q.size() - 1, q, out.nodes_visited) - 1;
    return out;
}

inline CountResult count_M2m(int m, u128 x, const PrimeTable& table) {
    PrimeResolver primes(table);
    return count_M2m(m, x, primes);
}

inline constexpr std::uint64_t kEnumerateCap = 10'000'000;

/// Members of A_m up to x, ascending, by sieving out every multiple of a
/// prime that is not some p_{m^k}.
inline std::vector<std::uint64_t> enumerate_Am(int m, std::uint64_t x, const PrimeTable& table) {
    if (m < 2) throw DomainError("A_m needs m >= 2");
    if (x < 1) throw ContractError("enumerate_Am needs x >= 1");
    if (x > kEnumerateCap)
        throw ContractError("enumerate_Am is an oracle limited to x <= " + std::to_string(kEnumerateCap));
    if (x > table.limit())
        throw CapacityError("enumerate_Am(" + std::to_string(x) + ") needs primes up to x; table limit is " +
                            std::to_string(table.limit()));
    std::vector<std::uint8_t> bad(x + 1, 0);
    std::uint64_t rank = 0, next_allowed = 1;
    for (std::uint64_t p = 2; p <= x; ++p) {
        if (!table.is_prime(p)) continue;
        ++rank;
        if (rank == next_allowed) {
            next_allowed *= static_cast<std::uint64_t>(m);
            continue;
        }
        for (std::uint64_t n = p; n <= x; n += p) bad[n] = 1;
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; n <= x; ++n)
        if (!bad[n]) out.push_back(n);
    return out;
}

// ---------------------------------------------------------------------------
// Unrestricted partitions
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kPartitionCap = 20'000;

/// p(0..n) by Euler's pentagonal-number recurrence.
inline std::vector<BigInt> partition_numbers(std::uint64_t n) {
    if (n > kPartitionCap)
        throw ContractError("partition numbers limited to n <= " + std::to_string(kPartitionCap));
    std::vector<BigInt> p(n + 1);
    p[0] = 1;
    for (std::uint64_t i = 1; i <= n; ++i) {
        BigInt acc = 0;
        for (std::uint64_t k = 1;; ++k) {
            std::uint64_t g1 = k * (3 * k - 1) / 2;
            if (g1 > i) break;
            std::uint64_t g2 = k * (3 * k + 1) / 2;
            BigInt term = p[i - g1];
            if (g2 <= i) term += p[i - g2];
            if (k % 2 == 1)
                acc += term;
            else
                acc -= term;
        }
        p[i] = std::move(acc);
    }
    return p;
}

/// P(u) = sum_{n=0}^{u} p(n), the empty partition included.
inline BigInt partition_sum_exact(std::uint64_t u) {
    BigInt s = 0;
    for (const auto& v : partition_numbers(u)) s += v;
    return s;
}

}  // namespace amc
