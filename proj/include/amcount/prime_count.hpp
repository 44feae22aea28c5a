#pragma once

// Exact prime data past the end of a PrimeTable, for the few sparse ranks the
// counting code needs (p_{m^k} up to 10^15). pi(x) comes from the Legendre-type
// recurrence over floor(x/n) values; the n-th prime is then located by sieving
// a short window around the inverse-li estimate.

#include "amcount/errors.hpp"
#include "amcount/integer.hpp"
#include "amcount/primes.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace amc {

inline constexpr std::uint64_t kExtendedPrimeCap = 1'000'000'000'000'000ULL;  // 10^15

/// pi(x) by the recurrence S(v, p) = S(v, p-1) - (S(v/p, p-1) - S(p-1, p-1))
/// over the O(sqrt x) distinct values floor(x/n). O(x^{3/4}) time,
/// O(sqrt x) memory.
inline std::uint64_t legendre_prime_pi(std::uint64_t x) {
    if (x > kExtendedPrimeCap)
        throw CapacityError("prime counting beyond " + std::to_string(kExtendedPrimeCap) + " not supported");
    if (x < 2) return 0;
    const std::uint64_t r = isqrt(x);
    std::vector<std::int64_t> small(r + 1), large(r + 1);  // S(v) and S(x/i)
    std::vector<double> quot(r + 1);
    for (std::uint64_t v = 1; v <= r; ++v) {
        small[v] = static_cast<std::int64_t>(v) - 1;
        large[v] = static_cast<std::int64_t>(x / v) - 1;
        quot[v] = static_cast<double>(x / v);
    }
    // floor(a / p) from a double reciprocal, corrected to exact
    auto div = [](std::uint64_t a, std::uint64_t p, double inv) {
        auto q = static_cast<std::uint64_t>(static_cast<double>(a) * inv);
        if (q * p > a)
            --q;
        else if ((q + 1) * p <= a)
            ++q;
        return q;
    };
    for (std::uint64_t p = 2; p <= r; ++p) {
        if (small[p] == small[p - 1]) continue;
        const std::int64_t sp = small[p - 1];
        const std::uint64_t p2 = p * p;
        const std::uint64_t lim = std::min(r, x / p2);
        const std::uint64_t direct = std::min(lim, r / p);
        const double inv = 1.0 / static_cast<double>(p);
        std::uint64_t i = 1;
        for (; i <= direct; ++i) large[i] -= large[i * p] - sp;
        for (; i <= lim; ++i) {
            std::uint64_t q = div(static_cast<std::uint64_t>(quot[i]), p, inv);
            large[i] -= small[q] - sp;
        }
        for (std::uint64_t v = r; v >= p2; --v) small[v] -= small[div(v, p, inv)] - sp;
    }
    return static_cast<std::uint64_t>(large[1]);
}

/// Exact nth_prime / prime_pi that fall back from the table to
/// legendre_prime_pi plus window sieving. Results are memoized; the memo is
/// guarded so one resolver can be shared between threads.
class PrimeResolver {
public:
    explicit PrimeResolver(const PrimeTable& table, std::uint64_t cap = kExtendedPrimeCap)
        : table_(&table), cap_(std::min(cap, kExtendedPrimeCap)) {}

    const PrimeTable& table() const noexcept { return *table_; }
    std::uint64_t cap() const noexcept { return cap_; }

    std::uint64_t prime_pi(std::uint64_t x) const {
        if (x <= table_->limit()) return table_->prime_pi(x);
        if (x > cap_)
            throw CapacityError("pi(" + std::to_string(x) + ") beyond the extended prime cap " +
                                std::to_string(cap_));
        {
            std::lock_guard lock(mutex_);
            if (auto it = pi_memo_.find(x); it != pi_memo_.end()) return it->second;
        }
        std::uint64_t v = legendre_prime_pi(x);
        std::lock_guard lock(mutex_);
        pi_memo_.emplace(x, v);
        return v;
    }

    std::uint64_t nth_prime(std::uint64_t i) const {
        if (i == 0) throw ContractError("nth_prime index must be positive");
        if (i <= table_->count()) return table_->nth_prime(i);
        {
            std::lock_guard lock(mutex_);
            if (auto it = nth_memo_.find(i); it != nth_memo_.end()) return it->second;
        }
        std::uint64_t p = locate(i);
        std::lock_guard lock(mutex_);
        nth_memo_.emplace(i, p);
        return p;
    }

    /// True if p_i <= x, without computing p_i when pi(x) decides it.
    bool nth_prime_at_most(std::uint64_t i, std::uint64_t x) const {
        if (i <= table_->count()) return table_->nth_prime(i) <= x;
        if (x <= table_->limit()) return false;  // p_i > limit >= x
        return prime_pi(x) >= i;
    }

private:
    const PrimeTable* table_;
    std::uint64_t cap_;
    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::uint64_t> pi_memo_;
    mutable std::map<std::uint64_t, std::uint64_t> nth_memo_;

    std::uint64_t locate(std::uint64_t i) const {
        double lam = log_prime_estimate(std::log(static_cast<double>(i)));
        if (lam > std::log(static_cast<double>(cap_)))
            throw CapacityError("prime p_" + std::to_string(i) + " lies beyond the extended prime cap " +
                                std::to_string(cap_));
        auto estimate = static_cast<std::uint64_t>(std::exp(lam));
        estimate = std::max(estimate, table_->limit() + 1);
        estimate = std::min(estimate, cap_);
        std::uint64_t root = isqrt(estimate) + 1;
        if (root * 2 > table_->limit())
            throw CapacityError("table limit " + std::to_string(table_->limit()) +
                                " too small to sieve near " + std::to_string(estimate));
        std::uint64_t have = legendre_prime_pi(estimate);
        constexpr std::uint64_t window = 1u << 20;
        if (have >= i) {
            // walk down: count primes in (lo, hi] until the i-th is inside
            std::uint64_t hi = estimate;
            for (;;) {
                std::uint64_t lo = hi > window ? hi - window : 0;
                auto primes = sieve_window(lo + 1, hi);
                std::uint64_t below = have - primes.size();
                if (below < i) return primes[i - below - 1];
                have = below;
                hi = lo;
            }
        }
        std::uint64_t lo = estimate + 1;
        for (;;) {
            std::uint64_t hi = std::min(lo + window - 1, cap_);
            auto primes = sieve_window(lo, hi);
            if (have + primes.size() >= i) return primes[i - have - 1];
            have += primes.size();
            if (hi == cap_)
                throw CapacityError("prime p_" + std::to_string(i) + " lies beyond the extended prime cap");
            lo = hi + 1;
        }
    }

    // primes in [lo, hi] using table primes up to sqrt(hi)
    std::vector<std::uint64_t> sieve_window(std::uint64_t lo, std::uint64_t hi) const {
        std::vector<std::uint64_t> out;
        if (hi < lo) return out;
        std::vector<std::uint8_t> mark(hi - lo + 1, 1);
        std::uint64_t root = isqrt(hi);
        for (std::uint64_t j = 1; j <= table_->count(); ++j) {
            std::uint64_t p = table_->nth_prime(j);
            if (p > root) break;
            std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::uint64_t v = start; v <= hi; v += p) mark[v - lo] = 0;
        }
        for (std::uint64_t v = std::max<std::uint64_t>(lo, 2); v <= hi; ++v)
            if (mark[v - lo]) out.push_back(v);
        return out;
    }
};

}  // namespace amc
