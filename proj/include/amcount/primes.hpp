#pragma once

// Sieve-backed prime table plus the prime approximations used wherever the
// table runs out: Cipolla's two-term log p_n, the four-term expansion of
// log log p_{m^k}, and an inverse logarithmic integral in the log domain.

#include "amcount/errors.hpp"
#include "amcount/integer.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace amc {

struct SieveOptions {
    /// Upper bound on the bytes held by the bitmap and its rank index.
    std::uint64_t memory_budget = std::uint64_t{1} << 31;
};

inline constexpr std::uint64_t kDefaultSieveLimit = std::uint64_t{1} << 30;

/// Primes up to a fixed limit, stored as an odd-only bitmap with a per-word
/// rank index. Immutable after construction; all queries are const.
class PrimeTable {
public:
    PrimeTable() = default;

    static std::uint64_t required_bytes(std::uint64_t limit) {
        std::uint64_t words = limit / 128 + 1;
        return words * 8 + (words + 1) * 4;
    }

    static PrimeTable build(std::uint64_t limit, SieveOptions opts = {}) {
        if (limit < 2)
            throw ContractError("sieve limit must be at least 2, got " + std::to_string(limit));
        if (required_bytes(limit) > opts.memory_budget)
            throw CapacityError("sieve limit " + std::to_string(limit) + " needs " +
                                std::to_string(required_bytes(limit)) +
                                " bytes, over the memory budget of " +
                                std::to_string(opts.memory_budget));
        PrimeTable t;
        t.limit_ = limit;
        t.sieve();
        t.index();
        return t;
    }

    std::uint64_t limit() const noexcept { return limit_; }
    std::uint64_t count() const noexcept { return count_; }

    bool is_prime(std::uint64_t n) const {
        check_limit(n, "is_prime");
        if (n < 2) return false;
        if (n == 2) return true;
        if (n % 2 == 0) return false;
        std::uint64_t b = n / 2;
        return (bits_[b >> 6] >> (b & 63)) & 1u;
    }

    /// p_i, the i-th prime (1-based).
    std::uint64_t nth_prime(std::uint64_t i) const {
        if (i == 0) throw ContractError("nth_prime index must be positive");
        if (i > count_)
            throw RangeError("prime index " + std::to_string(i) + " beyond table (" +
                             std::to_string(count_) + " primes <= " + std::to_string(limit_) + ")");
        if (i == 1) return 2;
        // rank among odd primes, 1-based
        auto r = static_cast<std::uint32_t>(i - 1);
        auto it = std::lower_bound(prefix_.begin(), prefix_.end(), r);
        std::size_t w = static_cast<std::size_t>(it - prefix_.begin()) - 1;
        std::uint32_t within = r - prefix_[w];  // 1-based within word
        std::uint64_t word = bits_[w];
        for (std::uint32_t j = 1; j < within; ++j) word &= word - 1;
        std::uint64_t b = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
        return 2 * b + 1;
    }

    /// pi(n) = #{p prime : p <= n}.
    std::uint64_t prime_pi(std::uint64_t n) const {
        check_limit(n, "prime_pi");
        if (n < 2) return 0;
        if (n < 3) return 1;
        std::uint64_t b = (n - 1) / 2;  // bit of the largest odd number <= n
        std::size_t w = b >> 6;
        unsigned shift = static_cast<unsigned>(b & 63);
        std::uint64_t mask = shift == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (shift + 1)) - 1);
        return 1 + prefix_[w] + static_cast<std::uint64_t>(std::popcount(bits_[w] & mask));
    }

    /// Rank of a prime p in the table: prime_index(p_i) = i.
    std::uint64_t prime_index(std::uint64_t p) const {
        if (p > limit_)
            throw RangeError("prime " + std::to_string(p) + " beyond table limit " +
                             std::to_string(limit_));
        if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
        return prime_pi(p);
    }

    /// All primes in [lo, hi], ascending.
    std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) const {
        hi = std::min(hi, limit_);
        std::vector<std::uint64_t> out;
        if (lo <= 2 && hi >= 2) out.push_back(2);
        for (std::uint64_t n = std::max<std::uint64_t>(lo, 3) | 1; n <= hi; n += 2)
            if (is_prime(n)) out.push_back(n);
        return out;
    }

    // Binary cache: little-endian header {magic[8], version u32, reserved u32,
    // limit u64, count u64} followed by the bitmap words.
    static constexpr std::array<char, 8> kMagic{'A', 'M', 'C', 'P', 'T', 'B', 'L', '1'};
    static constexpr std::uint32_t kVersion = 1;

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        out.write(kMagic.data(), kMagic.size());
        put_le(out, kVersion, 4);
        put_le(out, 0, 4);
        put_le(out, limit_, 8);
        put_le(out, count_, 8);
        for (std::uint64_t w : bits_) put_le(out, w, 8);
        if (!out) throw std::runtime_error("write failed for " + path);
    }

    static PrimeTable load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::array<char, 8> magic{};
        in.read(magic.data(), magic.size());
        if (!in || magic != kMagic) throw std::runtime_error(path + ": not a prime table cache");
        if (get_le(in, 4) != kVersion) throw std::runtime_error(path + ": unsupported cache version");
        get_le(in, 4);
        PrimeTable t;
        t.limit_ = get_le(in, 8);
        std::uint64_t stored_count = get_le(in, 8);
        if (!in || t.limit_ < 2) throw std::runtime_error(path + ": truncated header");
        t.bits_.resize(t.limit_ / 128 + 1);
        for (auto& w : t.bits_) w = get_le(in, 8);
        if (!in) throw std::runtime_error(path + ": truncated bitmap");
        t.index();
        if (t.count_ != stored_count) throw std::runtime_error(path + ": prime count mismatch");
        return t;
    }

private:
    std::uint64_t limit_ = 0;
    std::uint64_t count_ = 0;
    std::vector<std::uint64_t> bits_;     // bit b <=> 2b+1 is prime
    std::vector<std::uint32_t> prefix_;   // odd primes in words [0, w)

    void check_limit(std::uint64_t n, const char* op) const {
        if (n > limit_)
            throw RangeError(std::string(op) + "(" + std::to_string(n) + ") beyond table limit " +
                             std::to_string(limit_));
    }

    static void put_le(std::ofstream& out, std::uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    static std::uint64_t get_le(std::ifstream& in, int bytes) {
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in.get())) << (8 * i);
        return v;
    }

    // Segmented sieve over odd numbers. Each segment is a byte array (one byte
    // per odd number), pre-sieved by 3*5*7*11*13 from a periodic pattern and
    // then packed into the bitmap.
    void sieve() {
        const std::uint64_t nbits = limit_ / 2 + 1;  // odd numbers 1..limit (and one spare)
        bits_.assign(nbits / 64 + 1, 0);
        const std::uint64_t root = isqrt(limit_);

        std::vector<std::uint8_t> small(root / 2 + 1, 1);
        std::vector<std::uint64_t> sievers;
        for (std::uint64_t i = 1; 2 * i + 1 <= root; ++i) {
            if (!small[i]) continue;
            std::uint64_t p = 2 * i + 1;
            sievers.push_back(p);
            for (std::uint64_t j = (p * p) / 2; j < small.size(); j += p) small[j] = 0;
        }

        constexpr std::array<std::uint64_t, 5> pre{3, 5, 7, 11, 13};
        constexpr std::uint64_t period = 3 * 5 * 7 * 11 * 13;
        std::vector<std::uint8_t> pattern(period, 1);
        for (std::uint64_t p : pre)
            for (std::uint64_t j = p / 2; j < period; j += p) pattern[j] = 0;  // odd multiples: bit (p*(2t+1))/2 = p/2 + p*t

        std::vector<std::uint64_t> next;  // next bit index to clear per siever
        next.reserve(sievers.size());
        for (std::uint64_t p : sievers) next.push_back((p * p) / 2);

        constexpr std::uint64_t seg_bytes = std::uint64_t{1} << 16;  // multiple of 64
        std::vector<std::uint8_t> seg(seg_bytes);
        for (std::uint64_t lo = 0; lo < nbits; lo += seg_bytes) {
            std::uint64_t hi = std::min(lo + seg_bytes, nbits);
            std::uint64_t len = hi - lo;
            std::uint64_t off = lo % period;
            for (std::uint64_t done = 0; done < len;) {
                std::uint64_t chunk = std::min(len - done, period - off);
                std::memcpy(seg.data() + done, pattern.data() + off, chunk);
                done += chunk;
                off = 0;
            }
            for (std::size_t s = 0; s < sievers.size(); ++s) {
                std::uint64_t p = sievers[s];
                if (p <= 13) continue;
                std::uint64_t j = next[s];
                for (; j < hi; j += p) seg[j - lo] = 0;
                next[s] = j;
            }
            for (std::uint64_t b = 0; b < len; b += 64) {
                std::uint64_t word = 0;
                std::uint64_t n = std::min<std::uint64_t>(64, len - b);
                for (std::uint64_t k = 0; k < n; ++k) word |= static_cast<std::uint64_t>(seg[b + k]) << k;
                bits_[(lo + b) >> 6] = word;
            }
        }
        // 1 is not prime; the small primes killed by the pattern are.
        bits_[0] &= ~std::uint64_t{1};
        for (std::uint64_t p : pre)
            if (p <= limit_) bits_[0] |= std::uint64_t{1} << (p / 2);
        // clear anything past the limit
        std::uint64_t last = (limit_ - 1) / 2;  // largest valid bit (odd <= limit)
        for (std::uint64_t b = last + 1; b < bits_.size() * 64; ++b)
            bits_[b >> 6] &= ~(std::uint64_t{1} << (b & 63));
    }

    void index() {
        prefix_.assign(bits_.size() + 1, 0);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            prefix_[w] = static_cast<std::uint32_t>(acc);
            acc += static_cast<std::uint64_t>(std::popcount(bits_[w]));
        }
        prefix_[bits_.size()] = static_cast<std::uint32_t>(acc);
        count_ = limit_ >= 2 ? acc + 1 : 0;
    }
};

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

template <class Int>
struct PrimePower {
    Int prime;
    std::uint32_t exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline BigInt mulmod(const BigInt& a, const BigInt& b, const BigInt& m) { return a * b % m; }
inline BigInt powmod(const BigInt& a, const BigInt& e, const BigInt& m) {
    return boost::multiprecision::powm(a, e, m);
}

inline constexpr std::array<std::uint32_t, 13> kWitnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// Deterministic below 3.3e24 with these witnesses; a strong probable-prime
// test above that.
template <class Int>
bool probable_prime(const Int& n) {
    if (n < 2) return false;
    for (std::uint32_t p : kWitnesses) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Int d = n - 1;
    unsigned s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (std::uint32_t a : kWitnesses) {
        Int x = powmod(Int(a), d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

template <class Int>
Int gcd(Int a, Int b) {
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Brent's variant of Pollard rho; n must be an odd composite.
template <class Int>
Int rho_divisor(const Int& n, std::mt19937_64& rng) {
    for (;;) {
        Int c = Int(rng() % 1000003u) % (n - 1) + 1;
        Int y = Int(rng() % 1000003u) % n;
        Int g = 1, q = 1, x, ys;
        std::uint64_t r = 1;
        constexpr std::uint64_t batch = 128;
        auto f = [&](const Int& v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(batch, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? Int(x - y) : Int(y - x), n);
                }
                g = gcd(q, n);
                k += batch;
            }
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(x > ys ? Int(x - ys) : Int(ys - x), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

template <class Int>
void split(const Int& n, std::vector<Int>& out, std::mt19937_64& rng) {
    if (n == 1) return;
    if (probable_prime(n)) {
        out.push_back(n);
        return;
    }
    Int d = rho_divisor(n, rng);
    split(d, out, rng);
    split(Int(n / d), out, rng);
}

inline constexpr std::uint64_t kTrialBound = 1u << 16;

template <class Int>
std::vector<PrimePower<Int>> factorize_impl(Int n, const PrimeTable& table) {
    std::vector<PrimePower<Int>> out;
    if (n < 1) throw ContractError("factorize needs n >= 1");
    std::uint64_t bound = std::min(kTrialBound, table.limit());
    for (std::uint64_t i = 1; i <= table.count(); ++i) {
        std::uint64_t p = table.nth_prime(i);
        if (p > bound || Int(p) * p > n) break;
        if (n % p != 0) continue;
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({Int(p), e});
    }
    if (n == 1) return out;
    std::vector<Int> rest;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);  // fixed seed: factorization is deterministic
    if constexpr (std::is_same_v<Int, BigInt>) {
        if (n <= std::numeric_limits<std::uint64_t>::max()) {
            std::vector<std::uint64_t> small;
            split(static_cast<std::uint64_t>(n), small, rng);
            for (auto v : small) rest.emplace_back(v);
        } else {
            split(n, rest, rng);
        }
    } else {
        split(n, rest, rng);
    }
    std::sort(rest.begin(), rest.end());
    for (const Int& p : rest) {
        if (!out.empty() && out.back().prime == p)
            ++out.back().exponent;
        else
            out.push_back({p, 1});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.prime < b.prime; });
    return out;
}

}  // namespace detail

/// Prime factorization with strictly increasing primes; factorize(1) is empty.
/// Trial division by table primes up to 2^16, then Miller-Rabin and Brent-rho
/// on the cofactor.
inline std::vector<PrimePower<std::uint64_t>> factorize(std::uint64_t n, const PrimeTable& table) {
    return detail::factorize_impl<std::uint64_t>(n, table);
}

inline std::vector<PrimePower<BigInt>> factorize(const BigInt& n, const PrimeTable& table) {
    return detail::factorize_impl<BigInt>(n, table);
}

template <class Int>
bool is_probable_prime(const Int& n) {
    return detail::probable_prime(n);
}

// ---------------------------------------------------------------------------
// Prime approximations
// ---------------------------------------------------------------------------

/// Two-term Cipolla estimate log p_n ~ log n + log log n.
inline double cipolla_log_prime(double n) {
    if (!(n >= 2)) throw DomainError("cipolla_log_prime needs n >= 2");
    double ln = std::log(n);
    return ln + std::log(ln);
}

/// log k + log log m + (log k)/(k log m) + (log log m)/(k log m), the
/// expansion of log log p_{m^k}. Remainder is O(log^2 k / k^2).
inline double loglog_prime_expansion(int m, std::uint64_t k) {
    if (m < 2) throw DomainError("loglog_prime_expansion needs m >= 2");
    if (k < 1) throw DomainError("loglog_prime_expansion needs k >= 1");
    double lk = std::log(static_cast<double>(k));
    double lm = std::log(static_cast<double>(m));
    double llm = std::log(lm);
    double kd = static_cast<double>(k);
    return lk + llm + lk / (kd * lm) + llm / (kd * lm);
}

/// c * log^2 k / k^2.
inline double loglog_remainder_bound(std::uint64_t k, double c) {
    double lk = std::log(static_cast<double>(k));
    double kd = static_cast<double>(k);
    return c * lk * lk / (kd * kd);
}

/// Bound for the sum of loglog_remainder_bound over k > K by comparison with
/// the integral of c log^2 t / t^2 from K to infinity.
inline double loglog_remainder_tail_bound(std::uint64_t K, double c) {
    double lk = std::log(static_cast<double>(K));
    return c * (lk * lk + 2 * lk + 2) / static_cast<double>(K);
}

/// Largest k with m^k <= bound (the number of exact terms a table supports).
inline std::uint32_t max_power_index(int m, std::uint64_t bound) {
    std::uint32_t k = 0;
    u128 v = 1;
    while (v * static_cast<u128>(m) <= bound) {
        v *= static_cast<u128>(m);
        ++k;
    }
    return k;
}

inline std::uint64_t ipow(int m, std::uint32_t k) {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < k; ++i) v *= static_cast<std::uint64_t>(m);
    return v;
}

struct RemainderCalibration {
    int m = 2;
    std::uint32_t k_max = 0;                // largest sieve-exact k
    std::vector<double> ratios;             // ratios[k] for k >= 2, 0 below
    std::vector<double> running_max;
    double max_ratio = 0;
    std::uint32_t argmax = 0;
    /// Calibrated remainder constant: 1.5 * max_ratio.
    double constant = 0;
};

/// k^2 |log log p_{m^k} - expansion| / log^2 k over every k with p_{m^k} in
/// the table (k >= 2; k = 1 has log k = 0).
inline RemainderCalibration calibrate_loglog_remainder(const PrimeTable& table, int m) {
    if (m < 2) throw DomainError("calibration needs m >= 2");
    RemainderCalibration cal;
    cal.m = m;
    cal.k_max = max_power_index(m, table.count());
    cal.ratios.assign(cal.k_max + 1, 0.0);
    cal.running_max.assign(cal.k_max + 1, 0.0);
    double running = 0;
    for (std::uint32_t k = 2; k <= cal.k_max; ++k) {
        double exact = std::log(std::log(static_cast<double>(table.nth_prime(ipow(m, k)))));
        double lk = std::log(static_cast<double>(k));
        double r = static_cast<double>(k) * k * std::abs(exact - loglog_prime_expansion(m, k)) / (lk * lk);
        cal.ratios[k] = r;
        if (r > running) {
            running = r;
            cal.argmax = k;
        }
        cal.running_max[k] = running;
    }
    cal.max_ratio = running;
    cal.constant = 1.5 * running;
    return cal;
}

/// log li(e^lam) from the asymptotic series li(x) ~ x/log x * sum j!/log^j x,
/// truncated at its smallest term. Relative accuracy ~e^-lam.
inline double log_li_of_exp(double lam) {
    double sum = 0, term = 1;
    for (int j = 1;; ++j) {
        sum += term;
        double next = term * j / lam;
        if (next >= term || next < 1e-18 * sum) break;
        term = next;
    }
    return lam - std::log(lam) + std::log(sum);
}

/// Solves li(e^lam) = n for lam given log n: the inverse logarithmic
/// integral as an estimate of log p_n. Sharp once n is past ~10^4; usable
/// (error well under 1) for n >= 3.
inline double log_prime_estimate(double log_n) {
    if (!(log_n >= 1)) throw DomainError("log_prime_estimate needs n >= 3");
    double lam = log_n + std::log(log_n);
    for (int it = 0; it < 100; ++it) {
        double g = log_li_of_exp(lam);
        // d/dlam log li(e^lam) = e^lam / (lam li(e^lam))
        double deriv = std::exp(lam - std::log(lam) - g);
        double step = (g - log_n) / deriv;
        lam -= step;
        if (std::abs(step) <= 1e-15 * lam) break;
    }
    return lam;
}

/// Bound on |log p_n - log_prime_estimate(log n)| at lam = log p_n, from the
/// Schoenfeld-type |pi(x) - li(x)| < sqrt(x) log x / (8 pi) (conditional on
/// RH): lam^2 / (8 pi e^{lam/2}). Below p = 2657 the inequality is not
/// available and a flat 0.5 is returned.
inline double log_prime_estimate_error(double lam) {
    if (lam < 7.9) return 0.5;
    return lam * lam / (8 * std::numbers::pi * std::exp(lam / 2));
}

}  // namespace amc
