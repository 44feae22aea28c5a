#pragma once

// Constants of the strong asymptotic for M_{2,m}: the convergent series
// C_{2,m}, the expansion constant D_m, the prefactor constant K_m, the
// Laplace-side D', and the finite-part constants K and K'.

#include "amcount/errors.hpp"
#include "amcount/expansion.hpp"
#include "amcount/primes.hpp"
#include "amcount/special_functions.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace amc {

struct ConstantReport {
    std::string name;
    double value = 0;
    double error_bound = 0;
    std::string method;
    /// false when the requested tolerance could not be met; error_bound is
    /// then the honest achievable bound.
    bool tolerance_met = true;
};

/// D' = D + (pi^2/6 - 2 gamma_1 - gamma^2) B.
inline double Dprime(const ExpansionCoefficients& c) {
    const double g = euler_gamma();
    const double g1 = stieltjes_gamma1();
    return c.D + (std::numbers::pi * std::numbers::pi / 6 - 2 * g1 - g * g) * c.B;
}

struct FinitePartConstants {
    double K;
    double Kprime;
};

/// Finite parts at 0 of int 1/(e^u - 1) and int log u/(e^u - 1): the s^0 and
/// s^1 coefficients of Gamma(s+1) zeta(s+1) - 1/s, i.e. 0 and
/// pi^2/12 - gamma_1 - gamma^2/2.
inline FinitePartConstants finite_part_constants() {
    const double g = euler_gamma();
    const double g1 = stieltjes_gamma1();
    return {0.0, std::numbers::pi * std::numbers::pi / 12 - g1 - g * g / 2};
}

/// log log p_{m^k} minus its four-term expansion: the k-th summand of C_{2,m}.
inline double c2m_term(int m, std::uint64_t k, double log_p) {
    return std::log(log_p) - loglog_prime_expansion(m, k);
}

struct C2mDetail {
    int m = 2;
    std::uint32_t k0 = 0;                 // last sieve-exact term
    std::vector<double> partial_sums;     // partial_sums[k] = sum_{j<=k} exact terms
    double partial_exact = 0;
    double tail_estimate = 0;             // k > k0 from inverse-li lambda_k
    double value = 0;
    double li_error = 0;                  // bound on the inverse-li part of the tail
    double truncation_error = 0;          // summation cut-off + asymptotic remainder
    double error_bound = 0;
    RemainderCalibration calibration;     // remainder constant c over sieve-exact k
    double remainder_tail_bound = 0;      // c (log^2 k0 + 2 log k0 + 2) / k0
};

inline constexpr std::uint64_t kC2mSummationCutoff = 200'000;

/// Asymptotic remainder of the tail beyond K when lambda_k follows the
/// inverse-li law: summands behave like (l - 1 - l^2/2) / L^2 with L = k log m,
/// l = log L, whose integral from K is -(l^2/2 + 1) / (K log^2 m).
inline double c2m_asymptotic_remainder(int m, std::uint64_t K) {
    const double lm = std::log(static_cast<double>(m));
    const double T = static_cast<double>(K) * lm;
    const double l = std::log(T);
    return -(l * l / 2 + 1) / (T * lm);
}

inline C2mDetail c2m_detail(int m, const PrimeTable& table) {
    if (m < 2) throw DomainError("C_{2,m} needs m >= 2");
    C2mDetail d;
    d.m = m;
    d.k0 = max_power_index(m, table.count());
    d.partial_sums.assign(d.k0 + 1, 0.0);
    long double acc = 0;
    for (std::uint32_t k = 1; k <= d.k0; ++k) {
        double lp = std::log(static_cast<double>(table.nth_prime(ipow(m, k))));
        acc += c2m_term(m, k, lp);
        d.partial_sums[k] = static_cast<double>(acc);
    }
    d.partial_exact = static_cast<double>(acc);

    const double lm = std::log(static_cast<double>(m));
    const std::uint64_t K = kC2mSummationCutoff;
    const std::uint64_t half = K / 2;
    long double tail = 0, upper_half = 0;
    long double li_err = 0;
    for (std::uint64_t k = static_cast<std::uint64_t>(d.k0) + 1; k <= K; ++k) {
        double lam = log_prime_estimate(static_cast<double>(k) * lm);
        double t = c2m_term(m, k, lam);
        tail += t;
        if (k > half) upper_half += t;
        double e = log_prime_estimate_error(lam) / lam;
        if (e > 1e-300) li_err += e;
    }
    tail += c2m_asymptotic_remainder(m, K);
    // the remainder formula's own error, measured one doubling earlier
    double trunc = std::abs(static_cast<double>(upper_half) + c2m_asymptotic_remainder(m, K) -
                            c2m_asymptotic_remainder(m, half));
    d.tail_estimate = static_cast<double>(tail);
    d.value = d.partial_exact + d.tail_estimate;
    d.li_error = static_cast<double>(li_err);
    d.truncation_error = trunc;
    d.error_bound = d.li_error + d.truncation_error + 1e-14 * static_cast<double>(K) * 1e-3;

    if (d.k0 >= 2) {
        d.calibration = calibrate_loglog_remainder(table, m);
        d.remainder_tail_bound = loglog_remainder_tail_bound(d.k0, d.calibration.constant);
    }
    return d;
}

/// Constants that depend on m and the prime table, memoized per m. The memo is
/// mutex-guarded and entries are never replaced, so a book can be shared.
class ConstantBook {
public:
    explicit ConstantBook(const PrimeTable& table) : table_(&table) {}

    const PrimeTable& table() const noexcept { return *table_; }

    const C2mDetail& c2m(int m) const {
        {
            std::lock_guard lock(mutex_);
            if (auto it = memo_.find(m); it != memo_.end()) return it->second;
        }
        C2mDetail d = c2m_detail(m, *table_);
        std::lock_guard lock(mutex_);
        return memo_.try_emplace(m, std::move(d)).first->second;
    }

    double C2m(int m) const { return c2m(m).value; }

    /// D_m = (log log m)^2/(2 log m) + log(sqrt(log m/(2 pi))/log 2) - C_{2,m}
    ///       - gamma_1/log m - gamma log log m / log m.
    double Dm(int m) const {
        const double lm = std::log(static_cast<double>(m));
        const double llm = std::log(lm);
        const double g = euler_gamma();
        const double g1 = stieltjes_gamma1();
        return llm * llm / (2 * lm) + std::log(std::sqrt(lm / (2 * std::numbers::pi)) / std::log(2.0)) - C2m(m) -
               g1 / lm - llm / lm * g;
    }

    /// K_m = ((log log m)^2 + gamma^2 - 2 gamma log log m - pi^2/6
    ///        - log^2(pi / sqrt(6 log m))) / (2 log m) - C_{2,m}.
    double Km(int m) const {
        const double lm = std::log(static_cast<double>(m));
        const double llm = std::log(lm);
        const double g = euler_gamma();
        const double pi = std::numbers::pi;
        const double lq = std::log(pi / std::sqrt(6 * lm));
        return (llm * llm + g * g - 2 * g * llm - pi * pi / 6 - lq * lq) / (2 * lm) - C2m(m);
    }

    ConstantReport report_C2m(int m, double tol) const {
        const C2mDetail& d = c2m(m);
        ConstantReport r{"C_2," + std::to_string(m), d.value, d.error_bound,
                         "sieve-exact terms k<=" + std::to_string(d.k0) +
                             ", inverse-li terms to k=" + std::to_string(kC2mSummationCutoff) +
                             ", asymptotic remainder beyond",
                         true};
        r.tolerance_met = d.error_bound <= tol;
        return r;
    }

    ConstantReport report_Dm(int m, double tol) const {
        ConstantReport r = report_C2m(m, tol);
        const double lm = std::log(static_cast<double>(m));
        double err = r.error_bound + euler_gamma_eval().error * (1 + std::abs(std::log(lm)) / lm) +
                     stieltjes_gamma1_eval().error / lm;
        return {"D_" + std::to_string(m), Dm(m), err, "closed form in C_2,m, gamma, gamma_1", err <= tol};
    }

    ConstantReport report_Km(int m, double tol) const {
        ConstantReport r = report_C2m(m, tol);
        return {"K_" + std::to_string(m), Km(m), r.error_bound, "closed form in C_2,m, gamma", r.error_bound <= tol};
    }

    ConstantReport report_Dprime(int m, double tol) const {
        ConstantReport r = report_Dm(m, tol);
        const double lm = std::log(static_cast<double>(m));
        ExpansionCoefficients c{1.0, 1 / lm, -1 / (2 * lm), 0.5, Dm(m)};
        return {"D'_" + std::to_string(m), Dprime(c), r.error_bound, "D_m + (pi^2/6 - 2 gamma_1 - gamma^2) B",
                r.error_bound <= tol};
    }

private:
    const PrimeTable* table_;
    mutable std::mutex mutex_;
    mutable std::map<int, C2mDetail> memo_;
};

/// gamma, gamma_1, zeta(2), K, K', C_{2,m}, D_m, K_m, D'_m.
inline std::vector<ConstantReport> constant_reports(const ConstantBook& book, int m, double tol) {
    std::vector<ConstantReport> out;
    auto g = euler_gamma_eval();
    out.push_back({"gamma", g.value, g.error, "Euler-Maclaurin on H_n - log n", g.error <= tol});
    auto g1 = stieltjes_gamma1_eval();
    out.push_back({"gamma_1", g1.value, g1.error, "Euler-Maclaurin on sum log k / k", g1.error <= tol});
    auto z2 = zeta_eval(2.0);
    out.push_back({"zeta(2)", z2.value, z2.error, "Euler-Maclaurin", z2.error <= tol});
    auto fp = finite_part_constants();
    out.push_back({"K", fp.K, 0.0, "s^0 coefficient of Gamma(s+1)zeta(s+1) - 1/s", true});
    double kp_err = 2 * g.error + g1.error;
    out.push_back({"K'", fp.Kprime, kp_err, "pi^2/12 - gamma_1 - gamma^2/2", kp_err <= tol});
    out.push_back(book.report_C2m(m, tol));
    out.push_back(book.report_Dm(m, tol));
    out.push_back(book.report_Km(m, tol));
    out.push_back(book.report_Dprime(m, tol));
    return out;
}

}  // namespace amc
