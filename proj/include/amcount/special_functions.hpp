#pragma once

// Euler-Maclaurin evaluations of gamma, gamma_1 and zeta(s), and a shifted
// Stirling series for Gamma(s). Templated on the real type so the same code
// runs in double and in a 50-digit boost::multiprecision type for
// cross-validation. Each routine returns the value together with the size of
// the first omitted correction term as its error estimate.

#include "amcount/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

namespace amc {

template <class Real>
struct Evaluated {
    Real value;
    Real error;
};

namespace detail {

// B_{2j} = num/den for j = 1..15
inline constexpr std::array<std::pair<std::int64_t, std::int64_t>, 15> kBernoulliEven{{
    {1, 6},
    {-1, 30},
    {1, 42},
    {-1, 30},
    {5, 66},
    {-691, 2730},
    {7, 6},
    {-3617, 510},
    {43867, 798},
    {-174611, 330},
    {854513, 138},
    {-236364091, 2730},
    {8553103, 6},
    {-23749461029, 870},
    {8615841276005, 14322},
}};

// Euler-Maclaurin cut-off N and number of correction terms J per working
// precision: double -> (12, 10), wider types -> (48, 14).
template <class Real>
constexpr int em_cutoff() {
    return std::numeric_limits<Real>::digits10 > 18 ? 48 : 12;
}
template <class Real>
constexpr int em_terms() {
    return std::numeric_limits<Real>::digits10 > 18 ? 14 : 10;
}

}  // namespace detail

template <class Real>
Real bernoulli_even(int j) {
    if (j < 1 || j > static_cast<int>(detail::kBernoulliEven.size()))
        throw DomainError("bernoulli_even index out of range: " + std::to_string(j));
    auto [num, den] = detail::kBernoulliEven[static_cast<std::size_t>(j - 1)];
    return Real(num) / Real(den);
}

/// Euler-Mascheroni constant: H_N - log N - 1/(2N) + sum_j B_2j / (2j N^2j).
template <class Real = double>
Evaluated<Real> euler_gamma_eval() {
    using std::abs;
    using std::log;
    const int n = detail::em_cutoff<Real>();
    const int terms = detail::em_terms<Real>();
    Real h = 0;
    for (int k = n; k >= 1; --k) h += Real(1) / Real(k);
    const Real N(n);
    Real value = h - log(N) - Real(1) / (2 * N);
    Real npow = N * N;
    Real last = 0;
    for (int j = 1; j <= terms + 1; ++j) {
        Real term = bernoulli_even<Real>(j) / (Real(2 * j) * npow);
        if (j <= terms)
            value += term;
        else
            last = term;
        npow *= N * N;
    }
    return {value, abs(last)};
}

/// Stieltjes constant gamma_1 = lim (sum_{k<=n} log k / k - log^2 n / 2), with
/// the Euler-Maclaurin correction sum_j B_2j (log N - H_{2j-1}) / (2j N^2j).
template <class Real = double>
Evaluated<Real> stieltjes_gamma1_eval() {
    using std::abs;
    using std::log;
    const int n = detail::em_cutoff<Real>();
    const int terms = detail::em_terms<Real>();
    Real s = 0;
    for (int k = n; k >= 2; --k) s += log(Real(k)) / Real(k);
    const Real N(n);
    const Real lnN = log(N);
    Real value = s - lnN * lnN / 2 - lnN / (2 * N);
    Real npow = N * N;
    Real harmonic = 1;  // H_{2j-1}
    Real last = 0;
    for (int j = 1; j <= terms + 1; ++j) {
        if (j > 1) harmonic += Real(1) / Real(2 * j - 2) + Real(1) / Real(2 * j - 1);
        Real term = bernoulli_even<Real>(j) * (lnN - harmonic) / (Real(2 * j) * npow);
        if (j <= terms)
            value += term;
        else
            last = term;
        npow *= N * N;
    }
    return {value, abs(last)};
}

/// Riemann zeta for real s > 1.
template <class Real = double>
Evaluated<Real> zeta_eval(Real s) {
    using std::abs;
    using std::pow;
    if (!(s > 1)) throw DomainError("zeta needs s > 1");
    const int n = detail::em_cutoff<Real>();
    const int terms = detail::em_terms<Real>();
    Real sum = 0;
    for (int k = n - 1; k >= 1; --k) sum += pow(Real(k), -s);
    const Real N(n);
    const Real ns = pow(N, -s);
    sum += N * ns / (s - 1) + ns / 2;
    // B_2j / (2j)! * s (s+1) ... (s+2j-2) * N^{-s-2j+1}
    Real rising = s;          // s (s+1) ... (s+2j-2)
    Real fact = 2;            // (2j)!
    Real npow = ns / N;       // N^{-s-2j+1}
    Real last = 0;
    for (int j = 1; j <= terms + 1; ++j) {
        Real term = bernoulli_even<Real>(j) / fact * rising * npow;
        if (j <= terms)
            sum += term;
        else
            last = term;
        rising *= (s + Real(2 * j - 1)) * (s + Real(2 * j));
        fact *= Real(2 * j + 1) * Real(2 * j + 2);
        npow /= N * N;
    }
    return {sum, abs(last)};
}

/// log Gamma(s) for s > 0: shift to s + k >= N, then the Stirling series.
template <class Real = double>
Evaluated<Real> log_gamma_eval(Real s) {
    using std::abs;
    using std::log;
    if (!(s > 0)) throw DomainError("gamma needs s > 0");
    const Real zmin(detail::em_cutoff<Real>());
    const int terms = detail::em_terms<Real>();
    Real shift_log = 0;
    Real z = s;
    while (z < zmin) {
        shift_log += log(z);
        z += 1;
    }
    const Real two_pi = boost::math::constants::two_pi<Real>();
    Real value = (z - Real(0.5)) * log(z) - z + log(two_pi) / 2;
    Real zpow = z;  // z^{2j-1}
    Real last = 0;
    for (int j = 1; j <= terms + 1; ++j) {
        Real term = bernoulli_even<Real>(j) / (Real(2 * j) * Real(2 * j - 1) * zpow);
        if (j <= terms)
            value += term;
        else
            last = term;
        zpow *= z * z;
    }
    return {value - shift_log, abs(last)};
}

template <class Real = double>
Evaluated<Real> gamma_fn_eval(Real s) {
    using std::exp;
    auto lg = log_gamma_eval<Real>(s);
    Real v = exp(lg.value);
    return {v, v * lg.error * 2};
}

inline double euler_gamma() { return euler_gamma_eval<double>().value; }
inline double stieltjes_gamma1() { return stieltjes_gamma1_eval<double>().value; }
inline double zeta(double s) { return zeta_eval<double>(s).value; }
inline double gamma_fn(double s) { return gamma_fn_eval<double>(s).value; }
inline double log_gamma(double s) { return log_gamma_eval<double>(s).value; }

}  // namespace amc
