#pragma once

// Log-domain evaluation of the extended Ingham formula, its alpha = 1
// specialisation, the strong and weak asymptotics of M_{2,m},
// Hardy-Ramanujan, and the Laplace-side residuals that witness the averaged
// expansion.

#include "amcount/constants.hpp"
#include "amcount/counting.hpp"
#include "amcount/errors.hpp"
#include "amcount/expansion.hpp"
#include "amcount/special_functions.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace amc {

struct SaddleData {
    double beta;
    double M;
    double Dprime;
};

inline SaddleData derive_saddle(const ExpansionCoefficients& c) {
    c.validate();
    const double beta = c.alpha / (c.alpha + 1);
    const double base = c.A * c.alpha * gamma_fn(c.alpha + 1) * zeta(c.alpha + 1);
    return {beta, std::pow(base, 1 / (c.alpha + 1)), Dprime(c)};
}

/// sigma(u) = M u^{-1/(alpha+1)}.
inline double sigma_saddle(const SaddleData& sd, const ExpansionCoefficients& c, double u) {
    if (!(u > 0)) throw DomainError("sigma_saddle needs u > 0");
    return sd.M * std::pow(u, -1 / (c.alpha + 1));
}

/// log of ((1-beta)/2pi)^{1/2} e^{D'} M^{-(C+1/2)} u^{C-beta C-beta/2}
///        exp(M u^beta / beta + B log^2(u^{1-beta}/M)).
inline double ingham_logP(const ExpansionCoefficients& c, double u) {
    if (!(u > 1)) throw DomainError("ingham_logP needs u > 1");
    const SaddleData sd = derive_saddle(c);
    const double b = sd.beta;
    const double lu = std::log(u);
    const double q = (1 - b) * lu - std::log(sd.M);
    return 0.5 * std::log((1 - b) / (2 * std::numbers::pi)) + sd.Dprime - (c.C + 0.5) * std::log(sd.M) +
           (c.C - b * c.C - b / 2) * lu + sd.M * std::pow(u, b) / b + c.B * q * q;
}

/// The alpha = 1 case written with c = pi sqrt(A/6):
/// log of e^{D' + B log^2 c}/(2 sqrt pi) c^{-(C+1/2)} u^{C/2 - 1/4 - B log c}
///        exp(pi sqrt(2Au/3) + (B/4) log^2 u).
inline double corollary1_logP(const ExpansionCoefficients& c, double u) {
    c.validate();
    if (c.alpha != 1) throw ContractError("corollary1_logP needs alpha = 1, got " + std::to_string(c.alpha));
    if (!(u > 1)) throw DomainError("corollary1_logP needs u > 1");
    const double pi = std::numbers::pi;
    const double lc = std::log(pi * std::sqrt(c.A / 6));
    const double lu = std::log(u);
    return Dprime(c) + c.B * lc * lc - std::log(2 * std::sqrt(pi)) - (c.C + 0.5) * lc +
           (c.C / 2 - 0.25 - c.B * lc) * lu + pi * std::sqrt(2 * c.A * u / 3) + c.B / 4 * lu * lu;
}

/// (alpha, A, B, C, D) = (1, 1/log m, -1/(2 log m), 1/2, D_m).
inline ExpansionCoefficients lemma44_coeffs(int m, const ConstantBook& book) {
    if (m < 2) throw DomainError("lemma44_coeffs needs m >= 2");
    const double lm = std::log(static_cast<double>(m));
    return {1.0, 1 / lm, -1 / (2 * lm), 0.5, book.Dm(m)};
}

/// Coefficients of lambda_k = k + 1 (N(u) = floor u): Stirling gives
/// u - (1/2) log u - log sqrt(2 pi).
inline ExpansionCoefficients integer_system_coeffs() {
    return {1.0, 1.0, 0.0, -0.5, -0.5 * std::log(2 * std::numbers::pi)};
}

/// log M_{2,m}(x) from the strong asymptotic, given log x.
inline double theorem1_logM_logx(const ConstantBook& book, int m, double log_x) {
    if (m < 2) throw DomainError("theorem1_logM needs m >= 2");
    if (!(log_x > 1)) throw DomainError("theorem1_logM needs x > e");
    const double pi = std::numbers::pi;
    const double lm = std::log(static_cast<double>(m));
    const double llx = std::log(log_x);
    return book.Km(m) + std::log(std::sqrt(3.0) * lm / (2 * pi * pi * std::log(2.0))) +
           std::log(pi / std::sqrt(6 * lm)) / (2 * lm) * llx + pi * std::sqrt(2 * log_x / (3 * lm)) -
           llx * llx / (8 * lm);
}

inline double theorem1_logM(const ConstantBook& book, int m, double x) {
    if (!(x > std::numbers::e)) throw DomainError("theorem1_logM needs x > e");
    return theorem1_logM_logx(book, m, std::log(x));
}

/// pi sqrt(2 log x / (3 log m)).
inline double weak_logM(int m, double x) {
    if (m < 2) throw DomainError("weak_logM needs m >= 2");
    if (!(x > 1)) throw DomainError("weak_logM needs x > 1");
    return std::numbers::pi * std::sqrt(2 * std::log(x) / (3 * std::log(static_cast<double>(m))));
}

/// pi sqrt(2n/3) - log(4 sqrt 3 n).
inline double hardy_ramanujan_logp(std::uint64_t n) {
    if (n < 1) throw DomainError("hardy_ramanujan_logp needs n >= 1");
    const auto v = static_cast<double>(n);
    return std::numbers::pi * std::sqrt(2 * v / 3) - std::log(4 * std::sqrt(3.0) * v);
}

struct LaplaceValue {
    double value;
    double error;        // truncation plus propagated lambda error
    std::uint64_t terms;
};

/// f(sigma) = sum_k -log(1 - e^{-sigma lambda_k}), stopped once a geometric
/// bound on the remaining terms drops below eps.
inline LaplaceValue laplace_f(const LambdaSystem& sys, double sigma, double eps = 1e-14) {
    if (!(sigma > 0)) throw DomainError("laplace_f needs sigma > 0");
    if (!(eps > 0)) throw ContractError("laplace_f needs eps > 0");
    // lower bound on lambda_{k+1} - lambda_k
    const double gap = sys.is_prime_system() ? 0.5 * std::log(static_cast<double>(sys.m())) : 1.0;
    const double ratio = std::exp(-sigma * gap);
    long double sum = 0;
    double lam_err = 0;
    LaplaceValue out{0, 0, 0};
    for (std::uint64_t k = 0;; ++k) {
        LambdaValue v = sys.at(k);
        const double x = std::exp(-sigma * v.value);
        sum += -std::log1p(-x);
        ++out.terms;
        if (!v.exact) lam_err += sigma * x / (1 - x) * v.error_bound;
        const double next = x * ratio;
        const double tail = next / ((1 - next) * (1 - ratio));
        if (tail < eps) {
            out.error = tail + lam_err;
            break;
        }
    }
    out.value = static_cast<double>(sum);
    return out;
}

struct Residual {
    double value;
    double error;
    bool exact;  // false when inverse-li lambda values entered
};

/// f(sigma) - [A Gamma(alpha+1) zeta(alpha+1)/sigma^alpha + B log^2 sigma - C log sigma].
inline Residual lemma31_residual(const LambdaSystem& sys, const ExpansionCoefficients& c, double sigma) {
    c.validate();
    LaplaceValue f = laplace_f(sys, sigma);
    const double ls = std::log(sigma);
    const double main = c.A * gamma_fn(c.alpha + 1) * zeta(c.alpha + 1) / std::pow(sigma, c.alpha) +
                        c.B * ls * ls - c.C * ls;
    bool exact = f.terms <= sys.crossover() + 1;
    return {f.value - main, f.error, exact};
}

/// int_0^u N(t)/t dt - [(A/alpha) u^alpha + B log^2 u + C log u].
inline Residual lemma44_residual(const LambdaSystem& sys, const ExpansionCoefficients& c, double u) {
    c.validate();
    if (!(u > sys[0])) throw DomainError("lemma44_residual needs u > lambda_0");
    IntegralValue iv = avg_integral_exact(sys, u);
    const double lu = std::log(u);
    const double main = c.A / c.alpha * std::pow(u, c.alpha) + c.B * lu * lu + c.C * lu;
    return {iv.value - main, iv.error_bound, iv.exact};
}

/// The prime system's own coefficients (D is not used by the residuals).
inline ExpansionCoefficients prime_system_shape(int m) {
    const double lm = std::log(static_cast<double>(m));
    return {1.0, 1 / lm, -1 / (2 * lm), 0.5, 0.0};
}

inline Residual lemma31_residual(const LambdaSystem& sys, double sigma) {
    return lemma31_residual(sys, sys.is_prime_system() ? prime_system_shape(sys.m()) : integer_system_coeffs(),
                            sigma);
}

inline Residual lemma44_residual(const LambdaSystem& sys, double u) {
    return lemma44_residual(sys, sys.is_prime_system() ? prime_system_shape(sys.m()) : integer_system_coeffs(),
                            u);
}

}  // namespace amc
