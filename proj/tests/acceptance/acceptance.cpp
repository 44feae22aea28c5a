// Acceptance suite: one PASS/FAIL line per criterion. Arguments select
// criteria by number; with none, all run. Exit status is 1 if any selected
// criterion fails.

#include "support.hpp"

#include "amcount/asymptotics.hpp"
#include "amcount/constants.hpp"
#include "amcount/counting.hpp"
#include "amcount/matula.hpp"
#include "amcount/prime_count.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace amc;

namespace {

// pinned tolerances and budgets
constexpr double kCountingBudgetSeconds = 10;
constexpr double kDualPathRelTol = 1e-10;
constexpr double kPartitionRatioTol = 0.1;
constexpr double kPartitionBudgetSeconds = 60;
constexpr double kAveragedFinalGap = 0.05;
constexpr double kLaplaceFinalGap = 0.1;
constexpr double kToyResidualTol = 0.02;
constexpr double kWeakBudgetSeconds = 60;
constexpr double kStrongBudgetSeconds = 300;
constexpr double kZeta2Tol = 1e-12;
constexpr double kGammaTol = 1e-10;
constexpr double kGamma1Tol = 1e-8;
constexpr std::uint32_t kRemainderTopSpan = 10;

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

const PrimeTable& table() {
    static const PrimeTable t = PrimeTable::build(kDefaultSieveLimit);
    return t;
}

const ConstantBook& book() {
    static const ConstantBook b(table());
    return b;
}

const PrimeResolver& resolver() {
    static const PrimeResolver r(table());
    return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

std::string join(const std::vector<double>& v, int digits = 4) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i], digits);
    return s;
}

Outcome counting_oracle() {
    table();
    auto t0 = std::chrono::steady_clock::now();
    int matches = 0, total = 0;
    std::string first_miss;
    for (int m = 2; m <= 5; ++m)
        for (std::uint64_t x = 10; x <= 1'000'000; x *= 10) {
            ++total;
            auto c = count_M2m(m, x, table()).value;
            auto e = enumerate_Am(m, x, table()).size();
            if (c == e)
                ++matches;
            else if (first_miss.empty())
                first_miss = " first mismatch m=" + std::to_string(m) + " x=" + std::to_string(x);
        }
    double secs = seconds_since(t0);
    return {matches == total && secs < kCountingBudgetSeconds,
            std::to_string(matches) + "/" + std::to_string(total) + " exact matches in " + fmt(secs, 3) + " s" +
                first_miss};
}

Outcome spot_values() {
    auto c = [](int m, std::uint64_t x) { return static_cast<std::uint64_t>(count_M2m(m, x, table()).value); };
    std::uint64_t a = c(2, 10), b = c(2, 100), d = c(3, 10), e = c(2, 1);
    return {a == 7 && b == 34 && d == 5 && e == 0,
            "M22(10)=" + std::to_string(a) + " M22(100)=" + std::to_string(b) + " M23(10)=" + std::to_string(d) +
                " M22(1)=" + std::to_string(e)};
}

Outcome matula_bijection() {
    auto trees = testing::trees_up_to(8);
    std::size_t n_trees = 0, tree_ok = 0;
    std::set<BigInt> codes;
    for (std::size_t v = 1; v <= 8; ++v)
        for (const auto& t : trees[v]) {
            ++n_trees;
            BigInt code = encode(t, table());
            codes.insert(code);
            if (decode(code, table()) == t) ++tree_ok;
        }
    std::uint64_t code_ok = 0;
    for (std::uint64_t n = 1; n <= 100'000; ++n)
        if (encode(decode(BigInt(n), table()), table()) == n) ++code_ok;
    int identity_ok = 0;
    for (std::uint64_t x = 10; x <= 100'000; x *= 10)
        if (count_height_le2(x, table()) == static_cast<std::uint64_t>(count_M2m(2, x, table()).value) + 1)
            ++identity_ok;
    bool pass = n_trees == 200 && tree_ok == n_trees && codes.size() == n_trees && code_ok == 100'000 &&
                identity_ok == 5;
    return {pass, std::to_string(tree_ok) + "/" + std::to_string(n_trees) + " trees, " + std::to_string(code_ok) +
                      "/100000 codes, " + std::to_string(identity_ok) + "/5 height identities"};
}

Outcome dual_path() {
    double worst = 0;
    for (int m = 2; m <= 5; ++m) {
        auto c = lemma44_coeffs(m, book());
        for (double u : {10.0, 100.0, 1000.0}) {
            double t1 = theorem1_logM(book(), m, std::exp(u));
            double rel = std::abs(corollary1_logP(c, u) - t1) / std::abs(t1);
            worst = std::max(worst, rel);
        }
    }
    return {worst < kDualPathRelTol, "max relative difference " + fmt(worst, 3)};
}

Outcome hardy_ramanujan_engine() {
    auto t0 = std::chrono::steady_clock::now();
    auto p = partition_numbers(10'000);
    auto c = integer_system_coeffs();
    std::vector<double> errs;
    BigInt sum = 0;
    std::size_t next = 0;
    const std::vector<std::uint64_t> us{100, 1000, 10000};
    for (std::uint64_t n = 0; n <= 10'000; ++n) {
        sum += p[n];
        if (next < us.size() && n == us[next]) {
            double ratio = std::exp(log_big(sum) - corollary1_logP(c, static_cast<double>(n)));
            errs.push_back(std::abs(ratio - 1));
            ++next;
        }
    }
    double secs = seconds_since(t0);
    bool pass = errs.back() < kPartitionRatioTol && strictly_decreasing(errs) && secs < kPartitionBudgetSeconds;
    return {pass, "|ratio-1| at u=1e2,1e3,1e4: " + join(errs) + " (" + fmt(secs, 3) + " s)"};
}

Outcome averaged_trend() {
    auto sys = LambdaSystem::prime_powers(2, table());
    const double d2 = book().Dm(2);
    std::vector<double> gaps;
    for (double u : {50.0, 100.0, 200.0, 350.0}) gaps.push_back(std::abs(lemma44_residual(sys, u).value - d2));
    return {strictly_decreasing(gaps) && gaps.back() < kAveragedFinalGap,
            "D_2=" + fmt(d2, 8) + " gaps at u=50,100,200,350: " + join(gaps)};
}

Outcome laplace_trend() {
    auto sys = LambdaSystem::prime_powers(2, table());
    const double dp = Dprime(lemma44_coeffs(2, book()));
    std::vector<double> gaps;
    for (double s : {0.2, 0.1, 0.05, 0.02}) gaps.push_back(std::abs(lemma31_residual(sys, s).value - dp));
    const double toy_target = -0.5 * std::log(2 * std::numbers::pi);
    const double toy = lemma31_residual(LambdaSystem::integers(), 0.02).value;
    const bool mono = strictly_decreasing(gaps);
    const bool final_ok = gaps.back() < kLaplaceFinalGap;
    const bool toy_ok = std::abs(toy - toy_target) < kToyResidualTol;
    std::string detail = "D'_2=" + fmt(dp, 8) + " gaps at sigma=0.2,0.1,0.05,0.02: " + join(gaps) +
                         (mono ? "" : " (not monotone)") + "; toy residual " + fmt(toy, 6) + " vs " +
                         fmt(toy_target, 6);
    return {mono && final_ok && toy_ok, detail};
}

Outcome weak_asymptotics() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> ratios;
    for (double x : {1e6, 1e9, 1e12}) {
        auto c = count_M2m(2, static_cast<u128>(x), resolver()).value;
        ratios.push_back(std::log(static_cast<double>(c)) / weak_logM(2, x));
    }
    double secs = seconds_since(t0);
    bool in_range = true;
    for (double r : ratios) in_range = in_range && r > 0.5 && r < 1;
    return {in_range && strictly_increasing(ratios) && secs < kWeakBudgetSeconds,
            "ratios at x=1e6,1e9,1e12: " + join(ratios) + " (" + fmt(secs, 3) + " s)"};
}

Outcome strong_asymptotics() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> res;
    std::uint64_t nodes = 0;
    u128 x = 1'000'000;
    for (int e = 6; e <= 14; e += 2, x *= 100) {
        auto c = count_M2m(2, x, resolver());
        nodes = std::max(nodes, c.nodes_visited);
        double lx = std::log(static_cast<double>(x));
        res.push_back(std::abs(std::log(static_cast<double>(c.value)) - theorem1_logM_logx(book(), 2, lx)));
    }
    double secs = seconds_since(t0);
    bool mono = strictly_decreasing(res);
    return {mono && secs < kStrongBudgetSeconds,
            "|log M - asym| at x=1e6..1e14: " + join(res) + (mono ? "" : " (not monotone)") + ", " +
                std::to_string(nodes) + " nodes at 1e14, " + fmt(secs, 3) + " s"};
}

Outcome constants_sanity() {
    const double pi = std::numbers::pi;
    double z = std::abs(zeta(2.0) - pi * pi / 6);
    double g = std::abs(euler_gamma() - 0.5772156649);
    double g1 = std::abs(stieltjes_gamma1() + 0.0728158455);
    auto fp = finite_part_constants();
    return {z < kZeta2Tol && g < kGammaTol && g1 < kGamma1Tol && fp.K == 0.0,
            "|zeta(2)-pi^2/6|=" + fmt(z, 2) + " |gamma-ref|=" + fmt(g, 2) + " |gamma_1-ref|=" + fmt(g1, 2) +
                " K=" + fmt(fp.K)};
}

Outcome remainder_witness() {
    auto cal = calibrate_loglog_remainder(table(), 2);
    const std::uint32_t k0 = cal.k_max;
    if (k0 <= kRemainderTopSpan + 2) return {false, "too few sieve-exact terms: k0=" + std::to_string(k0)};
    const double before = cal.running_max[k0 - kRemainderTopSpan];
    const double after = cal.running_max[k0];
    return {std::isfinite(after) && after == before,
            "max ratio " + fmt(after, 5) + " at k=" + std::to_string(cal.argmax) + " (k0=" + std::to_string(k0) +
                "), running max at k0-" + std::to_string(kRemainderTopSpan) + " " + fmt(before, 5) +
                ", ratio at k0 " + fmt(cal.ratios[k0], 4)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "counting oracle equivalence", counting_oracle},
        {2, "spot values", spot_values},
        {3, "Matula bijection and height identity", matula_bijection},
        {4, "dual-path algebraic identity", dual_path},
        {5, "Hardy-Ramanujan engine check", hardy_ramanujan_engine},
        {6, "averaged expansion residual trend", averaged_trend},
        {7, "Laplace-side residual trend", laplace_trend},
        {8, "weak asymptotics ratio", weak_asymptotics},
        {9, "strong asymptotics trend", strong_asymptotics},
        {10, "constants sanity", constants_sanity},
        {11, "remainder witness", remainder_witness},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    int failures = 0;
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
