#include "support.hpp"

#include "amcount/constants.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <thread>

using namespace amc;
using amc::testing::shared_table;

namespace {
const double kPi = std::numbers::pi;
}

TEST(Dprime, Formula) {
    EXPECT_DOUBLE_EQ(Dprime({1, 1, 0, 0, 0.25}), 0.25);
    EXPECT_NEAR(Dprime({1, 1, 1, 0, 0}), 1.457388, 1e-6);
    const double g = euler_gamma(), g1 = stieltjes_gamma1();
    ExpansionCoefficients c{1, 2, -0.3, 0.5, 0.7};
    auto fp = finite_part_constants();
    EXPECT_NEAR(Dprime(c), c.D + 2 * c.B * fp.Kprime + c.C * fp.K, 1e-14);
    EXPECT_NEAR(Dprime(c), 0.7 - 0.3 * (kPi * kPi / 6 - 2 * g1 - g * g), 1e-14);
}

TEST(FinitePartConstants, Values) {
    auto fp = finite_part_constants();
    EXPECT_EQ(fp.K, 0.0);
    EXPECT_NEAR(fp.Kprime, 0.728694, 1e-6);
}

TEST(C2m, FirstTermAndPartialSums) {
    const C2mDetail& d = c2m_detail(2, shared_table());
    EXPECT_NEAR(d.partial_sums[1], 0.98932, 1e-5);
    EXPECT_EQ(d.k0, max_power_index(2, shared_table().count()));
    EXPECT_NEAR(d.partial_sums[d.k0], d.partial_exact, 1e-15);
}

TEST(C2m, PartialSumsAreCauchyWithinTailBound) {
    auto d = c2m_detail(2, shared_table());
    ASSERT_GE(d.k0, 4u);
    const double half = d.partial_sums[d.k0 / 2];
    EXPECT_LT(std::abs(d.partial_exact - half), loglog_remainder_tail_bound(d.k0 / 2, d.calibration.constant));
    EXPECT_LT(std::abs(d.tail_estimate), d.remainder_tail_bound);
}

TEST(C2m, ConvergesToRecordedValue) {
    // recorded baseline: exact p_{2^k} to k = 46 plus the asymptotic tail
    auto d = c2m_detail(2, shared_table());
    EXPECT_NEAR(d.value, 0.391120, 2e-3);
    EXPECT_GT(d.error_bound, 0);
    EXPECT_LT(std::abs(d.value - 0.391120), d.error_bound + 1e-5);
}

TEST(C2m, LargerTableTightensBound) {
    auto small = c2m_detail(2, shared_table(std::uint64_t{1} << 20));
    auto large = c2m_detail(2, shared_table(std::uint64_t{1} << 24));
    EXPECT_LT(large.error_bound, small.error_bound);
    EXPECT_LT(std::abs(large.value - small.value), small.error_bound);
}

TEST(C2m, OtherBases) {
    for (int m = 3; m <= 5; ++m) {
        auto d = c2m_detail(m, shared_table());
        EXPECT_TRUE(std::isfinite(d.value));
        EXPECT_GT(d.k0, 5u);
    }
    EXPECT_THROW(c2m_detail(1, shared_table()), DomainError);
}

TEST(ConstantBook, ClosedFormsReassemble) {
    ConstantBook book(shared_table());
    for (int m = 2; m <= 5; ++m) {
        const double lm = std::log(static_cast<double>(m)), llm = std::log(lm);
        const double g = euler_gamma(), g1 = stieltjes_gamma1();
        const double C = book.C2m(m);
        double dm = llm * llm / (2 * lm);
        dm += 0.5 * std::log(lm / (2 * kPi)) - std::log(std::log(2.0));
        dm -= C + g1 / lm + g * llm / lm;
        EXPECT_NEAR(book.Dm(m), dm, 1e-13);
        const double lq = std::log(kPi) - 0.5 * std::log(6 * lm);
        const double km = (llm * llm + g * g - 2 * g * llm - kPi * kPi / 6 - lq * lq) / (2 * lm) - C;
        EXPECT_NEAR(book.Km(m), km, 1e-13);
        EXPECT_NEAR(book.Km(m) + C, km + C, 1e-13);
    }
}

TEST(ConstantBook, TolerancesAreReportedHonestly) {
    ConstantBook book(shared_table());
    auto loose = book.report_C2m(2, 1e-1);
    EXPECT_TRUE(loose.tolerance_met);
    auto tight = book.report_C2m(2, 1e-12);
    EXPECT_FALSE(tight.tolerance_met);
    EXPECT_EQ(tight.value, loose.value);
    EXPECT_GT(tight.error_bound, 1e-12);
}

TEST(ConstantBook, ReportsAreDeterministic) {
    ConstantBook a(shared_table()), b(shared_table());
    auto ra = constant_reports(a, 2, 1e-8);
    auto rb = constant_reports(b, 2, 1e-8);
    ASSERT_EQ(ra.size(), rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        EXPECT_EQ(ra[i].name, rb[i].name);
        EXPECT_EQ(ra[i].value, rb[i].value);
        EXPECT_EQ(ra[i].error_bound, rb[i].error_bound);
    }
}

TEST(ConstantBook, ConcurrentAccess) {
    ConstantBook book(shared_table());
    std::vector<double> seen(4);
    std::vector<std::thread> threads;
    for (int i = 0; i < 4; ++i) threads.emplace_back([&, i] { seen[i] = book.C2m(2); });
    for (auto& t : threads) t.join();
    for (double v : seen) EXPECT_EQ(v, seen[0]);
}
