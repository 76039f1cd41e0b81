#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "acceptance/oracles.hpp"
#include "giftsim/analytics.hpp"

using namespace giftsim;

TEST(Ucr, ValuesAndDomain) {
  EXPECT_NEAR(ucr(0.5), 1.0 / std::log(2.0), 1e-15);
  EXPECT_LT(ucr(0.75), ucr(0.5));
  EXPECT_THROW(ucr(0.0), std::domain_error);
  EXPECT_THROW(ucr(1.0), std::domain_error);
}

TEST(UltimateDistribution, SharesSumToOneAndEqualCoefficientsSplitEvenly) {
  const std::vector<double> equal{0.4, 0.4, 0.4};
  for (double s : ultimate_distribution(equal)) EXPECT_NEAR(s, 1.0 / 3.0, 1e-15);
  // ln(1/4) = 2 ln(1/2): the a = 0.5 recipient gets twice the a = 0.75 share.
  const std::vector<double> pair{0.75, 0.5};
  const auto shares = ultimate_distribution(pair);
  EXPECT_NEAR(shares[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(shares[1], 2.0 / 3.0, 1e-15);
}

TEST(UltimateDistribution, PermutationInvariant) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> coeff(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> c(5);
    for (auto& x : c) x = coeff(rng);
    const auto base = ultimate_distribution(c);
    EXPECT_NEAR(std::accumulate(base.begin(), base.end(), 0.0), 1.0, 1e-12);
    std::vector<std::size_t> perm(c.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> shuffled;
    for (auto i : perm) shuffled.push_back(c[i]);
    const auto shares = ultimate_distribution(shuffled);
    for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_DOUBLE_EQ(shares[i], base[perm[i]]);
  }
}

TEST(Distribution, EmpiricalMatchesPredictionForTwoRecipients) {
  const auto trace = run(make_multi_recipient("P", "a", {{"Q", YieldCurve(0.75, 1.0)}, {"R", YieldCurve(0.5, 1.0)}}, 20000));
  const auto report = distribution_report(trace);
  ASSERT_EQ(report.targets.size(), 2u);
  EXPECT_LT(report.max_abs_error, 1e-3);
  const auto counts = oracle::log_domain_selection_counts({{0.75, 1.0, 0.0}, {0.5, 1.0, 0.0}}, 20000);
  EXPECT_NEAR(report.empirical[0], static_cast<double>(counts[0]) / 20000.0, 1e-3);
}

TEST(Distribution, ErrorsOnUnusableTraces) {
  Scenario idle = make_repeated_gift("P", "Q", "a", YieldCurve(0.5, 0.0));
  idle.mode = SelectionMode::HighestYield;
  const std::vector<Transaction> targets{Transaction("P", "a", "Q")};
  EXPECT_THROW(empirical_distribution(run(idle), targets), AnalysisError);
  const std::vector<Transaction> twice{Transaction("P", "a", "Q"), Transaction("P", "a", "Q")};
  EXPECT_THROW(empirical_distribution(run(make_repeated_gift("P", "Q", "a", YieldCurve(0.5, 1.0))), twice),
               std::invalid_argument);
}

TEST(Equilibrium, WorkedExample) {
  const YieldCurve p(0.5, 1.0), q(0.5, 1.0);
  const auto eq = canonical_equilibrium(p, q);
  EXPECT_NEAR(eq.x_low, -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(eq.x_high, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(eq.side, 4.0 / 3.0, 1e-15);
  const auto is = intersection_point(p, q);
  EXPECT_EQ(is.x_s, 0.0);
  EXPECT_EQ(is.y_s, 1.0);
  EXPECT_EQ(theoretical_contraction(p, q), 0.25);
}

TEST(Equilibrium, CanonicalIsFixedPointAndIntersectionIsNot) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> coeff(0.05, 0.95), nominal(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = coeff(rng), b = nominal(rng), c = coeff(rng), dd = nominal(rng);
    const YieldCurve p(a, b), q(c, dd);
    const auto eq = canonical_equilibrium(p, q);
    const double scale = 1.0 + std::abs(eq.x_low);
    EXPECT_NEAR(alternating_map(eq.x_low, p, q), eq.x_low, 1e-12 * scale);
    EXPECT_NEAR(eq.x_high - eq.x_low, eq.side, 1e-12 * scale);
    EXPECT_NEAR(a * eq.x_low + eq.side, b, 1e-12 * scale);
    const auto fixed = oracle::alternation_fixed_point(a, b, c, dd, 0.0);
    ASSERT_TRUE(fixed.has_value());
    EXPECT_NEAR(*fixed, eq.x_low, 1e-8 * scale);
    const auto is = intersection_point(p, q);
    EXPECT_GT(std::abs(alternating_map(is.x_s, p, q) - is.x_s), 1e-9);
  }
}

TEST(Equilibrium, DomainErrors) {
  EXPECT_THROW(canonical_equilibrium(YieldCurve(0.0, 1.0), YieldCurve(0.5, 1.0)), std::domain_error);
  EXPECT_THROW(intersection_point(YieldCurve(0.0, 1.0), YieldCurve(0.0, 2.0)), std::domain_error);
  EXPECT_NO_THROW(intersection_point(YieldCurve(0.5, 1.0), YieldCurve(0.0, 1.0)));
}

TEST(Contraction, MeasuredMatchesTheory) {
  const YieldCurve p(0.5, 1.0), q(0.5, 1.0);
  Scenario scenario = make_alternating_trade("P", "Q", "a", "b", p, q, 1, 1, 40);
  scenario.initial_balances.set_balance("P", "Q", Real(0.3));
  const auto trace = run(scenario);
  EXPECT_NEAR(measured_contraction(trace), 0.25, 1e-9);
  EXPECT_NEAR(measured_contraction(trace, Parity::Odd), 0.25, 1e-9);
  EXPECT_NEAR(measured_contraction(trace, Parity::Even), 0.25, 1e-9);
}

TEST(Contraction, ConvergedTraceIsAnError) {
  const YieldCurve p(0.5, 1.0), q(0.5, 1.0);
  Scenario scenario = make_alternating_trade("P", "Q", "a", "b", p, q, 1, 1, 40);
  scenario.initial_balances.set_balance("P", "Q", Real(canonical_equilibrium(p, q).x_high));
  const auto trace = run(scenario);
  EXPECT_THROW(measured_contraction(trace), AnalysisError);
}

TEST(Cycle, AlternatingTradeSettlesOnTwoPoints) {
  const YieldCurve p(0.5, 1.0), q(0.5, 1.0);
  const auto trace = run(make_alternating_trade("P", "Q", "a", "b", p, q, 1, 1, 200));
  const auto points = detect_cycle(trace, 1e-9);
  ASSERT_EQ(points.size(), 2u);
  const auto eq = canonical_equilibrium(p, q);
  std::vector<double> balances{points[0].balance, points[1].balance};
  std::sort(balances.begin(), balances.end());
  EXPECT_NEAR(balances[0], eq.x_low, 1e-9);
  EXPECT_NEAR(balances[1], eq.x_high, 1e-9);
  EXPECT_EQ(points.back().step, 200u);
}

TEST(Cycle, TwoToOneTradeHasThreePoints) {
  const YieldCurve p(0.5, 1.0), q(0.5, 1.0);
  const auto trace = run(make_alternating_trade("P", "Q", "a", "b", p, q, 2, 1, 300));
  const auto points = detect_cycle(trace, 1e-9);
  ASSERT_EQ(points.size(), 3u);
  double p_total = 0.0;
  for (const auto& point : points) {
    for (const auto& v : point.valuations) {
      if (v.transaction.supplier() == EntityId("P")) p_total += static_cast<double>(v.yield);
    }
  }
  EXPECT_GT(p_total, 0.0);
}

TEST(Cycle, NoCycleInShortTrace) {
  const auto trace = run(make_repeated_gift("P", "Q", "a", YieldCurve(0.5, 1.0), 5));
  EXPECT_THROW(detect_cycle(trace, 1e-9), AnalysisError);
}
