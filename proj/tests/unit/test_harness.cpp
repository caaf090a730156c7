#include <gtest/gtest.h>

#include <cmath>

#include "ghzlab/errors.hpp"
#include "ghzlab/harness.hpp"
#include "ghzlab/sampling.hpp"
#include "oracles.hpp"

using namespace ghzlab;
using namespace ghzlab::harness;
using f2::AffinePowerCoset;
using f2::F2Vector;

namespace {

games::ProductStrategy random_strategy(int n, sampling::Rng& rng) {
  games::ProductStrategy f;
  const std::uint64_t size = std::uint64_t{1} << n;
  for (int i = 0; i < 3; ++i) {
    auto t = sampling::random_table(size, static_cast<unsigned>(size), rng);
    f.tables.emplace_back(t.begin(), t.end());
  }
  return f;
}

}  // namespace

TEST(ParseEvent, Forms) {
  auto full = parse_event(2, "full");
  EXPECT_EQ(full.ghz_mass(), 1);
  auto e = parse_event(2, "00,11;*;01");
  EXPECT_TRUE(e.contains({F2Vector::from_string("11"), F2Vector::from_string("10"), F2Vector::from_string("01")}));
  EXPECT_FALSE(e.contains({F2Vector::from_string("01"), F2Vector::from_string("10"), F2Vector::from_string("01")}));
  EXPECT_THROW(parse_event(2, "00;11"), ParseError);
  EXPECT_THROW(parse_event(2, "00;11;1"), ParseError);
  EXPECT_THROW(parse_event(2, "00;;11"), ParseError);
  EXPECT_THROW(parse_event(2, "00;11;01;10"), ParseError);
  EXPECT_THROW(parse_event(2, "0a;11;01"), ParseError);
}

TEST(PseudoHardness, FullEventIsTrivial) {
  auto r = pseudo_hardness_check(AffinePowerCoset::full(2), partition::ProductEvent::full(2), 0, 0.5, 0.5);
  EXPECT_EQ(r.lhs, r.base);
  EXPECT_EQ(r.base, make_rational(3, 4));
  EXPECT_EQ(r.tv, 0);
  EXPECT_NEAR(r.delta_kl, 0, 1e-15);
  EXPECT_NEAR(r.closeness, 0, 1e-15);
  EXPECT_TRUE(r.asserted);
  EXPECT_TRUE(r.conclusion);
  EXPECT_TRUE(r.ok());
}

TEST(PseudoHardness, RandomEventsAtN2) {
  sampling::Rng rng(21);
  int asserted = 0;
  for (int t = 0; t < 20; ++t) {
    auto e = sampling::random_product_event(2, 0.8, 0.5, rng);
    const int j = static_cast<int>(rng() % 2);
    auto r = pseudo_hardness_check(AffinePowerCoset::full(2), e, j, 0.5, 0.5);
    ASSERT_TRUE(r.ok()) << t;
    ASSERT_EQ(r.tv, 1 - e.ghz_mass());
    ASSERT_LE(r.lhs, r.base + r.tv);
    ASSERT_EQ(r.m, 2);
    asserted += r.asserted ? 1 : 0;
  }
  EXPECT_GT(asserted, 0);
}

TEST(PseudoHardness, ViolatedConstraintIsNotAsserted) {
  auto e = parse_event(2, "00,01;*;*");
  auto r = pseudo_hardness_check(AffinePowerCoset::full(2), e, 0, 0.9, 0.5);
  EXPECT_FALSE(r.constraint_flags[2]);
  EXPECT_FALSE(r.hypothesis);
  EXPECT_FALSE(r.asserted);
  EXPECT_TRUE(r.ok());
}

TEST(PseudoHardness, InputErrors) {
  auto full = AffinePowerCoset::full(2);
  EXPECT_THROW(pseudo_hardness_check(full, partition::ProductEvent::full(3), 0, 0.5, 0.5), ShapeMismatch);
  EXPECT_THROW(pseudo_hardness_check(full, partition::ProductEvent::full(2), 2, 0.5, 0.5), DomainError);
  EXPECT_THROW(pseudo_hardness_check(full, partition::ProductEvent::full(2), 0, 0, 0.5), DomainError);
  EXPECT_THROW(pseudo_hardness_check(full, parse_event(2, "11;00;00"), 0, 0.5, 0.5), ZeroMassEvent);
}

TEST(Criterion, SingleRoundIsStrategyValue) {
  sampling::Rng rng(22);
  const auto g = games::ghz_game();
  for (int t = 0; t < 10; ++t) {
    auto f = random_strategy(1, rng);
    auto tr = criterion_simulate(g, 1, f, make_rational(1, 512), 0.25);
    ASSERT_EQ(tr.rounds.size(), 1u);
    EXPECT_EQ(tr.rounds[0].w, games::strategy_value(g, f));
    EXPECT_EQ(tr.strategy_value, tr.rounds[0].w);
    EXPECT_TRUE(tr.ok());
  }
}

TEST(Criterion, HandComputedStrategies) {
  const auto g = games::ghz_game();
  games::ProductStrategy parity{{{1, 0}, {0, 1}, {0, 1}}};
  EXPECT_EQ(criterion_simulate(g, 1, parity, make_rational(1, 512), 0.25).rounds[0].w, make_rational(3, 4));
  games::ProductStrategy worst{{{1, 0}, {0, 0}, {0, 0}}};
  EXPECT_EQ(games::strategy_value(g, worst), make_rational(1, 4));
  EXPECT_EQ(criterion_simulate(g, 1, worst, make_rational(1, 512), 0.25).rounds[0].w, make_rational(1, 4));
}

TEST(Criterion, MatchesTwoFoldOracle) {
  sampling::Rng rng(23);
  const auto g = games::ghz_game();
  for (int t = 0; t < 25; ++t) {
    auto f = random_strategy(2, rng);
    const int j1 = static_cast<int>(rng() % 2);
    auto tr = criterion_simulate(g, 2, f, make_rational(1, 512), 0.25, j1);
    auto o = oracle::ghz2_criterion(f, j1);
    ASSERT_EQ(tr.rounds.size(), 2u);
    ASSERT_EQ(tr.rounds[0].w, o.w1);
    ASSERT_EQ(tr.rounds[1].w, o.w2);
    std::multimap<Rational, Rational> depth1;
    for (const auto& h : tr.histories) {
      if (h.depth != 1) continue;
      depth1.emplace(h.mass, h.next_win);
      ASSERT_TRUE(h.product_event);
      ASSERT_TRUE(h.hard_value);
      ASSERT_LE(h.next_win, *h.hard_value);
      ASSERT_TRUE(h.next_ok);
    }
    ASSERT_EQ(depth1, o.depth1);
    ASSERT_TRUE(tr.ok());
    if (tr.rounds[0].decay_checked) ASSERT_TRUE(tr.rounds[0].decay_ok);
  }
}

TEST(Criterion, OptimalStrategyDecays) {
  const auto g = games::ghz_game();
  const auto best = games::exact_value(games::repeat(g, 2).materialize()).witness;
  auto tr = criterion_simulate(g, 2, best, make_rational(1, 512), 0.25);
  EXPECT_EQ(tr.strategy_value, make_rational(5, 8));
  EXPECT_LE(tr.rounds[1].w, tr.rounds[0].w);
  EXPECT_TRUE(tr.ok());
}

TEST(Criterion, InputErrors) {
  const auto g = games::ghz_game();
  games::ProductStrategy f{{{0, 0}, {0, 0}, {0, 0}}};
  EXPECT_THROW(criterion_simulate(g, 0, f, make_rational(1, 512), 0.25), DomainError);
  EXPECT_THROW(criterion_simulate(g, 1, f, make_rational(1, 512), 0.25, 1), DomainError);
  CriterionOptions opt;
  opt.budget = 10;
  EXPECT_THROW(criterion_simulate(g, 1, f, make_rational(1, 512), 0.25, 0, opt), BudgetExceeded);
}

TEST(Constraints, ExplicitPoints) {
  auto c = main_constraints(1e30, 1.0, 1e-6, 1.0, 0.5);
  EXPECT_FALSE(c.delta_constraints[0]);
  EXPECT_TRUE(c.delta_constraints[1]);
  EXPECT_TRUE(c.delta_constraints[2]);
  EXPECT_TRUE(c.spread_constraint);
  EXPECT_FALSE(main_constraints(10, 1.0, 1e-3, 1.0, 0.5).spread_constraint);
}

TEST(Constraints, ThresholdIsFarBeyondDirectRange) {
  auto d = constraint_threshold(1000000);
  EXPECT_TRUE(d.unsatisfied_throughout);
  EXPECT_GT(d.threshold_ln_n, std::log(1e6));
  EXPECT_TRUE(asymptotic_constraints(std::exp(d.threshold_ln_n + 0.01)).all());
  EXPECT_FALSE(asymptotic_constraints(std::exp(d.threshold_ln_n - 0.01)).all());
  EXPECT_NEAR(d.threshold_log10_n * std::log(10.0), d.threshold_ln_n, 1e-12);
}

TEST(Demo, FullEventN1) {
  auto r = main_theorem_demo(partition::ProductEvent::full(1), 0.1, 1, 0.5);
  EXPECT_TRUE(r.stage_errors.empty());
  EXPECT_EQ(r.partition.rounds, 0);
  ASSERT_EQ(r.parts.size(), 1u);
  EXPECT_TRUE(r.parts[0].pseudorandom);
  EXPECT_EQ(r.j_star, 0);
  ASSERT_TRUE(r.value_tilde);
  EXPECT_EQ(*r.value_tilde, make_rational(3, 4));
  EXPECT_TRUE(r.vacuous);
  EXPECT_TRUE(r.ok());
}

TEST(Demo, RandomEventsN2) {
  sampling::Rng rng(24);
  for (int t = 0; t < 6; ++t) {
    auto e = sampling::random_product_event(2, 0.6, 1.0 / 16, rng);
    auto r = main_theorem_demo(e, 0.1, 1, 0.5);
    ASSERT_TRUE(r.stage_errors.empty());
    ASSERT_TRUE(r.values_computed);
    ASSERT_TRUE(r.ok()) << t;
    double mass = 0;
    for (const auto& p : r.parts) mass += p.tilde_mass;
    ASSERT_NEAR(mass, 1, 1e-12);
    ASSERT_LE(*r.value_tilde, *r.averaged);
  }
}

TEST(Demo, PartitionOnlyN4) {
  auto e = parse_event(4, "0000,0011,0101,1111;*;0000,1100,1010,0110");
  DemoOptions opt;
  opt.partition_only = true;
  auto r = main_theorem_demo(e, 0.2, 1, 0.5, opt);
  EXPECT_TRUE(r.stage_errors.empty());
  EXPECT_FALSE(r.values_computed);
  EXPECT_TRUE(r.partition.ok());
  EXPECT_TRUE(r.markov_ok);
  EXPECT_TRUE(r.ok());
}
