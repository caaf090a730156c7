#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ghzlab/errors.hpp"
#include "ghzlab/probdist.hpp"
#include "ghzlab/sampling.hpp"
#include "oracles.hpp"

using namespace ghzlab;
using namespace ghzlab::prob;

namespace {

Rational R(long a, unsigned long b = 1) { return make_rational(a, b); }

std::vector<Key> keys(int count) {
  std::vector<Key> k;
  for (int i = 0; i < count; ++i) k.push_back(encode_index(static_cast<std::uint64_t>(i)));
  return k;
}

FiniteDist random_dist(int size, sampling::Rng& rng, bool allow_zero = true) {
  std::vector<FiniteDist::Entry> w;
  for (const auto& k : keys(size)) w.emplace_back(k, R(static_cast<long>(rng() % 6) + (allow_zero ? 0 : 1)));
  bool any = false;
  for (const auto& e : w) any = any || e.second > 0;
  if (!any) w[0].second = 1;
  return FiniteDist::from_weights(w);
}

Event random_event(int size, sampling::Rng& rng) {
  auto mask = std::make_shared<std::vector<bool>>();
  for (int i = 0; i < size; ++i) mask->push_back(rng() % 2 == 0);
  return [mask](const Key& k) { return (*mask)[decode_indices(k)[0]]; };
}

RandVar random_var(int size, int range, sampling::Rng& rng) {
  std::map<Key, Key> t;
  for (const auto& k : keys(size)) t[k] = encode_index(rng() % static_cast<std::uint64_t>(range));
  return RandVar::from_table(t);
}

Rational total(const FiniteDist& p) {
  Rational s = 0;
  for (const auto& e : p.entries()) s += e.second;
  return s;
}

const std::vector<Key> ghz = {"000", "011", "101", "110"};

}  // namespace

TEST(FiniteDist, ValidatesMasses) {
  EXPECT_THROW(FiniteDist::from_entries({{"a", R(1, 2)}, {"b", R(1, 3)}}), DomainError);
  EXPECT_THROW(FiniteDist::from_entries({{"a", R(-1, 2)}, {"b", R(3, 2)}}), DomainError);
  auto p = FiniteDist::from_entries({{"b", R(1, 2)}, {"a", R(1, 4)}, {"a", R(1, 4)}});
  EXPECT_EQ(p.mass("a"), R(1, 2));
  EXPECT_EQ(p.universe_size(), 2u);
  EXPECT_EQ(p.mass("zzz"), 0);
}

TEST(Condition, PointMassFromUniform) {
  auto p = FiniteDist::uniform({"a", "b", "c", "d"});
  auto c = condition(p, [](const Key& k) { return k == "c"; });
  EXPECT_EQ(c.mass("c"), 1);
  EXPECT_EQ(c.support(), std::vector<Key>{"c"});
}

TEST(Condition, WholeSpaceIsIdentity) {
  sampling::Rng rng(1);
  auto p = random_dist(6, rng);
  EXPECT_EQ(condition(p, [](const Key&) { return true; }), p);
}

TEST(Condition, GhzFirstBitZero) {
  auto p = FiniteDist::uniform(ghz);
  auto c = condition(p, [](const Key& k) { return k[0] == '0'; });
  EXPECT_EQ(c.support(), (std::vector<Key>{"000", "011"}));
  EXPECT_EQ(c.mass("000"), R(1, 2));
  EXPECT_EQ(c.mass("011"), R(1, 2));
  EXPECT_THROW(condition(p, [](const Key& k) { return k == "111"; }), ZeroMassEvent);
}

TEST(Pushforward, IdentityConstantAndOr) {
  sampling::Rng rng(2);
  auto p = random_dist(5, rng);
  auto id = pushforward(p, RandVar::identity());
  EXPECT_EQ(id.support(), p.support());
  for (const auto& k : p.support()) EXPECT_EQ(id.mass(k), p.mass(k));
  EXPECT_EQ(pushforward(p, RandVar::constant("c")).mass("c"), 1);
  auto q = FiniteDist::uniform(ghz);
  auto orv = pushforward(q, RandVar::total([](const Key& k) { return k == "000" ? Key("0") : Key("1"); }));
  EXPECT_EQ(orv.mass("0"), R(1, 4));
  EXPECT_EQ(orv.mass("1"), R(3, 4));
  EXPECT_THROW(pushforward(q, RandVar::from_table({{"000", "x"}})), PartialFunction);
}

TEST(Pushforward, ConservesMassExactly) {
  sampling::Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    auto p = random_dist(9, rng);
    ASSERT_EQ(total(pushforward(p, random_var(9, 3, rng))), 1);
    auto e = random_event(9, rng);
    if (p.prob(e) > 0) ASSERT_EQ(total(condition(p, e)), 1);
  }
}

TEST(TvDistance, Examples) {
  auto p = FiniteDist::uniform({"a", "b"});
  EXPECT_EQ(tv_distance(p, p), 0);
  auto a = FiniteDist::from_entries({{"a", R(1)}, {"b", R(0)}});
  auto b = FiniteDist::from_entries({{"a", R(0)}, {"b", R(1)}});
  EXPECT_EQ(tv_distance(a, b), 1);
  EXPECT_THROW(tv_distance(FiniteDist::point("a"), FiniteDist::point("b")), UniverseMismatch);
  EXPECT_EQ(tv_distance(p, a), R(1, 2));
}

TEST(TvDistance, EqualsMaxEventForm) {
  sampling::Rng rng(4);
  for (int t = 0; t < 300; ++t) {
    const int size = 1 + static_cast<int>(rng() % 12);
    auto p = random_dist(size, rng);
    auto q = random_dist(size, rng);
    ASSERT_EQ(tv_distance(p, q), oracle::max_event_tv(p, q));
  }
}

TEST(KlDivergence, Examples) {
  auto p = FiniteDist::uniform({"a", "b", "c", "d"});
  EXPECT_EQ(kl_divergence(p, p), 0);
  EXPECT_NEAR(kl_divergence(FiniteDist::point("a"), p), std::log(4.0), 1e-12);
  EXPECT_TRUE(std::isinf(kl_divergence(p, FiniteDist::point("a"))));
  auto e = [](const Key& k) { return k == "b"; };
  EXPECT_NEAR(kl_divergence(condition(p, e), p), std::log(4.0), 1e-12);
}

TEST(KlDivergence, NonnegativeZeroIffEqualAgainstOracle) {
  sampling::Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const int size = 1 + static_cast<int>(rng() % 8);
    auto p = random_dist(size, rng);
    auto q = random_dist(size, rng);
    auto [a, b] = align(p, q);
    std::vector<double> pa, qa;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
      pa.push_back(to_double(a.entries()[i].second));
      qa.push_back(to_double(b.entries()[i].second));
    }
    const double d = kl_divergence(p, q);
    const double o = oracle::kl(pa, qa);
    if (std::isinf(o)) {
      ASSERT_TRUE(std::isinf(d));
    } else {
      ASSERT_NEAR(d, o, 1e-9);
    }
    ASSERT_GE(d, 0);
    ASSERT_EQ(d == 0, a == b);
  }
}

TEST(KlDivergence, ConditionedOnEvent) {
  sampling::Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    auto p = random_dist(10, rng);
    auto e = random_event(10, rng);
    const Rational pe = p.prob(e);
    if (pe == 0) continue;
    ASSERT_NEAR(kl_divergence(condition(p, e), p), -std::log(to_double(pe)), 1e-12);
  }
}

TEST(ConditionalKl, TrivialCases) {
  sampling::Rng rng(7);
  auto p = random_dist(8, rng, false);
  auto q = random_dist(8, rng, false);
  auto id = RandVar::identity();
  EXPECT_NEAR(conditional_kl(p, p, id, id, id, id), 0, 1e-15);
  auto c = RandVar::constant("c");
  EXPECT_NEAR(conditional_kl(p, q, id, c, id, c), kl_divergence(p, q), 1e-12);
}

TEST(ConditionalKl, ChainRule) {
  sampling::Rng rng(8);
  for (int t = 0; t < 500; ++t) {
    auto p = random_dist(8, rng);
    auto q = random_dist(8, rng, false);
    auto w = random_var(8, 3, rng);
    auto x = random_var(8, 3, rng);
    auto y = random_var(8, 3, rng);
    auto z = random_var(8, 3, rng);
    const double joint_kl = kl_divergence(pushforward(p, joint(w, x)), pushforward(q, joint(y, z)));
    const double split = kl_divergence(pushforward(p, x), pushforward(q, z)) + conditional_kl(p, q, w, x, y, z);
    if (std::isinf(joint_kl)) {
      ASSERT_TRUE(std::isinf(split));
    } else {
      ASSERT_NEAR(joint_kl, split, 1e-12);
    }
  }
}

TEST(Entropy, Examples) {
  EXPECT_EQ(entropy(FiniteDist::point("a")), 0);
  EXPECT_NEAR(entropy(FiniteDist::uniform({"a", "b", "c", "d"})), std::log(4.0), 1e-15);
  auto p = FiniteDist::from_entries({{"a", R(1, 4)}, {"b", R(3, 4)}});
  EXPECT_NEAR(entropy(p), 0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3), 1e-15);
}

TEST(Entropy, BoundsAndChainRule) {
  sampling::Rng rng(9);
  for (int t = 0; t < 500; ++t) {
    auto p = random_dist(9, rng);
    const double h = entropy(p);
    ASSERT_GE(h, 0);
    ASSERT_LE(h, std::log(static_cast<double>(p.support().size())) + 1e-12);
    auto x = random_var(9, 3, rng);
    auto y = random_var(9, 3, rng);
    ASSERT_NEAR(conditional_entropy(p, x, y), entropy(pushforward(p, joint(x, y))) - entropy(pushforward(p, y)), 1e-12);
  }
}

TEST(ConditionedTvBound, Examples) {
  sampling::Rng rng(10);
  auto p = random_dist(8, rng, false);
  auto e = random_event(8, rng);
  auto same = conditioned_tv_bound_check(p, p, e);
  EXPECT_EQ(same.lhs, 0);
  EXPECT_EQ(same.rhs, 0);
  EXPECT_TRUE(same.holds);
  auto q = random_dist(8, rng, false);
  auto all = conditioned_tv_bound_check(p, q, [](const Key&) { return true; });
  EXPECT_EQ(all.lhs, tv_distance(p, q));
  EXPECT_EQ(all.rhs, 2 * tv_distance(p, q));
  EXPECT_THROW(conditioned_tv_bound_check(p, q, [](const Key&) { return false; }), ZeroMassEvent);
}

TEST(ConditionedTvBound, RandomInstances) {
  sampling::Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    auto p = random_dist(8, rng);
    auto q = random_dist(8, rng);
    auto e = random_event(8, rng);
    if (p.prob(e) == 0) continue;
    ASSERT_TRUE(conditioned_tv_bound_check(p, q, e).holds);
  }
}

TEST(Pinsker, Examples) {
  auto p = FiniteDist::uniform({"a", "b"});
  auto same = pinsker_check(p, p);
  EXPECT_EQ(same.lhs, 0);
  EXPECT_EQ(same.rhs, 0);
  EXPECT_TRUE(same.holds);
  auto disjoint = pinsker_check(FiniteDist::point("a"), FiniteDist::point("b"));
  EXPECT_EQ(disjoint.lhs, 1);
  EXPECT_TRUE(std::isinf(disjoint.rhs));
  EXPECT_TRUE(disjoint.holds);
}

TEST(Pinsker, RandomInstances) {
  sampling::Rng rng(12);
  for (int t = 0; t < 2000; ++t) ASSERT_TRUE(pinsker_check(random_dist(8, rng), random_dist(8, rng)).holds);
}

TEST(ExpectationQuotient, Examples) {
  sampling::Rng rng(13);
  auto p = random_dist(8, rng, false);
  auto x = random_var(8, 2, rng);
  auto y = random_var(8, 2, rng);
  auto z = random_var(8, 3, rng);
  auto all = [](const Key&) { return true; };
  auto c = expectation_quotient_bound_check(p, all, x, y, z, 1, 0);
  EXPECT_EQ(c.rhs, 2 * c.lhs);
  EXPECT_TRUE(c.holds);
  auto same = expectation_quotient_bound_check(p, all, x, x, z, R(1, 2), 0);
  EXPECT_EQ(same.lhs, 0);
  EXPECT_THROW(expectation_quotient_bound_check(p, [](const Key& k) { return k == encode_index(0); }, x, y, z, 1, 0),
               PreconditionFailed);
}

// E = {X in A} = {Y in A}: the event is read off both variables alike.
TEST(ExpectationQuotient, RandomInstances) {
  sampling::Rng rng(14);
  for (int t = 0; t < 1000; ++t) {
    auto p = random_dist(8, rng, false);
    auto inside = std::make_shared<std::vector<bool>>();
    for (int i = 0; i < 8; ++i) inside->push_back(rng() % 3 != 0);
    std::map<Key, Key> xt, yt;
    for (const auto& k : keys(8)) {
      const bool in = (*inside)[decode_indices(k)[0]];
      xt[k] = encode_index(rng() % 2 + (in ? 0 : 2));
      yt[k] = encode_index(rng() % 2 + (in ? 0 : 2));
    }
    Event e = [inside](const Key& k) { return (*inside)[decode_indices(k)[0]]; };
    if (p.prob(e) == 0) continue;
    auto x = RandVar::from_table(xt);
    auto y = RandVar::from_table(yt);
    auto zv = random_var(8, 3, rng);
    const Rational delta = R(1 + static_cast<long>(rng() % 8), 8);
    Rational light = 0;
    auto pz = pushforward(p, zv);
    for (const auto& z : pz.support()) {
      auto in_z = [&](const Key& k) { return *zv(k) == z; };
      const Rational pez = p.prob([&](const Key& k) { return in_z(k) && e(k); }) / p.prob(in_z);
      if (pez < delta) light += pz.mass(z);
    }
    ASSERT_TRUE(expectation_quotient_bound_check(p, e, x, y, zv, delta, light).holds);
  }
}

// X and Y share a law but E selects opposite values of them.
TEST(ExpectationQuotient, FailsWhenEventSeparatesTheVariables) {
  auto p = FiniteDist::uniform({"0", "1"});
  auto x = RandVar::identity();
  auto y = RandVar::total([](const Key& k) { return k == "0" ? Key("1") : Key("0"); });
  auto c = expectation_quotient_bound_check(p, [](const Key& k) { return k == "0"; }, x, y, RandVar::constant("z"),
                                            R(1, 2), 0);
  EXPECT_EQ(c.lhs, 1);
  EXPECT_EQ(c.rhs, 0);
  EXPECT_FALSE(c.holds);
}

TEST(LambertW, SolvesDefiningEquation) {
  for (double y : {0.0, 1e-6, 0.5, 1.0, std::numbers::e, 10.0, 1e3, 1e8, 1e200}) {
    const double w = lambert_w(y);
    EXPECT_NEAR(w * std::exp(w), y, 1e-10 * std::max(1.0, y)) << y;
  }
  EXPECT_NEAR(lambert_w(std::numbers::e), 1.0, 1e-14);
}

TEST(OptimumTau, BoundaryAdmitted) {
  auto t = optimum_tau(std::numbers::e, 1);
  EXPECT_NEAR(t.bound, 4 * std::numbers::e, 1e-12);
  EXPECT_LE(t.value, t.bound);
  EXPECT_THROW(optimum_tau(2, 1), DomainError);
  EXPECT_THROW(optimum_tau(1, 0), DomainError);
}

TEST(OptimumTau, AgainstGridSearch) {
  const double e2 = std::exp(2.0);
  auto t = optimum_tau(e2, 1);
  EXPECT_NEAR(t.value, 2 * e2 / lambert_w(e2), 1e-12);
  EXPECT_NEAR(t.value, 9.49, 5e-3);
  EXPECT_NEAR(t.bound, 2 * e2, 1e-12);
  EXPECT_NEAR(tau_objective(e2, 1, t.tau_star), t.value, 1e-9);
  const double grid = oracle::tau_grid_min(e2, 1, 1000000);
  EXPECT_LE(grid, t.value + 1e-4);
  EXPECT_LE(grid, t.bound);

  auto h = optimum_tau(100, 1);
  EXPECT_LE(h.value, 400 / std::log(100.0));
  EXPECT_LE(oracle::tau_grid_min(100, 1, 1000000), h.value + 1e-4);
}

TEST(Keys, TripleRoundTrip) {
  sampling::Rng rng(15);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 20);
    f2::F2Triple x = {sampling::random_vector(n, rng), sampling::random_vector(n, rng), sampling::random_vector(n, rng)};
    ASSERT_EQ(decode_triple(encode_triple(x), n), x);
  }
  std::vector<std::uint64_t> v = {3, 0, 1ULL << 40};
  EXPECT_EQ(decode_indices(encode_indices(v)), v);
  EXPECT_LT(encode_index(2), encode_index(256));
}
