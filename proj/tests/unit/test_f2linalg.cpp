#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ghzlab/errors.hpp"
#include "ghzlab/f2linalg.hpp"
#include "ghzlab/sampling.hpp"
#include "oracles.hpp"

using namespace ghzlab;
using namespace ghzlab::f2;

namespace {

F2Vector V(const char* s) { return F2Vector::from_string(s); }

F2Matrix random_matrix(int rows, int cols, sampling::Rng& rng) {
  std::vector<F2Vector> r;
  for (int i = 0; i < rows; ++i) r.push_back(sampling::random_vector(cols, rng));
  return F2Matrix(r, cols);
}

}  // namespace

TEST(F2Vector, BitLayout) {
  auto v = V("1011");
  EXPECT_EQ(v.size(), 4);
  EXPECT_EQ(v.bits(), 0b1011u);
  EXPECT_TRUE(v.get(0));
  EXPECT_FALSE(v.get(1));
  EXPECT_EQ(v.weight(), 3);
  EXPECT_EQ(v.leading(), 0);
  EXPECT_EQ(v.to_string(), "1011");
  EXPECT_EQ(F2Vector(5).leading(), -1);
  EXPECT_EQ(F2Vector::unit(3, 2), V("001"));
  EXPECT_EQ(v.support(), (std::vector<int>{0, 2, 3}));
}

TEST(F2Vector, AdditionIsXor) {
  auto a = V("1100");
  auto b = V("1010");
  EXPECT_EQ(a + b, V("0110"));
  EXPECT_TRUE((a + a).is_zero());
  EXPECT_TRUE(dot(a, b));
  EXPECT_EQ(dot(V("11"), V("11")), false);
}

TEST(Rref, DuplicateRows) {
  auto r = rref(F2Matrix::from_strings({"11", "11"}));
  EXPECT_EQ(r.rank, 1);
  EXPECT_EQ(r.reduced, F2Matrix::from_strings({"11"}));
  EXPECT_EQ(r.pivots, std::vector<int>{0});
}

TEST(Rref, Identity) {
  auto r = rref(F2Matrix::identity(3));
  EXPECT_EQ(r.rank, 3);
  EXPECT_EQ(r.reduced, F2Matrix::identity(3));
}

TEST(Rref, DependentThirdRow) {
  auto m = F2Matrix::from_strings({"101", "011", "110"});
  EXPECT_EQ(oracle::span_rank(m.row_list()), 2);
  EXPECT_EQ(rref(m).rank, 2);
}

TEST(Rref, PropertiesOnRandomMatrices) {
  sampling::Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    const int rows = 1 + static_cast<int>(rng() % 8);
    const int cols = 1 + static_cast<int>(rng() % 12);
    auto m = random_matrix(rows, cols, rng);
    auto r = rref(m);
    ASSERT_EQ(r.rank, oracle::span_rank(m.row_list()));
    ASSERT_EQ(static_cast<int>(r.pivots.size()), r.rank);
    ASSERT_EQ(rref(r.reduced).reduced, r.reduced);
    for (int i = 0; i < r.rank; ++i) {
      for (int k = 0; k < r.rank; ++k) ASSERT_EQ(r.reduced.row(k).get(r.pivots[i]), i == k);
      if (i > 0) ASSERT_LT(r.pivots[i - 1], r.pivots[i]);
      ASSERT_EQ(r.reduced.row(i).leading(), r.pivots[i]);
    }
    auto space = Subspace::span(cols, r.reduced.row_list());
    for (const auto& row : m.row_list()) ASSERT_TRUE(space.contains(row));
  }
}

TEST(LeftKernel, EqualRowsCancel) {
  auto k = left_kernel_basis(F2Matrix::from_strings({"1", "1"}));
  EXPECT_TRUE(k.contains(V("11")));
  EXPECT_EQ(k.dim(), 1);
}

TEST(LeftKernel, IdentityIsTrivial) { EXPECT_EQ(left_kernel_basis(F2Matrix::identity(4)).dim(), 0); }

TEST(LeftKernel, AllOnesOnThreeRows) {
  auto a = F2Matrix::from_strings({"10", "01", "11"});
  std::vector<F2Vector> expect;
  for (std::uint64_t x = 1; x < 8; ++x) {
    if (a.left_multiply(F2Vector::from_bits(x, 3)).is_zero()) expect.push_back(F2Vector::from_bits(x, 3));
  }
  ASSERT_EQ(expect.size(), 1u);
  EXPECT_EQ(expect[0], V("111"));
  EXPECT_EQ(left_kernel_basis(a), Subspace::span(3, expect));
}

TEST(LeftKernel, RandomDimensionBound) {
  sampling::Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const int rows = 1 + static_cast<int>(rng() % 9);
    const int cols = 1 + static_cast<int>(rng() % 6);
    auto a = random_matrix(rows, cols, rng);
    auto k = left_kernel_basis(a);
    ASSERT_GE(k.dim(), rows - cols);
    ASSERT_EQ(k.dim(), rows - oracle::span_rank(a.row_list()));
    for (const auto& b : k.basis()) ASSERT_TRUE(a.left_multiply(b).is_zero());
  }
}

TEST(SubsetSumZero, Examples) {
  EXPECT_EQ(subset_sum_zero(F2Matrix::from_strings({"1", "1"}), 2), (std::vector<int>{0, 1}));
  EXPECT_EQ(subset_sum_zero(F2Matrix::from_strings({"00", "10", "01"}), 3), (std::vector<int>{0}));
  EXPECT_EQ(subset_sum_zero(F2Matrix::from_strings({"10", "01", "11"}), 3), (std::vector<int>{0, 1, 2}));
  EXPECT_THROW(subset_sum_zero(F2Matrix::from_strings({"10", "01"}), 2), NoZeroSubset);
}

TEST(SubsetSumZero, AlwaysSumsToZero) {
  sampling::Rng rng(9);
  for (int t = 0; t < 500; ++t) {
    const int cols = 1 + static_cast<int>(rng() % 6);
    const int rows = cols + 1 + static_cast<int>(rng() % 3);
    auto a = random_matrix(rows, cols, rng);
    const int limit = cols + 1;
    auto s = subset_sum_zero(a, limit);
    ASSERT_FALSE(s.empty());
    F2Vector acc(cols);
    for (int j : s) {
      ASSERT_LT(j, limit);
      acc += a.row(j);
    }
    ASSERT_TRUE(acc.is_zero());
    ASSERT_TRUE(std::is_sorted(s.begin(), s.end()));
  }
}

TEST(CosetReps, Examples) {
  auto full = Subspace::full(2);
  EXPECT_EQ(coset_reps(full, full), std::vector<F2Vector>{V("00")});
  EXPECT_EQ(coset_reps(full, Subspace::zero(2)).size(), 4u);
  auto u = Subspace::span(2, {V("11")});
  auto reps = coset_reps(Subspace::span(2, {V("10"), V("01")}), u);
  ASSERT_EQ(reps.size(), 2u);
  EXPECT_FALSE(u.contains(reps[0] + reps[1]));
  for (const auto& r : reps) EXPECT_EQ(u.reduce(r), r);
  EXPECT_THROW(coset_reps(u, full), NotSubspaceOf);
}

TEST(CosetReps, CoverWithoutOverlap) {
  sampling::Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const int dv = static_cast<int>(rng() % (n + 1));
    auto v = sampling::random_subspace(n, dv, rng);
    std::vector<F2Vector> gens;
    for (const auto& b : v.basis()) {
      if (rng() % 2) gens.push_back(b + (v.dim() > 0 ? v.basis()[rng() % v.basis().size()] : b));
    }
    auto u = Subspace::span(n, gens);
    ASSERT_TRUE(u.is_subspace_of(v));
    auto reps = coset_reps(v, u);
    ASSERT_EQ(reps.size(), std::uint64_t{1} << (v.dim() - u.dim()));
    std::set<std::uint64_t> seen;
    for (const auto& r : reps) {
      for (const auto& x : u.elements()) ASSERT_TRUE(seen.insert((r + x).bits()).second);
    }
    ASSERT_EQ(seen.size(), v.size());
    for (auto b : seen) ASSERT_TRUE(v.contains(F2Vector::from_bits(b, n)));
  }
}

TEST(Subspace, CanonicalUnderShuffle) {
  sampling::Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 16);
    std::vector<F2Vector> gens;
    const int g = static_cast<int>(rng() % 7);
    for (int i = 0; i < g; ++i) gens.push_back(sampling::random_vector(n, rng));
    auto a = Subspace::span(n, gens);
    std::shuffle(gens.begin(), gens.end(), rng);
    if (!gens.empty()) gens.push_back(gens[0] + gens.back());
    auto b = Subspace::span(n, gens);
    ASSERT_EQ(a, b);
    ASSERT_EQ(a.basis(), b.basis());
  }
}

TEST(Subspace, CoordsRoundTripAndAnnihilator) {
  sampling::Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 10);
    auto v = sampling::random_subspace(n, static_cast<int>(rng() % (n + 1)), rng);
    for (std::uint64_t c = 0; c < v.size(); ++c) ASSERT_EQ(v.coord_index(v.element(c)), c);
    auto ann = v.annihilator();
    ASSERT_EQ(ann.dim(), n - v.dim());
    for (const auto& a : ann.basis()) {
      for (const auto& b : v.basis()) ASSERT_FALSE(dot(a, b));
    }
    if (v.dim() > 0) {
      auto gamma = sampling::random_vector(v.dim(), rng);
      auto ker = v.character_kernel(gamma);
      ASSERT_EQ(ker.dim(), gamma.is_zero() ? v.dim() : v.dim() - 1);
      for (const auto& x : ker.elements()) ASSERT_FALSE(dot(gamma, v.coords(x)));
    }
  }
}

TEST(EnumerateCoset, ZeroSpaceYieldsShift) {
  auto w = AffinePowerCoset(make_triple(3, 0b101, 0b011, 0b110), Subspace::zero(3));
  std::vector<F2Triple> all(enumerate_coset(w).begin(), enumerate_coset(w).end());
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], make_triple(3, 0b101, 0b011, 0b110));
}

TEST(EnumerateCoset, FullSpaceN1) {
  std::set<std::uint64_t> seen;
  for (const auto& x : enumerate_coset(AffinePowerCoset::full(1))) {
    seen.insert(column(x, 0));
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(EnumerateCoset, DiagonalN2) {
  auto w = AffinePowerCoset(make_triple(2, 0, 0, 0), Subspace::span(2, {V("11")}));
  std::set<std::string> seen;
  for (const auto& x : enumerate_coset(w)) {
    for (const auto& row : x) EXPECT_TRUE(row == V("00") || row == V("11"));
    seen.insert(to_string(x));
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(EnumerateCoset, BudgetExceeded) {
  EXPECT_THROW(enumerate_coset(AffinePowerCoset::full(9), 1 << 20), BudgetExceeded);
}

TEST(AffinePowerCoset, CanonicalShift) {
  sampling::Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    auto w = sampling::random_coset(n, static_cast<int>(rng() % (n + 1)), rng, false);
    for (const auto& x : enumerate_coset(w)) {
      ASSERT_TRUE(w.contains(x));
      ASSERT_EQ(AffinePowerCoset::containing(x, w.space()), w);
    }
  }
}

TEST(GaussianBinomial, MatchesEnumeration) {
  for (int d = 0; d <= 6; ++d) {
    for (int k = 0; k <= d; ++k) {
      std::set<std::vector<F2Vector>> seen;
      for_each_subspace(d, k, [&](const std::vector<F2Vector>& rows) {
        EXPECT_EQ(Subspace::span(d, rows).basis(), rows);
        seen.insert(rows);
      });
      EXPECT_EQ(static_cast<double>(seen.size()), gaussian_binomial(d, k)) << d << " " << k;
    }
  }
  EXPECT_EQ(gaussian_binomial(14, 2), 44731051.0);
}
