#pragma once

// Fourier analysis over F2 subspaces and their cosets.
//
// Characters of a subspace V are indexed by gamma in F2^{dim V}, read in the
// coordinates of V's canonical basis: chi_gamma(v) = (-1)^{gamma . coords(v)}.
// Functions on a coset x + V are stored by the coordinate index of
// (point - canonical shift), so the same indexing serves both.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ghzlab/f2linalg.hpp"
#include "ghzlab/probdist.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab::fourier {

inline constexpr int kDefaultTransformBudget = 24;

/// In-place unnormalized Walsh-Hadamard butterfly: a[g] <- sum_c a[c] (-1)^{popcount(g & c)}.
template <class T>
void walsh_hadamard(std::span<T> a) {
  const std::size_t n = a.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        T x = a[j];
        T y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

struct Character {
  f2::F2Vector gamma;

  bool is_trivial() const { return gamma.is_zero(); }
  /// Value at v in V (v given in the ambient space).
  int operator()(const f2::Subspace& space, const f2::F2Vector& v) const;
  /// Value at the element with coordinate index c.
  int at_index(std::uint64_t c) const;
};

struct CosetFunction {
  f2::Coset carrier;
  std::vector<Rational> values;

  static CosetFunction from_fn(f2::Coset carrier, const std::function<Rational(const f2::F2Vector&)>& fn);
  static CosetFunction constant(f2::Coset carrier, const Rational& c);
  static CosetFunction character(f2::Coset carrier, const Character& chi);
  /// Indicator of `members` (given as ambient points of the carrier).
  static CosetFunction indicator(f2::Coset carrier, std::span<const f2::F2Vector> members);

  Rational at(const f2::F2Vector& x) const { return values[carrier.coord_index(x)]; }
  int dim() const { return carrier.space.dim(); }
};

struct FourierTable {
  f2::Subspace space;
  std::vector<Rational> coeffs;  // indexed by gamma.bits()

  const Rational& coeff(const Character& chi) const { return coeffs[chi.gamma.bits()]; }
};

/// Density of a distribution in its carrier: x -> |A| P(x).
struct Density {
  CosetFunction function;

  /// Density in `carrier` of the uniform distribution on `members`.
  static Density uniform_on(f2::Coset carrier, std::span<const f2::F2Vector> members);
  /// Density of an arbitrary distribution given by point masses indexed like CosetFunction.
  static Density of_masses(f2::Coset carrier, const std::vector<Rational>& masses);
  Rational mean() const;
};

/// fhat(chi) = E_v f(v) chi(v). Throws BudgetExceeded if dim > budget.
FourierTable transform(const CosetFunction& f, int budget = kDefaultTransformBudget);
/// f = sum_chi fhat(chi) chi, placed on the given carrier.
CosetFunction inverse_transform(const FourierTable& t, const f2::Coset& carrier);

/// <f, g> = E_v f(v) g(v).
Rational inner_product(const CosetFunction& f, const CosetFunction& g);
/// <fhat, ghat> = sum_chi fhat(chi) ghat(chi).
Rational inner_product(const FourierTable& f, const FourierTable& g);

/// ||f||^2 (mean of squares) against sum_chi fhat(chi)^2.
prob::ExactCheck parseval_check(const CosetFunction& f);

/// Subset of V given by membership flags indexed by coordinate index.
using SubsetMask = std::vector<std::uint8_t>;

SubsetMask mask_of(const f2::Subspace& v, std::span<const f2::F2Vector> members);

struct ProductEventFormula {
  Rational lhs;             // P(E) by enumeration of the sum-zero triples
  Rational char_sum;        // sum_chi prod_i 1hat_{E_i}(chi)
  Rational density_form;    // U(E) sum_chi prod_i phihat_{E_i}(chi)
  bool density_defined = false;  // false when some E_i is empty
  bool all_equal() const { return lhs == char_sum && (!density_defined || density_form == lhs); }
};

ProductEventFormula ghz_product_event_prob(const f2::Subspace& v, const std::array<SubsetMask, 3>& events);

/// |P(E) - U(E)| against sum over nontrivial chi of prod_i |1hat_{E_i}(chi)|.
prob::ExactCheck prob_diff_bound_check(const f2::Subspace& v, const std::array<SubsetMask, 3>& events);

/// Transform of the density of the sum-zero distribution on V^3, computed
/// over the 3 dim V dimensional space and compared against the indicator of
/// chi_1 = chi_2 = chi_3. Throws BudgetExceeded if 3 dim V > budget.
bool ghz_density_transform_check(const f2::Subspace& v, int budget = kDefaultTransformBudget);

/// Player answer function on V: table indexed by coordinate index, values in [0, alphabet).
struct PlayerFunction {
  int alphabet = 1;
  std::vector<unsigned> table;

  static PlayerFunction from_fn(const f2::Subspace& v, int alphabet,
                                const std::function<unsigned(const f2::F2Vector&)>& fn);
};

struct ProductFunctionReport {
  Rational eps_meas;         // max over characters of W of the hypothesis expectation
  f2::F2Vector eps_witness;  // maximizing character of W
  Rational c_meas;           // E_x d_TV(P_{Y|x+W^3}, U_{Y|x+W^3})
  double bound = 0;          // eps_meas * sqrt(|Y2||Y3|)
  bool holds = false;        // c_meas <= bound, decided exactly on squares
  bool hypothesis_holds = false;  // eps_meas <= epsilon
  bool conclusion_holds = false;  // c_meas <= epsilon * sqrt(|Y2||Y3|)
};

/// Throws NotSubspaceOf if W is not a subspace of V, BudgetExceeded if 2 dim V > budget.
ProductFunctionReport product_function_independence_check(const f2::Subspace& v, const f2::Subspace& w,
                                                          const std::array<PlayerFunction, 3>& ys,
                                                          double epsilon, int budget = kDefaultTransformBudget);

}  // namespace ghzlab::fourier
