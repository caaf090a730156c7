#pragma once

// Exact finite probability distributions over opaque byte-string outcomes.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ghzlab/f2linalg.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab::prob {

using Key = std::string;
using Event = std::function<bool(const Key&)>;

/// Distribution over a finite universe of keys. The universe may contain
/// zero-mass outcomes; entries are kept sorted by key.
class FiniteDist {
 public:
  using Entry = std::pair<Key, Rational>;

  FiniteDist() = default;

  /// Duplicate keys are merged. Throws DomainError on negative mass or total != 1.
  static FiniteDist from_entries(std::vector<Entry> entries);
  /// Like from_entries, but normalizes nonnegative weights with positive sum.
  static FiniteDist from_weights(std::vector<Entry> weights);
  static FiniteDist uniform(const std::vector<Key>& support);
  static FiniteDist point(const Key& key);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t universe_size() const { return entries_.size(); }
  std::vector<Key> universe() const;
  std::vector<Key> support() const;

  Rational mass(const Key& key) const;
  Rational prob(const Event& e) const;
  bool same_universe(const FiniteDist& other) const;
  /// Same masses over the union of this universe and `keys`.
  FiniteDist with_universe(const std::vector<Key>& keys) const;

  friend bool operator==(const FiniteDist&, const FiniteDist&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Pads both distributions with zero-mass outcomes so their universes agree.
std::pair<FiniteDist, FiniteDist> align(const FiniteDist& p, const FiniteDist& q);

class RandVar {
 public:
  using Fn = std::function<std::optional<Key>(const Key&)>;

  RandVar() = default;
  explicit RandVar(Fn fn) : fn_(std::move(fn)) {}
  static RandVar from_table(std::map<Key, Key> table);
  static RandVar identity();
  static RandVar constant(Key value);
  /// Total function given as a plain callable.
  static RandVar total(std::function<Key(const Key&)> fn);

  std::optional<Key> operator()(const Key& k) const { return fn_(k); }

 private:
  Fn fn_;
};

/// Pair (X, Y) as a single variable.
RandVar joint(const RandVar& x, const RandVar& y);

FiniteDist condition(const FiniteDist& p, const Event& e);
FiniteDist pushforward(const FiniteDist& p, const RandVar& x);
Rational tv_distance(const FiniteDist& p, const FiniteDist& q);
/// Nats; +infinity when the support of p is not inside the support of q.
double kl_divergence(const FiniteDist& p, const FiniteDist& q);
/// E_{x <- P_X}[ d_KL(P_{W|X=x} || Q_{Y|Z=x}) ].
double conditional_kl(const FiniteDist& p, const FiniteDist& q, const RandVar& w, const RandVar& x,
                      const RandVar& y, const RandVar& z);
double entropy(const FiniteDist& p);
/// H(P_{X|Y}) = E_{y <- P_Y}[ H(P_{X|Y=y}) ].
double conditional_entropy(const FiniteDist& p, const RandVar& x, const RandVar& y);

/// Natural log of a positive rational, accurate for huge numerators/denominators.
double ln(const Rational& r);

struct ExactCheck {
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

struct FloatCheck {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

/// d_TV(P|E, Q|E) <= 2 d_TV(P, Q) / P(E). When Q(E) = 0 the left side is taken as 1.
ExactCheck conditioned_tv_bound_check(const FiniteDist& p, const FiniteDist& q, const Event& e);
/// d_TV(P, Q) <= sqrt(d_KL(P||Q) / 2), compared with relative slack 1e-12.
FloatCheck pinsker_check(const FiniteDist& p, const FiniteDist& q);
/// E_z[d_TV(P~_{X|Z=z}, P~_{Y|Z=z})] <= tau + 2 E_z[d_TV(P_{X|Z=z}, P_{Y|Z=z})] / delta with
/// P~ = P|E and z <- P_Z. Outcomes z with P(E|Z=z) = 0 contribute 1 to the left side.
/// Throws PreconditionFailed unless Pr_z[P(E|Z=z) >= delta] >= 1 - tau.
ExactCheck expectation_quotient_bound_check(const FiniteDist& p, const Event& e, const RandVar& x,
                                            const RandVar& y, const RandVar& z, const Rational& delta,
                                            const Rational& tau);

/// Principal branch of the Lambert W function for y >= 0 (Newton iteration).
double lambert_w(double y);

struct TauOptimum {
  double tau_star = 0;
  double value = 0;
  double bound = 0;
};

/// Balancing point of A/ln(1/tau) + B/tau. Throws DomainError unless A >= e*B > 0.
TauOptimum optimum_tau(double a, double b);
double tau_objective(double a, double b, double tau);

/// 8-byte big-endian encodings; lexicographic key order = numeric order.
Key encode_index(std::uint64_t v);
Key encode_indices(std::span<const std::uint64_t> vs);
std::vector<std::uint64_t> decode_indices(const Key& k);
Key encode_triple(const f2::F2Triple& x);
f2::F2Triple decode_triple(const Key& k, int n);

}  // namespace ghzlab::prob
