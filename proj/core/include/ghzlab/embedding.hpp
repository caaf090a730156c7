#pragma once

// Local embeddings of the GHZ query distribution into coordinates of the
// repeated distribution conditioned on an affine power coset.
//
// A GHZ query is a column of three bits (player 1 most significant), so the
// query set is {0b000, 0b011, 0b101, 0b110} in that order. Coordinates are
// 0-based.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ghzlab/f2linalg.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/probdist.hpp"

namespace ghzlab::embedding {

inline constexpr std::array<unsigned, 4> kGhzQueries = {0b000, 0b011, 0b101, 0b110};

/// Columns form a basis of the annihilator of V: V = {x : x A = 0}; shape n x codim(V).
f2::F2Matrix constraint_matrix(const f2::Subspace& v);

/// Q^n intersected with W, sorted. Every column lies in the GHZ query set.
std::vector<f2::F2Triple> ghz_support(const f2::AffinePowerCoset& w,
                                      std::uint64_t budget = f2::kDefaultEnumerationBudget);

/// Q^n | W as a FiniteDist keyed by prob::encode_triple. Throws EmptyIntersection.
prob::FiniteDist conditioned_distribution(const f2::AffinePowerCoset& w);
/// The same law as a query distribution for the repeated GHZ game.
std::vector<games::QueryMass> as_query_masses(const std::vector<f2::F2Triple>& support);

/// Coordinates j lying in some nonempty S with sum_{j in S} A_j = 0.
/// Throws EmptyIntersection if Q^n(W) = 0.
std::vector<int> embeddable_coordinates(const f2::AffinePowerCoset& w);

/// e_i(x, r): player i's embedded row from its query bit x and the shared sample r.
using EmbedMap = std::function<f2::F2Vector(bool x, const f2::F2Triple& r)>;

struct LocalEmbedding {
  int j = 0;
  std::vector<int> subset;               // S, ascending, contains j
  std::vector<f2::F2Triple> shared;      // support of R = P~, uniform
  std::array<EmbedMap, 3> maps;

  f2::F2Triple assemble(unsigned query, const f2::F2Triple& r) const;
};

/// S is the lexicographically smallest zero-sum subset containing j.
/// Throws NotEmbeddable, EmptyIntersection.
LocalEmbedding build_embedding(const f2::AffinePowerCoset& w, int j);

struct EmbeddingCertificate {
  std::vector<int> subset;
  int j = 0;
  bool marginal = false;
  bool independence = false;
  bool law = false;
  std::uint64_t support_size = 0;
};

/// Exact checks of the coordinate marginal, the independence of X^j from
/// (X^{j'} - X^j for j' in S \ {j}, X outside S), and P^(embed) = P~.
/// Throws VerificationFailed naming the offending outcome, BudgetExceeded.
EmbeddingCertificate verify_embedding(const LocalEmbedding& emb, const f2::AffinePowerCoset& w,
                                      std::uint64_t budget = f2::kDefaultEnumerationBudget);

struct ShiftBijection {
  std::vector<f2::F2Triple> points;   // Q^n intersected with W
  std::vector<std::size_t> image;     // index into points; npos-free when bijective
  bool bijective = false;
  bool preserves_constraints = false;  // (Phi(x))_i A = x_i A for all i and x
};

/// x^{j'} + q' - q on every coordinate j' in S, identity elsewhere.
ShiftBijection shift_bijection(const f2::AffinePowerCoset& w, const std::vector<int>& subset, unsigned q,
                               unsigned q_prime);

std::string to_json(const EmbeddingCertificate& c);

}  // namespace ghzlab::embedding
