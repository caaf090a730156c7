#pragma once

// Affine partitions of F2^{3 x n}, the d_m closeness measure, the
// potential-driven pseudorandom refinement and the strategy-dependent
// refinement of a single part.
//
// All divergences and entropies are in nats.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ghzlab/f2linalg.hpp"
#include "ghzlab/probdist.hpp"

namespace ghzlab::partition {

/// E = E1 x E2 x E3 with E_i given as membership masks over F2^n (index = bits()).
struct ProductEvent {
  int n = 0;
  std::array<std::vector<std::uint8_t>, 3> masks;

  static ProductEvent full(int n);
  static ProductEvent from_rows(int n, const std::array<std::vector<f2::F2Vector>, 3>& rows);
  /// Throws NonProductEvent unless the set equals the product of its row projections.
  static ProductEvent from_set(int n, const std::vector<f2::F2Triple>& points);

  bool contains(const f2::F2Triple& x) const;
  /// Mass under the uniform law on Q^n.
  Rational ghz_mass() const;
};

/// For each part, the kernel U <= V of the map used to split it; parts
/// without an entry use default_kernel(V, rank).
struct RefineStep {
  int rank = 0;
  std::map<f2::AffinePowerCoset, f2::Subspace> kernels;
};

/// V intersected with the kernels of the pivot functionals of its first min(m, dim V) basis vectors.
f2::Subspace default_kernel(const f2::Subspace& v, int m);

/// Stored implicitly as the list of refinement steps from the trivial partition.
class AffinePartition {
 public:
  AffinePartition() = default;
  static AffinePartition trivial(int n);

  int n() const { return n_; }
  int dim() const { return dim_; }
  int codim() const { return n_ - dim_; }
  const std::vector<RefineStep>& steps() const { return steps_; }

  f2::AffinePowerCoset part_of(const f2::F2Triple& x) const;
  /// Every part, in order of discovery. Throws BudgetExceeded.
  std::vector<f2::AffinePowerCoset> parts(std::uint64_t budget = std::uint64_t{1} << 20) const;

  AffinePartition with_step(RefineStep step) const;

 private:
  int n_ = 0;
  int dim_ = 0;
  std::vector<RefineStep> steps_;
};

/// Functionals are ambient rows a with phi(x) = (a . x)_a; they must be
/// linearly independent on the part's space.
using LinearMap = std::vector<f2::F2Vector>;

struct LinearRefiner {
  int m = 0;
  std::map<f2::AffinePowerCoset, LinearMap> maps;
};

/// Throws RankDeficient if a map does not have rank min(m, dim V) on its part.
AffinePartition refine(const AffinePartition& pi, const LinearRefiner& r);

struct ClosenessOptions {
  /// Largest number of candidate kernels searched exactly.
  double subspace_budget = 44731051;  // number of 2-dim subspaces of F2^14
  bool heuristic = false;
  std::uint64_t samples = 4096;
  std::uint64_t seed = 1;
};

struct ClosenessReport {
  int m = 0;
  double value = 0;
  LinearMap witness;
  bool exact = true;
  std::uint64_t candidates = 0;
};

/// Two laws on a coset w + V^3 given by nonnegative integer weights on common points.
struct WeightedPair {
  f2::AffinePowerCoset carrier;
  std::vector<f2::F2Triple> points;
  std::vector<std::int64_t> tilde;
  std::vector<std::int64_t> base;
};

/// max over phi of KL(phi^3(X~) || phi^3(X)). Throws ExactSearchInfeasible.
ClosenessReport d_m_closeness(const WeightedPair& pair, int m, const ClosenessOptions& opt = {});
/// Keys are prob::encode_triple. Throws ShapeMismatch if a key leaves the carrier.
ClosenessReport d_m_closeness(const prob::FiniteDist& xt, const prob::FiniteDist& x,
                              const f2::AffinePowerCoset& carrier, int m, const ClosenessOptions& opt = {});

/// KL(phi^3(X~) || phi^3(X)) for one map.
double compressed_kl(const WeightedPair& pair, const LinearMap& phi);

/// Conditioned law P~ = P | E against P = uniform on Q^n, as weighted points grouped by part.
struct PartMasses {
  WeightedPair pair;
  double tilde_mass = 0;  // P~(part)
};

std::vector<PartMasses> split_by_part(const AffinePartition& pi, const ProductEvent& e);

/// Phi(Pi) = KL(P~_{X | Pi(X)} || P_{X | Pi(X)}).
double potential(const AffinePartition& pi, const ProductEvent& e);

struct Distinguisher {
  double expected_dm = 0;  // E_{pi <- P~}[d_m(P~_{X|pi} || P_{X|pi})]
  std::optional<LinearRefiner> refiner;
};

Distinguisher find_distinguisher(const AffinePartition& pi, const ProductEvent& e, int m, double delta,
                                 const ClosenessOptions& opt = {});

struct TraceRecord {
  int round = 0;
  double phi = 0;
  int codim = 0;
  std::size_t parts = 0;      // parts with positive P~ mass
  std::size_t witnesses = 0;  // parts refined by their own witness map
  double expected_dm = 0;
};

struct PartitionResult {
  AffinePartition partition;
  std::vector<TraceRecord> trace;
  double delta_kl = 0;  // -ln P(E)
  int rounds = 0;
  bool decreasing = true;
  bool rounds_ok = true;
  bool codim_ok = true;
  bool final_ok = true;
  bool ok() const { return decreasing && rounds_ok && codim_ok && final_ok; }
};

/// Throws ZeroMassEvent if P(E) = 0.
PartitionResult pseudorandom_partition(const ProductEvent& e, double delta, int m, const ClosenessOptions& opt = {});

/// Player-1 answer map on F2^n with answers in [0, alphabet).
struct AnswerMap {
  unsigned alphabet = 2;
  std::function<unsigned(const f2::F2Vector&)> fn;
};

struct RefinementRound {
  f2::F2Vector gamma;  // character of U_i in U_i's basis coordinates
  double b = 0;
  double z_before = 0;
  double z_after = 0;
};

struct StrategyRefinement {
  f2::Subspace u;  // ambient subspace of V
  std::vector<RefinementRound> rounds;
  double z_initial = 0;
  double final_max_b = 0;
  int codim = 0;  // codim of U in V, including the coordinate-pinning cut
  bool pinned = false;
  bool z_decrease_ok = true;
  bool z_initial_ok = true;
  bool codim_ok = true;
  bool bound_ok = true;  // every nontrivial character of U has b <= delta
  bool ok() const { return pinned && z_decrease_ok && z_initial_ok && codim_ok && bound_ok; }
};

/// Z(U) = dim(U) ln 2 - E[H(X1 | X1 in x1 + U, Y1 = y1)] for U <= V in coordinates of V.
double z_potential(const f2::Coset& row_coset, const f2::Subspace& u_coords, const AnswerMap& f1);

/// Throws BudgetExceeded (2^dim V work per round above `budget`), EmptyIntersection.
StrategyRefinement strategy_refinement(const f2::AffinePowerCoset& w, const AnswerMap& f1, int j, double delta,
                                       std::uint64_t budget = std::uint64_t{1} << 22);

std::string to_json(const PartitionResult& r);
std::string to_json(const StrategyRefinement& r);

}  // namespace ghzlab::partition
