#pragma once

// k-player one-round games, their parallel repetitions, and exact or
// heuristic value computation over deterministic product strategies.
//
// Queries and answers are flat indices. Player i's query set is [0, |X_i|);
// a repeated game indexes the query vector (x^1, ..., x^n) in mixed radix with
// coordinate 1 most significant, which for binary alphabets is the F2Vector
// bit layout.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghzlab/probdist.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab::games {

using Tuple = std::vector<std::uint64_t>;

struct QueryMass {
  Tuple x;
  Rational p;

  friend bool operator==(const QueryMass&, const QueryMass&) = default;
};

using WinFn = std::function<bool(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y)>;

class Game {
 public:
  Game() = default;
  /// Throws ShapeMismatch / UnsupportedDistribution / DomainError on invalid input.
  Game(std::vector<std::uint64_t> query_sizes, std::vector<std::uint64_t> answer_sizes,
       std::vector<QueryMass> dist, WinFn win);
  /// Win table indexed by query_index(x) * total_answers() + answer_index(y).
  static Game from_table(std::vector<std::uint64_t> query_sizes, std::vector<std::uint64_t> answer_sizes,
                         std::vector<QueryMass> dist, std::vector<std::uint8_t> table);

  int players() const { return static_cast<int>(query_sizes_.size()); }
  const std::vector<std::uint64_t>& query_sizes() const { return query_sizes_; }
  const std::vector<std::uint64_t>& answer_sizes() const { return answer_sizes_; }
  const std::vector<QueryMass>& distribution() const { return dist_; }
  std::uint64_t total_queries() const;
  std::uint64_t total_answers() const;

  bool wins(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) const { return win_(x, y); }
  const WinFn& win_fn() const { return win_; }

  std::uint64_t query_index(std::span<const std::uint64_t> x) const;
  std::uint64_t answer_index(std::span<const std::uint64_t> y) const;
  Tuple query_tuple(std::uint64_t index) const;
  Tuple answer_tuple(std::uint64_t index) const;

  /// Same game with a different query distribution (G | P). Throws UnsupportedDistribution.
  Game with_distribution(std::vector<QueryMass> dist) const;
  /// Query law as a FiniteDist keyed by encode_indices(x).
  prob::FiniteDist query_dist() const;
  /// Materialized win table; throws BudgetExceeded above `budget` entries.
  std::vector<std::uint8_t> win_table(std::uint64_t budget = std::uint64_t{1} << 28) const;

 private:
  std::vector<std::uint64_t> query_sizes_;
  std::vector<std::uint64_t> answer_sizes_;
  std::vector<QueryMass> dist_;
  WinFn win_;
};

/// Per-player answer tables: tables[i][x_i] in [0, |Y_i|).
struct ProductStrategy {
  std::vector<std::vector<std::uint64_t>> tables;

  Tuple answer(std::span<const std::uint64_t> x) const;
  friend bool operator==(const ProductStrategy&, const ProductStrategy&) = default;
};

ProductStrategy constant_strategy(const Game& g, const Tuple& answers);

/// The GHZ game: queries uniform on {000, 011, 101, 110}; win iff y1^y2^y3 = x1|x2|x3.
Game ghz_game();
/// Game with the given alphabets, uniform queries on the full query set and constant outcome.
Game constant_game(std::vector<std::uint64_t> query_sizes, std::vector<std::uint64_t> answer_sizes, bool outcome);

struct RepeatedGame {
  Game base;
  int n = 1;

  Game materialize() const;
  /// Coordinate j of a repeated query/answer index for player i (j is 0-based).
  std::uint64_t coordinate(int player, std::uint64_t index, int j) const;
};

RepeatedGame repeat(const Game& base, int n);

struct SearchOptions {
  std::uint64_t budget = std::uint64_t{1} << 30;
  int threads = 1;
};

struct ValueResult {
  Rational value;
  ProductStrategy witness;
};

Rational strategy_value(const Game& g, const ProductStrategy& f);

/// Required strategy count prod_i |Y_i|^{|R_i|}, R_i = player i's queries in the support.
double search_space_size(const Game& g);

/// Exact maximum over deterministic product strategies. Ties resolve to the
/// lexicographically smallest table (player 1's first relevant query most
/// significant; entries for queries outside the support are 0).
ValueResult exact_value(const Game& g, const SearchOptions& opt = {});

/// v^j(G^n | P_mod) with j 0-based. Throws UnsupportedDistribution, BudgetExceeded.
ValueResult coordinate_value(const RepeatedGame& gn, int j, const std::optional<std::vector<QueryMass>>& p_mod = {},
                             const SearchOptions& opt = {});

/// Game whose win condition looks only at coordinate j (answers are base answers).
Game coordinate_game(const RepeatedGame& gn, int j, const std::optional<std::vector<QueryMass>>& p_mod = {});

struct RandomizedCheck {
  Rational randomized;
  Rational deterministic;
  bool holds = false;
};

/// Maximum over strategy tuples indexed by `seeds` uniformly random shared seeds
/// against the deterministic value.
RandomizedCheck randomized_vs_deterministic_check(const Game& g, int seeds,
                                                  std::uint64_t budget = std::uint64_t{1} << 24);

/// Steepest-ascent single-entry flips with random restarts; `budget` caps strategy evaluations.
ValueResult heuristic_value_lower_bound(const Game& g, std::uint64_t budget, std::uint64_t seed);

std::string to_json(const Game& g);
Game game_from_json(std::string_view text);
std::string to_json(const ProductStrategy& f);

}  // namespace ghzlab::games
