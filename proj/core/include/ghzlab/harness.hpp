#pragma once

// End-to-end certification runs: the pseudo-hardness comparison of
// coordinate values, the adaptive win-process, and the full pipeline on a
// concrete product event.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghzlab/f2linalg.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/partition.hpp"
#include "ghzlab/rational.hpp"

namespace ghzlab::harness {

struct MarkovPoint {
  double tau = 0;
  double measured = 0;  // Pr_{x <- P~}[P(E | x + U^3) <= tau]
  double bound = 0;     // Delta / ln(1 / tau)
  bool holds = false;
};

struct PseudoHardnessReport {
  int n = 0;
  int j = 0;
  double delta_kl = 0;  // Delta = -ln P(E)
  double delta = 0;
  double epsilon = 0;
  int m = 0;  // ceil(1 / delta)
  double closeness = 0;
  bool closeness_ok = false;
  std::array<bool, 3> constraint_flags{};
  bool hypothesis = false;  // closeness and all three constraints
  /// Closeness with injective compression (m >= dim V) and delta <= 2 eps^2.
  bool injective_hypothesis = false;
  bool asserted = false;

  Rational lhs;   // v^j(G^n | P~)
  Rational base;  // v^j(G^n | P)
  double rhs = 0;
  bool conclusion = false;

  Rational tv;  // d_TV(P~, P) = 1 - P(E)
  bool lipschitz_ok = false;

  int u_codim = 0;
  double log_expectation = 0;  // E_{x <- P~}[-ln P(E | x + U^3)]
  bool log_expectation_ok = false;
  std::vector<MarkovPoint> markov;
  double tv_chain = 0;
  std::optional<double> tv_chain_bound;
  bool tv_chain_ok = true;

  bool ok() const;
};

/// Throws ZeroMassEvent, EmptyIntersection, BudgetExceeded.
PseudoHardnessReport pseudo_hardness_check(const f2::AffinePowerCoset& w, const partition::ProductEvent& e, int j,
                                           double delta, double epsilon,
                                           std::uint64_t strategy_budget = std::uint64_t{1} << 30);

struct HistoryRecord {
  int depth = 0;        // i: number of revealed coordinates
  std::string history;  // z_1 ... z_i as "j:x/y" items
  Rational mass;        // P^n(Z_{<=i} = z_{<=i})
  int next_j = 0;
  Rational next_win;    // P^n(W(X^{J_{i+1}}, Y^{J_{i+1}}) = 1 | z_{<=i})
  bool mass_flag = false;  // mass >= rho
  bool product_event = false;
  std::optional<Rational> hard_value;  // min_j v^j(G^n | P^n | z_{<=i}) when certified
  bool next_ok = true;
};

struct RoundRecord {
  int i = 0;
  Rational w;  // P^n(Win_{<=i})
  bool mass_condition = false;  // w_i >= 2 |X|^i |Y|^i rho
  double certified_epsilon = 0;  // 1 - max over qualifying histories of the certified value
  bool decay_checked = false;
  bool decay_ok = true;
  bool decay_measured = false;  // w_{i+1} <= w_i (1 - eps / 2), whatever the conditions
};

struct CriterionTrace {
  Rational rho;
  double epsilon = 0;
  int j1 = 0;
  std::vector<RoundRecord> rounds;
  std::vector<HistoryRecord> histories;
  Rational strategy_value;  // v[f](G^n)
  bool ok() const;
};

struct CriterionOptions {
  bool certify = true;  // compute hard-coordinate values with exact search
  games::SearchOptions search;
  std::uint64_t budget = std::uint64_t{1} << 22;  // support size times answer tables
};

/// f is a strategy for the repeated game; j1 is 0-based. Throws BudgetExceeded.
CriterionTrace criterion_simulate(const games::Game& g, int n, const games::ProductStrategy& f, const Rational& rho,
                                  double epsilon, int j1 = 0, const CriterionOptions& opt = {});

/// The main-theorem constraints at one parameter point.
struct ConstraintCheck {
  std::array<bool, 3> delta_constraints{};  // 3 delta <= each term of the minimum
  bool spread_constraint = false;          // delta >= 2 m Delta / n
  bool all() const { return delta_constraints[0] && delta_constraints[1] && delta_constraints[2] && spread_constraint; }
};

ConstraintCheck main_constraints(double n, double delta_kl, double delta, double m, double epsilon);

/// The main-theorem constants as functions of n: epsilon = 1/32, Delta = 0.0005 ln n,
/// delta = n^-0.4, m = n^0.4.
ConstraintCheck asymptotic_constraints(double n);

struct ThresholdDiagnostic {
  std::uint64_t checked_up_to = 0;
  bool unsatisfied_throughout = false;  // every integer n in [2, checked_up_to] fails
  double threshold_ln_n = 0;            // smallest ln n (grid 1e-3) from which all constraints hold
  double threshold_log10_n = 0;
};

ThresholdDiagnostic constraint_threshold(std::uint64_t direct_limit = 1000000);

struct PartReport {
  f2::AffinePowerCoset part;
  double tilde_mass = 0;
  double dm = 0;
  double kl = 0;
  bool pseudorandom = false;
  std::vector<int> embeddable;
  bool embeddable_ok = false;  // at least n - codim coordinates
  std::optional<Rational> value_tilde;  // v^{j*}(G^n | P~ | part)
  std::optional<Rational> value_base;   // v^{j*}(G^n | P | part)
};

struct DemoOptions {
  bool partition_only = false;
  partition::ClosenessOptions closeness;
  games::SearchOptions search;
};

struct DemoReport {
  int n = 0;
  double delta = 0;
  int m = 0;
  double epsilon = 0;
  partition::PartitionResult partition;
  std::vector<PartReport> parts;
  double pseudorandom_mass = 0;
  bool markov_ok = false;  // pseudorandom mass >= 1/3
  int j_star = -1;
  bool values_computed = false;
  std::optional<Rational> value_tilde;  // v^{j*}(G^n | P~)
  std::optional<Rational> averaged;     // E_{part <- P~}[v^{j*}(G^n | P~ | part)]
  bool averaging_ok = true;
  bool linear_case_ok = true;  // v^{j*}(G^n | P | part) = 3/4 on parts where j* embeds
  ConstraintCheck constraints;
  bool vacuous = true;
  ThresholdDiagnostic threshold;
  std::vector<std::string> stage_errors;
  bool ok() const;
};

DemoReport main_theorem_demo(const partition::ProductEvent& e, double delta, int m, double epsilon,
                             const DemoOptions& opt = {});

/// Event syntax: "full", or three ';'-separated row lists of comma-separated
/// bit strings, with '*' for a full row, e.g. "00,01;*;11".
partition::ProductEvent parse_event(int n, const std::string& spec);

std::string to_json(const PseudoHardnessReport& r);
std::string to_json(const CriterionTrace& t);
std::string to_csv(const CriterionTrace& t);
std::string to_json(const DemoReport& r);

}  // namespace ghzlab::harness
