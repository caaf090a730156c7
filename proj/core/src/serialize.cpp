#include <cmath>
#include <json.hpp>

#include "ghzlab/embedding.hpp"
#include "ghzlab/errors.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/harness.hpp"
#include "ghzlab/partition.hpp"

namespace ghzlab {

namespace {

using Json = nlohmann::ordered_json;

Json num(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

Json bits_list(const std::vector<f2::F2Vector>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(v.to_string());
  return a;
}

Json coset_json(const f2::AffinePowerCoset& c) {
  Json s = Json::array();
  for (const auto& r : c.shift()) s.push_back(r.to_string());
  return Json{{"shift", s}, {"basis", bits_list(c.space().basis())}};
}

Json rational_or_null(const std::optional<Rational>& r) { return r ? Json(to_string(*r)) : Json(nullptr); }

}  // namespace

namespace games {

std::string to_json(const Game& g) {
  Json j;
  j["k"] = g.players();
  j["query_sizes"] = g.query_sizes();
  j["answer_sizes"] = g.answer_sizes();
  Json dist = Json::array();
  for (const auto& q : g.distribution()) dist.push_back(Json{{"x", q.x}, {"p", to_string(q.p)}});
  j["distribution"] = dist;
  const auto table = g.win_table();
  std::string win;
  win.reserve(table.size());
  for (auto b : table) win.push_back(b ? '1' : '0');
  j["win"] = win;
  return j.dump(2);
}

Game game_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
    auto qs = j.at("query_sizes").get<std::vector<std::uint64_t>>();
    auto as = j.at("answer_sizes").get<std::vector<std::uint64_t>>();
    if (j.contains("k") && j.at("k").get<std::size_t>() != qs.size()) throw ParseError("k disagrees with query_sizes");
    std::vector<QueryMass> dist;
    for (const auto& e : j.at("distribution")) {
      dist.push_back({e.at("x").get<Tuple>(), parse_rational(e.at("p").get<std::string>())});
    }
    const auto win = j.at("win").get<std::string>();
    std::vector<std::uint8_t> table;
    table.reserve(win.size());
    for (char c : win) {
      if (c != '0' && c != '1') throw ParseError("win table must be a 0/1 string");
      table.push_back(c == '1' ? 1 : 0);
    }
    return Game::from_table(std::move(qs), std::move(as), std::move(dist), std::move(table));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("game JSON: ") + e.what());
  }
}

std::string to_json(const ProductStrategy& f) {
  Json j;
  j["tables"] = f.tables;
  return j.dump(2);
}

}  // namespace games

namespace embedding {

std::string to_json(const EmbeddingCertificate& c) {
  Json j;
  j["j"] = c.j;
  j["subset"] = c.subset;
  j["support_size"] = c.support_size;
  j["marginal"] = c.marginal;
  j["independence"] = c.independence;
  j["law"] = c.law;
  return j.dump(2);
}

}  // namespace embedding

namespace partition {

std::string to_json(const PartitionResult& r) {
  Json j;
  j["n"] = r.partition.n();
  j["delta_kl"] = num(r.delta_kl);
  j["rounds"] = r.rounds;
  j["codim"] = r.partition.codim();
  Json trace = Json::array();
  for (const auto& t : r.trace) {
    trace.push_back(Json{{"round", t.round},
                         {"phi", num(t.phi)},
                         {"codim", t.codim},
                         {"parts", t.parts},
                         {"witnesses", t.witnesses},
                         {"expected_dm", num(t.expected_dm)}});
  }
  j["trace"] = trace;
  j["checks"] = Json{{"decreasing", r.decreasing},
                     {"rounds", r.rounds_ok},
                     {"codim", r.codim_ok},
                     {"final", r.final_ok}};
  j["ok"] = r.ok();
  return j.dump(2);
}

std::string to_json(const StrategyRefinement& r) {
  Json j;
  j["u_basis"] = bits_list(r.u.basis());
  j["codim"] = r.codim;
  j["z_initial"] = num(r.z_initial);
  Json rounds = Json::array();
  for (const auto& rd : r.rounds) {
    rounds.push_back(Json{{"gamma", rd.gamma.to_string()},
                          {"b", num(rd.b)},
                          {"z_before", num(rd.z_before)},
                          {"z_after", num(rd.z_after)}});
  }
  j["rounds"] = rounds;
  j["final_max_b"] = num(r.final_max_b);
  j["checks"] = Json{{"pinned", r.pinned},
                     {"z_decrease", r.z_decrease_ok},
                     {"z_initial", r.z_initial_ok},
                     {"codim", r.codim_ok},
                     {"bound", r.bound_ok}};
  j["ok"] = r.ok();
  return j.dump(2);
}

}  // namespace partition

namespace harness {

std::string to_json(const PseudoHardnessReport& r) {
  Json j;
  j["n"] = r.n;
  j["j"] = r.j;
  j["delta_kl"] = num(r.delta_kl);
  j["delta"] = num(r.delta);
  j["epsilon"] = num(r.epsilon);
  j["m"] = r.m;
  j["closeness"] = num(r.closeness);
  j["closeness_ok"] = r.closeness_ok;
  j["constraint_flags"] = r.constraint_flags;
  j["hypothesis"] = r.hypothesis;
  j["injective_hypothesis"] = r.injective_hypothesis;
  j["asserted"] = r.asserted;
  j["lhs"] = to_string(r.lhs);
  j["base"] = to_string(r.base);
  j["rhs"] = num(r.rhs);
  j["conclusion"] = r.conclusion;
  j["tv"] = to_string(r.tv);
  j["lipschitz_ok"] = r.lipschitz_ok;
  j["u_codim"] = r.u_codim;
  j["log_expectation"] = num(r.log_expectation);
  j["log_expectation_ok"] = r.log_expectation_ok;
  Json mk = Json::array();
  for (const auto& p : r.markov) {
    mk.push_back(Json{{"tau", num(p.tau)}, {"measured", num(p.measured)}, {"bound", num(p.bound)}, {"holds", p.holds}});
  }
  j["markov"] = mk;
  j["tv_chain"] = num(r.tv_chain);
  j["tv_chain_bound"] = r.tv_chain_bound ? num(*r.tv_chain_bound) : Json(nullptr);
  j["tv_chain_ok"] = r.tv_chain_ok;
  j["ok"] = r.ok();
  return j.dump(2);
}

std::string to_json(const CriterionTrace& t) {
  Json j;
  j["rho"] = to_string(t.rho);
  j["epsilon"] = num(t.epsilon);
  j["j1"] = t.j1;
  j["strategy_value"] = to_string(t.strategy_value);
  Json rounds = Json::array();
  for (const auto& r : t.rounds) {
    rounds.push_back(Json{{"i", r.i},
                          {"w", to_string(r.w)},
                          {"mass_condition", r.mass_condition},
                          {"certified_epsilon", num(r.certified_epsilon)},
                          {"decay_checked", r.decay_checked},
                          {"decay_ok", r.decay_ok},
                          {"decay_measured", r.decay_measured}});
  }
  j["rounds"] = rounds;
  Json hs = Json::array();
  for (const auto& h : t.histories) {
    hs.push_back(Json{{"depth", h.depth},
                      {"history", h.history},
                      {"mass", to_string(h.mass)},
                      {"next_j", h.next_j},
                      {"next_win", to_string(h.next_win)},
                      {"mass_flag", h.mass_flag},
                      {"product_event", h.product_event},
                      {"hard_value", rational_or_null(h.hard_value)},
                      {"next_ok", h.next_ok}});
  }
  j["histories"] = hs;
  j["ok"] = t.ok();
  return j.dump(2);
}

std::string to_csv(const CriterionTrace& t) {
  std::string out = "i,w,mass_condition,certified_epsilon,decay_checked,decay_ok,decay_measured\n";
  for (const auto& r : t.rounds) {
    out += std::to_string(r.i) + "," + to_string(r.w) + "," + (r.mass_condition ? "1" : "0") + "," +
           Json(num(r.certified_epsilon)).dump() + "," + (r.decay_checked ? "1" : "0") + "," + (r.decay_ok ? "1" : "0") +
           "," + (r.decay_measured ? "1" : "0") + "\n";
  }
  return out;
}

std::string to_json(const DemoReport& r) {
  Json j;
  j["n"] = r.n;
  j["delta"] = num(r.delta);
  j["m"] = r.m;
  j["epsilon"] = num(r.epsilon);
  j["partition"] = Json::parse(partition::to_json(r.partition));
  Json parts = Json::array();
  for (const auto& p : r.parts) {
    parts.push_back(Json{{"part", coset_json(p.part)},
                         {"mass", num(p.tilde_mass)},
                         {"dm", num(p.dm)},
                         {"kl", num(p.kl)},
                         {"pseudorandom", p.pseudorandom},
                         {"embeddable", p.embeddable},
                         {"embeddable_ok", p.embeddable_ok},
                         {"value_tilde", rational_or_null(p.value_tilde)},
                         {"value_base", rational_or_null(p.value_base)}});
  }
  j["parts"] = parts;
  j["pseudorandom_mass"] = num(r.pseudorandom_mass);
  j["markov_ok"] = r.markov_ok;
  j["j_star"] = r.j_star;
  j["values_computed"] = r.values_computed;
  j["value_tilde"] = rational_or_null(r.value_tilde);
  j["averaged"] = rational_or_null(r.averaged);
  j["averaging_ok"] = r.averaging_ok;
  j["linear_case_ok"] = r.linear_case_ok;
  j["constraints"] = Json{{"delta_constraints", r.constraints.delta_constraints},
                          {"spread", r.constraints.spread_constraint},
                          {"status", r.vacuous ? "vacuous at this n" : "satisfied"}};
  j["threshold"] = Json{{"checked_up_to", r.threshold.checked_up_to},
                        {"unsatisfied_throughout", r.threshold.unsatisfied_throughout},
                        {"ln_n", num(r.threshold.threshold_ln_n)},
                        {"log10_n", num(r.threshold.threshold_log10_n)}};
  j["stage_errors"] = r.stage_errors;
  j["ok"] = r.ok();
  return j.dump(2);
}

}  // namespace harness

}  // namespace ghzlab
