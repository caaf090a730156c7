#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ghzlab/embedding.hpp"
#include "ghzlab/errors.hpp"
#include "ghzlab/fourier.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/harness.hpp"
#include "ghzlab/partition.hpp"
#include "ghzlab/sampling.hpp"

namespace {

using namespace ghzlab;
using Json = nlohmann::ordered_json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Globals {
  std::uint64_t seed = 1;
  std::uint64_t budget = std::uint64_t{1} << 30;
  std::string format = "auto";
  std::string out;
  int threads = 1;
};

Globals g;

void emit(const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw Error("cannot open output file " + g.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

bool csv(const char* fallback = "json") { return (g.format == "auto" ? std::string(fallback) : g.format) == "csv"; }

games::SearchOptions search() {
  games::SearchOptions o;
  o.budget = g.budget;
  o.threads = g.threads;
  return o;
}

games::Game load_game(const std::string& name) {
  if (name == "ghz") return games::ghz_game();
  std::ifstream f(name);
  if (!f) throw ParseError("unknown game '" + name + "' (use ghz or a JSON file)");
  std::stringstream ss;
  ss << f.rdbuf();
  return games::game_from_json(ss.str());
}

partition::ProductEvent load_event(int n, const std::string& spec, double min_mass, sampling::Rng& rng) {
  if (spec == "random") return sampling::random_product_event(n, 0.75, min_mass, rng);
  return harness::parse_event(n, spec);
}

Json strategy_json(const games::ProductStrategy& f) { return Json::parse(games::to_json(f)); }

// value
std::string value_game = "ghz";
bool value_heuristic = false;

int cmd_value() {
  auto game = load_game(value_game);
  auto res = value_heuristic ? games::heuristic_value_lower_bound(game, g.budget, g.seed)
                             : games::exact_value(game, search());
  if (csv()) {
    emit("game,value,exact\n" + value_game + "," + to_string(res.value) + "," + (value_heuristic ? "0" : "1") + "\n");
  } else {
    Json j{{"game", value_game},
           {"value", to_string(res.value)},
           {"exact", !value_heuristic},
           {"witness", strategy_json(res.witness)["tables"]}};
    emit(j.dump(2));
  }
  return kPass;
}

// repvalue
std::string rep_game = "ghz";
int rep_n = 2;
bool rep_coordinates = false;

int cmd_repvalue() {
  const auto gn = games::repeat(load_game(rep_game), rep_n);
  const auto res = games::exact_value(gn.materialize(), search());
  std::vector<std::string> coord;
  if (rep_coordinates) {
    for (int j = 0; j < rep_n; ++j) coord.push_back(to_string(games::coordinate_value(gn, j, {}, search()).value));
  }
  if (csv()) {
    std::string s = "game,n,value\n" + rep_game + "," + std::to_string(rep_n) + "," + to_string(res.value) + "\n";
    emit(s);
  } else {
    Json j{{"game", rep_game}, {"n", rep_n}, {"value", to_string(res.value)}};
    if (rep_coordinates) j["coordinate_values"] = coord;
    j["witness"] = strategy_json(res.witness)["tables"];
    emit(j.dump(2));
  }
  return kPass;
}

// fourier-check
int fc_n = 4;
int fc_trials = 100;

int cmd_fourier_check() {
  if (fc_n < 1 || fc_n > 8) throw DomainError("--n must lie in [1, 8]");
  sampling::Rng rng(g.seed);
  int equal = 0;
  int bounds = 0;
  int densities = 0;
  for (int t = 0; t < fc_trials; ++t) {
    const int dim = static_cast<int>(rng() % static_cast<std::uint64_t>(fc_n + 1));
    const auto v = sampling::random_subspace(fc_n, dim, rng);
    std::array<fourier::SubsetMask, 3> masks;
    for (auto& m : masks) m = sampling::random_mask(v.size(), 0.5, rng);
    equal += fourier::ghz_product_event_prob(v, masks).all_equal() ? 1 : 0;
    bounds += fourier::prob_diff_bound_check(v, masks).holds ? 1 : 0;
    densities += fourier::ghz_density_transform_check(v) ? 1 : 0;
  }
  const bool ok = equal == fc_trials && bounds == fc_trials && densities == fc_trials;
  if (csv()) {
    emit("trials,equalities,bound_checks,density_checks,ok\n" + std::to_string(fc_trials) + "," + std::to_string(equal) +
         "," + std::to_string(bounds) + "," + std::to_string(densities) + "," + (ok ? "1" : "0") + "\n");
  } else {
    emit(Json{{"n", fc_n},
              {"trials", fc_trials},
              {"equalities", equal},
              {"bound_checks", bounds},
              {"density_checks", densities},
              {"ok", ok}}
             .dump(2));
  }
  return ok ? kPass : kFail;
}

// embed-check
int ec_n = 4;
int ec_trials = 50;

int cmd_embed_check() {
  if (ec_n < 1 || ec_n > 8) throw DomainError("--n must lie in [1, 8]");
  sampling::Rng rng(g.seed);
  int coverage_ok = 0;
  int verified = 0;
  int failed = 0;
  Json failures = Json::array();
  for (int t = 0; t < ec_trials; ++t) {
    const int dim = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(ec_n));
    const auto w = sampling::random_coset(ec_n, dim, rng);
    const auto coords = embedding::embeddable_coordinates(w);
    if (static_cast<int>(coords.size()) >= ec_n - w.space().codim()) ++coverage_ok;
    for (int j : coords) {
      try {
        auto c = embedding::verify_embedding(embedding::build_embedding(w, j), w, g.budget);
        verified += c.marginal && c.independence && c.law ? 1 : 0;
      } catch (const VerificationFailed& e) {
        ++failed;
        failures.push_back(e.what());
      }
    }
  }
  const bool ok = coverage_ok == ec_trials && failed == 0;
  if (csv()) {
    emit("trials,coverage_ok,verified,failed,ok\n" + std::to_string(ec_trials) + "," + std::to_string(coverage_ok) + "," +
         std::to_string(verified) + "," + std::to_string(failed) + "," + (ok ? "1" : "0") + "\n");
  } else {
    emit(Json{{"n", ec_n},
              {"trials", ec_trials},
              {"coverage_ok", coverage_ok},
              {"verified", verified},
              {"failed", failed},
              {"failures", failures},
              {"ok", ok}}
             .dump(2));
  }
  return ok ? kPass : kFail;
}

// partition
int pt_n = 4;
std::string pt_event = "random";
double pt_delta = 0.1;
int pt_m = 1;
double pt_min_mass = 1.0 / 64;
bool pt_heuristic = false;

int cmd_partition() {
  sampling::Rng rng(g.seed);
  const auto e = load_event(pt_n, pt_event, pt_min_mass, rng);
  partition::ClosenessOptions opt;
  opt.heuristic = pt_heuristic;
  opt.seed = g.seed;
  const auto r = partition::pseudorandom_partition(e, pt_delta, pt_m, opt);
  if (csv()) {
    std::ostringstream os;
    os << "round,phi,codim,parts,witnesses,expected_dm\n";
    os.precision(17);
    for (const auto& t : r.trace) {
      os << t.round << ',' << t.phi << ',' << t.codim << ',' << t.parts << ',' << t.witnesses << ',' << t.expected_dm
         << '\n';
    }
    emit(os.str());
  } else {
    emit(partition::to_json(r));
  }
  return r.ok() ? kPass : kFail;
}

// strategy-refine
int sr_n = 6;
int sr_dim = 4;
int sr_j = 0;
double sr_delta = 0.2;
int sr_trials = 1;
unsigned sr_alphabet = 2;

int cmd_strategy_refine() {
  if (sr_dim < 0 || sr_dim > sr_n) throw DomainError("--dim must lie in [0, n]");
  sampling::Rng rng(g.seed);
  Json runs = Json::array();
  std::string rows = "trial,codim,rounds,z_initial,final_max_b,ok\n";
  bool ok = true;
  for (int t = 0; t < sr_trials; ++t) {
    const auto w = sampling::random_coset(sr_n, sr_dim, rng);
    const auto table = sampling::random_table(std::size_t{1} << sr_n, sr_alphabet, rng);
    partition::AnswerMap f1{sr_alphabet, [&table](const f2::F2Vector& x) { return table[x.bits()]; }};
    const auto r = partition::strategy_refinement(w, f1, sr_j, sr_delta, g.budget);
    ok = ok && r.ok();
    runs.push_back(Json::parse(partition::to_json(r)));
    std::ostringstream os;
    os.precision(17);
    os << t << ',' << r.codim << ',' << r.rounds.size() << ',' << r.z_initial << ',' << r.final_max_b << ','
       << (r.ok() ? 1 : 0) << '\n';
    rows += os.str();
  }
  if (csv()) {
    emit(rows);
  } else {
    emit(Json{{"n", sr_n}, {"dim", sr_dim}, {"j", sr_j}, {"delta", sr_delta}, {"runs", runs}, {"ok", ok}}.dump(2));
  }
  return ok ? kPass : kFail;
}

// pseudo-hardness
int ph_n = 2;
std::string ph_event = "random";
int ph_j = 0;
double ph_delta = 0.5;
double ph_epsilon = 0.5;
int ph_trials = 1;
double ph_min_mass = 0.5;

int cmd_pseudo_hardness() {
  sampling::Rng rng(g.seed);
  Json runs = Json::array();
  std::string rows = "trial,delta_kl,closeness,asserted,lhs,base,rhs,conclusion,ok\n";
  bool ok = true;
  for (int t = 0; t < ph_trials; ++t) {
    const auto e = load_event(ph_n, ph_event, ph_min_mass, rng);
    const auto r = harness::pseudo_hardness_check(f2::AffinePowerCoset::full(ph_n), e, ph_j, ph_delta, ph_epsilon,
                                                  g.budget);
    ok = ok && r.ok();
    runs.push_back(Json::parse(harness::to_json(r)));
    std::ostringstream os;
    os.precision(17);
    os << t << ',' << r.delta_kl << ',' << r.closeness << ',' << (r.asserted ? 1 : 0) << ',' << to_string(r.lhs) << ','
       << to_string(r.base) << ',' << r.rhs << ',' << (r.conclusion ? 1 : 0) << ',' << (r.ok() ? 1 : 0) << '\n';
    rows += os.str();
  }
  if (csv()) {
    emit(rows);
  } else {
    emit(Json{{"runs", runs}, {"ok", ok}}.dump(2));
  }
  return ok ? kPass : kFail;
}

// criterion-sim
std::string cs_game = "ghz";
int cs_n = 2;
std::string cs_rho = "1/512";
double cs_epsilon = 1.0 / 48;
int cs_j1 = 0;

int cmd_criterion_sim() {
  const auto base = load_game(cs_game);
  const auto big = games::repeat(base, cs_n).materialize();
  const auto best = games::exact_value(big, search());
  harness::CriterionOptions opt;
  opt.search = search();
  const auto t = harness::criterion_simulate(base, cs_n, best.witness, parse_rational(cs_rho), cs_epsilon, cs_j1, opt);
  emit(csv("csv") ? harness::to_csv(t) : harness::to_json(t));
  return t.ok() ? kPass : kFail;
}

// demo
int dm_n = 2;
std::string dm_event = "random";
double dm_delta = 0.1;
int dm_m = 1;
double dm_epsilon = 1.0 / 32;
bool dm_partition_only = false;
double dm_min_mass = 0.5;

int cmd_demo() {
  sampling::Rng rng(g.seed);
  const auto e = load_event(dm_n, dm_event, dm_min_mass, rng);
  harness::DemoOptions opt;
  opt.partition_only = dm_partition_only || dm_n > 2;
  opt.search = search();
  const auto r = harness::main_theorem_demo(e, dm_delta, dm_m, dm_epsilon, opt);
  if (csv()) {
    std::ostringstream os;
    os.precision(17);
    os << "part,mass,dm,kl,pseudorandom,embeddable\n";
    for (std::size_t i = 0; i < r.parts.size(); ++i) {
      const auto& p = r.parts[i];
      os << i << ',' << p.tilde_mass << ',' << p.dm << ',' << p.kl << ',' << (p.pseudorandom ? 1 : 0) << ','
         << p.embeddable.size() << '\n';
    }
    emit(os.str());
  } else {
    emit(harness::to_json(r));
  }
  return r.ok() ? kPass : kFail;
}

// selftest
int cmd_selftest() {
  struct Item {
    std::string name;
    std::function<bool()> run;
  };
  sampling::Rng rng(g.seed);
  std::vector<Item> items = {
      {"ghz value is 3/4", [] { return games::exact_value(games::ghz_game()).value == make_rational(3, 4); }},
      {"fourier formula",
       [&] {
         for (int t = 0; t < 50; ++t) {
           const auto v = sampling::random_subspace(4, static_cast<int>(rng() % 5), rng);
           std::array<fourier::SubsetMask, 3> masks;
           for (auto& m : masks) m = sampling::random_mask(v.size(), 0.5, rng);
           if (!fourier::ghz_product_event_prob(v, masks).all_equal()) return false;
         }
         return true;
       }},
      {"local embedding",
       [&] {
         for (int t = 0; t < 20; ++t) {
           const auto w = sampling::random_coset(4, 1 + static_cast<int>(rng() % 4), rng);
           const auto coords = embedding::embeddable_coordinates(w);
           if (static_cast<int>(coords.size()) < 4 - w.space().codim()) return false;
           for (int j : coords) embedding::verify_embedding(embedding::build_embedding(w, j), w);
         }
         return true;
       }},
      {"pseudorandom partition",
       [&] {
         for (int t = 0; t < 5; ++t) {
           if (!partition::pseudorandom_partition(sampling::random_product_event(4, 0.6, 1.0 / 64, rng), 0.05, 1)
                    .ok()) {
             return false;
           }
         }
         return true;
       }},
      {"strategy refinement",
       [&] {
         for (int t = 0; t < 20; ++t) {
           const auto w = sampling::random_coset(6, static_cast<int>(1 + rng() % 6), rng);
           const auto table = sampling::random_table(64, 2, rng);
           partition::AnswerMap f1{2, [&table](const f2::F2Vector& x) { return table[x.bits()]; }};
           if (!partition::strategy_refinement(w, f1, static_cast<int>(rng() % 6), 0.1).ok()) return false;
         }
         return true;
       }},
      {"pseudo-hardness",
       [&] {
         for (int t = 0; t < 3; ++t) {
           auto e = sampling::random_product_event(2, 0.8, 0.5, rng);
           if (!harness::pseudo_hardness_check(f2::AffinePowerCoset::full(2), e, 0, 0.5, 0.5).ok()) return false;
         }
         return true;
       }},
      {"criterion decay",
       [] {
         const auto base = games::ghz_game();
         const auto best = games::exact_value(games::repeat(base, 2).materialize());
         return harness::criterion_simulate(base, 2, best.witness, make_rational(1, 512), 1.0 / 48).ok();
       }},
      {"main-theorem constraints unsatisfied up to 10^6",
       [] { return harness::constraint_threshold().unsatisfied_throughout; }},
  };
  bool all = true;
  Json results = Json::array();
  std::string rows = "check,pass\n";
  for (const auto& it : items) {
    bool pass = false;
    try {
      pass = it.run();
    } catch (const Error&) {
      pass = false;
    }
    all = all && pass;
    results.push_back(Json{{"check", it.name}, {"pass", pass}});
    rows += "\"" + it.name + "\"," + (pass ? "1" : "0") + "\n";
  }
  emit(csv() ? rows : Json{{"checks", results}, {"ok", all}}.dump(2));
  return all ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments with the GHZ game, its parallel repetitions and their proof objects"};
  app.set_config("--config", "", "key=value file with option defaults");
  app.add_option("--seed", g.seed, "seed for randomized trials")->capture_default_str();
  app.add_option("--budget", g.budget, "enumeration / search budget")->capture_default_str();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"auto", "json", "csv"}));
  app.add_option("--out", g.out, "write the report to FILE");
  app.add_option("--threads", g.threads, "worker threads (THREADS overrides)")->check(CLI::PositiveNumber);
  app.fallthrough();
  app.require_subcommand(1, 1);

  std::function<int()> run;

  auto* value = app.add_subcommand("value", "exact or heuristic game value");
  value->add_option("--game", value_game, "ghz or a JSON game file")->capture_default_str();
  value->add_flag("--heuristic", value_heuristic, "local-search lower bound instead of exact search");
  value->callback([&] { run = cmd_value; });

  auto* rep = app.add_subcommand("repvalue", "value of the n-fold repetition and its coordinate values");
  rep->add_option("--game", rep_game)->capture_default_str();
  rep->add_option("--n", rep_n)->check(CLI::Range(1, 4))->capture_default_str();
  rep->add_flag("--coordinates", rep_coordinates, "also compute v^j for every coordinate");
  rep->callback([&] { run = cmd_repvalue; });

  auto* fc = app.add_subcommand("fourier-check", "random instances of the product-event Fourier identity");
  fc->add_option("--n", fc_n)->capture_default_str();
  fc->add_option("--trials", fc_trials)->check(CLI::NonNegativeNumber)->capture_default_str();
  fc->callback([&] { run = cmd_fourier_check; });

  auto* ec = app.add_subcommand("embed-check", "local embeddings on random affine power cosets");
  ec->add_option("--n", ec_n)->capture_default_str();
  ec->add_option("--trials", ec_trials)->check(CLI::NonNegativeNumber)->capture_default_str();
  ec->callback([&] { run = cmd_embed_check; });

  auto* pt = app.add_subcommand("partition", "pseudorandom affine partition of a product event");
  pt->add_option("--n", pt_n)->check(CLI::Range(1, 10))->capture_default_str();
  pt->add_option("--event", pt_event, "random, full, or rows like 00,01;*;11")->capture_default_str();
  pt->add_option("--delta", pt_delta)->check(CLI::PositiveNumber)->capture_default_str();
  pt->add_option("--m", pt_m)->check(CLI::PositiveNumber)->capture_default_str();
  pt->add_option("--min-mass", pt_min_mass)->capture_default_str();
  pt->add_flag("--heuristic", pt_heuristic, "sample kernels when exact search is infeasible");
  pt->callback([&] { run = cmd_partition; });

  auto* sr = app.add_subcommand("strategy-refine", "strategy-dependent refinement on random cosets");
  sr->add_option("--n", sr_n)->check(CLI::Range(1, 16))->capture_default_str();
  sr->add_option("--dim", sr_dim)->capture_default_str();
  sr->add_option("--j", sr_j)->capture_default_str();
  sr->add_option("--delta", sr_delta)->check(CLI::PositiveNumber)->capture_default_str();
  sr->add_option("--trials", sr_trials)->check(CLI::NonNegativeNumber)->capture_default_str();
  sr->add_option("--alphabet", sr_alphabet)->check(CLI::Range(1, 16))->capture_default_str();
  sr->callback([&] { run = cmd_strategy_refine; });

  auto* ph = app.add_subcommand("pseudo-hardness", "coordinate values under a conditioned query law");
  ph->add_option("--n", ph_n)->check(CLI::Range(1, 2))->capture_default_str();
  ph->add_option("--event", ph_event)->capture_default_str();
  ph->add_option("--j", ph_j)->capture_default_str();
  ph->add_option("--delta", ph_delta)->check(CLI::PositiveNumber)->capture_default_str();
  ph->add_option("--epsilon", ph_epsilon)->check(CLI::PositiveNumber)->capture_default_str();
  ph->add_option("--trials", ph_trials)->check(CLI::NonNegativeNumber)->capture_default_str();
  ph->add_option("--min-mass", ph_min_mass)->capture_default_str();
  ph->callback([&] { run = cmd_pseudo_hardness; });

  auto* cs = app.add_subcommand("criterion-sim", "adaptive win-process on the repeated game");
  cs->add_option("--game", cs_game)->capture_default_str();
  cs->add_option("--n", cs_n)->check(CLI::Range(1, 3))->capture_default_str();
  cs->add_option("--rho", cs_rho, "mass threshold as a rational")->capture_default_str();
  cs->add_option("--epsilon", cs_epsilon)->check(CLI::PositiveNumber)->capture_default_str();
  cs->add_option("--j1", cs_j1, "first revealed coordinate (0-based)")->capture_default_str();
  cs->callback([&] { run = cmd_criterion_sim; });

  auto* dm = app.add_subcommand("demo", "main-theorem pipeline on one product event");
  dm->add_option("--n", dm_n)->check(CLI::Range(1, 8))->capture_default_str();
  dm->add_option("--event", dm_event)->capture_default_str();
  dm->add_option("--delta", dm_delta)->check(CLI::PositiveNumber)->capture_default_str();
  dm->add_option("--m", dm_m)->check(CLI::PositiveNumber)->capture_default_str();
  dm->add_option("--epsilon", dm_epsilon)->check(CLI::PositiveNumber)->capture_default_str();
  dm->add_option("--min-mass", dm_min_mass)->capture_default_str();
  dm->add_flag("--partition-only", dm_partition_only);
  dm->callback([&] { run = cmd_demo; });

  auto* st = app.add_subcommand("selftest", "quick property suite");
  st->callback([&] { run = cmd_selftest; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  if (const char* env = std::getenv("THREADS")) {
    try {
      g.threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "THREADS must be a positive integer\n";
      return kUsage;
    }
  }

  try {
    return run();
  } catch (const VerificationFailed& e) {
    std::cerr << "assertion failed: " << e.what() << '\n';
    return kFail;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
