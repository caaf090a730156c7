#include "ghzlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ghzlab/embedding.hpp"
#include "ghzlab/errors.hpp"
#include "ghzlab/probdist.hpp"

namespace ghzlab::harness {

using f2::AffinePowerCoset;
using f2::F2Triple;
using f2::F2Vector;

namespace {

Rational count_ratio(std::uint64_t num, std::uint64_t den) {
  return ratio(BigInt(static_cast<unsigned long>(num)), BigInt(static_cast<unsigned long>(den)));
}

games::QueryMass query_of(const F2Triple& x, const Rational& p) {
  return {{x[0].bits(), x[1].bits(), x[2].bits()}, p};
}

std::vector<games::QueryMass> uniform_queries(const std::vector<F2Triple>& pts) {
  std::vector<games::QueryMass> out;
  const Rational p = count_ratio(1, pts.size());
  for (const auto& x : pts) out.push_back(query_of(x, p));
  return out;
}

Rational tv_of(const std::map<unsigned, Rational>& a, const std::map<unsigned, Rational>& b) {
  Rational sum = 0;
  std::map<unsigned, std::pair<Rational, Rational>> both;
  for (const auto& [k, v] : a) both[k].first = v;
  for (const auto& [k, v] : b) both[k].second = v;
  for (const auto& [k, pr] : both) sum += abs(pr.first - pr.second);
  return sum / 2;
}

}  // namespace

bool PseudoHardnessReport::ok() const {
  if (asserted && !conclusion) return false;
  if (!lipschitz_ok || !log_expectation_ok || !tv_chain_ok) return false;
  return std::all_of(markov.begin(), markov.end(), [](const MarkovPoint& p) { return p.holds; });
}

PseudoHardnessReport pseudo_hardness_check(const AffinePowerCoset& w, const partition::ProductEvent& e, int j,
                                           double delta, double epsilon, std::uint64_t strategy_budget) {
  const int n = w.n();
  if (e.n != n) throw ShapeMismatch("event and coset differ in n");
  if (j < 0 || j >= n) throw DomainError("coordinate index out of range");
  if (!(delta > 0) || !(epsilon > 0)) throw DomainError("delta and epsilon must be positive");
  const auto support = embedding::ghz_support(w);
  if (support.empty()) throw EmptyIntersection("the coset has no GHZ query mass");

  partition::WeightedPair pair;
  pair.carrier = w;
  pair.points = support;
  std::vector<F2Triple> in_e;
  for (const auto& x : support) {
    const bool hit = e.contains(x);
    pair.tilde.push_back(hit ? 1 : 0);
    pair.base.push_back(1);
    if (hit) in_e.push_back(x);
  }
  if (in_e.empty()) throw ZeroMassEvent("event has no mass on the coset");

  PseudoHardnessReport r;
  r.n = n;
  r.j = j;
  r.delta = delta;
  r.epsilon = epsilon;
  const Rational pe = count_ratio(in_e.size(), support.size());
  r.delta_kl = -prob::ln(pe);
  r.m = static_cast<int>(std::min(std::ceil(1.0 / delta), 1e6));
  r.closeness = partition::d_m_closeness(pair, r.m).value;
  r.closeness_ok = r.closeness <= delta;
  const double dk = r.delta_kl;
  r.constraint_flags = {delta <= dk * dk / 32 * std::exp(-4 * dk / epsilon), delta <= dk * dk / (32 * std::exp(2.0)),
                        delta <= 2 * epsilon * epsilon};
  r.hypothesis = r.closeness_ok && r.constraint_flags[0] && r.constraint_flags[1] && r.constraint_flags[2];
  r.injective_hypothesis = r.closeness_ok && r.m >= w.dim() && r.constraint_flags[2];
  r.asserted = r.hypothesis || r.injective_hypothesis;

  const auto gn = games::repeat(games::ghz_game(), n);
  games::SearchOptions opt;
  opt.budget = strategy_budget;
  const auto tilde_q = uniform_queries(in_e);
  const auto lhs = games::coordinate_value(gn, j, tilde_q, opt);
  const auto base = games::coordinate_value(gn, j, uniform_queries(support), opt);
  r.lhs = lhs.value;
  r.base = base.value;
  r.rhs = to_double(base.value) + 2 * epsilon;
  r.conclusion = r.lhs <= r.base + from_double(2 * epsilon);
  r.tv = 1 - pe;
  r.lipschitz_ok = r.lhs <= r.base + r.tv;

  const auto& tables = lhs.witness.tables;
  partition::AnswerMap f1{2, [&tables](const F2Vector& x) { return static_cast<unsigned>(tables[0][x.bits()]); }};
  const auto sr = partition::strategy_refinement(w, f1, j, delta);
  r.u_codim = sr.codim;
  const auto& u = sr.u;

  struct Cell {
    std::vector<F2Triple> all;
    std::vector<F2Triple> hit;
  };
  std::map<F2Triple, Cell, f2::TripleLess> cells;
  for (const auto& x : support) {
    auto& c = cells[AffinePowerCoset::containing(x, u).shift()];
    c.all.push_back(x);
    if (e.contains(x)) c.hit.push_back(x);
  }
  const double total_e = static_cast<double>(in_e.size());
  for (const auto& [key, c] : cells) {
    if (c.hit.empty()) continue;
    const double weight = static_cast<double>(c.hit.size()) / total_e;
    r.log_expectation -= weight * std::log(static_cast<double>(c.hit.size()) / static_cast<double>(c.all.size()));
  }
  r.log_expectation_ok = r.log_expectation <= r.delta_kl + 1e-9;
  for (double tau : {0.5, 0.25, 0.125, 0.0625, 0.03125}) {
    MarkovPoint mp;
    mp.tau = tau;
    for (const auto& [key, c] : cells) {
      if (c.hit.empty()) continue;
      if (static_cast<double>(c.hit.size()) / static_cast<double>(c.all.size()) <= tau) {
        mp.measured += static_cast<double>(c.hit.size()) / total_e;
      }
    }
    mp.bound = r.delta_kl / std::log(1 / tau);
    mp.holds = mp.measured <= mp.bound + 1e-9;
    r.markov.push_back(mp);
  }

  auto answer = [&tables](int player, const F2Vector& row) {
    return static_cast<unsigned>(tables[static_cast<std::size_t>(player)][row.bits()]);
  };
  Rational chain = 0;
  for (const auto& [key, c] : cells) {
    if (c.hit.empty()) continue;
    std::map<unsigned, Rational> joint;
    const Rational unit = count_ratio(1, c.hit.size());
    for (const auto& x : c.hit) joint[(answer(0, x[0]) << 2) | (answer(1, x[1]) << 1) | answer(2, x[2])] += unit;
    std::array<std::map<unsigned, Rational>, 3> marg;
    for (int p = 0; p < 3; ++p) {
      const auto pp = static_cast<std::size_t>(p);
      const f2::Coset row_coset = f2::Coset::make(c.hit.front()[pp], u);
      std::map<unsigned, std::uint64_t> cnt;
      std::uint64_t tot = 0;
      for (const auto& s : support) {
        if (!e.masks[pp][s[pp].bits()] || !row_coset.contains(s[pp])) continue;
        ++cnt[answer(p, s[pp])];
        ++tot;
      }
      for (const auto& [y, k] : cnt) marg[pp][y] = count_ratio(k, tot);
    }
    std::map<unsigned, Rational> prod;
    for (const auto& [a, pa] : marg[0]) {
      for (const auto& [b, pb] : marg[1]) {
        for (const auto& [cc, pc] : marg[2]) prod[(a << 2) | (b << 1) | cc] = pa * pb * pc;
      }
    }
    chain += count_ratio(c.hit.size(), in_e.size()) * tv_of(joint, prod);
  }
  r.tv_chain = to_double(chain);
  if (dk > 0 && dk / std::sqrt(32 * delta) > 1) r.tv_chain_bound = 4 * dk / std::log(dk / std::sqrt(32 * delta));
  if (r.hypothesis) r.tv_chain_ok = r.tv_chain_bound && r.tv_chain <= *r.tv_chain_bound + 1e-9;
  return r;
}

bool CriterionTrace::ok() const {
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    if (!rounds[i].decay_ok) return false;
    if (i + 1 < rounds.size() && rounds[i + 1].w > rounds[i].w) return false;
  }
  return std::all_of(histories.begin(), histories.end(),
                     [](const HistoryRecord& h) { return h.next_ok && (h.depth == 0 || h.product_event); });
}

namespace {

std::uint64_t digit(std::uint64_t index, std::uint64_t radix, int n, int j) {
  for (int t = n - 1; t > j; --t) index /= radix;
  return index % radix;
}

struct Point {
  games::Tuple x;
  games::Tuple y;
  Rational p;
  std::vector<std::uint8_t> win;  // per coordinate
};

struct Reveal {
  int j;
  games::Tuple x;  // base query tuple at coordinate j
  games::Tuple y;
};

struct Node {
  std::vector<std::size_t> pts;
  Rational mass;
  std::vector<Reveal> history;
};

std::string history_string(const std::vector<Reveal>& h) {
  std::ostringstream os;
  for (std::size_t t = 0; t < h.size(); ++t) {
    if (t) os << ' ';
    os << h[t].j << ':';
    for (auto v : h[t].x) os << v;
    os << '/';
    for (auto v : h[t].y) os << v;
  }
  return os.str();
}

}  // namespace

CriterionTrace criterion_simulate(const games::Game& g, int n, const games::ProductStrategy& f, const Rational& rho,
                                  double epsilon, int j1, const CriterionOptions& opt) {
  if (n < 1) throw DomainError("repetition count must be positive");
  if (j1 < 0 || j1 >= n) throw DomainError("J1 out of range");
  const auto gn = games::repeat(g, n);
  const auto big = gn.materialize();
  const int k = g.players();
  const double need = static_cast<double>(big.distribution().size()) * n * k;
  if (need > static_cast<double>(opt.budget)) throw BudgetExceeded("history tree", need, static_cast<double>(opt.budget));

  CriterionTrace t;
  t.rho = rho;
  t.epsilon = epsilon;
  t.j1 = j1;
  t.strategy_value = games::strategy_value(big, f);

  const auto& qs = g.query_sizes();
  const auto& as = g.answer_sizes();
  std::vector<Point> pts;
  for (const auto& q : big.distribution()) {
    if (q.p == 0) continue;
    Point p;
    p.x = q.x;
    p.y = f.answer(q.x);
    p.p = q.p;
    for (int j = 0; j < n; ++j) {
      games::Tuple xj(static_cast<std::size_t>(k));
      games::Tuple yj(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        xj[ii] = digit(p.x[ii], qs[ii], n, j);
        yj[ii] = digit(p.y[ii], as[ii], n, j);
      }
      p.win.push_back(g.wins(xj, yj) ? 1 : 0);
    }
    pts.push_back(std::move(p));
  }

  std::uint64_t x_all = 1;
  std::uint64_t y_all = 1;
  for (auto s : qs) x_all *= s;
  for (auto s : as) y_all *= s;

  auto column = [&](const Point& p, int j) {
    Reveal r{j, games::Tuple(static_cast<std::size_t>(k)), games::Tuple(static_cast<std::size_t>(k))};
    for (int i = 0; i < k; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      r.x[ii] = digit(p.x[ii], qs[ii], n, j);
      r.y[ii] = digit(p.y[ii], as[ii], n, j);
    }
    return r;
  };

  // Membership of a single player's row in the history event.
  auto row_ok = [&](int i, std::uint64_t xi, const std::vector<Reveal>& h) {
    const auto ii = static_cast<std::size_t>(i);
    const std::uint64_t yi = f.tables[ii][xi];
    for (const auto& rv : h) {
      if (digit(xi, qs[ii], n, rv.j) != rv.x[ii] || digit(yi, as[ii], n, rv.j) != rv.y[ii]) return false;
    }
    return true;
  };

  auto product_check = [&](const std::vector<Reveal>& h) {
    std::vector<std::uint64_t> sizes;
    for (int i = 0; i < k; ++i) {
      std::uint64_t c = 0;
      for (std::uint64_t xi = 0; xi < big.query_sizes()[static_cast<std::size_t>(i)]; ++xi) c += row_ok(i, xi, h) ? 1 : 0;
      sizes.push_back(c);
    }
    std::uint64_t joint = 0;
    const std::uint64_t total = big.total_queries();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      const auto x = big.query_tuple(idx);
      bool in = true;
      for (const auto& rv : h) {
        const auto y = f.answer(x);
        for (int i = 0; i < k && in; ++i) {
          const auto ii = static_cast<std::size_t>(i);
          in = digit(x[ii], qs[ii], n, rv.j) == rv.x[ii] && digit(y[ii], as[ii], n, rv.j) == rv.y[ii];
        }
        if (!in) break;
      }
      joint += in ? 1 : 0;
    }
    std::uint64_t prod = 1;
    for (auto s : sizes) prod *= s;
    return prod == joint;
  };

  Node root;
  for (std::size_t i = 0; i < pts.size(); ++i) root.pts.push_back(i);
  root.mass = 1;
  std::vector<Node> level{root};
  std::vector<double> certified_eps;  // per depth
  std::vector<bool> certified_all;

  for (int depth = 0; depth < n; ++depth) {
    std::vector<Node> next;
    double max_hard = -std::numeric_limits<double>::infinity();
    bool all_cert = true;
    for (const auto& node : level) {
      HistoryRecord h;
      h.depth = depth;
      h.history = history_string(node.history);
      h.mass = node.mass;
      h.mass_flag = node.mass >= rho;
      std::vector<Rational> cond(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        Rational wmass = 0;
        for (auto pi : node.pts) {
          if (pts[pi].win[static_cast<std::size_t>(j)]) wmass += pts[pi].p;
        }
        cond[static_cast<std::size_t>(j)] = wmass / node.mass;
      }
      if (depth == 0) {
        h.next_j = j1;
      } else {
        h.next_j = 0;
        for (int j = 1; j < n; ++j) {
          if (cond[static_cast<std::size_t>(j)] < cond[static_cast<std::size_t>(h.next_j)]) h.next_j = j;
        }
      }
      h.next_win = cond[static_cast<std::size_t>(h.next_j)];
      if (depth > 0) {
        h.product_event = product_check(node.history);
        if (h.mass_flag) {
          if (opt.certify) {
            std::vector<games::QueryMass> cond_q;
            for (auto pi : node.pts) cond_q.push_back({pts[pi].x, pts[pi].p / node.mass});
            Rational best = 2;
            for (int j = 0; j < n; ++j) best = std::min(best, games::coordinate_value(gn, j, cond_q, opt.search).value);
            h.hard_value = best;
            h.next_ok = h.next_win <= best && (best > 1 - from_double(epsilon) || h.next_win <= 1 - from_double(epsilon));
            max_hard = std::max(max_hard, to_double(best));
          } else {
            all_cert = false;
          }
        }
      }
      const int jn = h.next_j;
      t.histories.push_back(std::move(h));

      std::map<std::pair<games::Tuple, games::Tuple>, Node> children;
      for (auto pi : node.pts) {
        if (!pts[pi].win[static_cast<std::size_t>(jn)]) continue;
        auto rv = column(pts[pi], jn);
        auto& ch = children[{rv.x, rv.y}];
        if (ch.pts.empty()) {
          ch.history = node.history;
          ch.history.push_back(rv);
          ch.mass = 0;
        }
        ch.pts.push_back(pi);
        ch.mass += pts[pi].p;
      }
      for (auto& [key, ch] : children) next.push_back(std::move(ch));
    }
    certified_eps.push_back(max_hard == -std::numeric_limits<double>::infinity() ? 1.0 : 1.0 - max_hard);
    certified_all.push_back(all_cert);

    RoundRecord rr;
    rr.i = depth + 1;
    rr.w = 0;
    for (const auto& ch : next) rr.w += ch.mass;
    t.rounds.push_back(rr);
    level = std::move(next);
  }

  for (std::size_t i = 0; i + 1 < t.rounds.size(); ++i) {
    auto& rr = t.rounds[i];
    const double factor = std::pow(static_cast<double>(x_all) * static_cast<double>(y_all), rr.i);
    rr.mass_condition = to_double(rr.w) >= 2 * factor * to_double(rho);
    const auto depth = static_cast<std::size_t>(rr.i);
    rr.certified_epsilon = certified_eps[depth];
    rr.decay_checked = rr.mass_condition && certified_all[depth] && epsilon <= rr.certified_epsilon;
    rr.decay_measured = t.rounds[i + 1].w <= rr.w * (1 - from_double(epsilon) / 2);
    if (rr.decay_checked) rr.decay_ok = rr.decay_measured;
  }
  return t;
}

ConstraintCheck main_constraints(double n, double delta_kl, double delta, double m, double epsilon) {
  ConstraintCheck c;
  const double d2 = delta_kl * delta_kl;
  c.delta_constraints = {3 * delta <= 9 * d2 / 32 * std::exp(-12 * delta_kl / epsilon),
                         3 * delta <= 9 * d2 / (32 * std::exp(2.0)), 3 * delta <= 2 * epsilon * epsilon};
  c.spread_constraint = delta >= 2 * m * delta_kl / n;
  return c;
}

ConstraintCheck asymptotic_constraints(double n) {
  return main_constraints(n, 0.0005 * std::log(n), std::pow(n, -0.4), std::pow(n, 0.4), 1.0 / 32);
}

ThresholdDiagnostic constraint_threshold(std::uint64_t direct_limit) {
  ThresholdDiagnostic d;
  d.checked_up_to = direct_limit;
  d.unsatisfied_throughout = true;
  for (std::uint64_t n = 2; n <= direct_limit; ++n) {
    if (asymptotic_constraints(static_cast<double>(n)).all()) {
      d.unsatisfied_throughout = false;
      break;
    }
  }
  const double step = 1e-3;
  const double top = 500;
  double last_fail = std::log(2.0);
  for (double l = std::log(2.0); l <= top; l += step) {
    if (!asymptotic_constraints(std::exp(l)).all()) last_fail = l;
  }
  d.threshold_ln_n = last_fail + step;
  d.threshold_log10_n = d.threshold_ln_n / std::log(10.0);
  return d;
}

bool DemoReport::ok() const {
  if (!stage_errors.empty()) return false;
  if (!partition.ok() || !markov_ok || !averaging_ok || !linear_case_ok) return false;
  if (!threshold.unsatisfied_throughout) return false;
  return std::all_of(parts.begin(), parts.end(), [](const PartReport& p) { return p.embeddable_ok; });
}

DemoReport main_theorem_demo(const partition::ProductEvent& e, double delta, int m, double epsilon,
                             const DemoOptions& opt) {
  DemoReport r;
  r.n = e.n;
  r.delta = delta;
  r.m = m;
  r.epsilon = epsilon;
  r.threshold = constraint_threshold();
  try {
    r.partition = partition::pseudorandom_partition(e, delta, m, opt.closeness);
  } catch (const Error& err) {
    r.stage_errors.push_back(std::string("partition: ") + err.what());
    return r;
  }
  const double dk = r.partition.delta_kl;
  r.constraints = main_constraints(e.n, dk, delta, m, epsilon);
  r.vacuous = !r.constraints.all();

  const auto split = partition::split_by_part(r.partition.partition, e);
  std::int64_t total_e = 0;
  for (const auto& pm : split) {
    for (auto t : pm.pair.tilde) total_e += t;
  }
  std::vector<const partition::PartMasses*> live;
  for (const auto& pm : split) {
    if (pm.tilde_mass == 0) continue;
    live.push_back(&pm);
    PartReport pr;
    pr.part = pm.pair.carrier;
    pr.tilde_mass = pm.tilde_mass;
    try {
      pr.dm = partition::d_m_closeness(pm.pair, m, opt.closeness).value;
      pr.kl = partition::d_m_closeness(pm.pair, e.n, opt.closeness).value;
      pr.pseudorandom = pr.dm <= 3 * delta + 1e-9 && pr.kl <= 3 * dk + 1e-9;
      pr.embeddable = embedding::embeddable_coordinates(pr.part);
      pr.embeddable_ok = static_cast<int>(pr.embeddable.size()) >= e.n - pr.part.space().codim();
    } catch (const Error& err) {
      r.stage_errors.push_back(std::string("part analysis: ") + err.what());
    }
    if (pr.pseudorandom) r.pseudorandom_mass += pr.tilde_mass;
    r.parts.push_back(std::move(pr));
  }
  r.markov_ok = r.pseudorandom_mass >= 1.0 / 3 - 1e-9;

  std::vector<double> score(static_cast<std::size_t>(e.n), 0.0);
  for (const auto& pr : r.parts) {
    if (!pr.pseudorandom) continue;
    for (int j : pr.embeddable) score[static_cast<std::size_t>(j)] += pr.tilde_mass;
  }
  r.j_star = static_cast<int>(std::max_element(score.begin(), score.end()) - score.begin());

  if (opt.partition_only) return r;
  try {
    const auto gn = games::repeat(games::ghz_game(), e.n);
    std::vector<F2Triple> all_e;
    Rational averaged = 0;
    for (std::size_t i = 0; i < live.size(); ++i) {
      const auto& pair = live[i]->pair;
      std::vector<F2Triple> hit;
      for (std::size_t p = 0; p < pair.points.size(); ++p) {
        if (pair.tilde[p]) hit.push_back(pair.points[p]);
      }
      all_e.insert(all_e.end(), hit.begin(), hit.end());
      auto& pr = r.parts[i];
      pr.value_tilde = games::coordinate_value(gn, r.j_star, uniform_queries(hit), opt.search).value;
      pr.value_base = games::coordinate_value(gn, r.j_star, uniform_queries(pair.points), opt.search).value;
      averaged += count_ratio(hit.size(), static_cast<std::uint64_t>(total_e)) * *pr.value_tilde;
      const bool embeds = std::find(pr.embeddable.begin(), pr.embeddable.end(), r.j_star) != pr.embeddable.end();
      if (embeds && *pr.value_base != make_rational(3, 4)) r.linear_case_ok = false;
    }
    std::sort(all_e.begin(), all_e.end(), f2::TripleLess{});
    r.value_tilde = games::coordinate_value(gn, r.j_star, uniform_queries(all_e), opt.search).value;
    r.averaged = averaged;
    r.averaging_ok = *r.value_tilde <= averaged;
    r.values_computed = true;
  } catch (const Error& err) {
    r.stage_errors.push_back(std::string("values: ") + err.what());
  }
  return r;
}

partition::ProductEvent parse_event(int n, const std::string& spec) {
  if (spec == "full") return partition::ProductEvent::full(n);
  std::array<std::vector<F2Vector>, 3> rows;
  std::size_t start = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t end = spec.find(';', start);
    if ((end == std::string::npos) != (i == 2)) throw ParseError("event needs three ';'-separated rows: " + spec);
    const std::string part = spec.substr(start, end == std::string::npos ? std::string::npos : end - start);
    start = end + 1;
    if (part == "*") {
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) rows[i].push_back(F2Vector::from_bits(b, n));
      continue;
    }
    std::stringstream ss(part);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (static_cast<int>(item.size()) != n || item.find_first_not_of("01") != std::string::npos) {
        throw ParseError("bad row '" + item + "' in event");
      }
      rows[i].push_back(F2Vector::from_string(item));
    }
    if (rows[i].empty()) throw ParseError("empty row in event");
  }
  return partition::ProductEvent::from_rows(n, rows);
}

}  // namespace ghzlab::harness
