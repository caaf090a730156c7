#include "ghzlab/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "ghzlab/errors.hpp"

namespace ghzlab::games {

namespace {

std::uint64_t checked_product(std::span<const std::uint64_t> sizes, const char* what) {
  std::uint64_t p = 1;
  for (auto s : sizes) {
    if (s == 0) throw DomainError(std::string(what) + ": empty alphabet");
    if (p > (std::uint64_t{1} << 62) / s) throw BudgetExceeded(what, std::ldexp(1.0, 63), std::ldexp(1.0, 62));
    p *= s;
  }
  return p;
}

std::uint64_t checked_pow(std::uint64_t base, int n, const char* what) {
  std::vector<std::uint64_t> v(static_cast<std::size_t>(n), base);
  return checked_product(v, what);
}

std::uint64_t mixed_index(std::span<const std::uint64_t> digits, std::span<const std::uint64_t> radix) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= radix[i]) throw DomainError("tuple entry outside its alphabet");
    idx = idx * radix[i] + digits[i];
  }
  return idx;
}

Tuple mixed_digits(std::uint64_t idx, std::span<const std::uint64_t> radix) {
  Tuple d(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    d[i] = idx % radix[i];
    idx /= radix[i];
  }
  return d;
}

void validate_dist(const std::vector<QueryMass>& dist, const std::vector<std::uint64_t>& qs) {
  if (dist.empty()) throw UnsupportedDistribution("empty query distribution");
  Rational total = 0;
  for (const auto& q : dist) {
    if (q.x.size() != qs.size()) throw ShapeMismatch("query tuple has the wrong number of players");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (q.x[i] >= qs[i]) throw UnsupportedDistribution("query outside the query alphabet");
    }
    if (q.p < 0) throw DomainError("negative query mass");
    total += q.p;
  }
  if (total != 1) throw DomainError("query masses sum to " + to_string(total));
}

// Support points with integer weights and per-point win rows over all answer tuples.
struct Compiled {
  int k = 0;
  std::vector<std::uint64_t> answer_sizes;
  std::vector<std::uint64_t> answer_stride;
  std::vector<std::vector<std::uint64_t>> relevant;  // per player, sorted
  struct Point {
    std::vector<std::uint32_t> local;
    std::int64_t w = 0;
    std::vector<std::uint8_t> win;
  };
  std::vector<Point> pts;
  BigInt scale = 1;
  std::uint64_t total_answers = 1;
};

Compiled compile(const Game& g) {
  Compiled c;
  c.k = g.players();
  c.answer_sizes = g.answer_sizes();
  c.total_answers = g.total_answers();
  c.answer_stride.assign(static_cast<std::size_t>(c.k), 1);
  for (int i = c.k - 2; i >= 0; --i) {
    c.answer_stride[static_cast<std::size_t>(i)] =
        c.answer_stride[static_cast<std::size_t>(i) + 1] * c.answer_sizes[static_cast<std::size_t>(i) + 1];
  }
  c.relevant.resize(static_cast<std::size_t>(c.k));
  std::vector<const QueryMass*> support;
  for (const auto& q : g.distribution()) {
    if (q.p == 0) continue;
    support.push_back(&q);
    c.scale = lcm(c.scale, BigInt(q.p.get_den()));
    for (int i = 0; i < c.k; ++i) c.relevant[static_cast<std::size_t>(i)].push_back(q.x[static_cast<std::size_t>(i)]);
  }
  for (auto& r : c.relevant) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  Tuple y(static_cast<std::size_t>(c.k));
  for (const auto* q : support) {
    Compiled::Point p;
    for (int i = 0; i < c.k; ++i) {
      const auto& r = c.relevant[static_cast<std::size_t>(i)];
      p.local.push_back(static_cast<std::uint32_t>(
          std::lower_bound(r.begin(), r.end(), q->x[static_cast<std::size_t>(i)]) - r.begin()));
    }
    BigInt w = q->p.get_num() * (c.scale / q->p.get_den());
    if (!w.fits_slong_p()) throw DomainError("query weights too large for the integer search");
    p.w = w.get_si();
    p.win.resize(c.total_answers);
    for (std::uint64_t a = 0; a < c.total_answers; ++a) {
      y = mixed_digits(a, c.answer_sizes);
      p.win[a] = g.wins(q->x, y) ? 1 : 0;
    }
    c.pts.push_back(std::move(p));
  }
  return c;
}

double compiled_space(const Compiled& c) {
  double s = 1;
  for (int i = 0; i < c.k; ++i) {
    s *= std::pow(static_cast<double>(c.answer_sizes[static_cast<std::size_t>(i)]),
                  static_cast<double>(c.relevant[static_cast<std::size_t>(i)].size()));
  }
  return s;
}

// Digit layout of the outer enumeration: players 0..k-2, each relevant query in order.
struct OuterLayout {
  std::vector<int> player;       // per digit
  std::vector<std::uint64_t> radix;
  std::vector<std::size_t> first;  // first digit of each outer player
  std::uint64_t count = 1;
};

OuterLayout outer_layout(const Compiled& c) {
  OuterLayout l;
  for (int i = 0; i + 1 < c.k; ++i) {
    l.first.push_back(l.player.size());
    for (std::size_t r = 0; r < c.relevant[static_cast<std::size_t>(i)].size(); ++r) {
      l.player.push_back(i);
      l.radix.push_back(c.answer_sizes[static_cast<std::size_t>(i)]);
    }
  }
  for (auto r : l.radix) l.count *= r;
  return l;
}

// Value (scaled) of the best last-player response to the outer digits; fills `reply` if given.
std::int64_t best_response(const Compiled& c, const OuterLayout& l, const std::vector<std::uint64_t>& digits,
                           std::vector<std::int64_t>& acc, std::vector<std::uint64_t>* reply) {
  const int last = c.k - 1;
  const std::uint64_t ylast = c.answer_sizes[static_cast<std::size_t>(last)];
  const std::size_t nlast = c.relevant[static_cast<std::size_t>(last)].size();
  std::fill(acc.begin(), acc.end(), 0);
  for (const auto& p : c.pts) {
    std::uint64_t partial = 0;
    for (int i = 0; i < last; ++i) {
      partial += digits[l.first[static_cast<std::size_t>(i)] + p.local[static_cast<std::size_t>(i)]] *
                 c.answer_stride[static_cast<std::size_t>(i)];
    }
    std::int64_t* row = &acc[p.local[static_cast<std::size_t>(last)] * ylast];
    const std::uint8_t* win = &p.win[partial];
    for (std::uint64_t a = 0; a < ylast; ++a) {
      if (win[a]) row[a] += p.w;
    }
  }
  std::int64_t total = 0;
  for (std::size_t r = 0; r < nlast; ++r) {
    const std::int64_t* row = &acc[r * ylast];
    std::uint64_t best = 0;
    for (std::uint64_t a = 1; a < ylast; ++a) {
      if (row[a] > row[best]) best = a;
    }
    total += row[best];
    if (reply) (*reply)[r] = best;
  }
  return total;
}

struct Best {
  std::int64_t value = -1;
  std::uint64_t index = 0;
};

Best search_range(const Compiled& c, const OuterLayout& l, std::uint64_t begin, std::uint64_t end) {
  Best b;
  if (begin >= end) return b;
  std::vector<std::uint64_t> digits = mixed_digits(begin, l.radix);
  const std::size_t nlast = c.relevant[static_cast<std::size_t>(c.k - 1)].size();
  std::vector<std::int64_t> acc(nlast * c.answer_sizes[static_cast<std::size_t>(c.k - 1)]);
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    std::int64_t v = best_response(c, l, digits, acc, nullptr);
    if (v > b.value) {
      b.value = v;
      b.index = idx;
    }
    for (std::size_t d = digits.size(); d-- > 0;) {
      if (++digits[d] < l.radix[d]) break;
      digits[d] = 0;
    }
  }
  return b;
}

ProductStrategy assemble(const Game& g, const Compiled& c, const OuterLayout& l, std::uint64_t index) {
  ProductStrategy f;
  for (int i = 0; i < c.k; ++i) f.tables.emplace_back(g.query_sizes()[static_cast<std::size_t>(i)], 0);
  auto digits = mixed_digits(index, l.radix);
  for (int i = 0; i + 1 < c.k; ++i) {
    const auto& r = c.relevant[static_cast<std::size_t>(i)];
    for (std::size_t q = 0; q < r.size(); ++q) {
      f.tables[static_cast<std::size_t>(i)][r[q]] = digits[l.first[static_cast<std::size_t>(i)] + q];
    }
  }
  const int last = c.k - 1;
  const auto& r = c.relevant[static_cast<std::size_t>(last)];
  std::vector<std::int64_t> acc(r.size() * c.answer_sizes[static_cast<std::size_t>(last)]);
  std::vector<std::uint64_t> reply(r.size());
  best_response(c, l, digits, acc, &reply);
  for (std::size_t q = 0; q < r.size(); ++q) f.tables[static_cast<std::size_t>(last)][r[q]] = reply[q];
  return f;
}

}  // namespace

Game::Game(std::vector<std::uint64_t> query_sizes, std::vector<std::uint64_t> answer_sizes,
           std::vector<QueryMass> dist, WinFn win)
    : query_sizes_(std::move(query_sizes)),
      answer_sizes_(std::move(answer_sizes)),
      dist_(std::move(dist)),
      win_(std::move(win)) {
  if (query_sizes_.empty() || query_sizes_.size() != answer_sizes_.size()) {
    throw ShapeMismatch("query and answer alphabets must be given for the same positive number of players");
  }
  checked_product(query_sizes_, "query space");
  checked_product(answer_sizes_, "answer space");
  validate_dist(dist_, query_sizes_);
  if (!win_) throw DomainError("missing win predicate");
}

Game Game::from_table(std::vector<std::uint64_t> query_sizes, std::vector<std::uint64_t> answer_sizes,
                      std::vector<QueryMass> dist, std::vector<std::uint8_t> table) {
  const std::uint64_t nq = checked_product(query_sizes, "query space");
  const std::uint64_t na = checked_product(answer_sizes, "answer space");
  if (table.size() != nq * na) throw ShapeMismatch("win table size does not match |X| * |Y|");
  auto qs = query_sizes;
  auto as = answer_sizes;
  WinFn fn = [t = std::move(table), qs, as, na](std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) {
    return t[mixed_index(x, qs) * na + mixed_index(y, as)] != 0;
  };
  return Game(std::move(query_sizes), std::move(answer_sizes), std::move(dist), std::move(fn));
}

std::uint64_t Game::total_queries() const { return checked_product(query_sizes_, "query space"); }
std::uint64_t Game::total_answers() const { return checked_product(answer_sizes_, "answer space"); }

std::uint64_t Game::query_index(std::span<const std::uint64_t> x) const { return mixed_index(x, query_sizes_); }
std::uint64_t Game::answer_index(std::span<const std::uint64_t> y) const { return mixed_index(y, answer_sizes_); }
Tuple Game::query_tuple(std::uint64_t index) const { return mixed_digits(index, query_sizes_); }
Tuple Game::answer_tuple(std::uint64_t index) const { return mixed_digits(index, answer_sizes_); }

Game Game::with_distribution(std::vector<QueryMass> dist) const {
  return Game(query_sizes_, answer_sizes_, std::move(dist), win_);
}

prob::FiniteDist Game::query_dist() const {
  std::vector<prob::FiniteDist::Entry> es;
  for (const auto& q : dist_) es.emplace_back(prob::encode_indices(q.x), q.p);
  return prob::FiniteDist::from_entries(std::move(es));
}

std::vector<std::uint8_t> Game::win_table(std::uint64_t budget) const {
  const std::uint64_t nq = total_queries();
  const std::uint64_t na = total_answers();
  if (static_cast<double>(nq) * static_cast<double>(na) > static_cast<double>(budget)) {
    throw BudgetExceeded("win table", static_cast<double>(nq) * static_cast<double>(na), static_cast<double>(budget));
  }
  std::vector<std::uint8_t> t(nq * na);
  for (std::uint64_t qi = 0; qi < nq; ++qi) {
    Tuple x = query_tuple(qi);
    for (std::uint64_t ai = 0; ai < na; ++ai) t[qi * na + ai] = wins(x, answer_tuple(ai)) ? 1 : 0;
  }
  return t;
}

Tuple ProductStrategy::answer(std::span<const std::uint64_t> x) const {
  if (x.size() != tables.size()) throw ShapeMismatch("strategy has the wrong number of players");
  Tuple y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= tables[i].size()) throw ShapeMismatch("strategy table too small for query");
    y[i] = tables[i][x[i]];
  }
  return y;
}

ProductStrategy constant_strategy(const Game& g, const Tuple& answers) {
  if (answers.size() != static_cast<std::size_t>(g.players())) throw ShapeMismatch("wrong number of answers");
  ProductStrategy f;
  for (int i = 0; i < g.players(); ++i) {
    f.tables.emplace_back(g.query_sizes()[static_cast<std::size_t>(i)], answers[static_cast<std::size_t>(i)]);
  }
  return f;
}

Game ghz_game() {
  std::vector<QueryMass> dist;
  for (Tuple x : {Tuple{0, 0, 0}, Tuple{0, 1, 1}, Tuple{1, 0, 1}, Tuple{1, 1, 0}}) {
    dist.push_back({x, Rational(1, 4)});
  }
  WinFn win = [](std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) {
    return ((y[0] ^ y[1] ^ y[2]) & 1U) == ((x[0] | x[1] | x[2]) & 1U);
  };
  return Game({2, 2, 2}, {2, 2, 2}, std::move(dist), std::move(win));
}

Game constant_game(std::vector<std::uint64_t> query_sizes, std::vector<std::uint64_t> answer_sizes, bool outcome) {
  const std::uint64_t nq = checked_product(query_sizes, "query space");
  std::vector<QueryMass> dist;
  for (std::uint64_t i = 0; i < nq; ++i) dist.push_back({mixed_digits(i, query_sizes), ratio(1, BigInt(nq))});
  WinFn win = [outcome](std::span<const std::uint64_t>, std::span<const std::uint64_t>) { return outcome; };
  return Game(std::move(query_sizes), std::move(answer_sizes), std::move(dist), std::move(win));
}

std::uint64_t RepeatedGame::coordinate(int player, std::uint64_t index, int j) const {
  const std::uint64_t radix = base.query_sizes()[static_cast<std::size_t>(player)];
  for (int t = n - 1; t > j; --t) index /= radix;
  return index % radix;
}

RepeatedGame repeat(const Game& base, int n) {
  if (n < 1) throw DomainError("repetition count must be positive");
  return RepeatedGame{base, n};
}

namespace {

std::vector<std::uint64_t> powered(const std::vector<std::uint64_t>& sizes, int n) {
  std::vector<std::uint64_t> out;
  for (auto s : sizes) out.push_back(checked_pow(s, n, "repeated alphabet"));
  return out;
}

// Splits a repeated index tuple into per-coordinate base tuples.
Tuple coordinate_tuple(std::span<const std::uint64_t> v, const std::vector<std::uint64_t>& radix, int n, int j) {
  Tuple out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t idx = v[i];
    for (int t = n - 1; t > j; --t) idx /= radix[i];
    out[i] = idx % radix[i];
  }
  return out;
}

std::vector<QueryMass> product_distribution(const Game& base, int n) {
  std::vector<const QueryMass*> support;
  for (const auto& q : base.distribution()) {
    if (q.p > 0) support.push_back(&q);
  }
  const std::uint64_t count = checked_pow(support.size(), n, "repeated query support");
  const int k = base.players();
  std::vector<QueryMass> out;
  out.reserve(count);
  std::vector<std::uint64_t> radix(static_cast<std::size_t>(n), support.size());
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    auto pick = mixed_digits(idx, radix);
    QueryMass m{Tuple(static_cast<std::size_t>(k), 0), Rational(1)};
    for (int j = 0; j < n; ++j) {
      const QueryMass& q = *support[pick[static_cast<std::size_t>(j)]];
      for (int i = 0; i < k; ++i) {
        auto ii = static_cast<std::size_t>(i);
        m.x[ii] = m.x[ii] * base.query_sizes()[ii] + q.x[ii];
      }
      m.p *= q.p;
    }
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const QueryMass& a, const QueryMass& b) { return a.x < b.x; });
  return out;
}

}  // namespace

Game RepeatedGame::materialize() const {
  const auto qs = base.query_sizes();
  const auto as = base.answer_sizes();
  const int reps = n;
  const Game b = base;
  WinFn win = [b, qs, as, reps](std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) {
    for (int j = 0; j < reps; ++j) {
      if (!b.wins(coordinate_tuple(x, qs, reps, j), coordinate_tuple(y, as, reps, j))) return false;
    }
    return true;
  };
  return Game(powered(qs, n), powered(as, n), product_distribution(base, n), std::move(win));
}

Rational strategy_value(const Game& g, const ProductStrategy& f) {
  if (f.tables.size() != static_cast<std::size_t>(g.players())) throw ShapeMismatch("strategy player count mismatch");
  for (int i = 0; i < g.players(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    if (f.tables[ii].size() != g.query_sizes()[ii]) throw ShapeMismatch("strategy table size mismatch");
    for (auto a : f.tables[ii]) {
      if (a >= g.answer_sizes()[ii]) throw ShapeMismatch("strategy answer outside the alphabet");
    }
  }
  Rational v = 0;
  for (const auto& q : g.distribution()) {
    if (q.p > 0 && g.wins(q.x, f.answer(q.x))) v += q.p;
  }
  return v;
}

double search_space_size(const Game& g) { return compiled_space(compile(g)); }

ValueResult exact_value(const Game& g, const SearchOptions& opt) {
  Compiled c = compile(g);
  const double required = compiled_space(c);
  if (required > static_cast<double>(opt.budget)) {
    throw BudgetExceeded("exact value search", required, static_cast<double>(opt.budget));
  }
  OuterLayout l = outer_layout(c);
  const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(std::min<std::uint64_t>(l.count, 256))));
  Best best;
  if (threads == 1) {
    best = search_range(c, l, 0, l.count);
  } else {
    std::vector<Best> partial(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (l.count + static_cast<std::uint64_t>(threads) - 1) / static_cast<std::uint64_t>(threads);
    for (int t = 0; t < threads; ++t) {
      std::uint64_t b = chunk * static_cast<std::uint64_t>(t);
      std::uint64_t e = std::min(l.count, b + chunk);
      pool.emplace_back([&, t, b, e] { partial[static_cast<std::size_t>(t)] = search_range(c, l, b, e); });
    }
    for (auto& th : pool) th.join();
    for (const auto& p : partial) {
      if (p.value > best.value || (p.value == best.value && p.index < best.index)) best = p;
    }
  }
  ValueResult r;
  r.value = ratio(BigInt(best.value), c.scale);
  r.witness = assemble(g, c, l, best.index);
  return r;
}

Game coordinate_game(const RepeatedGame& gn, int j, const std::optional<std::vector<QueryMass>>& p_mod) {
  if (j < 0 || j >= gn.n) throw DomainError("coordinate index out of range");
  const auto qs = gn.base.query_sizes();
  const int reps = gn.n;
  const Game b = gn.base;
  WinFn win = [b, qs, reps, j](std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) {
    return b.wins(coordinate_tuple(x, qs, reps, j), y);
  };
  std::vector<QueryMass> dist = p_mod ? *p_mod : product_distribution(gn.base, gn.n);
  return Game(powered(qs, gn.n), gn.base.answer_sizes(), std::move(dist), std::move(win));
}

ValueResult coordinate_value(const RepeatedGame& gn, int j, const std::optional<std::vector<QueryMass>>& p_mod,
                             const SearchOptions& opt) {
  return exact_value(coordinate_game(gn, j, p_mod), opt);
}

RandomizedCheck randomized_vs_deterministic_check(const Game& g, int seeds, std::uint64_t budget) {
  if (seeds < 1) throw DomainError("need at least one shared seed");
  Compiled c = compile(g);
  const double nstrat = compiled_space(c);
  if (nstrat > static_cast<double>(budget) || std::pow(nstrat, seeds) > static_cast<double>(budget)) {
    throw BudgetExceeded("randomized strategy enumeration", std::pow(nstrat, seeds), static_cast<double>(budget));
  }
  // every deterministic strategy's scaled value
  std::vector<std::uint64_t> radix;
  std::vector<std::size_t> first;
  for (int i = 0; i < c.k; ++i) {
    first.push_back(radix.size());
    for (std::size_t r = 0; r < c.relevant[static_cast<std::size_t>(i)].size(); ++r) {
      radix.push_back(c.answer_sizes[static_cast<std::size_t>(i)]);
    }
  }
  const auto count = static_cast<std::uint64_t>(nstrat);
  std::vector<std::int64_t> values(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    auto d = mixed_digits(idx, radix);
    std::int64_t v = 0;
    for (const auto& p : c.pts) {
      std::uint64_t a = 0;
      for (int i = 0; i < c.k; ++i) {
        a += d[first[static_cast<std::size_t>(i)] + p.local[static_cast<std::size_t>(i)]] *
             c.answer_stride[static_cast<std::size_t>(i)];
      }
      if (p.win[a]) v += p.w;
    }
    values[idx] = v;
  }
  // every seed-indexed tuple of strategies (as a multiset), averaged
  std::int64_t best_sum = -1;
  std::vector<std::uint64_t> pick(static_cast<std::size_t>(seeds), 0);
  while (true) {
    std::int64_t s = 0;
    for (auto p : pick) s += values[p];
    best_sum = std::max(best_sum, s);
    int pos = seeds - 1;
    while (pos >= 0 && pick[static_cast<std::size_t>(pos)] + 1 == count) --pos;
    if (pos < 0) break;
    ++pick[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < seeds; ++q) pick[static_cast<std::size_t>(q)] = pick[static_cast<std::size_t>(pos)];
  }
  RandomizedCheck r;
  r.randomized = ratio(BigInt(best_sum), c.scale * seeds);
  r.deterministic = exact_value(g, SearchOptions{budget, 1}).value;
  r.holds = r.randomized == r.deterministic;
  return r;
}

ValueResult heuristic_value_lower_bound(const Game& g, std::uint64_t budget, std::uint64_t seed) {
  Compiled c = compile(g);
  std::vector<std::uint64_t> radix;
  std::vector<std::size_t> first;
  for (int i = 0; i < c.k; ++i) {
    first.push_back(radix.size());
    for (std::size_t r = 0; r < c.relevant[static_cast<std::size_t>(i)].size(); ++r) {
      radix.push_back(c.answer_sizes[static_cast<std::size_t>(i)]);
    }
  }
  auto eval = [&](const std::vector<std::uint64_t>& d) {
    std::int64_t v = 0;
    for (const auto& p : c.pts) {
      std::uint64_t a = 0;
      for (int i = 0; i < c.k; ++i) {
        a += d[first[static_cast<std::size_t>(i)] + p.local[static_cast<std::size_t>(i)]] *
             c.answer_stride[static_cast<std::size_t>(i)];
      }
      if (p.win[a]) v += p.w;
    }
    return v;
  };
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> best_d(radix.size(), 0);
  std::int64_t best_v = eval(best_d);
  std::uint64_t used = 1;
  const std::int64_t perfect = c.scale.get_si();
  while (used < budget && best_v < perfect) {
    std::vector<std::uint64_t> d(radix.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::uniform_int_distribution<std::uint64_t>(0, radix[i] - 1)(rng);
    std::int64_t v = eval(d);
    ++used;
    while (used < budget) {
      std::int64_t step_v = v;
      std::size_t step_pos = 0;
      std::uint64_t step_val = 0;
      for (std::size_t pos = 0; pos < d.size() && used < budget; ++pos) {
        const std::uint64_t old = d[pos];
        for (std::uint64_t a = 0; a < radix[pos] && used < budget; ++a) {
          if (a == old) continue;
          d[pos] = a;
          std::int64_t nv = eval(d);
          ++used;
          if (nv > step_v) {
            step_v = nv;
            step_pos = pos;
            step_val = a;
          }
        }
        d[pos] = old;
      }
      if (step_v <= v) break;
      d[step_pos] = step_val;
      v = step_v;
    }
    if (v > best_v) {
      best_v = v;
      best_d = d;
    }
  }
  ValueResult r;
  r.value = ratio(BigInt(best_v), c.scale);
  for (int i = 0; i < c.k; ++i) r.witness.tables.emplace_back(g.query_sizes()[static_cast<std::size_t>(i)], 0);
  for (int i = 0; i < c.k; ++i) {
    const auto& rel = c.relevant[static_cast<std::size_t>(i)];
    for (std::size_t q = 0; q < rel.size(); ++q) {
      r.witness.tables[static_cast<std::size_t>(i)][rel[q]] = best_d[first[static_cast<std::size_t>(i)] + q];
    }
  }
  return r;
}

}  // namespace ghzlab::games
