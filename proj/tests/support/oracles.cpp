#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace oracle {

using namespace ghzlab;

int span_rank(const std::vector<f2::F2Vector>& rows) {
  std::set<std::uint64_t> sums;
  const std::size_t r = rows.size();
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << r); ++s) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if ((s >> i) & 1U) acc ^= rows[i].bits();
    }
    sums.insert(acc);
  }
  int rank = 0;
  while ((std::size_t{1} << rank) < sums.size()) ++rank;
  return rank;
}

namespace {

struct BruteState {
  std::vector<std::uint64_t> qs, as;
  std::vector<std::vector<std::uint64_t>> x;  // support query tuples
  std::vector<BigInt> weight;
  std::vector<std::vector<std::uint8_t>> win;  // per support query, by own answer index
  std::vector<std::vector<std::uint64_t>> digits;
  BigInt best = -1;
};

void descend(BruteState& s, std::size_t player, std::vector<std::uint64_t>& partial) {
  const std::size_t k = s.qs.size();
  auto& d = s.digits[player];
  std::fill(d.begin(), d.end(), 0);
  while (true) {
    std::vector<std::uint64_t> next(partial.size());
    for (std::size_t q = 0; q < s.x.size(); ++q) next[q] = partial[q] * s.as[player] + d[s.x[q][player]];
    if (player + 1 == k) {
      BigInt score = 0;
      for (std::size_t q = 0; q < s.x.size(); ++q) {
        if (s.win[q][next[q]]) score += s.weight[q];
      }
      if (score > s.best) s.best = score;
    } else {
      descend(s, player + 1, next);
    }
    std::size_t pos = 0;
    while (pos < d.size() && ++d[pos] == s.as[player]) d[pos++] = 0;
    if (pos == d.size()) break;
  }
}

}  // namespace

Rational brute_value(const games::Game& g, double limit) {
  BruteState s;
  s.qs = g.query_sizes();
  s.as = g.answer_sizes();
  const std::size_t k = s.qs.size();
  double count = 1;
  for (std::size_t i = 0; i < k; ++i) count *= std::pow(static_cast<double>(s.as[i]), static_cast<double>(s.qs[i]));
  if (count > limit) throw std::runtime_error("brute force too large");

  BigInt lcm = 1;
  for (const auto& q : g.distribution()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.p.get_den_mpz_t());
  std::uint64_t answers = 1;
  for (auto a : s.as) answers *= a;
  for (const auto& q : g.distribution()) {
    if (q.p == 0) continue;
    s.x.push_back(q.x);
    Rational w = q.p * Rational(lcm);
    s.weight.push_back(w.get_num());
    std::vector<std::uint8_t> row(answers);
    for (std::uint64_t a = 0; a < answers; ++a) {
      std::vector<std::uint64_t> y(k);
      std::uint64_t rest = a;
      for (std::size_t i = k; i-- > 0;) {
        y[i] = rest % s.as[i];
        rest /= s.as[i];
      }
      row[a] = g.wins(q.x, y) ? 1 : 0;
    }
    s.win.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < k; ++i) s.digits.emplace_back(s.qs[i], 0);
  std::vector<std::uint64_t> partial(s.x.size(), 0);
  descend(s, 0, partial);
  return ratio(s.best, lcm);
}

Rational max_event_tv(const prob::FiniteDist& p, const prob::FiniteDist& q) {
  auto [a, b] = prob::align(p, q);
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  if (ea.size() > 20) throw std::runtime_error("universe too large");
  Rational best = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << ea.size()); ++s) {
    Rational diff = 0;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if ((s >> i) & 1U) diff += ea[i].second - eb[i].second;
    }
    if (diff > best) best = diff;
  }
  return best;
}

double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    if (q[i] == 0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

double tau_grid_min(double a, double b, int points) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= points; ++k) {
    const double tau = static_cast<double>(k) / (points + 1);
    best = std::min(best, a / std::log(1 / tau) + b / tau);
  }
  return best;
}

double brute_dm(const partition::WeightedPair& pair, int m) {
  const int n = pair.carrier.n();
  const std::uint64_t maps = std::uint64_t{1} << (n * m);
  double tt = 0, tb = 0;
  for (auto v : pair.tilde) tt += static_cast<double>(v);
  for (auto v : pair.base) tb += static_cast<double>(v);
  double best = 0;
  for (std::uint64_t code = 0; code < maps; ++code) {
    std::vector<std::uint64_t> rows;
    for (int r = 0; r < m; ++r) rows.push_back((code >> (r * n)) & f2::F2Vector::mask(n));
    std::map<std::uint64_t, std::pair<double, double>> img;
    for (std::size_t i = 0; i < pair.points.size(); ++i) {
      std::uint64_t key = 0;
      for (const auto& row : pair.points[i]) {
        for (auto a : rows) key = (key << 1) | static_cast<std::uint64_t>(__builtin_popcountll(a & row.bits()) & 1);
      }
      img[key].first += static_cast<double>(pair.tilde[i]);
      img[key].second += static_cast<double>(pair.base[i]);
    }
    std::vector<double> p, q;
    for (const auto& [key, w] : img) {
      p.push_back(w.first / tt);
      q.push_back(w.second / tb);
    }
    best = std::max(best, kl(p, q));
  }
  return best;
}

double brute_potential(const partition::AffinePartition& pi, const partition::ProductEvent& e) {
  const int n = e.n;
  std::map<f2::AffinePowerCoset, std::pair<double, double>> parts;  // (tilde count, base count)
  double total = 0;
  const unsigned cols[4] = {0b000, 0b011, 0b101, 0b110};
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << (2 * n)); ++c) {
    f2::F2Triple x = f2::make_triple(n, 0, 0, 0);
    for (int j = 0; j < n; ++j) f2::set_column(x, j, cols[(c >> (2 * j)) & 3U]);
    auto& slot = parts[pi.part_of(x)];
    slot.second += 1;
    if (e.contains(x)) {
      slot.first += 1;
      total += 1;
    }
  }
  double phi = 0;
  for (const auto& [part, w] : parts) {
    if (w.first > 0) phi += w.first / total * std::log(w.second / w.first);
  }
  return phi;
}

bool valid_partition(const partition::AffinePartition& pi) {
  const int n = pi.n();
  const auto parts = pi.parts();
  std::map<std::uint64_t, int> owner;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].dim() != pi.dim() || parts[k].n() != n) return false;
    for (const auto& x : f2::enumerate_coset(parts[k])) {
      const std::uint64_t key = (x[0].bits() << (2 * n)) | (x[1].bits() << n) | x[2].bits();
      if (!owner.emplace(key, static_cast<int>(k)).second) return false;
      if (!(pi.part_of(x) == parts[k])) return false;
    }
  }
  return owner.size() == (std::uint64_t{1} << (3 * n));
}

CriterionOracle ghz2_criterion(const games::ProductStrategy& f, int j1) {
  const unsigned cols[4] = {0b000, 0b011, 0b101, 0b110};
  auto bit = [](std::uint64_t v, int j) { return static_cast<unsigned>((v >> (1 - j)) & 1U); };
  auto wins = [](unsigned col, unsigned a1, unsigned a2, unsigned a3) {
    return ((a1 ^ a2 ^ a3) & 1U) == (col != 0 ? 1U : 0U);
  };
  struct Row {
    std::array<unsigned, 2> col;
    std::array<std::uint64_t, 3> y;
    std::array<bool, 2> win;
  };
  std::vector<Row> rows;
  for (unsigned a = 0; a < 4; ++a) {
    for (unsigned b = 0; b < 4; ++b) {
      Row r;
      r.col = {cols[a], cols[b]};
      for (int i = 0; i < 3; ++i) {
        const std::uint64_t xi = ((r.col[0] >> (2 - i)) & 1U) << 1 | ((r.col[1] >> (2 - i)) & 1U);
        r.y[static_cast<std::size_t>(i)] = f.tables[static_cast<std::size_t>(i)][xi];
      }
      for (int j = 0; j < 2; ++j) r.win[static_cast<std::size_t>(j)] = wins(r.col[static_cast<std::size_t>(j)], bit(r.y[0], j), bit(r.y[1], j), bit(r.y[2], j));
      rows.push_back(r);
    }
  }
  CriterionOracle o;
  const Rational unit(1, 16);
  std::map<std::array<unsigned, 4>, std::vector<const Row*>> hist;
  for (const auto& r : rows) {
    if (r.win[static_cast<std::size_t>(j1)]) {
      o.w1 += unit;
      hist[{r.col[static_cast<std::size_t>(j1)], bit(r.y[0], j1), bit(r.y[1], j1), bit(r.y[2], j1)}].push_back(&r);
    }
    if (r.win[0] && r.win[1]) o.w2 += unit;
  }
  for (const auto& [key, members] : hist) {
    Rational best = 2;
    for (int j = 0; j < 2; ++j) {
      int won = 0;
      for (const auto* r : members) won += r->win[static_cast<std::size_t>(j)] ? 1 : 0;
      best = std::min(best, make_rational(won, members.size()));
    }
    o.depth1.emplace(unit * static_cast<unsigned long>(members.size()), best);
  }
  return o;
}

}  // namespace oracle
