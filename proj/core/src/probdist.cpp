#include "ghzlab/probdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ghzlab/errors.hpp"

namespace ghzlab::prob {

namespace {

void sort_merge(std::vector<FiniteDist::Entry>& es) {
  std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<FiniteDist::Entry> out;
  out.reserve(es.size());
  for (auto& e : es) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second += e.second;
    } else {
      out.push_back(std::move(e));
    }
  }
  es = std::move(out);
}

void require_same_universe(const FiniteDist& p, const FiniteDist& q) {
  if (!p.same_universe(q)) throw UniverseMismatch("distributions are defined over different outcome sets");
}

}  // namespace

FiniteDist FiniteDist::from_entries(std::vector<Entry> entries) {
  sort_merge(entries);
  Rational total = 0;
  for (const auto& [k, m] : entries) {
    if (m < 0) throw DomainError("negative probability mass");
    total += m;
  }
  if (total != 1) throw DomainError("masses sum to " + to_string(total) + ", not 1");
  FiniteDist d;
  d.entries_ = std::move(entries);
  return d;
}

FiniteDist FiniteDist::from_weights(std::vector<Entry> weights) {
  Rational total = 0;
  for (const auto& [k, m] : weights) {
    if (m < 0) throw DomainError("negative weight");
    total += m;
  }
  if (total == 0) throw ZeroMassEvent("weights sum to zero");
  for (auto& [k, m] : weights) m /= total;
  return from_entries(std::move(weights));
}

FiniteDist FiniteDist::uniform(const std::vector<Key>& support) {
  if (support.empty()) throw DomainError("uniform distribution on an empty set");
  std::vector<Entry> es;
  Rational m(1, support.size());
  for (const auto& k : support) es.emplace_back(k, m);
  std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < es.size(); ++i) {
    if (es[i].first == es[i - 1].first) throw DomainError("duplicate outcome in uniform support");
  }
  FiniteDist d;
  d.entries_ = std::move(es);
  return d;
}

FiniteDist FiniteDist::point(const Key& key) { return from_entries({{key, Rational(1)}}); }

std::vector<Key> FiniteDist::universe() const {
  std::vector<Key> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

std::vector<Key> FiniteDist::support() const {
  std::vector<Key> out;
  for (const auto& e : entries_) {
    if (e.second > 0) out.push_back(e.first);
  }
  return out;
}

Rational FiniteDist::mass(const Key& key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, const Key& k) { return e.first < k; });
  if (it == entries_.end() || it->first != key) return 0;
  return it->second;
}

Rational FiniteDist::prob(const Event& e) const {
  Rational s = 0;
  for (const auto& [k, m] : entries_) {
    if (m > 0 && e(k)) s += m;
  }
  return s;
}

bool FiniteDist::same_universe(const FiniteDist& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first != other.entries_[i].first) return false;
  }
  return true;
}

FiniteDist FiniteDist::with_universe(const std::vector<Key>& keys) const {
  std::vector<Entry> es = entries_;
  for (const auto& k : keys) es.emplace_back(k, Rational(0));
  sort_merge(es);
  FiniteDist d;
  d.entries_ = std::move(es);
  return d;
}

std::pair<FiniteDist, FiniteDist> align(const FiniteDist& p, const FiniteDist& q) {
  return {p.with_universe(q.universe()), q.with_universe(p.universe())};
}

RandVar RandVar::from_table(std::map<Key, Key> table) {
  return RandVar([t = std::move(table)](const Key& k) -> std::optional<Key> {
    auto it = t.find(k);
    if (it == t.end()) return std::nullopt;
    return it->second;
  });
}

RandVar RandVar::identity() {
  return RandVar([](const Key& k) -> std::optional<Key> { return k; });
}

RandVar RandVar::constant(Key value) {
  return RandVar([v = std::move(value)](const Key&) -> std::optional<Key> { return v; });
}

RandVar RandVar::total(std::function<Key(const Key&)> fn) {
  return RandVar([f = std::move(fn)](const Key& k) -> std::optional<Key> { return f(k); });
}

RandVar joint(const RandVar& x, const RandVar& y) {
  return RandVar([x, y](const Key& k) -> std::optional<Key> {
    auto a = x(k);
    auto b = y(k);
    if (!a || !b) return std::nullopt;
    return encode_index(a->size()) + *a + *b;
  });
}

FiniteDist condition(const FiniteDist& p, const Event& e) {
  Rational pe = p.prob(e);
  if (pe == 0) throw ZeroMassEvent("conditioning on an event of probability zero");
  std::vector<FiniteDist::Entry> es;
  es.reserve(p.universe_size());
  for (const auto& [k, m] : p.entries()) {
    es.emplace_back(k, (m > 0 && e(k)) ? Rational(m / pe) : Rational(0));
  }
  return FiniteDist::from_entries(std::move(es));
}

FiniteDist pushforward(const FiniteDist& p, const RandVar& x) {
  std::vector<FiniteDist::Entry> es;
  es.reserve(p.universe_size());
  for (const auto& [k, m] : p.entries()) {
    auto v = x(k);
    if (!v) {
      if (m > 0) throw PartialFunction("random variable undefined on a support outcome");
      continue;
    }
    es.emplace_back(std::move(*v), m);
  }
  return FiniteDist::from_entries(std::move(es));
}

Rational tv_distance(const FiniteDist& p, const FiniteDist& q) {
  require_same_universe(p, q);
  Rational s = 0;
  for (std::size_t i = 0; i < p.entries().size(); ++i) {
    s += abs(p.entries()[i].second - q.entries()[i].second);
  }
  return s / 2;
}

double ln(const Rational& r) {
  if (r <= 0) throw DomainError("logarithm of a nonpositive rational");
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, r.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, r.get_den_mpz_t());
  return std::log(mn / md) + static_cast<double>(en - ed) * std::numbers::ln2;
}

double kl_divergence(const FiniteDist& p, const FiniteDist& q) {
  auto [pa, qa] = align(p, q);
  double s = 0;
  for (std::size_t i = 0; i < pa.entries().size(); ++i) {
    const Rational& pm = pa.entries()[i].second;
    const Rational& qm = qa.entries()[i].second;
    if (pm == 0) continue;
    if (qm == 0) return std::numeric_limits<double>::infinity();
    s += to_double(pm) * ln(Rational(pm / qm));
  }
  return std::max(s, 0.0);
}

namespace {

// Groups the entries of p by the value of x; unmapped support points throw.
std::map<Key, std::vector<FiniteDist::Entry>> group_by(const FiniteDist& p, const RandVar& x) {
  std::map<Key, std::vector<FiniteDist::Entry>> out;
  for (const auto& [k, m] : p.entries()) {
    auto v = x(k);
    if (!v) {
      if (m > 0) throw PartialFunction("random variable undefined on a support outcome");
      continue;
    }
    out[*v].emplace_back(k, m);
  }
  return out;
}

// Law of w over the entries of one group, normalized.
FiniteDist group_law(const std::vector<FiniteDist::Entry>& group, const RandVar& w) {
  std::vector<FiniteDist::Entry> es;
  for (const auto& [k, m] : group) {
    auto v = w(k);
    if (!v) {
      if (m > 0) throw PartialFunction("random variable undefined on a support outcome");
      continue;
    }
    es.emplace_back(std::move(*v), m);
  }
  return FiniteDist::from_weights(std::move(es));
}

Rational group_mass(const std::vector<FiniteDist::Entry>& group) {
  Rational s = 0;
  for (const auto& e : group) s += e.second;
  return s;
}

}  // namespace

double conditional_kl(const FiniteDist& p, const FiniteDist& q, const RandVar& w, const RandVar& x,
                      const RandVar& y, const RandVar& z) {
  auto pg = group_by(p, x);
  auto qg = group_by(q, z);
  double s = 0;
  for (const auto& [xv, group] : pg) {
    Rational px = group_mass(group);
    if (px == 0) continue;
    auto it = qg.find(xv);
    if (it == qg.end() || group_mass(it->second) == 0) return std::numeric_limits<double>::infinity();
    double term = kl_divergence(group_law(group, w), group_law(it->second, y));
    if (std::isinf(term)) return term;
    s += to_double(px) * term;
  }
  return s;
}

double entropy(const FiniteDist& p) {
  double h = 0;
  for (const auto& [k, m] : p.entries()) {
    if (m > 0) h -= to_double(m) * ln(m);
  }
  return std::max(h, 0.0);
}

double conditional_entropy(const FiniteDist& p, const RandVar& x, const RandVar& y) {
  double h = 0;
  for (const auto& [yv, group] : group_by(p, y)) {
    Rational py = group_mass(group);
    if (py == 0) continue;
    h += to_double(py) * entropy(group_law(group, x));
  }
  return h;
}

ExactCheck conditioned_tv_bound_check(const FiniteDist& p, const FiniteDist& q, const Event& e) {
  Rational pe = p.prob(e);
  if (pe == 0) throw ZeroMassEvent("conditioned_tv_bound_check: P(E) = 0");
  ExactCheck c;
  c.rhs = 2 * tv_distance(p, q) / pe;
  if (q.prob(e) == 0) {
    c.lhs = 1;
  } else {
    c.lhs = tv_distance(condition(p, e), condition(q, e));
  }
  c.holds = c.lhs <= c.rhs;
  return c;
}

FloatCheck pinsker_check(const FiniteDist& p, const FiniteDist& q) {
  FloatCheck c;
  auto [pa, qa] = align(p, q);
  c.lhs = to_double(tv_distance(pa, qa));
  c.rhs = std::sqrt(kl_divergence(pa, qa) / 2);
  c.holds = c.lhs <= c.rhs * (1 + 1e-12) + 1e-300;
  return c;
}

ExactCheck expectation_quotient_bound_check(const FiniteDist& p, const Event& e, const RandVar& x,
                                            const RandVar& y, const RandVar& z, const Rational& delta,
                                            const Rational& tau) {
  if (delta <= 0) throw DomainError("expectation_quotient_bound_check: delta must be positive");
  auto groups = group_by(p, z);
  Rational heavy = 0;
  Rational lhs = 0;
  Rational plain = 0;
  for (const auto& [zv, group] : groups) {
    Rational pz = group_mass(group);
    if (pz == 0) continue;
    Rational pe = 0;
    std::vector<FiniteDist::Entry> cond;
    for (const auto& [k, m] : group) {
      if (m > 0 && e(k)) {
        pe += m;
        cond.emplace_back(k, m);
      }
    }
    if (pe / pz >= delta) heavy += pz;
    auto [px, py] = align(group_law(group, x), group_law(group, y));
    plain += pz * tv_distance(px, py);
    if (pe == 0) {
      lhs += pz;
    } else {
      auto [cx, cy] = align(group_law(cond, x), group_law(cond, y));
      lhs += pz * tv_distance(cx, cy);
    }
  }
  if (heavy < 1 - tau) {
    throw PreconditionFailed("Pr_z[P(E|Z=z) >= delta] = " + to_string(heavy) + " < 1 - tau");
  }
  ExactCheck c;
  c.lhs = lhs;
  c.rhs = tau + 2 * plain / delta;
  c.holds = c.lhs <= c.rhs;
  return c;
}

double lambert_w(double y) {
  if (!(y >= 0)) throw DomainError("lambert_w: argument must be nonnegative");
  if (y == 0) return 0;
  if (std::isinf(y)) return y;
  double w = y < 1 ? y : std::log(y) - (y > 3 ? std::log(std::log(y)) : 0.0);
  if (w <= 0) w = 0.5;
  for (int it = 0; it < 100; ++it) {
    double ew = std::exp(w);
    double f = w * ew - y;
    double step = f / (ew * (w + 1));
    double next = w - step;
    if (next <= 0) next = w / 2;
    if (std::fabs(next - w) <= 1e-15 * std::fabs(next)) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

double tau_objective(double a, double b, double tau) { return a / std::log(1 / tau) + b / tau; }

TauOptimum optimum_tau(double a, double b) {
  if (!(b > 0) || !(a > 0) || a < std::numbers::e * b) {
    throw DomainError("optimum_tau requires A >= e*B > 0");
  }
  double y = a / b;
  double w = lambert_w(y);
  TauOptimum t;
  t.tau_star = std::exp(-w);
  t.value = 2 * a / w;
  t.bound = 4 * a / std::log(y);
  return t;
}

Key encode_index(std::uint64_t v) {
  Key k(8, '\0');
  for (int i = 7; i >= 0; --i) {
    k[static_cast<std::size_t>(i)] = static_cast<char>(v & 0xFF);
    v >>= 8;
  }
  return k;
}

Key encode_indices(std::span<const std::uint64_t> vs) {
  Key k;
  k.reserve(8 * vs.size());
  for (auto v : vs) k += encode_index(v);
  return k;
}

std::vector<std::uint64_t> decode_indices(const Key& k) {
  if (k.size() % 8 != 0) throw ParseError("index key length is not a multiple of 8");
  std::vector<std::uint64_t> out;
  for (std::size_t off = 0; off < k.size(); off += 8) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(k[off + i]);
    out.push_back(v);
  }
  return out;
}

Key encode_triple(const f2::F2Triple& x) {
  std::uint64_t vs[3] = {x[0].bits(), x[1].bits(), x[2].bits()};
  return encode_indices(vs);
}

f2::F2Triple decode_triple(const Key& k, int n) {
  auto vs = decode_indices(k);
  if (vs.size() != 3) throw ParseError("triple key must hold three indices");
  return f2::make_triple(n, vs[0], vs[1], vs[2]);
}

}  // namespace ghzlab::prob
