#include "ghzlab/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "ghzlab/errors.hpp"
#include "ghzlab/fourier.hpp"

namespace ghzlab::partition {

using f2::AffinePowerCoset;
using f2::F2Triple;
using f2::F2Vector;
using f2::Subspace;

namespace {

constexpr double kTol = 1e-9;

void check_n(int n) {
  if (n < 1 || n > 20) throw DomainError("event dimension must lie in [1, 20]");
}

}  // namespace

ProductEvent ProductEvent::full(int n) {
  check_n(n);
  ProductEvent e;
  e.n = n;
  for (auto& m : e.masks) m.assign(std::size_t{1} << n, 1);
  return e;
}

ProductEvent ProductEvent::from_rows(int n, const std::array<std::vector<F2Vector>, 3>& rows) {
  check_n(n);
  ProductEvent e;
  e.n = n;
  for (std::size_t i = 0; i < 3; ++i) {
    e.masks[i].assign(std::size_t{1} << n, 0);
    for (const auto& v : rows[i]) {
      if (v.size() != n) throw ShapeMismatch("event row has wrong length");
      e.masks[i][v.bits()] = 1;
    }
  }
  return e;
}

ProductEvent ProductEvent::from_set(int n, const std::vector<F2Triple>& points) {
  std::array<std::vector<F2Vector>, 3> rows;
  for (const auto& x : points) {
    for (std::size_t i = 0; i < 3; ++i) rows[i].push_back(x[i]);
  }
  auto e = from_rows(n, rows);
  std::vector<F2Triple> uniq = points;
  std::sort(uniq.begin(), uniq.end(), f2::TripleLess{});
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::uint64_t product = 1;
  for (const auto& m : e.masks) product *= static_cast<std::uint64_t>(std::count(m.begin(), m.end(), 1));
  if (product != uniq.size()) throw NonProductEvent("point set is not a product of its row projections");
  return e;
}

bool ProductEvent::contains(const F2Triple& x) const {
  return masks[0][x[0].bits()] && masks[1][x[1].bits()] && masks[2][x[2].bits()];
}

Rational ProductEvent::ghz_mass() const {
  const std::uint64_t size = std::uint64_t{1} << n;
  std::uint64_t hits = 0;
  for (std::uint64_t a = 0; a < size; ++a) {
    if (!masks[0][a]) continue;
    for (std::uint64_t b = 0; b < size; ++b) {
      if (masks[1][b] && masks[2][a ^ b]) ++hits;
    }
  }
  return ratio(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(size * size)));
}

Subspace default_kernel(const Subspace& v, int m) {
  const int r = std::min(m, v.dim());
  std::vector<F2Vector> rest(v.basis().begin() + r, v.basis().end());
  return Subspace::span(v.ambient_dim(), rest);
}

AffinePartition AffinePartition::trivial(int n) {
  AffinePartition p;
  p.n_ = n;
  p.dim_ = n;
  return p;
}

AffinePowerCoset AffinePartition::part_of(const F2Triple& x) const {
  AffinePowerCoset part = AffinePowerCoset::full(n_);
  for (const auto& step : steps_) {
    auto it = step.kernels.find(part);
    Subspace u = it != step.kernels.end() ? it->second : default_kernel(part.space(), step.rank);
    part = AffinePowerCoset::containing(x, std::move(u));
  }
  return part;
}

std::vector<AffinePowerCoset> AffinePartition::parts(std::uint64_t budget) const {
  const double need = std::ldexp(1.0, 3 * codim());
  if (need > static_cast<double>(budget)) throw BudgetExceeded("partition part enumeration", need, static_cast<double>(budget));
  std::vector<AffinePowerCoset> cur{AffinePowerCoset::full(n_)};
  for (const auto& step : steps_) {
    std::vector<AffinePowerCoset> next;
    for (const auto& part : cur) {
      auto it = step.kernels.find(part);
      Subspace u = it != step.kernels.end() ? it->second : default_kernel(part.space(), step.rank);
      const auto reps = f2::coset_reps(part.space(), u);
      for (const auto& a : reps) {
        for (const auto& b : reps) {
          for (const auto& c : reps) {
            const auto& s = part.shift();
            next.emplace_back(F2Triple{s[0] + a, s[1] + b, s[2] + c}, u);
          }
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

AffinePartition AffinePartition::with_step(RefineStep step) const {
  AffinePartition p = *this;
  p.dim_ -= std::min(p.dim_, step.rank);
  p.steps_.push_back(std::move(step));
  return p;
}

AffinePartition refine(const AffinePartition& pi, const LinearRefiner& r) {
  if (r.m < 0) throw DomainError("compression level must be nonnegative");
  if (r.m == 0 || pi.dim() == 0) return pi;
  RefineStep step;
  step.rank = r.m;
  const int drop = std::min(r.m, pi.dim());
  for (const auto& [part, map] : r.maps) {
    if (part.n() != pi.n()) throw ShapeMismatch("refiner part has wrong length");
    Subspace u = part.space();
    for (const auto& a : map) u = u.intersect_kernel(a);
    if (part.dim() - u.dim() != drop) {
      throw RankDeficient("map has rank " + std::to_string(part.dim() - u.dim()) + " on a part, expected " +
                          std::to_string(drop));
    }
    step.kernels.emplace(part, std::move(u));
  }
  return pi.with_step(std::move(step));
}

namespace {

double kl_from_buckets(const std::vector<std::pair<std::int64_t, std::int64_t>>& buckets) {
  double tt = 0;
  double bt = 0;
  for (const auto& [t, b] : buckets) {
    tt += static_cast<double>(t);
    bt += static_cast<double>(b);
  }
  if (tt <= 0) return 0;
  const double shift = std::log(bt) - std::log(tt);
  double sum = 0;
  for (const auto& [t, b] : buckets) {
    if (t == 0) continue;
    if (b == 0) return std::numeric_limits<double>::infinity();
    const double td = static_cast<double>(t);
    sum += td / tt * (std::log(td) - std::log(static_cast<double>(b)) + shift);
  }
  return std::max(sum, 0.0);
}

// Row coordinates (w.r.t. the carrier's space) of every point.
std::vector<std::array<std::uint64_t, 3>> point_coords(const WeightedPair& pair) {
  const auto& v = pair.carrier.space();
  std::vector<std::array<std::uint64_t, 3>> out;
  out.reserve(pair.points.size());
  for (const auto& x : pair.points) {
    if (!pair.carrier.contains(x)) throw ShapeMismatch("point lies outside the carrier: " + f2::to_string(x));
    std::array<std::uint64_t, 3> c{};
    for (std::size_t i = 0; i < 3; ++i) c[i] = v.coord_index(x[i] - pair.carrier.shift()[i]);
    out.push_back(c);
  }
  return out;
}

class BucketKl {
 public:
  BucketKl(const WeightedPair& pair, int rank) : pair_(pair), coords_(point_coords(pair)), bits_(3 * rank) {
    if (bits_ <= 12) dense_.resize(std::size_t{1} << bits_);
  }

  double eval(const std::vector<std::uint64_t>& rows) {
    buckets_.clear();
    if (!dense_.empty()) {
      std::fill(dense_.begin(), dense_.end(), std::pair<std::int64_t, std::int64_t>{0, 0});
      for (std::size_t p = 0; p < coords_.size(); ++p) {
        auto& cell = dense_[key(rows, coords_[p])];
        cell.first += pair_.tilde[p];
        cell.second += pair_.base[p];
      }
      return kl_from_buckets(dense_);
    }
    std::unordered_map<std::uint64_t, std::pair<std::int64_t, std::int64_t>> sparse;
    for (std::size_t p = 0; p < coords_.size(); ++p) {
      auto& cell = sparse[key(rows, coords_[p])];
      cell.first += pair_.tilde[p];
      cell.second += pair_.base[p];
    }
    for (const auto& kv : sparse) buckets_.push_back(kv.second);
    return kl_from_buckets(buckets_);
  }

 private:
  static std::uint64_t key(const std::vector<std::uint64_t>& rows, const std::array<std::uint64_t, 3>& c) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (auto r : rows) k = (k << 1) | static_cast<std::uint64_t>(std::popcount(r & c[i]) & 1);
    }
    return k;
  }

  const WeightedPair& pair_;
  std::vector<std::array<std::uint64_t, 3>> coords_;
  int bits_;
  std::vector<std::pair<std::int64_t, std::int64_t>> dense_;
  std::vector<std::pair<std::int64_t, std::int64_t>> buckets_;
};

// Ambient functional agreeing on V with the coordinate functional gamma.
F2Vector lift_functional(const Subspace& v, std::uint64_t gamma) {
  F2Vector a(v.ambient_dim());
  for (int k = 0; k < v.dim(); ++k) {
    if ((gamma >> (v.dim() - 1 - k)) & 1U) a.set(v.pivots()[static_cast<std::size_t>(k)]);
  }
  return a;
}

void check_pair(const WeightedPair& pair) {
  if (pair.tilde.size() != pair.points.size() || pair.base.size() != pair.points.size()) {
    throw ShapeMismatch("weights and points differ in length");
  }
  for (std::size_t i = 0; i < pair.points.size(); ++i) {
    if (pair.tilde[i] < 0 || pair.base[i] < 0) throw DomainError("negative weight");
  }
}

}  // namespace

ClosenessReport d_m_closeness(const WeightedPair& pair, int m, const ClosenessOptions& opt) {
  if (m < 0) throw DomainError("compression level must be nonnegative");
  check_pair(pair);
  const auto& v = pair.carrier.space();
  const int d = v.dim();
  const int r = std::min(m, d);
  ClosenessReport rep;
  rep.m = m;
  if (r == 0) {
    rep.candidates = 1;
    return rep;
  }
  BucketKl kl(pair, r);
  const double count = f2::gaussian_binomial(d, r);
  std::vector<std::uint64_t> best_rows;
  double best = -1;
  auto consider = [&](const std::vector<std::uint64_t>& rows) {
    const double val = kl.eval(rows);
    ++rep.candidates;
    if (val > best) {
      best = val;
      best_rows = rows;
    }
  };
  if (count <= opt.subspace_budget) {
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(r));
    f2::for_each_subspace(d, r, [&](const std::vector<F2Vector>& basis) {
      for (std::size_t k = 0; k < basis.size(); ++k) rows[k] = basis[k].bits();
      consider(rows);
    });
  } else if (opt.heuristic) {
    rep.exact = false;
    std::mt19937_64 rng(opt.seed);
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(r));
    for (std::uint64_t s = 0; s < opt.samples; ++s) {
      std::vector<F2Vector> gens;
      for (auto& row : rows) {
        row = rng() & F2Vector::mask(d);
        gens.push_back(F2Vector::from_bits(row, d));
      }
      if (Subspace::span(d, gens).dim() != r) continue;
      consider(rows);
    }
    if (best < 0) {
      std::vector<std::uint64_t> id;
      for (int k = 0; k < r; ++k) id.push_back(std::uint64_t{1} << (d - 1 - k));
      consider(id);
    }
  } else {
    throw ExactSearchInfeasible("d_m search over " + std::to_string(count) + " kernels of codimension " +
                                std::to_string(r) + " in dimension " + std::to_string(d));
  }
  rep.value = best;
  for (auto g : best_rows) rep.witness.push_back(lift_functional(v, g));
  return rep;
}

ClosenessReport d_m_closeness(const prob::FiniteDist& xt, const prob::FiniteDist& x, const AffinePowerCoset& carrier,
                              int m, const ClosenessOptions& opt) {
  auto [pa, qa] = prob::align(xt, x);
  BigInt lcm = 1;
  for (const auto* dist : {&pa, &qa}) {
    for (const auto& [k, p] : dist->entries()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den_mpz_t());
  }
  WeightedPair pair;
  pair.carrier = carrier;
  auto to_weight = [&](const Rational& p) {
    BigInt w = p.get_num() * (lcm / p.get_den());
    if (!w.fits_slong_p()) throw DomainError("probabilities too fine for integer weights");
    return static_cast<std::int64_t>(w.get_si());
  };
  for (std::size_t i = 0; i < pa.entries().size(); ++i) {
    pair.points.push_back(prob::decode_triple(pa.entries()[i].first, carrier.n()));
    pair.tilde.push_back(to_weight(pa.entries()[i].second));
    pair.base.push_back(to_weight(qa.entries()[i].second));
  }
  return d_m_closeness(pair, m, opt);
}

double compressed_kl(const WeightedPair& pair, const LinearMap& phi) {
  check_pair(pair);
  std::map<std::vector<std::uint8_t>, std::pair<std::int64_t, std::int64_t>> cells;
  for (std::size_t p = 0; p < pair.points.size(); ++p) {
    std::vector<std::uint8_t> key;
    for (const auto& row : pair.points[p]) {
      for (const auto& a : phi) key.push_back(static_cast<std::uint8_t>(f2::dot(a, row)));
    }
    auto& cell = cells[key];
    cell.first += pair.tilde[p];
    cell.second += pair.base[p];
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> buckets;
  for (const auto& kv : cells) buckets.push_back(kv.second);
  return kl_from_buckets(buckets);
}

std::vector<PartMasses> split_by_part(const AffinePartition& pi, const ProductEvent& e) {
  if (e.n != pi.n()) throw ShapeMismatch("event and partition differ in n");
  const int n = e.n;
  const std::uint64_t size = std::uint64_t{1} << n;
  std::map<AffinePowerCoset, std::size_t> index;
  std::vector<PartMasses> out;
  std::int64_t in_e = 0;
  for (std::uint64_t a = 0; a < size; ++a) {
    for (std::uint64_t b = 0; b < size; ++b) {
      const F2Triple x = f2::make_triple(n, a, b, a ^ b);
      auto part = pi.part_of(x);
      auto [it, fresh] = index.try_emplace(part, out.size());
      if (fresh) {
        out.emplace_back();
        out.back().pair.carrier = part;
      }
      auto& pm = out[it->second];
      const bool hit = e.contains(x);
      pm.pair.points.push_back(x);
      pm.pair.tilde.push_back(hit ? 1 : 0);
      pm.pair.base.push_back(1);
      in_e += hit ? 1 : 0;
    }
  }
  if (in_e == 0) throw ZeroMassEvent("event has no mass under the GHZ query distribution");
  for (auto& pm : out) {
    std::int64_t t = 0;
    for (auto w : pm.pair.tilde) t += w;
    pm.tilde_mass = static_cast<double>(t) / static_cast<double>(in_e);
  }
  return out;
}

double potential(const AffinePartition& pi, const ProductEvent& e) {
  double phi = 0;
  for (const auto& pm : split_by_part(pi, e)) {
    if (pm.tilde_mass == 0) continue;
    std::vector<std::pair<std::int64_t, std::int64_t>> buckets;
    for (std::size_t p = 0; p < pm.pair.points.size(); ++p) buckets.emplace_back(pm.pair.tilde[p], pm.pair.base[p]);
    phi += pm.tilde_mass * kl_from_buckets(buckets);
  }
  return phi;
}

Distinguisher find_distinguisher(const AffinePartition& pi, const ProductEvent& e, int m, double delta,
                                 const ClosenessOptions& opt) {
  Distinguisher d;
  LinearRefiner r;
  r.m = m;
  for (const auto& pm : split_by_part(pi, e)) {
    if (pm.tilde_mass == 0) continue;
    auto rep = d_m_closeness(pm.pair, m, opt);
    d.expected_dm += pm.tilde_mass * rep.value;
    if (!rep.witness.empty()) r.maps.emplace(pm.pair.carrier, std::move(rep.witness));
  }
  if (d.expected_dm > delta) d.refiner = std::move(r);
  return d;
}

PartitionResult pseudorandom_partition(const ProductEvent& e, double delta, int m, const ClosenessOptions& opt) {
  if (!(delta > 0)) throw DomainError("delta must be positive");
  if (m < 1) throw DomainError("compression level must be at least 1");
  const Rational mass = e.ghz_mass();
  if (mass == 0) throw ZeroMassEvent("event has no mass under the GHZ query distribution");
  PartitionResult res;
  res.delta_kl = -prob::ln(mass);
  res.partition = AffinePartition::trivial(e.n);
  const int max_rounds = static_cast<int>(std::ceil(res.delta_kl / delta));
  double phi = potential(res.partition, e);
  for (int round = 0;; ++round) {
    auto d = find_distinguisher(res.partition, e, m, delta, opt);
    TraceRecord rec;
    rec.round = round;
    rec.phi = phi;
    rec.codim = res.partition.codim();
    rec.expected_dm = d.expected_dm;
    for (const auto& pm : split_by_part(res.partition, e)) rec.parts += pm.tilde_mass > 0 ? 1 : 0;
    rec.witnesses = d.refiner ? d.refiner->maps.size() : 0;
    res.trace.push_back(rec);
    if (!d.refiner) {
      res.final_ok = d.expected_dm <= delta + kTol;
      break;
    }
    if (round >= max_rounds + 1) {
      res.rounds_ok = false;
      res.final_ok = false;
      break;
    }
    res.partition = refine(res.partition, *d.refiner);
    ++res.rounds;
    const double next = potential(res.partition, e);
    if (!(next < phi - delta + kTol)) res.decreasing = false;
    phi = next;
  }
  if (res.rounds > max_rounds) res.rounds_ok = false;
  if (res.partition.codim() > static_cast<double>(m) * res.delta_kl / delta + kTol) res.codim_ok = false;
  return res;
}

namespace {

double binary_entropy(double p) {
  double h = 0;
  if (p > 0) h -= p * std::log(p);
  if (p < 1) h -= (1 - p) * std::log1p(-p);
  return h;
}

std::vector<unsigned> answer_table(const f2::Coset& row_coset, const AnswerMap& f1) {
  const int d = row_coset.space.dim();
  std::vector<unsigned> g(std::size_t{1} << d);
  for (std::uint64_t c = 0; c < g.size(); ++c) {
    g[c] = f1.fn(row_coset.element(c));
    if (g[c] >= f1.alphabet) throw DomainError("answer outside the alphabet");
  }
  return g;
}

// Sum over cosets c + U and answers y of (n_{c,y} / N) ln n_{c,y}.
double mean_log_cell(const std::vector<unsigned>& g, const Subspace& u, unsigned alphabet) {
  const int d = u.ambient_dim();
  const double total = std::ldexp(1.0, d);
  std::vector<std::int64_t> counts(alphabet);
  double acc = 0;
  for (const auto& rep : f2::coset_reps(Subspace::full(d), u)) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t k = 0; k < u.size(); ++k) ++counts[g[(rep + u.element(k)).bits()]];
    for (auto c : counts) {
      if (c > 0) acc += static_cast<double>(c) / total * std::log(static_cast<double>(c));
    }
  }
  return acc;
}

double z_from_table(const std::vector<unsigned>& g, const Subspace& u, unsigned alphabet) {
  return u.dim() * std::log(2.0) - mean_log_cell(g, u, alphabet);
}

// b(gamma) for every character gamma of U (index = gamma in U's coordinates).
std::vector<double> character_gains(const std::vector<unsigned>& g, const Subspace& u, unsigned alphabet) {
  const int d = u.ambient_dim();
  const double total = std::ldexp(1.0, d);
  const double ln2 = std::log(2.0);
  std::vector<double> gain(u.size(), 0.0);
  std::vector<std::vector<std::int64_t>> ind(alphabet, std::vector<std::int64_t>(u.size()));
  for (const auto& rep : f2::coset_reps(Subspace::full(d), u)) {
    for (auto& row : ind) std::fill(row.begin(), row.end(), 0);
    for (std::uint64_t k = 0; k < u.size(); ++k) ind[g[(rep + u.element(k)).bits()]][k] = 1;
    for (auto& row : ind) {
      fourier::walsh_hadamard(std::span<std::int64_t>(row));
      const std::int64_t cnt = row[0];
      if (cnt == 0) continue;
      const double weight = static_cast<double>(cnt) / total;
      for (std::uint64_t gamma = 1; gamma < u.size(); ++gamma) {
        const double plus = static_cast<double>((cnt + row[gamma]) / 2);
        gain[gamma] += weight * (ln2 - binary_entropy(plus / static_cast<double>(cnt)));
      }
    }
  }
  return gain;
}

}  // namespace

double z_potential(const f2::Coset& row_coset, const Subspace& u_coords, const AnswerMap& f1) {
  if (u_coords.ambient_dim() != row_coset.space.dim()) throw ShapeMismatch("U must live in coordinates of V");
  return z_from_table(answer_table(row_coset, f1), u_coords, f1.alphabet);
}

StrategyRefinement strategy_refinement(const AffinePowerCoset& w, const AnswerMap& f1, int j, double delta,
                                       std::uint64_t budget) {
  const int n = w.n();
  if (j < 0 || j >= n) throw DomainError("coordinate index out of range");
  if (!(delta > 0)) throw DomainError("delta must be positive");
  if (f1.alphabet == 0 || !f1.fn) throw DomainError("answer map is empty");
  const auto& v = w.space();
  const int d = v.dim();
  const double work = std::ldexp(1.0, d) * f1.alphabet;
  if (work > static_cast<double>(budget)) throw BudgetExceeded("character search", work, static_cast<double>(budget));
  if (!v.contains(f2::row_sum(w.shift()))) throw EmptyIntersection("the coset has no GHZ query mass");

  const auto row_coset = f2::Coset::make(w.shift()[0], v);
  const auto g = answer_table(row_coset, f1);

  F2Vector pin(d);
  for (int k = 0; k < d; ++k) pin.set(k, v.basis()[static_cast<std::size_t>(k)].get(j));
  Subspace u = Subspace::full(d).intersect_kernel(pin);

  StrategyRefinement res;
  res.z_initial = z_from_table(g, u, f1.alphabet);
  const double z_cap = f1.alphabet <= 2 ? 1.0 : std::log(static_cast<double>(f1.alphabet));
  res.z_initial_ok = res.z_initial <= z_cap + kTol;

  double z = res.z_initial;
  for (;;) {
    if (u.dim() == 0) {
      res.final_max_b = 0;
      break;
    }
    const auto gain = character_gains(g, u, f1.alphabet);
    std::uint64_t best = 1;
    for (std::uint64_t gamma = 2; gamma < gain.size(); ++gamma) {
      if (gain[gamma] > gain[best] + 1e-12) best = gamma;
    }
    if (gain[best] <= delta) {
      res.final_max_b = gain[best];
      break;
    }
    RefinementRound rd;
    rd.gamma = F2Vector::from_bits(best, u.dim());
    rd.b = gain[best];
    rd.z_before = z;
    u = u.character_kernel(rd.gamma);
    z = z_from_table(g, u, f1.alphabet);
    rd.z_after = z;
    if (!(rd.z_after <= rd.z_before - rd.b + kTol)) res.z_decrease_ok = false;
    res.rounds.push_back(rd);
  }

  res.u = v.from_coordinates(u);
  res.codim = d - u.dim();
  res.pinned = std::all_of(res.u.basis().begin(), res.u.basis().end(), [j](const F2Vector& b) { return !b.get(j); });
  res.codim_ok = res.codim <= static_cast<int>(std::ceil(1.0 / delta)) + 1;
  res.bound_ok = res.final_max_b <= delta;
  return res;
}

}  // namespace ghzlab::partition
