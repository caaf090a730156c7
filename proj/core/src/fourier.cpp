#include "ghzlab/fourier.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include "ghzlab/errors.hpp"

namespace ghzlab::fourier {

using f2::Coset;
using f2::F2Vector;
using f2::Subspace;

namespace {

void check_budget(const char* what, int dim, int budget) {
  if (dim > budget) {
    throw BudgetExceeded(what, std::ldexp(1.0, dim), std::ldexp(1.0, budget));
  }
}

std::vector<std::int64_t> int_transform(const SubsetMask& m) {
  std::vector<std::int64_t> a(m.begin(), m.end());
  walsh_hadamard(std::span<std::int64_t>(a));
  return a;
}

void check_masks(const Subspace& v, const std::array<SubsetMask, 3>& events) {
  for (const auto& e : events) {
    if (e.size() != v.size()) throw ShapeMismatch("event mask size does not match 2^dim V");
  }
}

}  // namespace

int Character::operator()(const Subspace& space, const F2Vector& v) const {
  return dot(gamma, space.coords(v)) ? -1 : 1;
}

int Character::at_index(std::uint64_t c) const { return (std::popcount(gamma.bits() & c) & 1) ? -1 : 1; }

CosetFunction CosetFunction::from_fn(Coset carrier, const std::function<Rational(const F2Vector&)>& fn) {
  CosetFunction f;
  f.values.reserve(carrier.size());
  for (std::uint64_t i = 0; i < carrier.size(); ++i) f.values.push_back(fn(carrier.element(i)));
  f.carrier = std::move(carrier);
  return f;
}

CosetFunction CosetFunction::constant(Coset carrier, const Rational& c) {
  CosetFunction f;
  f.values.assign(carrier.size(), c);
  f.carrier = std::move(carrier);
  return f;
}

CosetFunction CosetFunction::character(Coset carrier, const Character& chi) {
  if (chi.gamma.size() != carrier.space.dim()) throw ShapeMismatch("character does not match carrier dimension");
  CosetFunction f;
  f.values.reserve(carrier.size());
  for (std::uint64_t i = 0; i < carrier.size(); ++i) f.values.emplace_back(chi.at_index(i));
  f.carrier = std::move(carrier);
  return f;
}

CosetFunction CosetFunction::indicator(Coset carrier, std::span<const F2Vector> members) {
  CosetFunction f = constant(std::move(carrier), Rational(0));
  for (const auto& m : members) {
    if (!f.carrier.contains(m)) throw DomainError("indicator member lies outside the carrier");
    f.values[f.carrier.coord_index(m)] = 1;
  }
  return f;
}

Density Density::uniform_on(Coset carrier, std::span<const F2Vector> members) {
  Density d{CosetFunction::indicator(std::move(carrier), members)};
  std::uint64_t count = 0;
  for (const auto& v : d.function.values) count += (v != 0);
  if (count == 0) throw ZeroMassEvent("density of the uniform distribution on an empty set");
  Rational scale = ratio(BigInt(d.function.carrier.size()), BigInt(count));
  for (auto& v : d.function.values) v *= scale;
  return d;
}

Density Density::of_masses(Coset carrier, const std::vector<Rational>& masses) {
  if (masses.size() != carrier.size()) throw ShapeMismatch("mass vector does not match carrier size");
  Density d{CosetFunction::constant(std::move(carrier), Rational(0))};
  Rational size(static_cast<unsigned long>(d.function.carrier.size()));
  for (std::size_t i = 0; i < masses.size(); ++i) d.function.values[i] = size * masses[i];
  return d;
}

Rational Density::mean() const {
  Rational s = 0;
  for (const auto& v : function.values) s += v;
  return s / static_cast<unsigned long>(function.values.size());
}

FourierTable transform(const CosetFunction& f, int budget) {
  check_budget("Fourier transform", f.dim(), budget);
  FourierTable t;
  t.space = f.carrier.space;
  t.coeffs = f.values;
  walsh_hadamard(std::span<Rational>(t.coeffs));
  Rational n(static_cast<unsigned long>(t.coeffs.size()));
  for (auto& c : t.coeffs) c /= n;
  return t;
}

CosetFunction inverse_transform(const FourierTable& t, const Coset& carrier) {
  if (!(carrier.space == t.space)) throw ShapeMismatch("inverse transform onto a different subspace");
  CosetFunction f;
  f.carrier = carrier;
  f.values = t.coeffs;
  walsh_hadamard(std::span<Rational>(f.values));
  return f;
}

Rational inner_product(const CosetFunction& f, const CosetFunction& g) {
  if (f.values.size() != g.values.size()) throw ShapeMismatch("inner product of functions on different spaces");
  Rational s = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * g.values[i];
  return s / static_cast<unsigned long>(f.values.size());
}

Rational inner_product(const FourierTable& f, const FourierTable& g) {
  if (f.coeffs.size() != g.coeffs.size()) throw ShapeMismatch("inner product of tables on different spaces");
  Rational s = 0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) s += f.coeffs[i] * g.coeffs[i];
  return s;
}

prob::ExactCheck parseval_check(const CosetFunction& f) {
  prob::ExactCheck c;
  c.lhs = inner_product(f, f);
  auto t = transform(f);
  c.rhs = inner_product(t, t);
  c.holds = c.lhs == c.rhs;
  return c;
}

SubsetMask mask_of(const Subspace& v, std::span<const F2Vector> members) {
  SubsetMask m(v.size(), 0);
  for (const auto& x : members) {
    if (!v.contains(x)) throw DomainError("subset member lies outside V");
    m[v.coord_index(x)] = 1;
  }
  return m;
}

ProductEventFormula ghz_product_event_prob(const Subspace& v, const std::array<SubsetMask, 3>& events) {
  check_masks(v, events);
  check_budget("product event enumeration", 2 * v.dim(), 2 * kDefaultTransformBudget);
  const std::uint64_t n = v.size();
  ProductEventFormula out;

  std::uint64_t hits = 0;
  for (std::uint64_t a = 0; a < n; ++a) {
    if (!events[0][a]) continue;
    for (std::uint64_t b = 0; b < n; ++b) {
      if (events[1][b] && events[2][a ^ b]) ++hits;
    }
  }
  out.lhs = ratio(BigInt(hits), BigInt(n) * n);

  std::array<std::vector<std::int64_t>, 3> h;
  for (int i = 0; i < 3; ++i) h[static_cast<std::size_t>(i)] = int_transform(events[static_cast<std::size_t>(i)]);
  BigInt acc = 0;
  for (std::uint64_t g = 0; g < n; ++g) {
    acc += BigInt(h[0][g]) * h[1][g] * h[2][g];
  }
  out.char_sum = ratio(acc, BigInt(n) * n * n);

  out.density_defined = true;
  std::array<FourierTable, 3> phis;
  Rational uniform_mass = 1;
  Coset carrier = Coset::make(F2Vector(v.ambient_dim()), v);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<F2Vector> members;
    for (std::uint64_t c = 0; c < n; ++c) {
      if (events[i][c]) members.push_back(v.element(c));
    }
    if (members.empty()) {
      out.density_defined = false;
      break;
    }
    uniform_mass *= ratio(BigInt(members.size()), BigInt(n));
    phis[i] = transform(Density::uniform_on(carrier, members).function);
  }
  if (out.density_defined) {
    Rational s = 0;
    for (std::uint64_t g = 0; g < n; ++g) s += phis[0].coeffs[g] * phis[1].coeffs[g] * phis[2].coeffs[g];
    out.density_form = uniform_mass * s;
  }
  return out;
}

prob::ExactCheck prob_diff_bound_check(const Subspace& v, const std::array<SubsetMask, 3>& events) {
  auto f = ghz_product_event_prob(v, events);
  const std::uint64_t n = v.size();
  BigInt sizes = 1;
  std::array<std::vector<std::int64_t>, 3> h;
  for (std::size_t i = 0; i < 3; ++i) {
    h[i] = int_transform(events[i]);
    sizes *= h[i][0];
  }
  BigInt cube = BigInt(n) * n * n;
  Rational u = ratio(sizes, cube);
  BigInt acc = 0;
  for (std::uint64_t g = 1; g < n; ++g) {
    acc += BigInt(std::abs(h[0][g])) * std::abs(h[1][g]) * std::abs(h[2][g]);
  }
  prob::ExactCheck c;
  c.lhs = abs(f.lhs - u);
  c.rhs = ratio(acc, cube);
  c.holds = c.lhs <= c.rhs;
  return c;
}

bool ghz_density_transform_check(const Subspace& v, int budget) {
  const int d = v.dim();
  check_budget("density transform on V^3", 3 * d, budget);
  const std::uint64_t n = v.size();
  const std::uint64_t total = n * n * n;
  std::vector<std::int64_t> a(total, 0);
  for (std::uint64_t c1 = 0; c1 < n; ++c1) {
    for (std::uint64_t c2 = 0; c2 < n; ++c2) {
      a[(c1 << (2 * d)) | (c2 << d) | (c1 ^ c2)] = static_cast<std::int64_t>(n);
    }
  }
  walsh_hadamard(std::span<std::int64_t>(a));
  const auto cube = static_cast<std::int64_t>(total);
  const std::uint64_t m = n - 1;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t g1 = (idx >> (2 * d)) & m, g2 = (idx >> d) & m, g3 = idx & m;
    std::int64_t expected = (g1 == g2 && g2 == g3) ? cube : 0;
    if (a[idx] != expected) return false;
  }
  return true;
}

PlayerFunction PlayerFunction::from_fn(const Subspace& v, int alphabet,
                                       const std::function<unsigned(const F2Vector&)>& fn) {
  PlayerFunction p;
  p.alphabet = alphabet;
  p.table.reserve(v.size());
  for (std::uint64_t i = 0; i < v.size(); ++i) {
    unsigned y = fn(v.element(i));
    if (y >= static_cast<unsigned>(alphabet)) throw DomainError("answer outside the declared alphabet");
    p.table.push_back(y);
  }
  return p;
}

ProductFunctionReport product_function_independence_check(const Subspace& v, const Subspace& w,
                                                          const std::array<PlayerFunction, 3>& ys,
                                                          double epsilon, int budget) {
  if (!w.is_subspace_of(v)) throw NotSubspaceOf("product_function_independence_check: W is not a subspace of V");
  check_budget("product-function enumeration", 2 * v.dim(), budget);
  for (const auto& y : ys) {
    if (y.table.size() != v.size()) throw ShapeMismatch("answer table does not match 2^dim V");
  }
  const int d = v.dim();
  const std::uint64_t n = v.size();
  const Subspace wc = v.to_coordinates(w);
  const std::uint64_t wsize = wc.size();
  const auto reps = f2::coset_reps(Subspace::full(d), wc);
  std::unordered_map<std::uint64_t, std::size_t> coset_of_rep;
  for (std::size_t i = 0; i < reps.size(); ++i) coset_of_rep[reps[i].bits()] = i;
  auto coset_index = [&](std::uint64_t c) {
    return coset_of_rep.at(wc.reduce(F2Vector::from_bits(c, d)).bits());
  };

  ProductFunctionReport r;

  // hypothesis: sum over (coset, y1) of |sum_{w in coset, Y1 = y1} chi(w - rep)| / (2 |V|)
  const int a1 = ys[0].alphabet;
  std::vector<std::int64_t> best(wsize, 0);
  for (const auto& rep : reps) {
    for (int y = 0; y < a1; ++y) {
      std::vector<std::int64_t> buf(wsize, 0);
      for (std::uint64_t k = 0; k < wsize; ++k) {
        std::uint64_t c = rep.bits() ^ wc.element(k).bits();
        buf[k] = ys[0].table[c] == static_cast<unsigned>(y) ? 1 : 0;
      }
      walsh_hadamard(std::span<std::int64_t>(buf));
      for (std::uint64_t g = 1; g < wsize; ++g) best[g] += std::abs(buf[g]);
    }
  }
  std::uint64_t arg = 0;
  for (std::uint64_t g = 1; g < wsize; ++g) {
    if (arg == 0 || best[g] > best[arg]) arg = g;
  }
  r.eps_witness = F2Vector::from_bits(arg, wc.dim());
  r.eps_meas = ratio(BigInt(arg == 0 ? 0 : best[arg]), BigInt(2 * n));

  // conclusion: average over coset pairs of d_TV(P_{Y|coset}, U_{Y|coset})
  const std::size_t ncos = reps.size();
  const int b1 = ys[0].alphabet, b2 = ys[1].alphabet, b3 = ys[2].alphabet;
  const std::size_t nans = static_cast<std::size_t>(b1) * b2 * b3;
  std::array<std::vector<std::int64_t>, 3> per_player;
  for (std::size_t i = 0; i < 3; ++i) {
    per_player[i].assign(ncos * static_cast<std::size_t>(ys[i].alphabet), 0);
    for (std::uint64_t c = 0; c < n; ++c) {
      per_player[i][coset_index(c) * static_cast<std::size_t>(ys[i].alphabet) + ys[i].table[c]] += 1;
    }
  }
  std::vector<std::size_t> cidx(n);
  for (std::uint64_t c = 0; c < n; ++c) cidx[c] = coset_index(c);
  std::vector<std::int64_t> joint(ncos * ncos * nans, 0);
  for (std::uint64_t c1 = 0; c1 < n; ++c1) {
    for (std::uint64_t c2 = 0; c2 < n; ++c2) {
      std::uint64_t c3 = c1 ^ c2;
      std::size_t y = (static_cast<std::size_t>(ys[0].table[c1]) * b2 + ys[1].table[c2]) * b3 + ys[2].table[c3];
      joint[(cidx[c1] * ncos + cidx[c2]) * nans + y] += 1;
    }
  }
  BigInt total = 0;
  for (std::size_t k1 = 0; k1 < ncos; ++k1) {
    for (std::size_t k2 = 0; k2 < ncos; ++k2) {
      std::size_t k3 = cidx[reps[k1].bits() ^ reps[k2].bits()];
      for (int y1 = 0; y1 < b1; ++y1) {
        for (int y2 = 0; y2 < b2; ++y2) {
          for (int y3 = 0; y3 < b3; ++y3) {
            std::size_t y = (static_cast<std::size_t>(y1) * b2 + y2) * b3 + y3;
            BigInt pcount = BigInt(joint[(k1 * ncos + k2) * nans + y]) * wsize;
            BigInt ucount = BigInt(per_player[0][k1 * b1 + y1]) * per_player[1][k2 * b2 + y2] *
                            per_player[2][k3 * b3 + y3];
            total += abs(pcount - ucount);
          }
        }
      }
    }
  }
  BigInt wcube = BigInt(wsize) * wsize * wsize;
  r.c_meas = ratio(total, 2 * wcube * ncos * ncos);

  const Rational scale(static_cast<unsigned long>(b2) * static_cast<unsigned long>(b3));
  r.bound = to_double(r.eps_meas) * std::sqrt(to_double(scale));
  r.holds = r.c_meas * r.c_meas <= r.eps_meas * r.eps_meas * scale;
  r.hypothesis_holds = to_double(r.eps_meas) <= epsilon;
  r.conclusion_holds = to_double(r.c_meas) <= epsilon * std::sqrt(to_double(scale));
  return r;
}

}  // namespace ghzlab::fourier
