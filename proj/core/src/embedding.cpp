#include "ghzlab/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ghzlab/errors.hpp"

namespace ghzlab::embedding {

using f2::AffinePowerCoset;
using f2::F2Triple;
using f2::F2Vector;

f2::F2Matrix constraint_matrix(const f2::Subspace& v) {
  const auto ann = v.annihilator();
  return f2::F2Matrix(ann.basis(), v.ambient_dim()).transpose();
}

std::vector<F2Triple> ghz_support(const AffinePowerCoset& w, std::uint64_t budget) {
  const auto& v = w.space();
  const double need = std::ldexp(1.0, 2 * v.dim());
  if (need > static_cast<double>(budget)) throw BudgetExceeded("GHZ support enumeration", need, static_cast<double>(budget));
  std::vector<F2Triple> out;
  for (std::uint64_t a = 0; a < v.size(); ++a) {
    F2Vector x1 = w.shift()[0] + v.element(a);
    for (std::uint64_t b = 0; b < v.size(); ++b) {
      F2Vector x2 = w.shift()[1] + v.element(b);
      F2Vector x3 = x1 + x2;
      if (v.contains(x3 - w.shift()[2])) out.push_back({x1, x2, x3});
    }
  }
  std::sort(out.begin(), out.end(), f2::TripleLess{});
  return out;
}

prob::FiniteDist conditioned_distribution(const AffinePowerCoset& w) {
  auto s = ghz_support(w);
  if (s.empty()) throw EmptyIntersection("the coset has no GHZ query mass");
  std::vector<prob::Key> keys;
  keys.reserve(s.size());
  for (const auto& x : s) keys.push_back(prob::encode_triple(x));
  return prob::FiniteDist::uniform(keys);
}

std::vector<games::QueryMass> as_query_masses(const std::vector<F2Triple>& support) {
  if (support.empty()) throw EmptyIntersection("empty support");
  std::vector<games::QueryMass> out;
  out.reserve(support.size());
  Rational p(1, support.size());
  for (const auto& x : support) out.push_back({{x[0].bits(), x[1].bits(), x[2].bits()}, p});
  return out;
}

namespace {

f2::Subspace zero_sum_subsets(const AffinePowerCoset& w) { return f2::left_kernel_basis(constraint_matrix(w.space())); }

}  // namespace

std::vector<int> embeddable_coordinates(const AffinePowerCoset& w) {
  if (ghz_support(w).empty()) throw EmptyIntersection("the coset has no GHZ query mass");
  const auto k = zero_sum_subsets(w);
  std::uint64_t covered = 0;
  for (const auto& b : k.basis()) covered |= b.bits();
  return F2Vector::from_bits(covered, w.n()).support();
}

F2Triple LocalEmbedding::assemble(unsigned query, const F2Triple& r) const {
  return {maps[0]((query >> 2) & 1U, r), maps[1]((query >> 1) & 1U, r), maps[2](query & 1U, r)};
}

LocalEmbedding build_embedding(const AffinePowerCoset& w, int j) {
  const int n = w.n();
  if (j < 0 || j >= n) throw DomainError("coordinate index out of range");
  auto shared = ghz_support(w);
  if (shared.empty()) throw EmptyIntersection("the coset has no GHZ query mass");
  const auto k = zero_sum_subsets(w);
  const auto without_j = k.intersect_kernel(F2Vector::unit(n, j));
  if (without_j.dim() == k.dim()) {
    throw NotEmbeddable("coordinate " + std::to_string(j) + " lies in no zero-sum subset of constraint rows");
  }
  F2Vector any;
  for (const auto& b : k.basis()) {
    if (b.get(j)) {
      any = b;
      break;
    }
  }
  LocalEmbedding e;
  e.j = j;
  e.subset = without_j.reduce(any).support();
  e.shared = std::move(shared);
  std::vector<std::uint8_t> in_s(static_cast<std::size_t>(n), 0);
  for (int s : e.subset) in_s[static_cast<std::size_t>(s)] = 1;
  for (int i = 0; i < 3; ++i) {
    e.maps[static_cast<std::size_t>(i)] = [i, j, n, in_s](bool x, const F2Triple& r) {
      const F2Vector& row = r[static_cast<std::size_t>(i)];
      F2Vector out(n);
      for (int jp = 0; jp < n; ++jp) {
        bool bit;
        if (jp == j) {
          bit = x;
        } else if (in_s[static_cast<std::size_t>(jp)]) {
          bit = x ^ row.get(jp) ^ row.get(j);
        } else {
          bit = row.get(jp);
        }
        out.set(jp, bit);
      }
      return out;
    };
  }
  return e;
}

EmbeddingCertificate verify_embedding(const LocalEmbedding& emb, const AffinePowerCoset& w, std::uint64_t budget) {
  const auto support = ghz_support(w, budget);
  if (support.empty()) throw EmptyIntersection("the coset has no GHZ query mass");
  const double need = 4.0 * static_cast<double>(emb.shared.size());
  if (need > static_cast<double>(budget)) throw BudgetExceeded("embedding verification", need, static_cast<double>(budget));
  const int j = emb.j;
  const int n = w.n();
  const auto total = static_cast<std::int64_t>(support.size());

  EmbeddingCertificate c;
  c.subset = emb.subset;
  c.j = j;
  c.support_size = support.size();

  // (a) the j-th column of P~ is uniform on the query set
  std::map<unsigned, std::int64_t> col;
  for (const auto& x : support) col[f2::column(x, j)] += 1;
  for (unsigned q : kGhzQueries) {
    if (col[q] * 4 != total) {
      throw VerificationFailed("coordinate marginal of P~ differs from Q at query " + std::to_string(q));
    }
  }
  if (col.size() != kGhzQueries.size()) throw VerificationFailed("coordinate marginal of P~ leaves the query set");

  // (b) X^j independent of (differences inside S, columns outside S)
  std::vector<std::uint8_t> in_s(static_cast<std::size_t>(n), 0);
  for (int s : emb.subset) in_s[static_cast<std::size_t>(s)] = 1;
  auto rest_key = [&](const F2Triple& x) {
    std::string key;
    const unsigned cj = f2::column(x, j);
    for (int jp = 0; jp < n; ++jp) {
      if (jp == j) continue;
      unsigned cc = f2::column(x, jp);
      key.push_back(static_cast<char>(in_s[static_cast<std::size_t>(jp)] ? (cc ^ cj) : cc));
    }
    return key;
  };
  std::map<std::string, std::int64_t> rest;
  std::map<std::pair<unsigned, std::string>, std::int64_t> joint;
  for (const auto& x : support) {
    auto key = rest_key(x);
    rest[key] += 1;
    joint[{f2::column(x, j), key}] += 1;
  }
  for (const auto& [q, cq] : col) {
    for (const auto& [key, ck] : rest) {
      auto it = joint.find({q, key});
      std::int64_t cj = it == joint.end() ? 0 : it->second;
      if (cj * total != cq * ck) {
        throw VerificationFailed("X^j is not independent of the remaining coordinates at query " + std::to_string(q));
      }
    }
  }
  c.marginal = true;
  c.independence = true;

  // (c) P^(embed) = P~: each support point must be hit exactly 4 times over (q, r)
  std::map<F2Triple, std::int64_t, f2::TripleLess> hits;
  for (const auto& r : emb.shared) {
    for (unsigned q : kGhzQueries) {
      F2Triple x = emb.assemble(q, r);
      if (f2::column(x, j) != q) {
        throw VerificationFailed("embedded sample does not carry the query at coordinate j: " + f2::to_string(x));
      }
      hits[x] += 1;
    }
  }
  const auto expected = static_cast<std::int64_t>(4 * emb.shared.size()) / total;
  if (static_cast<std::int64_t>(4 * emb.shared.size()) != expected * total) {
    throw VerificationFailed("shared randomness size is incompatible with P~");
  }
  for (const auto& [x, h] : hits) {
    if (!std::binary_search(support.begin(), support.end(), x, f2::TripleLess{})) {
      throw VerificationFailed("P^(embed) charges a point outside the support of P~: " + f2::to_string(x));
    }
    if (h != expected) throw VerificationFailed("P^(embed) and P~ differ at " + f2::to_string(x));
  }
  if (hits.size() != support.size()) throw VerificationFailed("P^(embed) misses part of the support of P~");
  c.law = true;
  return c;
}

ShiftBijection shift_bijection(const AffinePowerCoset& w, const std::vector<int>& subset, unsigned q,
                               unsigned q_prime) {
  ShiftBijection b;
  b.points = ghz_support(w);
  const unsigned d = q ^ q_prime;
  std::map<F2Triple, std::size_t, f2::TripleLess> index;
  for (std::size_t i = 0; i < b.points.size(); ++i) index[b.points[i]] = i;
  const auto a = constraint_matrix(w.space());
  std::vector<std::uint8_t> hit(b.points.size(), 0);
  b.bijective = true;
  b.preserves_constraints = true;
  for (const auto& x : b.points) {
    F2Triple y = x;
    for (int jp : subset) f2::set_column(y, jp, f2::column(x, jp) ^ d);
    for (int i = 0; i < 3; ++i) {
      auto ii = static_cast<std::size_t>(i);
      if (!(a.left_multiply(y[ii]) == a.left_multiply(x[ii]))) b.preserves_constraints = false;
    }
    auto it = index.find(y);
    if (it == index.end()) {
      b.bijective = false;
      b.image.push_back(b.points.size());
      continue;
    }
    if (hit[it->second]++) b.bijective = false;
    b.image.push_back(it->second);
  }
  return b;
}

}  // namespace ghzlab::embedding
