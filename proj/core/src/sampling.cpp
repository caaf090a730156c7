#include "ghzlab/sampling.hpp"

#include "ghzlab/errors.hpp"

namespace ghzlab::sampling {

using f2::F2Vector;

F2Vector random_vector(int n, Rng& rng) { return F2Vector::from_bits(rng() & F2Vector::mask(n), n); }

f2::Subspace random_subspace(int n, int dim, Rng& rng) {
  if (dim < 0 || dim > n) throw DomainError("subspace dimension out of range");
  for (;;) {
    std::vector<F2Vector> gens;
    for (int k = 0; k < dim; ++k) gens.push_back(random_vector(n, rng));
    auto s = f2::Subspace::span(n, gens);
    if (s.dim() == dim) return s;
  }
}

f2::AffinePowerCoset random_coset(int n, int dim, Rng& rng, bool ghz_mass) {
  auto v = random_subspace(n, dim, rng);
  const F2Vector a = random_vector(n, rng);
  const F2Vector b = random_vector(n, rng);
  const F2Vector c = ghz_mass ? a + b : random_vector(n, rng);
  return f2::AffinePowerCoset({a, b, c}, std::move(v));
}

std::vector<std::uint8_t> random_mask(std::size_t size, double keep, Rng& rng) {
  std::bernoulli_distribution coin(keep);
  std::vector<std::uint8_t> m(size);
  for (auto& b : m) b = coin(rng) ? 1 : 0;
  return m;
}

partition::ProductEvent random_product_event(int n, double keep, double min_mass, Rng& rng) {
  const auto floor = from_double(min_mass);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    partition::ProductEvent e;
    e.n = n;
    for (auto& m : e.masks) m = random_mask(std::size_t{1} << n, keep, rng);
    const auto mass = e.ghz_mass();
    if (mass > 0 && mass >= floor) return e;
  }
  throw DomainError("could not sample an event with the requested mass");
}

std::vector<unsigned> random_table(std::size_t size, unsigned alphabet, Rng& rng) {
  std::uniform_int_distribution<unsigned> pick(0, alphabet - 1);
  std::vector<unsigned> t(size);
  for (auto& v : t) v = pick(rng);
  return t;
}

}  // namespace ghzlab::sampling
