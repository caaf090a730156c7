#pragma once

// Seeded random instances for property suites and CLI trials.

#include <cstdint>
#include <random>
#include <vector>

#include "ghzlab/f2linalg.hpp"
#include "ghzlab/partition.hpp"

namespace ghzlab::sampling {

using Rng = std::mt19937_64;

f2::F2Vector random_vector(int n, Rng& rng);
/// Uniformly random spanning set, retried until the span has dimension `dim`.
f2::Subspace random_subspace(int n, int dim, Rng& rng);
/// w + V^3 with dim V = dim; when `ghz_mass` is set the shift satisfies w1 + w2 + w3 = 0.
f2::AffinePowerCoset random_coset(int n, int dim, Rng& rng, bool ghz_mass = true);
/// Each row value kept independently with probability `keep`; resampled until P(E) >= min_mass.
partition::ProductEvent random_product_event(int n, double keep, double min_mass, Rng& rng);
std::vector<std::uint8_t> random_mask(std::size_t size, double keep, Rng& rng);
std::vector<unsigned> random_table(std::size_t size, unsigned alphabet, Rng& rng);

}  // namespace ghzlab::sampling
