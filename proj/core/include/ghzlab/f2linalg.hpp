#pragma once

// Bit-packed linear algebra over F2.
//
// Vectors hold at most 64 coordinates packed into one machine word.
// Coordinate 0 is the most significant of the `len` used bits, so the
// integer order of `bits()` coincides with the lexicographic order of the
// coordinate sequence. Every table in the library that is "indexed by a
// vector" uses `bits()` as the index.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ghzlab::f2 {

class F2Vector {
 public:
  static constexpr int kMaxLen = 64;

  constexpr F2Vector() = default;
  explicit F2Vector(int len);

  static F2Vector from_bits(std::uint64_t bits, int len);
  /// Parses a string of '0'/'1' characters, coordinate 0 first.
  static F2Vector from_string(std::string_view s);
  static F2Vector unit(int len, int index);

  int size() const { return len_; }
  std::uint64_t bits() const { return bits_; }

  bool get(int i) const { return (bits_ >> (len_ - 1 - i)) & 1U; }
  void set(int i, bool v = true);
  void flip(int i) { bits_ ^= std::uint64_t{1} << (len_ - 1 - i); }

  bool is_zero() const { return bits_ == 0; }
  int weight() const;
  /// First coordinate holding a one, or -1 for the zero vector.
  int leading() const;
  std::vector<int> support() const;

  F2Vector& operator^=(const F2Vector& o);
  F2Vector& operator+=(const F2Vector& o) { return *this ^= o; }
  friend F2Vector operator+(F2Vector a, const F2Vector& b) { return a ^= b; }
  friend F2Vector operator-(F2Vector a, const F2Vector& b) { return a ^= b; }

  friend bool operator==(const F2Vector&, const F2Vector&) = default;
  friend std::strong_ordering operator<=>(const F2Vector& a, const F2Vector& b) {
    if (auto c = a.len_ <=> b.len_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

  std::string to_string() const;

  static constexpr std::uint64_t mask(int len) {
    return len >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
  }

 private:
  std::uint64_t bits_ = 0;
  int len_ = 0;
};

/// Inner product over F2.
bool dot(const F2Vector& a, const F2Vector& b);

class F2Matrix {
 public:
  F2Matrix() = default;
  F2Matrix(int nrows, int ncols);
  F2Matrix(std::vector<F2Vector> rows, int ncols);

  static F2Matrix from_strings(const std::vector<std::string>& rows);
  static F2Matrix identity(int n);

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }
  const F2Vector& row(int i) const { return rows_[i]; }
  F2Vector& row(int i) { return rows_[i]; }
  const std::vector<F2Vector>& row_list() const { return rows_; }

  F2Matrix transpose() const;
  /// x . A for a row vector x of length rows().
  F2Vector left_multiply(const F2Vector& x) const;
  /// A v for a column vector v of length cols().
  F2Vector right_multiply(const F2Vector& v) const;
  F2Matrix first_rows(int limit) const;

  friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

 private:
  std::vector<F2Vector> rows_;
  int cols_ = 0;
};

struct RrefResult {
  F2Matrix reduced;  // nonzero rows only
  std::vector<int> pivots;
  int rank = 0;
};

RrefResult rref(const F2Matrix& m);

/// Linear subspace of F2^n with its basis kept in reduced row-echelon form.
/// Equal subspaces have identical bases.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(int n);
  static Subspace full(int n);
  static Subspace span(int n, std::span<const F2Vector> generators);
  static Subspace span(int n, std::initializer_list<F2Vector> generators) {
    return span(n, std::span<const F2Vector>(generators.begin(), generators.size()));
  }

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int codim() const { return ambient_ - dim(); }
  std::uint64_t size() const { return std::uint64_t{1} << dim(); }

  const std::vector<F2Vector>& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return pivots_; }
  F2Matrix basis_matrix() const { return F2Matrix(basis_, ambient_); }

  bool contains(const F2Vector& v) const { return reduce(v).is_zero(); }
  /// Canonical representative of v + V: all pivot coordinates cleared.
  F2Vector reduce(const F2Vector& v) const;
  /// Coordinates of v (assumed in V) w.r.t. the canonical basis; length dim().
  F2Vector coords(const F2Vector& v) const;
  std::uint64_t coord_index(const F2Vector& v) const { return coords(v).bits(); }
  F2Vector element(const F2Vector& coords) const;
  F2Vector element(std::uint64_t coord_index) const;
  std::vector<F2Vector> elements(std::uint64_t budget = std::uint64_t{1} << 24) const;

  bool is_subspace_of(const Subspace& other) const;
  Subspace sum(const Subspace& other) const;
  /// {v in V : f . v = 0} for an ambient functional f.
  Subspace intersect_kernel(const F2Vector& functional) const;
  /// Kernel of the character chi_gamma, gamma given in basis coordinates.
  Subspace character_kernel(const F2Vector& gamma) const;
  /// {a in F2^n : a . v = 0 for all v in V}.
  Subspace annihilator() const;
  /// Basis vectors of V completing `sub` (a subspace of V) to a basis of V.
  std::vector<F2Vector> complement_basis(const Subspace& sub) const;
  /// The subspace of F2^dim() (basis coordinates) corresponding to sub <= V.
  Subspace to_coordinates(const Subspace& sub) const;
  /// Inverse of to_coordinates: a subspace of coordinate space mapped into V.
  Subspace from_coordinates(const Subspace& coord_sub) const;

  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b);

 private:
  int ambient_ = 0;
  std::vector<F2Vector> basis_;
  std::vector<int> pivots_;
};

/// {x in F2^{1 x rows} : x . A = 0}.
Subspace left_kernel_basis(const F2Matrix& a);
/// {v in F2^{cols} : A v = 0}.
Subspace right_kernel(const F2Matrix& a);

/// Nonempty index set S of the first `limit` rows with sum_{j in S} A_j = 0
/// (0-based indices, ascending). Chooses the lexicographically smallest
/// basis vector of the left kernel of the restricted matrix.
std::vector<int> subset_sum_zero(const F2Matrix& a, int limit);

/// One canonical representative per coset of U in V. Throws NotSubspaceOf.
std::vector<F2Vector> coset_reps(const Subspace& v, const Subspace& u);

/// Affine subspace shift + V of F2^n with canonical shift.
struct Coset {
  F2Vector shift;
  Subspace space;

  static Coset make(const F2Vector& shift, Subspace space);
  bool contains(const F2Vector& x) const { return space.contains(x - shift); }
  F2Vector element(std::uint64_t coord_index) const { return shift + space.element(coord_index); }
  std::uint64_t coord_index(const F2Vector& x) const { return space.coord_index(x - shift); }
  std::uint64_t size() const { return space.size(); }

  friend bool operator==(const Coset&, const Coset&) = default;
};

/// Element of F2^{3 x n}: one row per player.
using F2Triple = std::array<F2Vector, 3>;

F2Triple make_triple(int n, std::uint64_t r1, std::uint64_t r2, std::uint64_t r3);
F2Triple triple_add(const F2Triple& a, const F2Triple& b);
/// x1 + x2 + x3.
F2Vector row_sum(const F2Triple& x);
/// Column j as a 3-bit value (player 1 most significant).
unsigned column(const F2Triple& x, int j);
void set_column(F2Triple& x, int j, unsigned bits3);
std::string to_string(const F2Triple& x);
std::strong_ordering compare(const F2Triple& a, const F2Triple& b);

struct TripleLess {
  bool operator()(const F2Triple& a, const F2Triple& b) const { return compare(a, b) < 0; }
};

/// The set w + V^3 inside F2^{3 x n}.
class AffinePowerCoset {
 public:
  AffinePowerCoset() = default;
  AffinePowerCoset(const F2Triple& shift, Subspace space);

  static AffinePowerCoset full(int n);
  /// Coset of V^3 containing x.
  static AffinePowerCoset containing(const F2Triple& x, Subspace space);

  int n() const { return space_.ambient_dim(); }
  const F2Triple& shift() const { return shift_; }
  const Subspace& space() const { return space_; }
  int dim() const { return space_.dim(); }
  /// Codimension of w + V^3 in F2^{3 x n}.
  int codimension() const { return 3 * space_.codim(); }
  std::uint64_t size() const { return std::uint64_t{1} << (3 * dim()); }

  bool contains(const F2Triple& x) const;
  /// Canonical representative of x + V^3 (rowwise reduction).
  F2Triple reduce(const F2Triple& x) const;
  F2Triple element(std::uint64_t index) const;

  friend bool operator==(const AffinePowerCoset&, const AffinePowerCoset&) = default;
  friend std::strong_ordering operator<=>(const AffinePowerCoset& a, const AffinePowerCoset& b);

 private:
  F2Triple shift_{};
  Subspace space_;
};

class CosetRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = F2Triple;
    using difference_type = std::ptrdiff_t;
    using pointer = const F2Triple*;
    using reference = F2Triple;

    iterator() = default;
    iterator(const AffinePowerCoset* coset, std::uint64_t index) : coset_(coset), index_(index) {}
    F2Triple operator*() const { return coset_->element(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++index_;
      return t;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    const AffinePowerCoset* coset_ = nullptr;
    std::uint64_t index_ = 0;
  };

  explicit CosetRange(AffinePowerCoset coset) : coset_(std::move(coset)) {}
  iterator begin() const { return iterator(&coset_, 0); }
  iterator end() const { return iterator(&coset_, coset_.size()); }
  std::uint64_t size() const { return coset_.size(); }

 private:
  AffinePowerCoset coset_;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

/// Every element of w + V^3 exactly once. Throws BudgetExceeded.
CosetRange enumerate_coset(const AffinePowerCoset& w,
                           std::uint64_t budget = kDefaultEnumerationBudget);

/// Number of k-dimensional subspaces of F2^d (as a double; exact below 2^53).
double gaussian_binomial(int d, int k);

/// Calls fn(rows) for every k-dimensional subspace of F2^d, given by its
/// RREF basis rows (each of length d). Order: pivot sets lexicographically,
/// then free entries in increasing binary order.
void for_each_subspace(int d, int k, const std::function<void(const std::vector<F2Vector>&)>& fn);

}  // namespace ghzlab::f2
