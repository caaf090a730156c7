#include "ghzlab/f2linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ghzlab/errors.hpp"

namespace ghzlab::f2 {

F2Vector::F2Vector(int len) : len_(len) {
  if (len < 0 || len > kMaxLen) throw DomainError("F2Vector length out of range: " + std::to_string(len));
}

F2Vector F2Vector::from_bits(std::uint64_t bits, int len) {
  F2Vector v(len);
  v.bits_ = bits & mask(len);
  return v;
}

F2Vector F2Vector::from_string(std::string_view s) {
  F2Vector v(static_cast<int>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      v.set(static_cast<int>(i));
    } else if (s[i] != '0') {
      throw ParseError("invalid bit character in '" + std::string(s) + "'");
    }
  }
  return v;
}

F2Vector F2Vector::unit(int len, int index) {
  F2Vector v(len);
  v.set(index);
  return v;
}

void F2Vector::set(int i, bool v) {
  std::uint64_t b = std::uint64_t{1} << (len_ - 1 - i);
  if (v) {
    bits_ |= b;
  } else {
    bits_ &= ~b;
  }
}

int F2Vector::weight() const { return std::popcount(bits_); }

int F2Vector::leading() const {
  if (bits_ == 0) return -1;
  return len_ - 1 - (63 - std::countl_zero(bits_));
}

std::vector<int> F2Vector::support() const {
  std::vector<int> out;
  for (int i = 0; i < len_; ++i) {
    if (get(i)) out.push_back(i);
  }
  return out;
}

F2Vector& F2Vector::operator^=(const F2Vector& o) {
  if (o.len_ != len_) {
    throw ShapeMismatch("F2 vector lengths differ: " + std::to_string(len_) + " vs " + std::to_string(o.len_));
  }
  bits_ ^= o.bits_;
  return *this;
}

std::string F2Vector::to_string() const {
  std::string s(static_cast<std::size_t>(len_), '0');
  for (int i = 0; i < len_; ++i) {
    if (get(i)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

bool dot(const F2Vector& a, const F2Vector& b) {
  if (a.size() != b.size()) throw ShapeMismatch("dot product of vectors with different lengths");
  return std::popcount(a.bits() & b.bits()) & 1;
}

F2Matrix::F2Matrix(int nrows, int ncols) : rows_(static_cast<std::size_t>(nrows), F2Vector(ncols)), cols_(ncols) {}

F2Matrix::F2Matrix(std::vector<F2Vector> rows, int ncols) : rows_(std::move(rows)), cols_(ncols) {
  for (const auto& r : rows_) {
    if (r.size() != ncols) throw ShapeMismatch("matrix row has wrong length");
  }
}

F2Matrix F2Matrix::from_strings(const std::vector<std::string>& rows) {
  if (rows.empty()) return {};
  std::vector<F2Vector> rs;
  for (const auto& r : rows) rs.push_back(F2Vector::from_string(r));
  int c = rs.front().size();
  return F2Matrix(std::move(rs), c);
}

F2Matrix F2Matrix::identity(int n) {
  F2Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.rows_[static_cast<std::size_t>(i)].set(i);
  return m;
}

F2Matrix F2Matrix::transpose() const {
  F2Matrix t(cols_, rows());
  for (int i = 0; i < rows(); ++i) {
    for (int j = 0; j < cols_; ++j) {
      if (rows_[static_cast<std::size_t>(i)].get(j)) t.rows_[static_cast<std::size_t>(j)].set(i);
    }
  }
  return t;
}

F2Vector F2Matrix::left_multiply(const F2Vector& x) const {
  if (x.size() != rows()) throw ShapeMismatch("left_multiply: vector length != rows");
  F2Vector out(cols_);
  for (int i = 0; i < rows(); ++i) {
    if (x.get(i)) out ^= rows_[static_cast<std::size_t>(i)];
  }
  return out;
}

F2Vector F2Matrix::right_multiply(const F2Vector& v) const {
  if (v.size() != cols_) throw ShapeMismatch("right_multiply: vector length != cols");
  F2Vector out(rows());
  for (int i = 0; i < rows(); ++i) {
    if (dot(rows_[static_cast<std::size_t>(i)], v)) out.set(i);
  }
  return out;
}

F2Matrix F2Matrix::first_rows(int limit) const {
  limit = std::clamp(limit, 0, rows());
  return F2Matrix(std::vector<F2Vector>(rows_.begin(), rows_.begin() + limit), cols_);
}

RrefResult rref(const F2Matrix& m) {
  std::vector<F2Vector> rows = m.row_list();
  std::vector<int> pivots;
  std::size_t rank = 0;
  for (int c = 0; c < m.cols() && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p].get(c)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != rank && rows[i].get(c)) rows[i] ^= rows[rank];
    }
    pivots.push_back(c);
    ++rank;
  }
  rows.resize(rank);
  RrefResult out;
  out.reduced = F2Matrix(std::move(rows), m.cols());
  out.pivots = std::move(pivots);
  out.rank = static_cast<int>(rank);
  return out;
}

Subspace Subspace::zero(int n) {
  Subspace s;
  s.ambient_ = n;
  return s;
}

Subspace Subspace::full(int n) {
  Subspace s;
  s.ambient_ = n;
  for (int i = 0; i < n; ++i) {
    s.basis_.push_back(F2Vector::unit(n, i));
    s.pivots_.push_back(i);
  }
  return s;
}

Subspace Subspace::span(int n, std::span<const F2Vector> generators) {
  std::vector<F2Vector> gens(generators.begin(), generators.end());
  auto r = rref(F2Matrix(std::move(gens), n));
  Subspace s;
  s.ambient_ = n;
  s.basis_ = r.reduced.row_list();
  s.pivots_ = std::move(r.pivots);
  return s;
}

F2Vector Subspace::reduce(const F2Vector& v) const {
  if (v.size() != ambient_) throw ShapeMismatch("reduce: vector not in ambient space");
  F2Vector r = v;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (r.get(pivots_[k])) r ^= basis_[k];
  }
  return r;
}

F2Vector Subspace::coords(const F2Vector& v) const {
  if (v.size() != ambient_) throw ShapeMismatch("coords: vector not in ambient space");
  F2Vector c(dim());
  for (int k = 0; k < dim(); ++k) {
    if (v.get(pivots_[static_cast<std::size_t>(k)])) c.set(k);
  }
  return c;
}

F2Vector Subspace::element(const F2Vector& coords) const {
  if (coords.size() != dim()) throw ShapeMismatch("element: coordinate vector has wrong length");
  F2Vector v(ambient_);
  for (int k = 0; k < dim(); ++k) {
    if (coords.get(k)) v ^= basis_[static_cast<std::size_t>(k)];
  }
  return v;
}

F2Vector Subspace::element(std::uint64_t coord_index) const {
  return element(F2Vector::from_bits(coord_index, dim()));
}

std::vector<F2Vector> Subspace::elements(std::uint64_t budget) const {
  if (size() > budget) {
    throw BudgetExceeded("subspace enumeration", static_cast<double>(size()), static_cast<double>(budget));
  }
  std::vector<F2Vector> out;
  out.reserve(size());
  for (std::uint64_t i = 0; i < size(); ++i) out.push_back(element(i));
  return out;
}

bool Subspace::is_subspace_of(const Subspace& other) const {
  if (ambient_ != other.ambient_) return false;
  return std::all_of(basis_.begin(), basis_.end(), [&](const F2Vector& b) { return other.contains(b); });
}

Subspace Subspace::sum(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw ShapeMismatch("sum of subspaces in different ambient spaces");
  std::vector<F2Vector> g = basis_;
  g.insert(g.end(), other.basis_.begin(), other.basis_.end());
  return span(ambient_, g);
}

namespace {

Subspace kernel_of_values(const Subspace& s, const std::vector<F2Vector>& basis, const std::vector<bool>& vals) {
  std::vector<F2Vector> gens;
  int first = -1;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (vals[k] && first < 0) first = static_cast<int>(k);
  }
  if (first < 0) return s;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (!vals[k]) {
      gens.push_back(basis[k]);
    } else if (static_cast<int>(k) != first) {
      gens.push_back(basis[k] + basis[static_cast<std::size_t>(first)]);
    }
  }
  return Subspace::span(s.ambient_dim(), gens);
}

}  // namespace

Subspace Subspace::intersect_kernel(const F2Vector& functional) const {
  std::vector<bool> vals;
  for (const auto& b : basis_) vals.push_back(dot(functional, b));
  return kernel_of_values(*this, basis_, vals);
}

Subspace Subspace::character_kernel(const F2Vector& gamma) const {
  if (gamma.size() != dim()) throw ShapeMismatch("character index has wrong length");
  std::vector<bool> vals;
  for (int k = 0; k < dim(); ++k) vals.push_back(gamma.get(k));
  return kernel_of_values(*this, basis_, vals);
}

Subspace Subspace::annihilator() const {
  std::vector<bool> is_pivot(static_cast<std::size_t>(ambient_), false);
  for (int p : pivots_) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<F2Vector> gens;
  for (int f = 0; f < ambient_; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    F2Vector a = F2Vector::unit(ambient_, f);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      if (basis_[k].get(f)) a.set(pivots_[k]);
    }
    gens.push_back(a);
  }
  return span(ambient_, gens);
}

std::vector<F2Vector> Subspace::complement_basis(const Subspace& sub) const {
  if (!sub.is_subspace_of(*this)) throw NotSubspaceOf("complement_basis: argument is not a subspace");
  std::vector<F2Vector> out;
  Subspace acc = sub;
  for (const auto& b : basis_) {
    if (acc.contains(b)) continue;
    out.push_back(b);
    acc = acc.sum(span(ambient_, {b}));
  }
  return out;
}

Subspace Subspace::to_coordinates(const Subspace& sub) const {
  if (!sub.is_subspace_of(*this)) throw NotSubspaceOf("to_coordinates: argument is not a subspace");
  std::vector<F2Vector> gens;
  for (const auto& b : sub.basis()) gens.push_back(coords(b));
  return span(dim(), gens);
}

Subspace Subspace::from_coordinates(const Subspace& coord_sub) const {
  if (coord_sub.ambient_dim() != dim()) throw ShapeMismatch("from_coordinates: wrong coordinate dimension");
  std::vector<F2Vector> gens;
  for (const auto& c : coord_sub.basis()) gens.push_back(element(c));
  return span(ambient_, gens);
}

std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
  if (auto c = a.ambient_ <=> b.ambient_; c != 0) return c;
  if (auto c = a.dim() <=> b.dim(); c != 0) return c;
  for (std::size_t k = 0; k < a.basis_.size(); ++k) {
    if (auto c = a.basis_[k] <=> b.basis_[k]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Subspace left_kernel_basis(const F2Matrix& a) {
  const int n = a.rows();
  std::vector<F2Vector> rows = a.row_list();
  std::vector<F2Vector> track;
  for (int i = 0; i < n; ++i) track.push_back(F2Vector::unit(n, i));
  std::size_t rank = 0;
  for (int c = 0; c < a.cols() && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p].get(c)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    std::swap(track[p], track[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != rank && rows[i].get(c)) {
        rows[i] ^= rows[rank];
        track[i] ^= track[rank];
      }
    }
    ++rank;
  }
  std::vector<F2Vector> gens(track.begin() + static_cast<std::ptrdiff_t>(rank), track.end());
  return Subspace::span(n, gens);
}

Subspace right_kernel(const F2Matrix& a) {
  return Subspace::span(a.cols(), a.row_list()).annihilator();
}

std::vector<int> subset_sum_zero(const F2Matrix& a, int limit) {
  if (limit < 0 || limit > a.rows()) throw DomainError("subset_sum_zero: limit out of range");
  auto k = left_kernel_basis(a.first_rows(limit));
  if (k.dim() == 0) {
    throw NoZeroSubset("no nonempty subset of the first " + std::to_string(limit) + " rows sums to zero");
  }
  auto best = *std::min_element(k.basis().begin(), k.basis().end());
  return best.support();
}

std::vector<F2Vector> coset_reps(const Subspace& v, const Subspace& u) {
  if (!u.is_subspace_of(v)) throw NotSubspaceOf("coset_reps: U is not a subspace of V");
  auto comp = v.complement_basis(u);
  std::vector<F2Vector> out;
  const std::uint64_t count = std::uint64_t{1} << comp.size();
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    F2Vector x(v.ambient_dim());
    for (std::size_t k = 0; k < comp.size(); ++k) {
      if ((idx >> (comp.size() - 1 - k)) & 1U) x ^= comp[k];
    }
    out.push_back(u.reduce(x));
  }
  return out;
}

Coset Coset::make(const F2Vector& shift, Subspace space) {
  Coset c;
  c.shift = space.reduce(shift);
  c.space = std::move(space);
  return c;
}

F2Triple make_triple(int n, std::uint64_t r1, std::uint64_t r2, std::uint64_t r3) {
  return {F2Vector::from_bits(r1, n), F2Vector::from_bits(r2, n), F2Vector::from_bits(r3, n)};
}

F2Triple triple_add(const F2Triple& a, const F2Triple& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

F2Vector row_sum(const F2Triple& x) { return x[0] + x[1] + x[2]; }

unsigned column(const F2Triple& x, int j) {
  return (static_cast<unsigned>(x[0].get(j)) << 2) | (static_cast<unsigned>(x[1].get(j)) << 1) |
         static_cast<unsigned>(x[2].get(j));
}

void set_column(F2Triple& x, int j, unsigned bits3) {
  x[0].set(j, (bits3 >> 2) & 1U);
  x[1].set(j, (bits3 >> 1) & 1U);
  x[2].set(j, bits3 & 1U);
}

std::string to_string(const F2Triple& x) {
  return x[0].to_string() + "|" + x[1].to_string() + "|" + x[2].to_string();
}

std::strong_ordering compare(const F2Triple& a, const F2Triple& b) {
  for (int i = 0; i < 3; ++i) {
    if (auto c = a[static_cast<std::size_t>(i)] <=> b[static_cast<std::size_t>(i)]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

AffinePowerCoset::AffinePowerCoset(const F2Triple& shift, Subspace space) : space_(std::move(space)) {
  for (const auto& r : shift) {
    if (r.size() != space_.ambient_dim()) throw ShapeMismatch("coset shift has wrong length");
  }
  shift_ = reduce(shift);
}

AffinePowerCoset AffinePowerCoset::full(int n) {
  F2Vector z(n);
  return AffinePowerCoset({z, z, z}, Subspace::full(n));
}

AffinePowerCoset AffinePowerCoset::containing(const F2Triple& x, Subspace space) {
  return AffinePowerCoset(x, std::move(space));
}

bool AffinePowerCoset::contains(const F2Triple& x) const {
  for (int i = 0; i < 3; ++i) {
    auto k = static_cast<std::size_t>(i);
    if (x[k].size() != n()) return false;
    if (!space_.contains(x[k] - shift_[k])) return false;
  }
  return true;
}

F2Triple AffinePowerCoset::reduce(const F2Triple& x) const {
  return {space_.reduce(x[0]), space_.reduce(x[1]), space_.reduce(x[2])};
}

F2Triple AffinePowerCoset::element(std::uint64_t index) const {
  const int d = dim();
  const std::uint64_t m = F2Vector::mask(d);
  F2Triple out = shift_;
  out[0] ^= space_.element((index >> (2 * d)) & m);
  out[1] ^= space_.element((index >> d) & m);
  out[2] ^= space_.element(index & m);
  return out;
}

std::strong_ordering operator<=>(const AffinePowerCoset& a, const AffinePowerCoset& b) {
  if (auto c = a.space_ <=> b.space_; c != 0) return c;
  return compare(a.shift_, b.shift_);
}

CosetRange enumerate_coset(const AffinePowerCoset& w, std::uint64_t budget) {
  if (3 * w.dim() >= 63 || w.size() > budget) {
    throw BudgetExceeded("coset enumeration", std::pow(2.0, 3.0 * w.dim()), static_cast<double>(budget));
  }
  return CosetRange(w);
}

double gaussian_binomial(int d, int k) {
  if (k < 0 || k > d) return 0.0;
  double num = 1.0;
  for (int i = 0; i < k; ++i) {
    num *= (std::ldexp(1.0, d - i) - 1.0) / (std::ldexp(1.0, i + 1) - 1.0);
  }
  return std::round(num);
}

namespace {

void subspace_rec(int d, int k, int row, int min_col, std::vector<int>& piv,
                  const std::function<void(const std::vector<F2Vector>&)>& fn) {
  if (row == k) {
    std::vector<bool> is_pivot(static_cast<std::size_t>(d), false);
    for (int p : piv) is_pivot[static_cast<std::size_t>(p)] = true;
    // free positions per row: columns after the row's pivot that are not pivots
    std::vector<std::vector<int>> free(static_cast<std::size_t>(k));
    int total = 0;
    for (int r = 0; r < k; ++r) {
      for (int c = piv[static_cast<std::size_t>(r)] + 1; c < d; ++c) {
        if (!is_pivot[static_cast<std::size_t>(c)]) free[static_cast<std::size_t>(r)].push_back(c);
      }
      total += static_cast<int>(free[static_cast<std::size_t>(r)].size());
    }
    std::vector<F2Vector> rows(static_cast<std::size_t>(k), F2Vector(d));
    const std::uint64_t count = std::uint64_t{1} << total;
    for (std::uint64_t pat = 0; pat < count; ++pat) {
      int bit = total - 1;
      for (int r = 0; r < k; ++r) {
        auto& row_v = rows[static_cast<std::size_t>(r)];
        row_v = F2Vector::unit(d, piv[static_cast<std::size_t>(r)]);
        for (int c : free[static_cast<std::size_t>(r)]) {
          if ((pat >> bit) & 1U) row_v.set(c);
          --bit;
        }
      }
      fn(rows);
    }
    return;
  }
  for (int c = min_col; c <= d - (k - row); ++c) {
    piv.push_back(c);
    subspace_rec(d, k, row + 1, c + 1, piv, fn);
    piv.pop_back();
  }
}

}  // namespace

void for_each_subspace(int d, int k, const std::function<void(const std::vector<F2Vector>&)>& fn) {
  if (k < 0 || k > d) return;
  std::vector<int> piv;
  subspace_rec(d, k, 0, 0, piv, fn);
}

}  // namespace ghzlab::f2
