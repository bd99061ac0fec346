#include "mproj/exactla.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mproj/errors.hpp"

namespace mproj {

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p), barrett_(0) {
  if (p <= (1ULL << 20) || p >= (1ULL << 32)) {
    throw ConfigError("modulus " + std::to_string(p) + " outside (2^20, 2^32)");
  }
  if (!is_prime(p)) throw ConfigError("modulus " + std::to_string(p) + " is not prime");
  barrett_ = ~0ULL / p;
}

Elem PrimeField::pow(Elem a, std::uint64_t e) const noexcept {
  Elem r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

Elem PrimeField::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return pow(a, p_ - 2);
}

Elem PrimeField::from_int(std::int64_t v) const noexcept {
  auto p = static_cast<std::int64_t>(p_);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return static_cast<Elem>(r);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::size_t cols, const std::vector<std::vector<Elem>>& rows) {
  DenseMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

void DenseMatrix::append_row(std::span<const Elem> v) {
  if (v.size() != cols_) throw DimensionMismatch("row length " + std::to_string(v.size()) +
                                                 " != " + std::to_string(cols_));
  data_.insert(data_.end(), v.begin(), v.end());
  ++rows_;
}

void DenseMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(data_.begin() + a * cols_, data_.begin() + (a + 1) * cols_, data_.begin() + b * cols_);
}

void DenseMatrix::truncate_rows(std::size_t n) {
  if (n >= rows_) return;
  rows_ = n;
  data_.resize(n * cols_);
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

namespace {

// dst -= c * src over columns [from, n).
void axpy_neg(const PrimeField& f, Elem* dst, const Elem* src, Elem c, std::size_t from, std::size_t n) {
  Elem nc = f.neg(c);
  for (std::size_t j = from; j < n; ++j) {
    if (src[j] != 0) dst[j] = f.mul_add(dst[j], nc, src[j]);
  }
}

void scale(const PrimeField& f, Elem* row, Elem c, std::size_t from, std::size_t n) {
  for (std::size_t j = from; j < n; ++j) row[j] = f.mul(row[j], c);
}

// Forward elimination; returns pivot columns. When `full` the result is
// reduced above the pivots as well.
std::vector<std::size_t> eliminate(const PrimeField& f, DenseMatrix& m, bool full) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    m.swap_rows(piv, r);
    Elem* prow = m.row(r).data();
    if (prow[c] != 1) scale(f, prow, f.inv(prow[c]), c, cols);
    for (std::size_t i = full ? 0 : r + 1; i < rows; ++i) {
      if (i == r) continue;
      Elem* row = m.row(i).data();
      if (row[c] != 0) axpy_neg(f, row, prow, row[c], c, cols);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

Echelon row_reduce(const PrimeField& f, DenseMatrix m) {
  Echelon e;
  e.pivots = eliminate(f, m, true);
  m.truncate_rows(e.pivots.size());
  e.rows = std::move(m);
  return e;
}

std::size_t rank(const PrimeField& f, DenseMatrix m) { return eliminate(f, m, false).size(); }

std::vector<std::size_t> pivot_columns(const PrimeField& f, DenseMatrix m) { return eliminate(f, m, false); }

std::vector<std::vector<Elem>> kernel_vectors(const PrimeField& f, const Echelon& e) {
  const std::size_t cols = e.rows.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<Elem>> out;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Elem> v(cols, 0);
    v[c] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = f.neg(e.rows(r, c));
    out.push_back(std::move(v));
  }
  return out;
}

Subspace Subspace::span(const PrimeField& f, const DenseMatrix& generators) {
  Echelon e = row_reduce(f, generators);
  Subspace s(generators.cols());
  s.basis_ = std::move(e.rows);
  s.pivots_ = std::move(e.pivots);
  return s;
}

Subspace Subspace::span(const PrimeField& f, std::size_t ambient_dim,
                        const std::vector<std::vector<Elem>>& generators) {
  return span(f, DenseMatrix::from_rows(ambient_dim, generators));
}

bool Subspace::contains(const PrimeField& f, std::span<const Elem> v) const {
  if (v.size() != ambient_dim()) throw DimensionMismatch("vector length does not match ambient dimension");
  std::vector<Elem> w(v.begin(), v.end());
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    Elem c = w[pivots_[r]];
    if (c != 0) axpy_neg(f, w.data(), basis_.row(r).data(), c, 0, w.size());
  }
  return std::all_of(w.begin(), w.end(), [](Elem x) { return x == 0; });
}

Subspace kernel_basis(const PrimeField& f, const DenseMatrix& m) {
  Echelon e = row_reduce(f, m);
  return Subspace::span(f, m.cols(), kernel_vectors(f, e));
}

Subspace subspace_sum(const PrimeField& f, const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionMismatch("subspace_sum: ambient " + std::to_string(a.ambient_dim()) + " vs " +
                            std::to_string(b.ambient_dim()));
  }
  DenseMatrix g = a.basis();
  for (std::size_t r = 0; r < b.dim(); ++r) g.append_row(b.basis().row(r));
  return Subspace::span(f, g);
}

std::size_t coker_dim(std::size_t target_dim, const Subspace& image) {
  if (image.ambient_dim() != target_dim) throw DimensionMismatch("coker_dim: image not in target");
  return target_dim - image.dim();
}

bool in_column_space(const PrimeField& f, const DenseMatrix& m, std::span<const Elem> v) {
  if (v.size() != m.rows()) throw DimensionMismatch("in_column_space: length mismatch");
  Subspace cols = Subspace::span(f, m.transpose());
  return cols.contains(f, v);
}

void IncrementalEchelon::reduce_in_place(std::vector<Elem>& v) const {
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    Elem c = v[pivots_[r]];
    if (c != 0) axpy_neg(field_, v.data(), rows_.data() + r * cols_, c, pivots_[r], cols_);
  }
}

bool IncrementalEchelon::insert(std::span<const Elem> v) {
  if (v.size() != cols_) throw DimensionMismatch("IncrementalEchelon: length mismatch");
  if (pivots_.size() == cols_) return false;
  std::vector<Elem> w(v.begin(), v.end());
  reduce_in_place(w);
  auto it = std::find_if(w.begin(), w.end(), [](Elem x) { return x != 0; });
  if (it == w.end()) return false;
  std::size_t p = static_cast<std::size_t>(it - w.begin());
  if (w[p] != 1) scale(field_, w.data(), field_.inv(w[p]), p, cols_);
  rows_.insert(rows_.end(), w.begin(), w.end());
  pivots_.push_back(p);
  return true;
}

bool IncrementalEchelon::contains(std::span<const Elem> v) const {
  if (v.size() != cols_) throw DimensionMismatch("IncrementalEchelon: length mismatch");
  std::vector<Elem> w(v.begin(), v.end());
  reduce_in_place(w);
  return std::all_of(w.begin(), w.end(), [](Elem x) { return x == 0; });
}

}  // namespace mproj
