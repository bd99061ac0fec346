#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mproj {

using Elem = std::uint64_t;

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// Arithmetic modulo a prime 2^20 < p < 2^32. Products of two reduced
// elements plus one more reduced element fit in 64 bits.
class PrimeField {
 public:
  static constexpr std::uint64_t kDefaultModulus = 2147483647ULL;

  // Throws ConfigError unless p is prime and in range.
  explicit PrimeField(std::uint64_t p = kDefaultModulus);

  std::uint64_t modulus() const noexcept { return p_; }

  Elem reduce(std::uint64_t x) const noexcept {
    std::uint64_t q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * barrett_) >> 64);
    std::uint64_t r = x - q * p_;
    return r >= p_ ? r - p_ : r;
  }
  Elem add(Elem a, Elem b) const noexcept {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const noexcept { return reduce(a * b); }
  // a + b*c without intermediate reduction.
  Elem mul_add(Elem a, Elem b, Elem c) const noexcept { return reduce(a + b * c); }
  Elem pow(Elem a, std::uint64_t e) const noexcept;
  // Throws std::domain_error on zero.
  Elem inv(Elem a) const;
  Elem from_int(std::int64_t v) const noexcept;

  bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

 private:
  std::uint64_t p_;
  std::uint64_t barrett_;
};

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::size_t cols, const std::vector<std::vector<Elem>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Elem> v);
  void swap_rows(std::size_t a, std::size_t b);
  void truncate_rows(std::size_t n);

  DenseMatrix transpose() const;
  const std::vector<Elem>& data() const noexcept { return data_; }

  bool operator==(const DenseMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

// Reduced row-echelon form: `rows` holds the nonzero rows only.
struct Echelon {
  DenseMatrix rows;
  std::vector<std::size_t> pivots;

  std::size_t rank() const noexcept { return pivots.size(); }
};

Echelon row_reduce(const PrimeField& f, DenseMatrix m);
std::size_t rank(const PrimeField& f, DenseMatrix m);
// Pivot columns of the row space, in increasing order.
std::vector<std::size_t> pivot_columns(const PrimeField& f, DenseMatrix m);

// Vectors v with m v = 0, one per free column:
// e_free - sum_r R[r][free] e_{pivot_r}.
std::vector<std::vector<Elem>> kernel_vectors(const PrimeField& f, const Echelon& e);

class Subspace {
 public:
  explicit Subspace(std::size_t ambient_dim = 0) : basis_(0, ambient_dim) {}

  // Row space of `generators`.
  static Subspace span(const PrimeField& f, const DenseMatrix& generators);
  static Subspace span(const PrimeField& f, std::size_t ambient_dim,
                       const std::vector<std::vector<Elem>>& generators);

  std::size_t ambient_dim() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return pivots_.size(); }
  const DenseMatrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  bool contains(const PrimeField& f, std::span<const Elem> v) const;

  bool operator==(const Subspace& o) const = default;

 private:
  DenseMatrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace kernel_basis(const PrimeField& f, const DenseMatrix& m);
Subspace subspace_sum(const PrimeField& f, const Subspace& a, const Subspace& b);
std::size_t coker_dim(std::size_t target_dim, const Subspace& image);
bool in_column_space(const PrimeField& f, const DenseMatrix& m, std::span<const Elem> v);

// Echelon basis grown one vector at a time. Rows are kept reduced against
// the pivots of earlier rows, so reducing a new vector is a single pass.
class IncrementalEchelon {
 public:
  IncrementalEchelon(const PrimeField& f, std::size_t cols) : field_(f), cols_(cols) {}

  // Returns true if v was independent of the current rows.
  bool insert(std::span<const Elem> v);
  bool contains(std::span<const Elem> v) const;

  std::size_t rank() const noexcept { return pivots_.size(); }
  std::size_t cols() const noexcept { return cols_; }

 private:
  void reduce_in_place(std::vector<Elem>& v) const;

  PrimeField field_;
  std::size_t cols_;
  std::vector<Elem> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace mproj
