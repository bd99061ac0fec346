#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "mproj/degrees.hpp"
#include "mproj/exactla.hpp"

namespace mproj {

// Shape (n_1,...,n_k) of P^{n_1} x ... x P^{n_k}.
class Space {
 public:
  Space() = default;
  explicit Space(std::vector<int> dims);
  Space(std::initializer_list<int> dims) : Space(std::vector<int>(dims)) {}

  std::size_t k() const noexcept { return dims_.size(); }
  int n(std::size_t i) const { return dims_.at(i); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  int total_dim() const noexcept;
  std::string str() const;

  bool operator==(const Space&) const = default;

 private:
  std::vector<int> dims_;
};

// Per-factor coordinate vectors of a point of X.
using Point = std::vector<std::vector<Elem>>;

// Throws std::overflow_error if the value does not fit in 64 bits.
std::uint64_t binomial(std::int64_t n, std::int64_t k);
// N(a) = prod C(n_i + a_i, n_i).
std::uint64_t count_monomials(const Space& x, const MultiIndex& a);

struct Monomial {
  std::vector<std::vector<int>> exps;

  MultiIndex degree() const;
  Monomial operator*(const Monomial& o) const;
  std::string str() const;

  auto operator<=>(const Monomial&) const = default;
};

// Degree-d monomials in n+1 variables, lex order with x_0 largest.
class FactorBasis {
 public:
  FactorBasis(int n, int d);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return size_; }
  std::span<const int> exps(std::size_t idx) const {
    return {exps_.data() + idx * static_cast<std::size_t>(n_ + 1), static_cast<std::size_t>(n_ + 1)};
  }
  std::size_t index_of(std::span<const int> exps) const;
  // Index of x_j * m in the degree d+1 basis.
  std::size_t times_var(std::size_t idx, int j) const {
    return mult_[idx * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(j)];
  }

 private:
  int n_, d_;
  std::size_t size_;
  std::vector<int> exps_;
  std::vector<std::size_t> mult_;
};

// Shared, lazily built; safe to call from several threads.
const FactorBasis& factor_basis(int n, int d);

// basis(X, a) as a mixed-radix product of factor bases, factor 1 most
// significant.
class MonomialIndexer {
 public:
  MonomialIndexer(const Space& x, const MultiIndex& a);

  std::size_t size() const noexcept { return size_; }
  std::size_t k() const noexcept { return factors_.size(); }
  const FactorBasis& factor(std::size_t i) const { return *factors_[i]; }
  std::size_t stride(std::size_t i) const { return strides_[i]; }
  std::size_t index(std::span<const std::size_t> per_factor) const;
  void decode(std::size_t idx, std::span<std::size_t> per_factor) const;
  Monomial monomial(std::size_t idx) const;
  std::size_t index_of(const Monomial& m) const;

 private:
  std::vector<const FactorBasis*> factors_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
};

std::vector<Monomial> basis(const Space& x, const MultiIndex& a);
// Throws std::out_of_range for a bad factor or variable index.
Monomial mult_by_var(const Monomial& m, std::size_t i, std::size_t j);
// Throws DimensionMismatch on coordinate-length mismatch and
// std::invalid_argument when some factor's coordinates are all zero.
Elem evaluate(const PrimeField& f, const Monomial& m, const Point& p);

// Values at `coords` of every degree-d monomial in n+1 variables.
std::vector<Elem> factor_values(const PrimeField& f, int n, int d, std::span<const Elem> coords);
// sum_j dir_j * d/dx_j of every degree-d monomial, at `coords`.
std::vector<Elem> factor_derivative(const PrimeField& f, int n, int d, std::span<const Elem> coords,
                                    std::span<const Elem> dir);
// Values of all of basis(X, a) at p (Kronecker product of factor values).
std::vector<Elem> monomial_values(const PrimeField& f, const Space& x, const MultiIndex& a, const Point& p);
// Kronecker product u (x) v, u most significant.
std::vector<Elem> kron(const PrimeField& f, std::span<const Elem> u, std::span<const Elem> v);

}  // namespace mproj
