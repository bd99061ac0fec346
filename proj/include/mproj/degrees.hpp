#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace mproj {

// A point of N^k: a multidegree or an element of the descendant poset.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

  static MultiIndex zero(std::size_t k) { return MultiIndex(std::vector<int>(k, 0)); }
  static MultiIndex unit(std::size_t k, std::size_t i);

  std::size_t size() const noexcept { return e_.size(); }
  int operator[](std::size_t i) const { return e_[i]; }
  const std::vector<int>& entries() const noexcept { return e_; }

  MultiIndex with(std::size_t i, int v) const;
  MultiIndex plus(std::size_t i, int t = 1) const { return with(i, e_[i] + t); }
  // Throws std::invalid_argument when the result would be negative.
  MultiIndex minus(std::size_t i, int t = 1) const { return with(i, e_[i] - t); }
  int total() const noexcept;

  std::string str() const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> e_;
};

// Componentwise a <= b.
bool leq(const MultiIndex& a, const MultiIndex& b);

std::vector<MultiIndex> immediate_descendants(const MultiIndex& a);
std::vector<MultiIndex> parents(const MultiIndex& a);
// b >= a componentwise and b != a. Throws DimensionMismatch on length mismatch.
bool is_descendant(const MultiIndex& b, const MultiIndex& a);
// Minimal elements in lexicographic order.
std::vector<MultiIndex> minimal_elements(const std::vector<MultiIndex>& s);

// {b : 0 <= b_i <= upper_i}.
class Box {
 public:
  explicit Box(MultiIndex upper) : upper_(std::move(upper)) {}
  static Box cube(std::size_t k, int side) { return Box(MultiIndex(std::vector<int>(k, side))); }

  const MultiIndex& upper() const noexcept { return upper_; }
  std::size_t k() const noexcept { return upper_.size(); }
  std::size_t cardinality() const;
  bool contains(const MultiIndex& a) const;
  // Lexicographic order, last slot fastest.
  std::vector<MultiIndex> points() const;

 private:
  MultiIndex upper_;
};

}  // namespace mproj
