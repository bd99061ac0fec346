#include "mproj/degrees.hpp"

#include <algorithm>
#include <stdexcept>

#include "mproj/errors.hpp"

namespace mproj {

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  if (e_.empty()) throw std::invalid_argument("multi-index must have at least one entry");
  for (int v : e_)
    if (v < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
}

MultiIndex MultiIndex::unit(std::size_t k, std::size_t i) {
  std::vector<int> e(k, 0);
  e.at(i) = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::with(std::size_t i, int v) const {
  std::vector<int> e = e_;
  e.at(i) = v;
  return MultiIndex(std::move(e));
}

int MultiIndex::total() const noexcept {
  int s = 0;
  for (int v : e_) s += v;
  return s;
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e_[i]);
  }
  return s + ")";
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw DimensionMismatch("multi-index length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::vector<MultiIndex> immediate_descendants(const MultiIndex& a) {
  std::vector<MultiIndex> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a.plus(i));
  return out;
}

std::vector<MultiIndex> parents(const MultiIndex& a) {
  std::vector<MultiIndex> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0) out.push_back(a.minus(i));
  return out;
}

bool is_descendant(const MultiIndex& b, const MultiIndex& a) { return leq(a, b) && a != b; }

std::vector<MultiIndex> minimal_elements(const std::vector<MultiIndex>& s) {
  std::vector<MultiIndex> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<MultiIndex> out;
  for (const auto& b : sorted) {
    bool minimal = std::none_of(sorted.begin(), sorted.end(),
                                [&](const MultiIndex& a) { return is_descendant(b, a); });
    if (minimal) out.push_back(b);
  }
  return out;
}

std::size_t Box::cardinality() const {
  std::size_t n = 1;
  for (int v : upper_.entries()) n *= static_cast<std::size_t>(v) + 1;
  return n;
}

bool Box::contains(const MultiIndex& a) const { return a.size() == k() && leq(a, upper_); }

std::vector<MultiIndex> Box::points() const {
  std::vector<MultiIndex> out;
  out.reserve(cardinality());
  std::vector<int> cur(k(), 0);
  while (true) {
    out.emplace_back(cur);
    std::size_t i = k();
    while (i > 0) {
      --i;
      if (cur[i] < upper_[i]) {
        ++cur[i];
        break;
      }
      cur[i] = 0;
      if (i == 0) return out;
    }
  }
}

}  // namespace mproj
