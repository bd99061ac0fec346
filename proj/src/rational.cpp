#include "mproj/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace mproj {

std::size_t rank_over_rationals(const std::vector<std::vector<std::int64_t>>& m) {
  using Q = boost::multiprecision::cpp_rational;
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  std::vector<std::vector<Q>> a(rows, std::vector<Q>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m[r][c];
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      Q t = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= t * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace mproj
