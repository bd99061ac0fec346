#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mproj {

// Rank over Q by fraction-exact Gaussian elimination. Slow; meant for
// cross-checking prime-field ranks on small integer matrices.
std::size_t rank_over_rationals(const std::vector<std::vector<std::int64_t>>& m);

}  // namespace mproj
