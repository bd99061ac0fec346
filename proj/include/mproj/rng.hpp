#pragma once

#include <cstdint>
#include <random>

#include "mproj/exactla.hpp"

namespace mproj {

// mt19937_64 with our own bounded sampling, so draws do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }
  // Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  Elem element(const PrimeField& f) { return below(f.modulus()); }
  Elem nonzero_element(const PrimeField& f) { return 1 + below(f.modulus() - 1); }

 private:
  std::mt19937_64 gen_;
};

// splitmix64 of (base, index): independent per-run seeds from one base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace mproj
