#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mproj/degrees.hpp"
#include "mproj/exactla.hpp"
#include "mproj/report.hpp"
#include "mproj/ring.hpp"
#include "mproj/scheme.hpp"

namespace mproj {

// Sections of pi_i^* Omega(t) (x) O(outer): tuples (f_0..f_{n_i}) of degree
// outer with t-1 at slot i such that sum_j x_ij f_j = 0.
struct KernelSectionSpace {
  Space space;
  std::size_t slot = 0;
  int t = 1;
  MultiIndex outer;
  // outer with t-1 inserted at slot.
  MultiIndex degree;
  std::size_t block = 0;  // N(degree)
  // Each vector holds n_i+1 blocks of `block` coefficients over basis(degree).
  std::vector<std::vector<Elem>> basis;

  std::size_t dim() const noexcept { return basis.size(); }
};

// outer has one entry per factor other than slot. Throws UnsupportedTwist
// when t <= 0.
KernelSectionSpace build_sections(const PrimeField& f, const Space& x, std::size_t slot, int t,
                                  const MultiIndex& outer);

// sum_j x_ij f_j expanded over basis(degree + e_slot).
std::vector<Elem> euler_image(const PrimeField& f, const KernelSectionSpace& v, std::span<const Elem> section);

// (n+1) C(n+x-1, n) - C(n+x, n), and 0 for x <= 0.
std::uint64_t omega_h0(int n, int x);

struct BundleCohomology {
  std::uint64_t h0 = 0;
  std::uint64_t h1 = 0;
  std::uint64_t rank = 0;
};

// Every point contributes the values of all f_j. Throws Unsupported for
// non-reduced components and DimensionMismatch for a different space.
BundleCohomology impose_points(const ZeroScheme& s, const KernelSectionSpace& v);

// X = Y x P^2, R = O(r) on Y, every x in xs (x >= 1), s from 0 to
// ceil(alpha (x^2-1) / 2) + 2.
VerificationReport verify_bg2(const std::vector<int>& y_dims, const std::vector<int>& r, const std::vector<int>& xs,
                              const CampaignConfig& cfg);

struct Ee2Thresholds {
  std::uint64_t omega = 0;
  std::uint64_t outer = 0;
  std::uint64_t tau1 = 0;
  std::uint64_t tau2 = 0;
};

Ee2Thresholds ee2_thresholds(const Space& x, std::size_t i, const MultiIndex& a);

// Bundle pi_i^* Omega(a_i+1) (x) O(a without slot i). For s <= tau1 checks
// h1 = 0, for s >= tau2 checks h0 = 0, and always checks that the kernel of
// mu from a in slot i has dimension h0. Default s: 0..tau2+2.
VerificationReport verify_ee2(const Space& x, std::size_t i, const MultiIndex& a,
                              const std::optional<std::vector<std::size_t>>& s_values, const CampaignConfig& cfg);

}  // namespace mproj
