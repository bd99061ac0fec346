#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "mproj/cohomo.hpp"
#include "mproj/report.hpp"
#include "mproj/rng.hpp"
#include "mproj/scheme.hpp"

namespace mproj {

// Shape of the random corpus: k in [1, max_k], n_i in [1, max_n] and
// degree at most max_degree.
struct CorpusSpec {
  std::size_t max_k = 3;
  int max_n = 2;
  std::size_t max_degree = 12;
};

Space corpus_space(Rng& rng, const CorpusSpec& spec, std::size_t min_k = 1);
// Mixed kinds.
ZeroScheme corpus_scheme(std::uint64_t seed, const PrimeField& f, const CorpusSpec& spec = {});

struct FiberInstance {
  ZeroScheme z;
  std::size_t i = 0;
};

// Reduced and tangent components inside one fiber pi_i^{-1}(p); k >= 2.
FiberInstance fiber_scheme(std::uint64_t seed, const PrimeField& f, const CorpusSpec& spec = {});

struct Prop0bg1Counts {
  std::size_t euler_checks = 0;
  std::size_t euler_violations = 0;
  std::size_t monotone_checks = 0;
  std::size_t monotone_violations = 0;
  std::size_t constancy_checks = 0;
  std::size_t constancy_violations = 0;
  std::size_t stabilization_checks = 0;
  std::size_t stabilization_positive = 0;
  std::size_t stabilization_mismatches = 0;

  Prop0bg1Counts& operator+=(const Prop0bg1Counts& o);
  bool ok() const {
    return euler_violations == 0 && monotone_violations == 0 && constancy_violations == 0 &&
           stabilization_mismatches == 0;
  }
};

// Over the vanishing box of z: h0 - h1 = N(a) - deg(Z), h1 non-increasing,
// h1 constant along fiber_slot when given, and stabilized h1 > 0 exactly
// when the fiber criterion fires (at the box corners a = 0 and a = upper
// with slot i cleared, for every i).
Prop0bg1Counts check_prop0bg1(const ZeroScheme& z, std::optional<std::size_t> fiber_slot);

// Per seed: `instances` corpus schemes and as many fiber-contained ones.
VerificationReport verify_prop0bg1(std::size_t instances, const CampaignConfig& cfg, const CorpusSpec& spec = {});

}  // namespace mproj
