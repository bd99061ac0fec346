#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <json.hpp>

#include "mproj/cohomo.hpp"
#include "mproj/degrees.hpp"
#include "mproj/report.hpp"
#include "mproj/scheme.hpp"

namespace mproj {

// Cohomology and section kernels of one scheme, memoized per degree.
// Thread-safe.
class IdealCache {
 public:
  explicit IdealCache(ZeroScheme z) : cohomology_(std::move(z)) {}

  const ZeroScheme& scheme() const noexcept { return cohomology_.scheme(); }
  CohomologyCache& cohomology() noexcept { return cohomology_; }
  std::uint64_t h0(const MultiIndex& a) { return cohomology_.h0(a); }
  std::uint64_t h1(const MultiIndex& a) { return cohomology_.h1(a); }
  const SectionKernel& kernel(const MultiIndex& a);

 private:
  CohomologyCache cohomology_;
  std::mutex mu_;
  std::map<MultiIndex, std::unique_ptr<SectionKernel>> kernels_;
};

// Multiplication by the variables of factor i from degree `from`.
struct ImageSource {
  MultiIndex from;
  std::size_t i;
};

// dim of sum_s x_{i_s,*} H^0(I_Z(from_s)) inside H^0(I_Z(target)).
// Every product x_j f_m has the shape e_u - (part on Q), where Q collects
// the products of pivot monomials; the span splits into the distinct u
// outside Q plus a rank over the |Q| coordinates.
std::uint64_t image_dimension(IdealCache& cache, const MultiIndex& target, const std::vector<ImageSource>& sources);

struct MultMapReport {
  MultiIndex a;
  std::size_t i = 0;
  std::uint64_t dim_source = 0;
  std::uint64_t dim_target = 0;
  std::uint64_t dim_image = 0;
  std::uint64_t dim_coker = 0;
  bool injective = false;
};

MultMapReport mult_map(IdealCache& cache, const MultiIndex& a, std::size_t i);
MultMapReport mult_map(const ZeroScheme& z, const MultiIndex& a, std::size_t i);
nlohmann::json to_json(const MultMapReport& r);

struct StabilizationResult {
  bool stabilized = false;
  // Minimal t with h1(fixed with t at slot i) = 0.
  std::size_t e = 0;
  // h1 also vanishes for e+1..e+3.
  bool verified = false;
  // Some fiber of pi_i has a trace with h1 > 0 at `fixed`.
  bool fiber_deficient = false;
};

// Slot i of `fixed` is ignored.
StabilizationResult stabilization_index(IdealCache& cache, const MultiIndex& fixed, std::size_t i);
StabilizationResult stabilization_index(const ZeroScheme& z, const MultiIndex& fixed, std::size_t i);

struct GeneratorRecord {
  MultiIndex a;
  std::uint64_t h0 = 0;
  std::uint64_t parent_image = 0;
  std::uint64_t gens = 0;
};

struct GeneratorTable {
  MultiIndex box_upper;
  std::vector<GeneratorRecord> records;  // lexicographic

  std::uint64_t total() const;
  const GeneratorRecord* find(const MultiIndex& a) const;
};

// gens(a) = h0(a) - dim of the sum of the images from all parents a - e_i.
GeneratorTable generator_table(IdealCache& cache, const Box& box);
GeneratorTable generator_table(const ZeroScheme& z, const Box& box);
nlohmann::json to_json(const GeneratorTable& t);

struct GeneratorStructureReport {
  // gens(c) != 0 although c_i >= 2, n_i = 1 and h1(c - 2e_i) = 0.
  std::vector<MultiIndex> surjectivity_violations;
  // gens(c) != 0 outside the minimal degrees of I0 and their immediate
  // descendants.
  std::vector<MultiIndex> unexpected;
  // Sum of h0 over minimal I0 degrees plus one W per immediate descendant c
  // of them in the box, W = smallest cokernel of mu from a minimal parent.
  std::uint64_t expected_total = 0;
  std::uint64_t actual_total = 0;

  bool structure_ok() const { return surjectivity_violations.empty() && unexpected.empty(); }
  bool total_ok() const { return expected_total == actual_total; }
  bool pass() const { return structure_ok() && total_ok(); }
};

GeneratorStructureReport check_generator_structure(IdealCache& cache, const Box& box);

// Cokernel of mu_e (slot i, degree e -> e+1) against h1 at e-1, or deg(Z)
// when e = 0.
struct StabilizationCokerCheck {
  MultiIndex fixed;
  std::size_t i = 0;
  StabilizationResult stabilization;
  std::uint64_t coker = 0;
  std::uint64_t expected = 0;
  bool pass = false;
};

StabilizationCokerCheck check_stabilization_coker(IdealCache& cache, const MultiIndex& fixed, std::size_t i);

// z + (a_i+2) D_i - 2D with D = prod (a_h+1), D_i = D / (a_i+1).
std::int64_t bb1_formula(const MultiIndex& a, std::size_t i, std::int64_t z);
// max{0, -z + D C(n_i+a_i+1, n_i)/C(n_i+a_i, n_i) - (n_i+1)(D - z)} with
// D = prod C(n_h+a_h, a_h).
std::int64_t p2p1_formula(const Space& x, const MultiIndex& a, std::size_t i, std::int64_t z);

// General reduced points on (P^1)^k. Default box [0, z]^k.
VerificationReport verify_bb1(std::size_t k, std::size_t z, const std::optional<MultiIndex>& box_upper,
                              const CampaignConfig& cfg);
// General reduced points on a space with every n_i in {1, 2}.
VerificationReport verify_p2p1(const Space& x, std::size_t z, const std::optional<MultiIndex>& box_upper,
                               const CampaignConfig& cfg);
// X = Y x P^2 with twist r on Y and t on P^2; mu from (r, t+1) to (r, t+2)
// in the P^2 slot for s general points, s in `s_values` (default: 0 up to
// the hypothesis bound, inclusive, so the first excluded value is logged).
VerificationReport verify_pbg1(const std::vector<int>& y_dims, const std::vector<int>& r, int t,
                               const std::optional<std::vector<std::size_t>>& s_values, const CampaignConfig& cfg);

}  // namespace mproj
