#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mproj/cohomo.hpp"
#include "mproj/degrees.hpp"
#include "mproj/report.hpp"
#include "mproj/ring.hpp"
#include "mproj/scheme.hpp"

namespace mproj {

enum class BaseLocusVerdict { SchemeTheoreticEqualsZ, ExtraBasePointsFound, Inconclusive };

std::string to_string(BaseLocusVerdict v);

// Membership and differential tests against the fixed system |I_Z(a)|.
// Read-only after construction, so probes may run concurrently.
class BaseLocusProbe {
 public:
  BaseLocusProbe(const ZeroScheme& z, const MultiIndex& a);

  const ZeroScheme& scheme() const noexcept { return *z_; }
  std::uint64_t h0() const noexcept { return kernel_.h0(); }
  // Every section vanishes at o. Throws InvalidProbe when o is a support
  // point of Z.
  bool is_base_point(const Point& o) const;
  // Rank of the h0 x sum(n_i) matrix of chart partials of the sections at
  // the support of component c.
  std::size_t jacobian_rank(std::size_t c) const;

 private:
  const ZeroScheme* z_;
  SectionKernel kernel_;
};

bool probe_base_point(const ZeroScheme& z, const MultiIndex& a, const Point& o);
std::size_t jacobian_rank_at(const ZeroScheme& z, const MultiIndex& a, std::size_t component);

struct ProbePlan {
  std::size_t uniform = 1000;
  // Extra probes on each fiber pi_i^{-1}(pi_i(p)), p in the support.
  std::size_t per_fiber = 4;
};

struct JacobianEntry {
  Point point;
  std::size_t rank = 0;
};

struct BaseLocusReport {
  MultiIndex a;
  std::uint64_t h0 = 0;
  std::size_t probes = 0;
  std::size_t fiber_probes = 0;
  std::vector<Point> failures;  // probes that are base points
  std::vector<JacobianEntry> jacobian;
  BaseLocusVerdict verdict = BaseLocusVerdict::Inconclusive;
};

nlohmann::json to_json(const BaseLocusReport& r);

// Random probes: `uniform` anywhere off the support plus `per_fiber` on
// every fiber through a support point. Probes are drawn from `seed`.
BaseLocusReport base_locus_report(const ZeroScheme& z, const MultiIndex& a, const ProbePlan& plan,
                                  std::uint64_t seed);

// Base points of |I_Z(c)| away from the fibers where the vanishing of
// h1(I_Z(a)) gives no control: with c >= a and c_i > a_i for i in D, a
// probe o is guaranteed when pi_i(o) is off pi_i(Z_red) for some i in D
// (every probe off Z_red when D is everything).
struct FiberExclusionReport {
  MultiIndex a;
  MultiIndex c;
  std::size_t guaranteed_probes = 0;
  std::size_t guaranteed_base_points = 0;
  std::size_t fiber_probes = 0;
  std::size_t fiber_base_points = 0;

  bool pass() const { return guaranteed_base_points == 0; }
};

// Throws HypothesisViolation when h1(I_Z(a)) > 0 or c does not dominate a
// strictly in some slot.
FiberExclusionReport check_fiber_exclusion(const ZeroScheme& z, const MultiIndex& a, const MultiIndex& c,
                                           const ProbePlan& plan, std::uint64_t seed);

// General reduced Z of s points, a >= 1 everywhere and
// 0 < s < N(a) - sum n_i, else HypothesisViolation.
VerificationReport verify_f3(const Space& x, std::size_t s, const MultiIndex& a, const CampaignConfig& cfg,
                             const ProbePlan& plan = {});
// Same checks at a + e_i with 0 < s < N(a), plus h0(I_Z(a + e_i)) > sum n_i.
VerificationReport verify_f4(const Space& x, std::size_t s, const MultiIndex& a, std::size_t i,
                             const CampaignConfig& cfg, const ProbePlan& plan = {});

}  // namespace mproj
