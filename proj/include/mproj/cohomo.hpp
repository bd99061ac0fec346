#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mproj/degrees.hpp"
#include "mproj/exactla.hpp"
#include "mproj/ring.hpp"
#include "mproj/scheme.hpp"

namespace mproj {

enum class FunctionalKind { Evaluation, Partial, TangentDerivative };

std::string to_string(FunctionalKind k);

// A pure tensor: factor values at the point, except in `deriv_factor`
// where the derivative along `direction` is taken.
struct FunctionalTerm {
  int deriv_factor = -1;
  std::vector<Elem> direction;
};

// A linear functional on H^0(O_X(a)) at a component's support, as a sum
// of pure tensor terms.
struct Functional {
  std::size_t component = 0;
  FunctionalKind kind = FunctionalKind::Evaluation;
  std::vector<FunctionalTerm> terms;
};

// deg(Z) functionals: one evaluation per component, plus the chart partials
// of double points and the directional derivative of tangent vectors.
std::vector<Functional> scheme_functionals(const ZeroScheme& z);

// Row vector of a functional in the basis of degree a.
std::vector<Elem> functional_row(const ZeroScheme& z, const Functional& phi, const MultiIndex& a);

struct RowLabel {
  std::size_t component;
  FunctionalKind kind;
};

struct ConditionsMatrix {
  DenseMatrix matrix;
  std::vector<RowLabel> labels;
};

ConditionsMatrix conditions_matrix(const ZeroScheme& z, const MultiIndex& a);

// H^0(I_Z(a)) as the kernel of the reduced echelon form of the conditions
// matrix. Entries are stored as 32-bit residues.
struct SectionKernel {
  MultiIndex a;
  std::size_t N = 0;
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> free_columns;
  std::vector<std::uint32_t> reduced;  // pivots.size() x N, row-major

  std::size_t h0() const noexcept { return free_columns.size(); }
  Elem entry(std::size_t r, std::size_t c) const { return reduced[r * N + c]; }
  // e_m - sum_r R[r][m] e_{pivot_r} for m = free_columns[idx].
  std::vector<Elem> vector(const PrimeField& f, std::size_t idx) const;
};

SectionKernel section_kernel(const ZeroScheme& z, const MultiIndex& a);

// Exact rank of a fixed family of functionals on H^0(O_X(a)) without
// forming the N(a)-column matrix. Each factor's term vectors are projected
// onto the pivot coordinates of their span (cached per factor and degree);
// the Kronecker products are then re-projected factor by factor. `order`
// permutes the factors (default 0..k-1). Thread-safe.
class FunctionalRankEngine {
 public:
  FunctionalRankEngine(const ZeroScheme& z, std::vector<Functional> phis);

  std::size_t size() const noexcept { return phis_.size(); }
  const std::vector<Functional>& functionals() const noexcept { return phis_; }
  std::size_t rank(const MultiIndex& a, const std::vector<std::size_t>& order = {});

 private:
  const std::vector<std::vector<Elem>>& factor_terms(std::size_t l, int d);

  const ZeroScheme* z_;
  std::vector<Functional> phis_;
  std::vector<std::size_t> term_owner_;
  std::vector<const FunctionalTerm*> terms_;
  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, std::vector<std::vector<Elem>>> cache_;
};

std::size_t functional_rank(const ZeroScheme& z, const std::vector<Functional>& phis, const MultiIndex& a,
                            const std::vector<std::size_t>& order = {});

struct Cohomology {
  std::uint64_t h0 = 0;
  std::uint64_t h1 = 0;
  bool operator==(const Cohomology&) const = default;
};

// Throws UnsupportedTwist when a has negative entries.
void require_twist(const Space& x, const std::vector<int>& a);
Cohomology h0_h1(const ZeroScheme& z, const MultiIndex& a);
// Same numbers through the dense conditions matrix.
Cohomology h0_h1_dense(const ZeroScheme& z, const MultiIndex& a);

// Memoized h0/h1 of one scheme. Thread-safe.
class CohomologyCache {
 public:
  explicit CohomologyCache(ZeroScheme z);

  const ZeroScheme& scheme() const noexcept { return z_; }
  Cohomology at(const MultiIndex& a);
  std::uint64_t h0(const MultiIndex& a) { return at(a).h0; }
  std::uint64_t h1(const MultiIndex& a) { return at(a).h1; }

 private:
  ZeroScheme z_;
  FunctionalRankEngine engine_;
  std::mutex mu_;
  std::map<MultiIndex, Cohomology> memo_;
};

struct DegreeRecord {
  MultiIndex a;
  std::uint64_t N = 0;
  std::uint64_t h0 = 0;
  std::uint64_t h1 = 0;
};

struct CohomologyTable {
  Space space;
  std::size_t scheme_degree = 0;
  MultiIndex box_upper;
  std::vector<DegreeRecord> records;  // lexicographic
  std::vector<MultiIndex> I0;
  std::vector<MultiIndex> I1;
  std::vector<MultiIndex> minimal_I0;
  // I0 and I1 disjoint inside the box.
  bool maximal_rank = true;
  // Every upper_i >= deg(Z) - 1: then h1 vanishes outside the box whenever
  // the in-box verdict holds, so the verdict is global.
  bool box_complete = false;

  const DegreeRecord* find(const MultiIndex& a) const;
};

// [0, deg-1]^k, or {0} for the empty scheme.
Box vanishing_box(const ZeroScheme& z);
// [0, deg]^k: also contains every minimal degree of I0.
Box report_box(const ZeroScheme& z);

CohomologyTable regions(const ZeroScheme& z, const Box& box);
CohomologyTable regions(CohomologyCache& cache, const Box& box);

nlohmann::json to_json(const CohomologyTable& t);
std::string to_csv(const CohomologyTable& t);
// Grid for k = 2 (rows: a_2 descending, columns: a_1 ascending):
// '0' only h0 > 0, '1' only h1 > 0, '#' both, '.' neither.
// Throws Unsupported for other k.
std::string render_staircase(const CohomologyTable& t);

struct MonotoneViolation {
  MultiIndex a;
  std::size_t i;
  std::uint64_t h1_a;
  std::uint64_t h1_next;
};

struct MonotoneReport {
  std::size_t checked = 0;
  std::vector<MonotoneViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// h1(a + e_i) <= h1(a) for every a in the box and every i.
MonotoneReport check_h1_monotone(const ZeroScheme& z, const Box& box);
MonotoneReport check_h1_monotone(CohomologyCache& cache, const Box& box);
// h1(a + e_i) == h1(a) for every a in the box; a violation is any change.
MonotoneReport check_h1_constant(CohomologyCache& cache, const Box& box, std::size_t i);

// Limit of h1(a + t e_i): stops once t >= deg(Z) and two consecutive
// values agree.
std::uint64_t stabilized_h1(const ZeroScheme& z, const MultiIndex& a, std::size_t i);
std::uint64_t stabilized_h1(CohomologyCache& cache, const MultiIndex& a, std::size_t i);

// Components grouped by their factor-i coordinate, in order of first
// appearance.
std::vector<std::vector<std::size_t>> fibers(const ZeroScheme& z, std::size_t i);
// Functionals of the trace of Z on the fiber through the given components.
std::vector<Functional> fiber_trace_functionals(const ZeroScheme& z, std::size_t i,
                                                const std::vector<std::size_t>& members);

struct FiberCriterion {
  bool fires = false;
  std::uint64_t max_trace_h1 = 0;
  std::optional<std::size_t> witness_component;
};

// Some fiber of pi_i meets Z in a subscheme with h1 > 0 at degree a.
FiberCriterion fiber_criterion(const ZeroScheme& z, const MultiIndex& a, std::size_t i);

}  // namespace mproj
