#include "mproj/baselocus.hpp"

#include <algorithm>

#include "mproj/errors.hpp"
#include "mproj/parallel.hpp"
#include "mproj/rng.hpp"

namespace mproj {

std::string to_string(BaseLocusVerdict v) {
  switch (v) {
    case BaseLocusVerdict::SchemeTheoreticEqualsZ:
      return "SchemeTheoreticEqualsZ";
    case BaseLocusVerdict::ExtraBasePointsFound:
      return "ExtraBasePointsFound";
    case BaseLocusVerdict::Inconclusive:
      break;
  }
  return "Inconclusive";
}

BaseLocusProbe::BaseLocusProbe(const ZeroScheme& z, const MultiIndex& a) : z_(&z), kernel_(section_kernel(z, a)) {}

namespace {

// Sections evaluated through the kernel: value of the section for free
// column m is v[m] - sum_r R[r][m] v[pivot_r].
bool all_sections_vanish(const PrimeField& f, const SectionKernel& k, const std::vector<Elem>& v) {
  for (std::size_t m : k.free_columns) {
    Elem acc = v[m];
    for (std::size_t r = 0; r < k.pivots.size(); ++r) {
      const Elem c = k.entry(r, m);
      if (c) acc = f.sub(acc, f.mul(c, v[k.pivots[r]]));
    }
    if (acc) return false;
  }
  return true;
}

bool same_factor(const PrimeField& f, const std::vector<Elem>& u, const std::vector<Elem>& v) {
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b)
      if (f.mul(u[a], v[b]) != f.mul(u[b], v[a])) return false;
  return true;
}

bool on_support(const ZeroScheme& z, const Point& o) {
  for (const auto& c : z.components())
    if (same_point(z.field(), c.point, o)) return true;
  return false;
}

std::vector<Elem> random_factor(Rng& rng, const PrimeField& f, int n) {
  std::vector<Elem> v(static_cast<std::size_t>(n + 1));
  do {
    for (auto& e : v) e = rng.element(f);
  } while (std::all_of(v.begin(), v.end(), [](Elem e) { return e == 0; }));
  return v;
}

Point random_point(Rng& rng, const PrimeField& f, const Space& x) {
  Point p;
  for (std::size_t i = 0; i < x.k(); ++i) p.push_back(random_factor(rng, f, x.n(i)));
  return p;
}

struct Probe {
  Point point;
  bool on_fiber = false;
};

// Uniform probes off the support, then probes on each fiber through a
// support point (skipped when k = 1, where the fiber is the point).
std::vector<Probe> draw_probes(const ZeroScheme& z, const ProbePlan& plan, std::uint64_t seed) {
  Rng rng(seed);
  const PrimeField& f = z.field();
  const Space& x = z.space();
  std::vector<Probe> out;
  while (out.size() < plan.uniform) {
    Point p = random_point(rng, f, x);
    if (!on_support(z, p)) out.push_back({std::move(p), false});
  }
  if (x.k() < 2) return out;
  for (const auto& c : z.components())
    for (std::size_t i = 0; i < x.k(); ++i)
      for (std::size_t q = 0; q < plan.per_fiber;) {
        Point p = random_point(rng, f, x);
        p[i] = c.point[i];
        if (on_support(z, p)) continue;
        out.push_back({std::move(p), true});
        ++q;
      }
  return out;
}

nlohmann::json point_json(const Point& p) { return p; }

}  // namespace

bool BaseLocusProbe::is_base_point(const Point& o) const {
  const ZeroScheme& z = *z_;
  if (o.size() != z.space().k()) throw DimensionMismatch("probe has the wrong number of factors");
  if (on_support(z, o)) throw InvalidProbe("probe lies on the support of the scheme");
  return all_sections_vanish(z.field(), kernel_, monomial_values(z.field(), z.space(), kernel_.a, o));
}

std::size_t BaseLocusProbe::jacobian_rank(std::size_t c) const {
  const ZeroScheme& z = *z_;
  if (c >= z.size()) throw std::out_of_range("component index out of range");
  const PrimeField& f = z.field();
  const Space& x = z.space();
  const Point p = normalize(f, z.components()[c].point);
  const std::size_t cols = x.total_dim();
  if (kernel_.h0() == 0) return 0;

  // Partials of every monomial, one vector per chart variable.
  std::vector<std::vector<Elem>> per_factor(x.k());
  for (std::size_t i = 0; i < x.k(); ++i) per_factor[i] = factor_values(f, x.n(i), kernel_.a[i], p[i]);
  std::vector<std::vector<Elem>> partials;
  for (std::size_t i = 0; i < x.k(); ++i) {
    const std::size_t chart = chart_index(p[i]);
    for (std::size_t j = 0; j < p[i].size(); ++j) {
      if (j == chart) continue;
      std::vector<Elem> dir(p[i].size(), 0);
      dir[j] = 1;
      std::vector<Elem> acc{1};
      for (std::size_t h = 0; h < x.k(); ++h) {
        const auto part = h == i ? factor_derivative(f, x.n(h), kernel_.a[h], p[h], dir) : per_factor[h];
        acc = kron(f, acc, part);
      }
      partials.push_back(std::move(acc));
    }
  }

  IncrementalEchelon ech(f, cols);
  std::vector<Elem> row(cols);
  for (std::size_t m : kernel_.free_columns) {
    for (std::size_t q = 0; q < cols; ++q) {
      Elem acc = partials[q][m];
      for (std::size_t r = 0; r < kernel_.pivots.size(); ++r) {
        const Elem e = kernel_.entry(r, m);
        if (e) acc = f.sub(acc, f.mul(e, partials[q][kernel_.pivots[r]]));
      }
      row[q] = acc;
    }
    ech.insert(row);
    if (ech.rank() == cols) break;
  }
  return ech.rank();
}

bool probe_base_point(const ZeroScheme& z, const MultiIndex& a, const Point& o) {
  return BaseLocusProbe(z, a).is_base_point(o);
}

std::size_t jacobian_rank_at(const ZeroScheme& z, const MultiIndex& a, std::size_t component) {
  return BaseLocusProbe(z, a).jacobian_rank(component);
}

nlohmann::json to_json(const BaseLocusReport& r) {
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& p : r.failures) fails.push_back(point_json(p));
  nlohmann::json jac = nlohmann::json::array();
  for (const auto& j : r.jacobian) jac.push_back({{"point", point_json(j.point)}, {"rank", j.rank}});
  return {{"a", r.a.entries()},       {"h0", r.h0},    {"probes", r.probes}, {"fiber_probes", r.fiber_probes},
          {"failures", fails},        {"jacobian", jac}, {"verdict", to_string(r.verdict)}};
}

BaseLocusReport base_locus_report(const ZeroScheme& z, const MultiIndex& a, const ProbePlan& plan,
                                  std::uint64_t seed) {
  BaseLocusProbe probe(z, a);
  BaseLocusReport r;
  r.a = a;
  r.h0 = probe.h0();
  const std::size_t full = z.space().total_dim();
  bool spanning = true;
  for (std::size_t c = 0; c < z.size(); ++c) {
    const std::size_t rk = probe.jacobian_rank(c);
    r.jacobian.push_back({z.components()[c].point, rk});
    if (rk != full) spanning = false;
  }
  for (const auto& p : draw_probes(z, plan, seed)) {
    ++r.probes;
    if (p.on_fiber) ++r.fiber_probes;
    if (probe.is_base_point(p.point)) r.failures.push_back(p.point);
  }
  if (!r.failures.empty()) {
    r.verdict = BaseLocusVerdict::ExtraBasePointsFound;
  } else if (spanning) {
    r.verdict = BaseLocusVerdict::SchemeTheoreticEqualsZ;
  }
  return r;
}

FiberExclusionReport check_fiber_exclusion(const ZeroScheme& z, const MultiIndex& a, const MultiIndex& c,
                                           const ProbePlan& plan, std::uint64_t seed) {
  const Space& x = z.space();
  if (a.size() != x.k() || c.size() != x.k()) throw DimensionMismatch("degree does not match the space");
  if (h0_h1(z, a).h1 != 0) throw HypothesisViolation("h1(I_Z(a)) must vanish");
  std::vector<std::size_t> strict;
  for (std::size_t i = 0; i < x.k(); ++i) {
    if (c[i] < a[i]) throw HypothesisViolation("c must dominate a");
    if (c[i] > a[i]) strict.push_back(i);
  }
  if (strict.empty()) throw HypothesisViolation("c must exceed a in some slot");
  const bool everywhere = strict.size() == x.k();

  FiberExclusionReport rep;
  rep.a = a;
  rep.c = c;
  BaseLocusProbe probe(z, c);
  const PrimeField& f = z.field();
  for (const auto& p : draw_probes(z, plan, seed)) {
    bool guaranteed = everywhere;
    for (std::size_t i : strict) {
      bool on_fiber = false;
      for (const auto& comp : z.components())
        if (same_factor(f, comp.point[i], p.point[i])) on_fiber = true;
      if (!on_fiber) guaranteed = true;
    }
    const bool base = probe.is_base_point(p.point);
    if (guaranteed) {
      ++rep.guaranteed_probes;
      if (base) ++rep.guaranteed_base_points;
    } else {
      ++rep.fiber_probes;
      if (base) ++rep.fiber_base_points;
    }
  }
  return rep;
}

namespace {

FormulaRecord locus_record(const MultiIndex& a, std::int64_t expected, std::int64_t computed, const char* what) {
  FormulaRecord r;
  r.a = a;
  r.formula = expected;
  r.computed = computed;
  r.pass = expected == computed;
  r.note = what;
  return r;
}

void check_positive(const Space& x, const MultiIndex& a) {
  if (a.size() != x.k()) throw DimensionMismatch("degree does not match the space");
  for (int v : a.entries())
    if (v < 1) throw HypothesisViolation("every entry of a must be positive");
}

SeedRun locus_run(const Space& x, std::size_t s, const MultiIndex& degree, const PrimeField& f,
                  const ProbePlan& plan, std::uint64_t seed, bool need_h0_bound) {
  SeedRun run;
  run.seed = seed;
  ZeroScheme z = random_general(x, s, ComponentKind::Reduced, seed, f);
  BaseLocusReport r = base_locus_report(z, degree, plan, derive_seed(seed, 1));
  const auto full = static_cast<std::int64_t>(x.total_dim());
  std::int64_t min_rank = full;
  for (const auto& j : r.jacobian) min_rank = std::min(min_rank, static_cast<std::int64_t>(j.rank));
  run.records.push_back(locus_record(degree, full, min_rank, "jacobian rank"));
  run.records.push_back(locus_record(degree, 0, static_cast<std::int64_t>(r.failures.size()), "base-point probes"));
  if (need_h0_bound) {
    FormulaRecord h = locus_record(degree, full + 1, static_cast<std::int64_t>(r.h0), "h0 exceeds sum n_i");
    h.pass = h.computed >= h.formula;
    run.records.push_back(std::move(h));
  }
  // Supporting evidence only: local codimension at Z from the Jacobian and
  // no base point among the probes.
  const std::int64_t e = std::min<std::int64_t>(full, static_cast<std::int64_t>(r.h0));
  run.extra["codimension"] = {
      {"e", e}, {"min_jacobian_rank", min_rank}, {"supported", min_rank >= e && r.failures.empty()}};
  run.extra["base_locus"] = to_json(r);
  for (const auto& rec : run.records)
    if (!rec.pass) run.pass = false;
  if (r.verdict != BaseLocusVerdict::SchemeTheoreticEqualsZ) {
    run.pass = false;
    run.failures.push_back("verdict " + to_string(r.verdict));
  }
  return run;
}

}  // namespace

VerificationReport verify_f3(const Space& x, std::size_t s, const MultiIndex& a, const CampaignConfig& cfg,
                             const ProbePlan& plan) {
  check_positive(x, a);
  const std::uint64_t n = count_monomials(x, a);
  if (s == 0 || s + x.total_dim() >= n)
    throw HypothesisViolation("s must satisfy 0 < s < " + std::to_string(n) + " - " + std::to_string(x.total_dim()));
  const PrimeField f(cfg.modulus);
  VerificationReport rep;
  rep.verifier = "f3";
  rep.params = {{"space", x.dims()}, {"s", s}, {"a", a.entries()}, {"probes", plan.uniform},
                {"per_fiber", plan.per_fiber}, {"seed", cfg.seed}, {"seeds", cfg.seeds}};
  rep.modulus = cfg.modulus;
  rep.required = cfg.required();
  rep.runs = parallel_map(
      cfg.seeds, [&](std::size_t r) { return locus_run(x, s, a, f, plan, cfg.seed_for(r), false); }, cfg.threads);
  return rep;
}

VerificationReport verify_f4(const Space& x, std::size_t s, const MultiIndex& a, std::size_t i,
                             const CampaignConfig& cfg, const ProbePlan& plan) {
  check_positive(x, a);
  if (i >= x.k()) throw std::out_of_range("factor index out of range");
  const std::uint64_t n = count_monomials(x, a);
  if (s == 0 || s >= n) throw HypothesisViolation("s must satisfy 0 < s < " + std::to_string(n));
  const PrimeField f(cfg.modulus);
  VerificationReport rep;
  rep.verifier = "f4";
  rep.params = {{"space", x.dims()}, {"s", s}, {"a", a.entries()}, {"i", i + 1}, {"probes", plan.uniform},
                {"per_fiber", plan.per_fiber}, {"seed", cfg.seed}, {"seeds", cfg.seeds}};
  rep.modulus = cfg.modulus;
  rep.required = cfg.required();
  const MultiIndex up = a.plus(i);
  rep.runs = parallel_map(
      cfg.seeds, [&](std::size_t r) { return locus_run(x, s, up, f, plan, cfg.seed_for(r), true); }, cfg.threads);
  return rep;
}

}  // namespace mproj
