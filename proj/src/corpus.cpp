#include "mproj/corpus.hpp"

#include <algorithm>

#include "mproj/parallel.hpp"
#include "mproj/rng.hpp"

namespace mproj {

Space corpus_space(Rng& rng, const CorpusSpec& spec, std::size_t min_k) {
  const std::size_t k = min_k + rng.below(spec.max_k - min_k + 1);
  std::vector<int> dims;
  for (std::size_t h = 0; h < k; ++h) dims.push_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.max_n))));
  return Space(dims);
}

ZeroScheme corpus_scheme(std::uint64_t seed, const PrimeField& f, const CorpusSpec& spec) {
  Rng rng(seed);
  const Space x = corpus_space(rng, spec);
  return random_mixed(x, spec.max_degree, rng.next(), f);
}

FiberInstance fiber_scheme(std::uint64_t seed, const PrimeField& f, const CorpusSpec& spec) {
  Rng rng(seed);
  const Space x = corpus_space(rng, spec, 2);
  const std::size_t i = rng.below(x.k());
  std::vector<Elem> p(static_cast<std::size_t>(x.n(i) + 1));
  do {
    for (auto& e : p) e = rng.element(f);
  } while (std::all_of(p.begin(), p.end(), [](Elem e) { return e == 0; }));
  const std::size_t total = 1 + rng.below(spec.max_degree);
  const std::size_t tangents = rng.below(total / 2 + 1);
  const std::size_t reduced = total - 2 * tangents;
  ZeroScheme red = random_in_fiber(x, i, p, reduced, rng.next(), f, ComponentKind::Reduced);
  ZeroScheme tan = random_in_fiber(x, i, p, tangents, rng.next(), f, ComponentKind::Tangent);
  return {disjoint_union(red, tan), i};
}

Prop0bg1Counts& Prop0bg1Counts::operator+=(const Prop0bg1Counts& o) {
  euler_checks += o.euler_checks;
  euler_violations += o.euler_violations;
  monotone_checks += o.monotone_checks;
  monotone_violations += o.monotone_violations;
  constancy_checks += o.constancy_checks;
  constancy_violations += o.constancy_violations;
  stabilization_checks += o.stabilization_checks;
  stabilization_positive += o.stabilization_positive;
  stabilization_mismatches += o.stabilization_mismatches;
  return *this;
}

Prop0bg1Counts check_prop0bg1(const ZeroScheme& z, std::optional<std::size_t> fiber_slot) {
  Prop0bg1Counts c;
  CohomologyCache cache(z);
  const Box box = vanishing_box(z);
  const auto deg = static_cast<std::int64_t>(z.degree());
  for (const auto& a : box.points()) {
    const Cohomology h = cache.at(a);
    ++c.euler_checks;
    if (static_cast<std::int64_t>(h.h0) - static_cast<std::int64_t>(h.h1) !=
        static_cast<std::int64_t>(count_monomials(z.space(), a)) - deg)
      ++c.euler_violations;
  }
  const MonotoneReport mono = check_h1_monotone(cache, box);
  c.monotone_checks = mono.checked;
  c.monotone_violations = mono.violations.size();
  if (fiber_slot) {
    const MonotoneReport eq = check_h1_constant(cache, box, *fiber_slot);
    c.constancy_checks = eq.checked;
    c.constancy_violations = eq.violations.size();
  }
  for (std::size_t i = 0; i < z.space().k(); ++i)
    for (const MultiIndex& a : {box.upper().with(i, 0), MultiIndex::zero(z.space().k())}) {
      const bool positive = stabilized_h1(cache, a, i) > 0;
      ++c.stabilization_checks;
      if (positive) ++c.stabilization_positive;
      if (positive != fiber_criterion(z, a, i).fires) ++c.stabilization_mismatches;
    }
  return c;
}

namespace {

FormulaRecord count_record(std::size_t computed, const char* what) {
  FormulaRecord r;
  r.a = MultiIndex{0};
  r.formula = 0;
  r.computed = static_cast<std::int64_t>(computed);
  r.pass = computed == 0;
  r.note = what;
  return r;
}

}  // namespace

VerificationReport verify_prop0bg1(std::size_t instances, const CampaignConfig& cfg, const CorpusSpec& spec) {
  const PrimeField f(cfg.modulus);
  VerificationReport rep;
  rep.verifier = "prop0bg1";
  rep.params = {{"instances", instances},        {"max_k", spec.max_k}, {"max_n", spec.max_n},
                {"max_degree", spec.max_degree}, {"seed", cfg.seed},    {"seeds", cfg.seeds}};
  rep.modulus = cfg.modulus;
  rep.required = cfg.required();
  rep.runs = parallel_map(
      cfg.seeds,
      [&](std::size_t r) {
        SeedRun run;
        run.seed = cfg.seed_for(r);
        Prop0bg1Counts total;
        for (std::size_t j = 0; j < instances; ++j) {
          total += check_prop0bg1(corpus_scheme(derive_seed(run.seed, 2 * j), f, spec), std::nullopt);
          FiberInstance fi = fiber_scheme(derive_seed(run.seed, 2 * j + 1), f, spec);
          total += check_prop0bg1(fi.z, fi.i);
        }
        run.records.push_back(count_record(total.euler_violations, "euler identity violations"));
        run.records.push_back(count_record(total.monotone_violations, "h1 increases along some e_i"));
        run.records.push_back(count_record(total.constancy_violations, "h1 changes along the fiber direction"));
        run.records.push_back(count_record(total.stabilization_mismatches, "stabilized h1 disagrees with fibers"));
        run.extra["checks"] = {{"euler", total.euler_checks},
                               {"monotone", total.monotone_checks},
                               {"constancy", total.constancy_checks},
                               {"stabilization", total.stabilization_checks},
                               {"stabilization_positive", total.stabilization_positive}};
        run.pass = total.ok();
        return run;
      },
      cfg.threads);
  return rep;
}

}  // namespace mproj
