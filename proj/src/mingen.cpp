#include "mproj/mingen.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "mproj/errors.hpp"
#include "mproj/parallel.hpp"
#include "mproj/rng.hpp"

namespace mproj {

const SectionKernel& IdealCache::kernel(const MultiIndex& a) {
  {
    std::lock_guard lock(mu_);
    auto it = kernels_.find(a);
    if (it != kernels_.end()) return *it->second;
  }
  auto k = std::make_unique<SectionKernel>(section_kernel(scheme(), a));
  std::lock_guard lock(mu_);
  auto [it, inserted] = kernels_.emplace(a, std::move(k));
  return *it->second;
}

namespace {

struct Source {
  const SectionKernel* kernel;
  std::size_t i;
  MonomialIndexer index;
  const FactorBasis* fb;
};

std::size_t shift(const Source& s, const MonomialIndexer& tix, std::size_t m, int j, std::vector<std::size_t>& pf) {
  s.index.decode(m, pf);
  pf[s.i] = s.fb->times_var(pf[s.i], j);
  return tix.index(pf);
}

}  // namespace

std::uint64_t image_dimension(IdealCache& cache, const MultiIndex& target, const std::vector<ImageSource>& sources) {
  const ZeroScheme& z = cache.scheme();
  const Space& x = z.space();
  const PrimeField& f = z.field();
  const std::uint64_t cap = cache.h0(target);
  if (cap == 0) return 0;

  std::vector<Source> srcs;
  for (const auto& s : sources) {
    if (s.from.plus(s.i) != target) throw DimensionMismatch("image source " + s.from.str() + " does not map to " + target.str());
    if (cache.h0(s.from) == 0) continue;
    srcs.push_back({&cache.kernel(s.from), s.i, MonomialIndexer(x, s.from), &factor_basis(x.n(s.i), s.from[s.i])});
  }
  if (srcs.empty()) return 0;

  MonomialIndexer tix(x, target);
  std::vector<std::size_t> pf(x.k());
  std::vector<std::int32_t> qpos(tix.size(), -1);
  std::int32_t nq = 0;
  // piv_q[s][r * (n_i+1) + j]: Q-coordinate of x_j * pivot_r.
  std::vector<std::vector<std::int32_t>> piv_q(srcs.size());
  for (std::size_t s = 0; s < srcs.size(); ++s) {
    const int vars = x.n(srcs[s].i) + 1;
    for (std::size_t r = 0; r < srcs[s].kernel->pivots.size(); ++r)
      for (int j = 0; j < vars; ++j) {
        std::size_t u = shift(srcs[s], tix, srcs[s].kernel->pivots[r], j, pf);
        if (qpos[u] < 0) qpos[u] = nq++;
        piv_q[s].push_back(qpos[u]);
      }
  }

  // Pass 1: distinct leading monomials outside Q, with a representative.
  struct Gen {
    std::uint32_t s, m;
    std::int32_t j;
  };
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> rep(tix.size(), kNone);
  std::vector<Gen> gens;
  std::uint64_t distinct = 0;
  for (std::size_t s = 0; s < srcs.size(); ++s) {
    const int vars = x.n(srcs[s].i) + 1;
    for (std::size_t m = 0; m < srcs[s].kernel->free_columns.size(); ++m)
      for (int j = 0; j < vars; ++j) {
        std::size_t u = shift(srcs[s], tix, srcs[s].kernel->free_columns[m], j, pf);
        if (qpos[u] < 0 && rep[u] == kNone) {
          rep[u] = gens.size();
          ++distinct;
        }
        gens.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(m), j});
      }
  }
  if (distinct >= cap || nq == 0) return std::min<std::uint64_t>(distinct, cap);

  // Pass 2: rank of the parts supported on Q.
  auto qpart = [&](const Gen& g, std::vector<Elem>& v) {
    std::fill(v.begin(), v.end(), 0);
    const SectionKernel& k = *srcs[g.s].kernel;
    const std::size_t vars = static_cast<std::size_t>(x.n(srcs[g.s].i) + 1);
    const std::size_t col = k.free_columns[g.m];
    for (std::size_t r = 0; r < k.pivots.size(); ++r) {
      Elem c = k.entry(r, col);
      if (c == 0) continue;
      auto& slot = v[static_cast<std::size_t>(piv_q[g.s][r * vars + static_cast<std::size_t>(g.j)])];
      slot = f.sub(slot, c);
    }
  };
  IncrementalEchelon ech(f, static_cast<std::size_t>(nq));
  std::vector<Elem> v(static_cast<std::size_t>(nq)), w(static_cast<std::size_t>(nq));
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (distinct + ech.rank() >= cap || ech.rank() == static_cast<std::size_t>(nq)) break;
    const Gen& gen = gens[g];
    std::size_t u = shift(srcs[gen.s], tix, srcs[gen.s].kernel->free_columns[gen.m], gen.j, pf);
    qpart(gen, v);
    if (qpos[u] >= 0) {
      auto& slot = v[static_cast<std::size_t>(qpos[u])];
      slot = f.add(slot, 1);
    } else {
      if (rep[u] == g) continue;
      qpart(gens[rep[u]], w);
      for (std::size_t c = 0; c < v.size(); ++c) v[c] = f.sub(v[c], w[c]);
    }
    ech.insert(v);
  }
  return std::min<std::uint64_t>(distinct + ech.rank(), cap);
}

MultMapReport mult_map(IdealCache& cache, const MultiIndex& a, std::size_t i) {
  const Space& x = cache.scheme().space();
  if (i >= x.k()) throw std::out_of_range("factor index out of range");
  require_twist(x, a.entries());
  MultMapReport r;
  r.a = a;
  r.i = i;
  const MultiIndex up = a.plus(i);
  r.dim_source = static_cast<std::uint64_t>(x.n(i) + 1) * cache.h0(a);
  r.dim_target = cache.h0(up);
  r.dim_image = image_dimension(cache, up, {{a, i}});
  r.dim_coker = r.dim_target - r.dim_image;
  r.injective = r.dim_image == r.dim_source;
  return r;
}

MultMapReport mult_map(const ZeroScheme& z, const MultiIndex& a, std::size_t i) {
  IdealCache cache(z);
  return mult_map(cache, a, i);
}

nlohmann::json to_json(const MultMapReport& r) {
  return {{"a", r.a.entries()},           {"i", r.i + 1},
          {"dim_source", r.dim_source},   {"dim_target", r.dim_target},
          {"dim_image", r.dim_image},     {"dim_coker", r.dim_coker},
          {"injective", r.injective}};
}

StabilizationResult stabilization_index(IdealCache& cache, const MultiIndex& fixed, std::size_t i) {
  const ZeroScheme& z = cache.scheme();
  if (i >= z.space().k()) throw std::out_of_range("factor index out of range");
  StabilizationResult res;
  const MultiIndex base = fixed.with(i, 0);
  res.fiber_deficient = fiber_criterion(z, base, i).fires;
  const std::size_t limit = z.degree() + 1;
  for (std::size_t t = 0; t <= limit; ++t) {
    if (cache.h1(base.with(i, static_cast<int>(t))) == 0) {
      res.stabilized = true;
      res.e = t;
      break;
    }
  }
  if (res.stabilized) {
    res.verified = true;
    for (std::size_t t = res.e + 1; t <= res.e + 3; ++t)
      if (cache.h1(base.with(i, static_cast<int>(t))) != 0) res.verified = false;
  }
  return res;
}

StabilizationResult stabilization_index(const ZeroScheme& z, const MultiIndex& fixed, std::size_t i) {
  IdealCache cache(z);
  return stabilization_index(cache, fixed, i);
}

std::uint64_t GeneratorTable::total() const {
  std::uint64_t s = 0;
  for (const auto& r : records) s += r.gens;
  return s;
}

const GeneratorRecord* GeneratorTable::find(const MultiIndex& a) const {
  auto it = std::lower_bound(records.begin(), records.end(), a,
                             [](const GeneratorRecord& r, const MultiIndex& b) { return r.a < b; });
  if (it == records.end() || it->a != a) return nullptr;
  return &*it;
}

GeneratorTable generator_table(IdealCache& cache, const Box& box) {
  if (box.k() != cache.scheme().space().k()) throw DimensionMismatch("box does not match the space");
  GeneratorTable t;
  t.box_upper = box.upper();
  for (const auto& c : box.points()) {
    GeneratorRecord r;
    r.a = c;
    r.h0 = cache.h0(c);
    if (r.h0 > 0) {
      std::vector<ImageSource> src;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] > 0) src.push_back({c.minus(i), i});
      r.parent_image = image_dimension(cache, c, src);
    }
    r.gens = r.h0 - r.parent_image;
    t.records.push_back(std::move(r));
  }
  return t;
}

GeneratorTable generator_table(const ZeroScheme& z, const Box& box) {
  IdealCache cache(z);
  return generator_table(cache, box);
}

nlohmann::json to_json(const GeneratorTable& t) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : t.records)
    recs.push_back({{"a", r.a.entries()}, {"h0", r.h0}, {"parent_image", r.parent_image}, {"gens", r.gens}});
  return {{"box", t.box_upper.entries()}, {"degrees", recs}, {"total", t.total()}};
}

GeneratorStructureReport check_generator_structure(IdealCache& cache, const Box& box) {
  const Space& x = cache.scheme().space();
  GeneratorTable t = generator_table(cache, box);
  GeneratorStructureReport rep;
  rep.actual_total = t.total();

  std::vector<MultiIndex> i0;
  for (const auto& r : t.records)
    if (r.h0 > 0) i0.push_back(r.a);
  const auto mins = minimal_elements(i0);
  std::vector<MultiIndex> allowed = mins;
  for (const auto& m : mins) rep.expected_total += cache.h0(m);
  // One W per immediate descendant: the smallest cokernel among the
  // minimal parents reaching it.
  std::map<MultiIndex, std::uint64_t> w;
  for (const auto& m : mins)
    for (std::size_t i = 0; i < m.size(); ++i) {
      const MultiIndex c = m.plus(i);
      if (!box.contains(c) || std::find(mins.begin(), mins.end(), c) != mins.end()) continue;
      const std::uint64_t v = mult_map(cache, m, i).dim_coker;
      auto it = w.find(c);
      if (it == w.end()) {
        w.emplace(c, v);
        allowed.push_back(c);
      } else {
        it->second = std::min(it->second, v);
      }
    }
  for (const auto& [c, v] : w) rep.expected_total += v;

  for (const auto& r : t.records) {
    if (r.gens == 0) continue;
    if (std::find(allowed.begin(), allowed.end(), r.a) == allowed.end()) rep.unexpected.push_back(r.a);
    for (std::size_t i = 0; i < r.a.size(); ++i) {
      if (x.n(i) != 1 || r.a[i] < 2) continue;
      if (cache.h1(r.a.minus(i, 2)) == 0) {
        rep.surjectivity_violations.push_back(r.a);
        break;
      }
    }
  }
  return rep;
}

StabilizationCokerCheck check_stabilization_coker(IdealCache& cache, const MultiIndex& fixed, std::size_t i) {
  StabilizationCokerCheck c;
  c.fixed = fixed.with(i, 0);
  c.i = i;
  c.stabilization = stabilization_index(cache, fixed, i);
  if (!c.stabilization.stabilized) return c;
  const std::size_t e = c.stabilization.e;
  c.coker = mult_map(cache, c.fixed.with(i, static_cast<int>(e)), i).dim_coker;
  c.expected = e == 0 ? cache.scheme().degree() : cache.h1(c.fixed.with(i, static_cast<int>(e) - 1));
  c.pass = c.coker == c.expected;
  return c;
}

std::int64_t bb1_formula(const MultiIndex& a, std::size_t i, std::int64_t z) {
  std::int64_t delta = 1;
  for (int v : a.entries()) delta *= v + 1;
  const std::int64_t delta_i = delta / (a[i] + 1);
  return z + (a[i] + 2) * delta_i - 2 * delta;
}

std::int64_t p2p1_formula(const Space& x, const MultiIndex& a, std::size_t i, std::int64_t z) {
  std::int64_t delta = 1;
  for (std::size_t h = 0; h < x.k(); ++h) delta *= static_cast<std::int64_t>(binomial(x.n(h) + a[h], a[h]));
  const std::int64_t n = x.n(i);
  const std::int64_t up = static_cast<std::int64_t>(binomial(n + a[i] + 1, n));
  const std::int64_t cur = static_cast<std::int64_t>(binomial(n + a[i], n));
  const std::int64_t v = -z + delta / cur * up - (n + 1) * (delta - z);
  return std::max<std::int64_t>(0, v);
}

namespace {

template <typename Formula>
SeedRun formula_run(const Space& x, std::size_t z, const Box& box, std::uint64_t seed, const PrimeField& f,
                    Formula formula) {
  SeedRun run;
  run.seed = seed;
  IdealCache cache(random_general(x, z, ComponentKind::Reduced, seed, f));
  CohomologyTable tab = regions(cache.cohomology(), box);
  if (!tab.maximal_rank) {
    run.pass = false;
    for (const auto& r : tab.records)
      if (r.h0 > 0 && r.h1 > 0) {
        run.failures.push_back("not of maximal rank at " + r.a.str());
        break;
      }
  }
  std::size_t negative = 0;
  for (const auto& a : tab.I0) {
    for (std::size_t i = 0; i < x.k(); ++i) {
      FormulaRecord rec;
      rec.a = a;
      rec.i = i;
      rec.hypothesis_ok = a[i] == 0 || cache.h0(a.minus(i)) == 0;
      rec.formula = formula(a, i);
      rec.computed = static_cast<std::int64_t>(mult_map(cache, a, i).dim_coker);
      rec.pass = rec.formula == rec.computed;
      if (rec.formula < 0) {
        rec.note = "negative formula value";
        ++negative;
      }
      if (rec.hypothesis_ok) {
        if (!rec.pass) run.pass = false;
        run.records.push_back(std::move(rec));
      } else {
        run.excluded.push_back(std::move(rec));
      }
    }
  }
  run.extra["negative_formula_values"] = negative;
  return run;
}

MultiIndex default_upper(std::size_t k, std::size_t z, const std::optional<MultiIndex>& box_upper) {
  if (box_upper) {
    if (box_upper->size() != k) throw DimensionMismatch("box has the wrong number of entries");
    return *box_upper;
  }
  return MultiIndex(std::vector<int>(k, static_cast<int>(z)));
}

}  // namespace

VerificationReport verify_bb1(std::size_t k, std::size_t z, const std::optional<MultiIndex>& box_upper,
                              const CampaignConfig& cfg) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const PrimeField f(cfg.modulus);
  const Space x(std::vector<int>(k, 1));
  const Box box(default_upper(k, z, box_upper));
  VerificationReport rep;
  rep.verifier = "bb1";
  rep.params = {{"k", k}, {"z", z}, {"box", box.upper().entries()}, {"seed", cfg.seed}, {"seeds", cfg.seeds}};
  rep.modulus = cfg.modulus;
  rep.required = cfg.required();
  const auto zz = static_cast<std::int64_t>(z);
  rep.runs = parallel_map(
      cfg.seeds,
      [&](std::size_t s) {
        return formula_run(x, z, box, cfg.seed_for(s), f,
                           [&](const MultiIndex& a, std::size_t i) { return bb1_formula(a, i, zz); });
      },
      cfg.threads);
  return rep;
}

VerificationReport verify_p2p1(const Space& x, std::size_t z, const std::optional<MultiIndex>& box_upper,
                               const CampaignConfig& cfg) {
  for (int n : x.dims())
    if (n != 1 && n != 2) throw Unsupported("every factor must be P^1 or P^2");
  const PrimeField f(cfg.modulus);
  const Box box(default_upper(x.k(), z, box_upper));
  VerificationReport rep;
  rep.verifier = "p2p1";
  rep.params = {{"space", x.dims()}, {"z", z}, {"box", box.upper().entries()}, {"seed", cfg.seed}, {"seeds", cfg.seeds}};
  rep.modulus = cfg.modulus;
  rep.required = cfg.required();
  const auto zz = static_cast<std::int64_t>(z);
  rep.runs = parallel_map(
      cfg.seeds,
      [&](std::size_t s) {
        return formula_run(x, z, box, cfg.seed_for(s), f,
                           [&](const MultiIndex& a, std::size_t i) { return p2p1_formula(x, a, i, zz); });
      },
      cfg.threads);
  return rep;
}

VerificationReport verify_pbg1(const std::vector<int>& y_dims, const std::vector<int>& r, int t,
                               const std::optional<std::vector<std::size_t>>& s_values, const CampaignConfig& cfg) {
  if (y_dims.size() != r.size()) throw DimensionMismatch("twist on Y must have one entry per factor of Y");
  if (t < 0) throw UnsupportedTwist("t must be nonnegative");
  for (int v : r)
    if (v < 0) throw UnsupportedTwist("twist on Y must be nonnegative");
  std::vector<int> dims = y_dims;
  dims.push_back(2);
  const Space x(dims);
  const std::size_t slot = x.k() - 1;
  std::uint64_t alpha = 1;
  for (std::size_t h = 0; h < y_dims.size(); ++h) alpha *= binomial(y_dims[h] + r[h], y_dims[h]);
  const std::uint64_t bound = alpha * binomial(t + 2, 2);
  std::vector<std::size_t> ss;
  if (s_values) {
    ss = *s_values;
  } else {
    for (std::size_t s = 0; s <= bound; ++s) ss.push_back(s);
  }
  std::vector<int> a_entries = r;
  a_entries.push_back(t + 1);
  const MultiIndex a(a_entries);
  const PrimeField f(cfg.modulus);

  VerificationReport rep;
  rep.verifier = "pbg1";
  rep.params = {{"y", y_dims}, {"r", r}, {"t", t}, {"s", ss}, {"seed", cfg.seed}, {"seeds", cfg.seeds}};
  rep.modulus = cfg.modulus;
  rep.required = cfg.required();
  rep.extra["alpha"] = alpha;
  rep.extra["hypothesis_bound"] = bound;
  rep.runs = parallel_map(
      cfg.seeds,
      [&](std::size_t run_idx) {
        SeedRun run;
        run.seed = cfg.seed_for(run_idx);
        for (std::size_t s : ss) {
          ZeroScheme z = random_general(x, s, ComponentKind::Reduced, derive_seed(run.seed, s), f);
          FormulaRecord rec;
          rec.a = a;
          rec.i = slot;
          rec.s = s;
          rec.formula = 0;
          rec.computed = static_cast<std::int64_t>(mult_map(z, a, slot).dim_coker);
          rec.hypothesis_ok = s < bound;
          rec.pass = rec.computed == 0;
          if (rec.hypothesis_ok) {
            if (!rec.pass) run.pass = false;
            run.records.push_back(std::move(rec));
          } else {
            run.excluded.push_back(std::move(rec));
          }
        }
        return run;
      },
      cfg.threads);
  return rep;
}

}  // namespace mproj
