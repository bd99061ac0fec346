#include "mproj/kerbundle.hpp"

#include <map>

#include "mproj/errors.hpp"
#include "mproj/mingen.hpp"
#include "mproj/parallel.hpp"
#include "mproj/rng.hpp"

namespace mproj {

namespace {

MultiIndex insert_at(const MultiIndex& outer, std::size_t slot, int v) {
  std::vector<int> e = outer.entries();
  e.insert(e.begin() + static_cast<std::ptrdiff_t>(slot), v);
  return MultiIndex(e);
}

MultiIndex drop_at(const MultiIndex& a, std::size_t slot) {
  std::vector<int> e = a.entries();
  e.erase(e.begin() + static_cast<std::ptrdiff_t>(slot));
  return e.empty() ? MultiIndex() : MultiIndex(e);
}

// Column (j, m) of the Euler map lands on x_ij * monomial m.
std::vector<std::size_t> euler_targets(const Space& x, std::size_t slot, const MultiIndex& degree) {
  MonomialIndexer src(x, degree);
  MonomialIndexer dst(x, degree.plus(slot));
  const FactorBasis& fb = factor_basis(x.n(slot), degree[slot]);
  const std::size_t vars = static_cast<std::size_t>(x.n(slot) + 1);
  std::vector<std::size_t> out(vars * src.size());
  std::vector<std::size_t> pf(x.k());
  for (std::size_t j = 0; j < vars; ++j)
    for (std::size_t m = 0; m < src.size(); ++m) {
      src.decode(m, pf);
      pf[slot] = fb.times_var(pf[slot], static_cast<int>(j));
      out[j * src.size() + m] = dst.index(pf);
    }
  return out;
}

}  // namespace

KernelSectionSpace build_sections(const PrimeField& f, const Space& x, std::size_t slot, int t,
                                  const MultiIndex& outer) {
  if (slot >= x.k()) throw std::out_of_range("slot out of range");
  if (t <= 0) throw UnsupportedTwist("cotangent twist must be at least 1");
  if (outer.size() + 1 != x.k())
    throw DimensionMismatch("outer twist must have one entry per other factor");
  KernelSectionSpace v;
  v.space = x;
  v.slot = slot;
  v.t = t;
  v.outer = outer;
  v.degree = insert_at(outer, slot, t - 1);
  v.block = count_monomials(x, v.degree);
  // Kernel on the slot factor alone, then tensored with every monomial of
  // the other factors.
  const int n = x.n(slot);
  const Space line({n});
  const MultiIndex d{t - 1};
  const std::size_t fb = count_monomials(line, d);
  const auto targets = euler_targets(line, 0, d);
  DenseMatrix m(count_monomials(line, d.plus(0)), targets.size());
  for (std::size_t c = 0; c < targets.size(); ++c) m(targets[c], c) = 1;
  const auto local = kernel_vectors(f, row_reduce(f, std::move(m)));

  MonomialIndexer ix(x, v.degree);
  std::vector<std::size_t> pf(x.k());
  for (std::size_t o = 0; o < v.block; ++o) {
    ix.decode(o, pf);
    if (pf[slot] != 0) continue;
    for (const auto& kv : local) {
      std::vector<Elem> sec(static_cast<std::size_t>(n + 1) * v.block, 0);
      for (std::size_t j = 0; j <= static_cast<std::size_t>(n); ++j)
        for (std::size_t q = 0; q < fb; ++q) {
          pf[slot] = q;
          sec[j * v.block + ix.index(pf)] = kv[j * fb + q];
        }
      pf[slot] = 0;
      v.basis.push_back(std::move(sec));
    }
  }
  return v;
}

std::vector<Elem> euler_image(const PrimeField& f, const KernelSectionSpace& v, std::span<const Elem> section) {
  const auto targets = euler_targets(v.space, v.slot, v.degree);
  if (section.size() != targets.size()) throw DimensionMismatch("section has the wrong length");
  std::vector<Elem> out(count_monomials(v.space, v.degree.plus(v.slot)), 0);
  for (std::size_t c = 0; c < targets.size(); ++c) out[targets[c]] = f.add(out[targets[c]], section[c]);
  return out;
}

std::uint64_t omega_h0(int n, int x) {
  if (x <= 0) return 0;
  return static_cast<std::uint64_t>(n + 1) * binomial(n + x - 1, n) - binomial(n + x, n);
}

BundleCohomology impose_points(const ZeroScheme& s, const KernelSectionSpace& v) {
  if (s.space().dims() != v.space.dims()) throw DimensionMismatch("scheme and bundle live on different spaces");
  const PrimeField& f = s.field();
  const std::size_t vars = static_cast<std::size_t>(v.space.n(v.slot) + 1);
  BundleCohomology out;
  if (v.dim() == 0) {
    out.h1 = static_cast<std::uint64_t>(v.space.n(v.slot)) * s.size();
    for (const auto& c : s.components())
      if (c.kind != ComponentKind::Reduced) throw Unsupported("bundle conditions need reduced points");
    return out;
  }
  IncrementalEchelon ech(f, v.dim());
  std::vector<Elem> row(v.dim());
  for (const auto& c : s.components()) {
    if (c.kind != ComponentKind::Reduced) throw Unsupported("bundle conditions need reduced points");
    const auto values = monomial_values(f, v.space, v.degree, c.point);
    for (std::size_t j = 0; j < vars; ++j) {
      for (std::size_t b = 0; b < v.dim(); ++b) {
        Elem acc = 0;
        const Elem* sec = v.basis[b].data() + j * v.block;
        for (std::size_t m = 0; m < v.block; ++m) acc = f.mul_add(acc, sec[m], values[m]);
        row[b] = acc;
      }
      ech.insert(row);
    }
  }
  out.rank = ech.rank();
  out.h0 = v.dim() - out.rank;
  out.h1 = static_cast<std::uint64_t>(v.space.n(v.slot)) * s.size() - out.rank;
  return out;
}

namespace {

FormulaRecord bundle_record(const MultiIndex& a, std::size_t slot, std::size_t s, std::int64_t expected,
                            std::int64_t computed, const char* what) {
  FormulaRecord r;
  r.a = a;
  r.i = slot;
  r.s = s;
  r.formula = expected;
  r.computed = computed;
  r.pass = expected == computed;
  r.note = what;
  return r;
}

nlohmann::json twist_json(const std::vector<int>& ts) {
  if (ts.size() == 1) return ts.front();
  return ts;
}

}  // namespace

VerificationReport verify_bg2(const std::vector<int>& y_dims, const std::vector<int>& r, const std::vector<int>& xs,
                              const CampaignConfig& cfg) {
  if (y_dims.size() != r.size()) throw DimensionMismatch("twist on Y must have one entry per factor of Y");
  for (int v : r)
    if (v < 0) throw UnsupportedTwist("twist on Y must be nonnegative");
  for (int v : xs)
    if (v < 1) throw UnsupportedTwist("x must be at least 1");
  std::vector<int> dims = y_dims;
  dims.push_back(2);
  const Space x(dims);
  const std::size_t slot = x.k() - 1;
  const PrimeField f(cfg.modulus);
  const MultiIndex outer = r.empty() ? MultiIndex() : MultiIndex(r);
  std::uint64_t alpha = 1;
  for (std::size_t h = 0; h < y_dims.size(); ++h) alpha *= binomial(y_dims[h] + r[h], y_dims[h]);

  std::vector<KernelSectionSpace> spaces;
  for (int t : xs) spaces.push_back(build_sections(f, x, slot, t, outer));

  VerificationReport rep;
  rep.verifier = "bg2";
  rep.params = {{"y", y_dims}, {"r", r}, {"x", xs}, {"seed", cfg.seed}, {"seeds", cfg.seeds}};
  rep.modulus = cfg.modulus;
  rep.required = cfg.required();
  rep.extra["bundle"] = {{"slot", slot + 1}, {"t", twist_json(xs)}, {"alpha", alpha}};
  rep.runs = parallel_map(
      cfg.seeds,
      [&](std::size_t run_idx) {
        SeedRun run;
        run.seed = cfg.seed_for(run_idx);
        for (std::size_t q = 0; q < xs.size(); ++q) {
          const KernelSectionSpace& v = spaces[q];
          const auto xx = static_cast<std::int64_t>(xs[q]);
          const auto full = static_cast<std::int64_t>(alpha) * (xx * xx - 1);
          if (static_cast<std::int64_t>(v.dim()) != full) {
            run.pass = false;
            run.failures.push_back("section space dimension " + std::to_string(v.dim()) + " at x=" +
                                   std::to_string(xx) + ", expected " + std::to_string(full));
          }
          const std::size_t top = static_cast<std::size_t>((full + 1) / 2) + 2;
          for (std::size_t s = 0; s <= top; ++s) {
            ZeroScheme pts = random_general(x, s, ComponentKind::Reduced,
                                            derive_seed(derive_seed(run.seed, static_cast<std::uint64_t>(xx)), s), f);
            BundleCohomology c = impose_points(pts, v);
            const auto two_s = 2 * static_cast<std::int64_t>(s);
            const MultiIndex a = v.degree.plus(slot);
            run.records.push_back(bundle_record(a, slot, s, std::max<std::int64_t>(0, full - two_s),
                                                static_cast<std::int64_t>(c.h0), "h0"));
            run.records.push_back(bundle_record(a, slot, s, std::max<std::int64_t>(0, two_s - full),
                                                static_cast<std::int64_t>(c.h1), "h1"));
          }
        }
        for (const auto& rec : run.records)
          if (!rec.pass) run.pass = false;
        return run;
      },
      cfg.threads);
  return rep;
}

Ee2Thresholds ee2_thresholds(const Space& x, std::size_t i, const MultiIndex& a) {
  if (a.size() != x.k()) throw DimensionMismatch("degree does not match the space");
  if (i >= x.k()) throw std::out_of_range("factor index out of range");
  Ee2Thresholds t;
  t.omega = omega_h0(x.n(i), a[i] + 1);
  t.outer = 1;
  for (std::size_t j = 0; j < x.k(); ++j)
    if (j != i) t.outer *= binomial(x.n(j) + a[j], x.n(j));
  const auto n = static_cast<std::uint64_t>(x.n(i));
  t.tau1 = t.omega / n * t.outer;
  t.tau2 = (t.omega + n - 1) / n * t.outer;
  return t;
}

VerificationReport verify_ee2(const Space& x, std::size_t i, const MultiIndex& a,
                              const std::optional<std::vector<std::size_t>>& s_values, const CampaignConfig& cfg) {
  const Ee2Thresholds th = ee2_thresholds(x, i, a);
  const PrimeField f(cfg.modulus);
  const KernelSectionSpace v = build_sections(f, x, i, a[i] + 1, drop_at(a, i));
  std::vector<std::size_t> ss;
  if (s_values) {
    ss = *s_values;
  } else {
    for (std::size_t s = 0; s <= th.tau2 + 2; ++s) ss.push_back(s);
  }

  VerificationReport rep;
  rep.verifier = "ee2";
  rep.params = {{"space", x.dims()}, {"i", i + 1}, {"a", a.entries()}, {"s", ss}, {"seed", cfg.seed}, {"seeds", cfg.seeds}};
  rep.modulus = cfg.modulus;
  rep.required = cfg.required();
  rep.extra["bundle"] = {{"slot", i + 1}, {"t", a[i] + 1}, {"alpha", th.outer}};
  rep.extra["tau1"] = th.tau1;
  rep.extra["tau2"] = th.tau2;
  rep.extra["hypothesis"] = "unknown";
  rep.runs = parallel_map(
      cfg.seeds,
      [&](std::size_t run_idx) {
        SeedRun run;
        run.seed = cfg.seed_for(run_idx);
        for (std::size_t s : ss) {
          ZeroScheme pts = random_general(x, s, ComponentKind::Reduced, derive_seed(run.seed, s), f);
          BundleCohomology c = impose_points(pts, v);
          const auto mu = mult_map(pts, a, i);
          run.records.push_back(bundle_record(a, i, s, static_cast<std::int64_t>(mu.dim_source - mu.dim_image),
                                              static_cast<std::int64_t>(c.h0), "kernel of mu"));
          if (s <= th.tau1) run.records.push_back(bundle_record(a, i, s, 0, static_cast<std::int64_t>(c.h1), "h1"));
          if (s >= th.tau2) run.records.push_back(bundle_record(a, i, s, 0, static_cast<std::int64_t>(c.h0), "h0"));
        }
        for (auto& rec : run.records)
          if (!rec.pass) {
            run.pass = false;
            rec.note += ": outside effective range";
          }
        return run;
      },
      cfg.threads);
  return rep;
}

}  // namespace mproj
