#include "mproj/cohomo.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mproj/errors.hpp"

namespace mproj {

std::string to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::Evaluation: return "evaluation";
    case FunctionalKind::Partial: return "partial";
    case FunctionalKind::TangentDerivative: return "tangent";
  }
  return "?";
}

std::vector<Functional> scheme_functionals(const ZeroScheme& z) {
  const Space& x = z.space();
  const PrimeField& f = z.field();
  std::vector<Functional> out;
  for (std::size_t c = 0; c < z.size(); ++c) {
    const auto& comp = z.components()[c];
    out.push_back({c, FunctionalKind::Evaluation, {FunctionalTerm{}}});
    if (comp.kind == ComponentKind::Double) {
      for (std::size_t i = 0; i < x.k(); ++i) {
        const std::size_t ci = chart_index(comp.point[i]);
        for (std::size_t j = 0; j <= static_cast<std::size_t>(x.n(i)); ++j) {
          if (j == ci) continue;
          FunctionalTerm t{static_cast<int>(i), std::vector<Elem>(comp.point[i].size(), 0)};
          t.direction[j] = 1;
          out.push_back({c, FunctionalKind::Partial, {t}});
        }
      }
    } else if (comp.kind == ComponentKind::Tangent) {
      Functional d{c, FunctionalKind::TangentDerivative, {}};
      for (std::size_t i = 0; i < x.k(); ++i) {
        auto w = homogeneous_direction(f, x, comp, i);
        if (std::any_of(w.begin(), w.end(), [](Elem v) { return v != 0; }))
          d.terms.push_back({static_cast<int>(i), std::move(w)});
      }
      out.push_back(std::move(d));
    }
  }
  return out;
}

namespace {

std::vector<Elem> term_factor(const ZeroScheme& z, const Point& p, const FunctionalTerm& t, std::size_t l, int d) {
  const int n = z.space().n(l);
  if (t.deriv_factor == static_cast<int>(l)) return factor_derivative(z.field(), n, d, p[l], t.direction);
  return factor_values(z.field(), n, d, p[l]);
}

}  // namespace

std::vector<Elem> functional_row(const ZeroScheme& z, const Functional& phi, const MultiIndex& a) {
  require_twist(z.space(), a.entries());
  const PrimeField& f = z.field();
  const Point& p = z.components().at(phi.component).point;
  std::vector<Elem> row(count_monomials(z.space(), a), 0);
  for (const auto& t : phi.terms) {
    std::vector<Elem> acc{1};
    for (std::size_t l = 0; l < z.space().k(); ++l) acc = kron(f, acc, term_factor(z, p, t, l, a[l]));
    for (std::size_t m = 0; m < row.size(); ++m) row[m] = f.add(row[m], acc[m]);
  }
  return row;
}

ConditionsMatrix conditions_matrix(const ZeroScheme& z, const MultiIndex& a) {
  require_twist(z.space(), a.entries());
  ConditionsMatrix cm{DenseMatrix(0, count_monomials(z.space(), a)), {}};
  for (const auto& phi : scheme_functionals(z)) {
    cm.matrix.append_row(functional_row(z, phi, a));
    cm.labels.push_back({phi.component, phi.kind});
  }
  return cm;
}

std::vector<Elem> SectionKernel::vector(const PrimeField& f, std::size_t idx) const {
  std::vector<Elem> v(N, 0);
  const std::size_t m = free_columns.at(idx);
  v[m] = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(entry(r, m));
  return v;
}

SectionKernel section_kernel(const ZeroScheme& z, const MultiIndex& a) {
  SectionKernel k;
  k.a = a;
  Echelon e = row_reduce(z.field(), conditions_matrix(z, a).matrix);
  k.N = e.rows.cols();
  k.pivots = e.pivots;
  k.reduced.assign(e.rows.data().begin(), e.rows.data().end());
  std::vector<bool> is_pivot(k.N, false);
  for (auto p : k.pivots) is_pivot[p] = true;
  for (std::size_t c = 0; c < k.N; ++c)
    if (!is_pivot[c]) k.free_columns.push_back(c);
  return k;
}

namespace {

std::vector<std::size_t> identity_order(std::size_t k) {
  std::vector<std::size_t> o(k);
  std::iota(o.begin(), o.end(), 0);
  return o;
}

}  // namespace

FunctionalRankEngine::FunctionalRankEngine(const ZeroScheme& z, std::vector<Functional> phis)
    : z_(&z), phis_(std::move(phis)) {
  for (std::size_t p = 0; p < phis_.size(); ++p) {
    if (phis_[p].component >= z.size()) throw std::out_of_range("functional refers to a missing component");
    for (const auto& t : phis_[p].terms) {
      term_owner_.push_back(p);
      terms_.push_back(&t);
    }
  }
}

const std::vector<std::vector<Elem>>& FunctionalRankEngine::factor_terms(std::size_t l, int d) {
  const auto key = std::make_pair(l, d);
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const PrimeField& f = z_->field();
  const std::size_t nl = factor_basis(z_->space().n(l), d).size();
  DenseMatrix u(0, nl);
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const Point& p = z_->components()[phis_[term_owner_[t]].component].point;
    u.append_row(term_factor(*z_, p, *terms_[t], l, d));
  }
  const auto piv = pivot_columns(f, u);
  std::vector<std::vector<Elem>> out(terms_.size(), std::vector<Elem>(piv.size()));
  for (std::size_t t = 0; t < terms_.size(); ++t)
    for (std::size_t c = 0; c < piv.size(); ++c) out[t][c] = u(t, piv[c]);
  std::lock_guard lock(mu_);
  auto [it, inserted] = cache_.emplace(key, std::move(out));
  return it->second;
}

std::size_t FunctionalRankEngine::rank(const MultiIndex& a, const std::vector<std::size_t>& order_in) {
  const Space& x = z_->space();
  require_twist(x, a.entries());
  if (phis_.empty()) return 0;
  std::vector<std::size_t> order = order_in.empty() ? identity_order(x.k()) : order_in;
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != identity_order(x.k())) throw std::invalid_argument("factor order is not a permutation");
  }
  const PrimeField& f = z_->field();
  const std::size_t T = terms_.size();

  std::vector<std::vector<Elem>> cur = factor_terms(order[0], a[order[0]]);
  std::size_t r = cur.empty() ? 0 : cur[0].size();
  for (std::size_t step = 1; step < order.size(); ++step) {
    if (r == 0) return 0;
    const auto& u = factor_terms(order[step], a[order[step]]);
    const std::size_t s = u.empty() ? 0 : u[0].size();
    const std::size_t cols = r * s;
    const bool last = step + 1 == order.size();
    if (last) {
      // Sum the terms of each functional and take the rank directly.
      DenseMatrix m(phis_.size(), cols);
      for (std::size_t t = 0; t < T; ++t) {
        auto row = m.row(term_owner_[t]);
        for (std::size_t i = 0; i < r; ++i) {
          if (cur[t][i] == 0) continue;
          for (std::size_t j = 0; j < s; ++j) row[i * s + j] = f.mul_add(row[i * s + j], cur[t][i], u[t][j]);
        }
      }
      return mproj::rank(f, std::move(m));
    }
    DenseMatrix v(T, cols);
    for (std::size_t t = 0; t < T; ++t) {
      auto row = v.row(t);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < s; ++j) row[i * s + j] = f.mul(cur[t][i], u[t][j]);
    }
    const auto piv = pivot_columns(f, v);
    std::vector<std::vector<Elem>> next(T, std::vector<Elem>(piv.size()));
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t c = 0; c < piv.size(); ++c) next[t][c] = v(t, piv[c]);
    cur = std::move(next);
    r = piv.size();
  }
  // Single factor: sum terms per functional.
  DenseMatrix m(phis_.size(), r);
  for (std::size_t t = 0; t < T; ++t) {
    auto row = m.row(term_owner_[t]);
    for (std::size_t i = 0; i < r; ++i) row[i] = f.add(row[i], cur[t][i]);
  }
  return mproj::rank(f, std::move(m));
}

std::size_t functional_rank(const ZeroScheme& z, const std::vector<Functional>& phis, const MultiIndex& a,
                            const std::vector<std::size_t>& order) {
  FunctionalRankEngine e(z, phis);
  return e.rank(a, order);
}

void require_twist(const Space& x, const std::vector<int>& a) {
  if (a.size() != x.k()) throw DimensionMismatch("twist has " + std::to_string(a.size()) + " entries, space has " +
                                                 std::to_string(x.k()) + " factors");
  for (int v : a)
    if (v < 0) throw UnsupportedTwist("negative twists are not supported");
}

Cohomology h0_h1(const ZeroScheme& z, const MultiIndex& a) {
  const std::uint64_t rk = functional_rank(z, scheme_functionals(z), a);
  return {count_monomials(z.space(), a) - rk, z.degree() - rk};
}

Cohomology h0_h1_dense(const ZeroScheme& z, const MultiIndex& a) {
  auto cm = conditions_matrix(z, a);
  const std::uint64_t rk = rank(z.field(), std::move(cm.matrix));
  return {count_monomials(z.space(), a) - rk, z.degree() - rk};
}

CohomologyCache::CohomologyCache(ZeroScheme z) : z_(std::move(z)), engine_(z_, scheme_functionals(z_)) {}

Cohomology CohomologyCache::at(const MultiIndex& a) {
  {
    std::lock_guard lock(mu_);
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
  }
  const std::uint64_t rk = engine_.rank(a);
  Cohomology c{count_monomials(z_.space(), a) - rk, z_.degree() - rk};
  std::lock_guard lock(mu_);
  memo_.emplace(a, c);
  return c;
}

const DegreeRecord* CohomologyTable::find(const MultiIndex& a) const {
  auto it = std::lower_bound(records.begin(), records.end(), a,
                             [](const DegreeRecord& r, const MultiIndex& b) { return r.a < b; });
  if (it == records.end() || it->a != a) return nullptr;
  return &*it;
}

Box vanishing_box(const ZeroScheme& z) {
  const int side = z.degree() == 0 ? 0 : static_cast<int>(z.degree()) - 1;
  return Box::cube(z.space().k(), side);
}

Box report_box(const ZeroScheme& z) { return Box::cube(z.space().k(), static_cast<int>(z.degree())); }

CohomologyTable regions(const ZeroScheme& z, const Box& box) {
  CohomologyCache cache(z);
  return regions(cache, box);
}

CohomologyTable regions(CohomologyCache& cache, const Box& box) {
  const ZeroScheme& z = cache.scheme();
  if (box.k() != z.space().k()) throw DimensionMismatch("box does not match the space");
  CohomologyTable t;
  t.space = z.space();
  t.scheme_degree = z.degree();
  t.box_upper = box.upper();
  for (const auto& a : box.points()) {
    Cohomology c = cache.at(a);
    t.records.push_back({a, count_monomials(z.space(), a), c.h0, c.h1});
    if (c.h0 > 0) t.I0.push_back(a);
    if (c.h1 > 0) t.I1.push_back(a);
    if (c.h0 > 0 && c.h1 > 0) t.maximal_rank = false;
  }
  t.minimal_I0 = minimal_elements(t.I0);
  t.box_complete = true;
  for (int u : box.upper().entries())
    if (static_cast<std::int64_t>(u) + 1 < static_cast<std::int64_t>(z.degree())) t.box_complete = false;
  return t;
}

nlohmann::json to_json(const CohomologyTable& t) {
  nlohmann::json degs = nlohmann::json::array();
  for (const auto& r : t.records) degs.push_back({{"a", r.a.entries()}, {"N", r.N}, {"h0", r.h0}, {"h1", r.h1}});
  nlohmann::json mins = nlohmann::json::array();
  for (const auto& a : t.minimal_I0) mins.push_back(a.entries());
  nlohmann::json j;
  j["space"] = t.space.dims();
  j["scheme_degree"] = t.scheme_degree;
  j["box"] = t.box_upper.entries();
  j["degrees"] = std::move(degs);
  j["I0min"] = std::move(mins);
  j["maximal_rank"] = t.maximal_rank;
  j["box_complete"] = t.box_complete;
  return j;
}

std::string to_csv(const CohomologyTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.space.k(); ++i) os << "a" << (i + 1) << ",";
  os << "N,h0,h1\n";
  for (const auto& r : t.records) {
    for (int v : r.a.entries()) os << v << ",";
    os << r.N << "," << r.h0 << "," << r.h1 << "\n";
  }
  return os.str();
}

std::string render_staircase(const CohomologyTable& t) {
  if (t.space.k() != 2) throw Unsupported("staircase rendering needs exactly two factors");
  std::ostringstream os;
  const int u1 = t.box_upper[0];
  const int u2 = t.box_upper[1];
  for (int y = u2; y >= 0; --y) {
    os << (y < 10 ? " " : "") << y << " |";
    for (int x = 0; x <= u1; ++x) {
      const DegreeRecord* r = t.find(MultiIndex{x, y});
      char ch = '.';
      if (r->h0 > 0 && r->h1 > 0) ch = '#';
      else if (r->h0 > 0) ch = '0';
      else if (r->h1 > 0) ch = '1';
      os << ' ' << ch;
    }
    os << "\n";
  }
  os << "   +";
  for (int x = 0; x <= u1; ++x) os << "--";
  os << "\n    ";
  for (int x = 0; x <= u1; ++x) os << ' ' << (x % 10);
  os << "   (a1 across, a2 up)\n";
  os << "legend: 0 = h0>0 only, 1 = h1>0 only, # = both, . = neither\n";
  os << "maximal rank: " << (t.maximal_rank ? "yes" : "no") << (t.box_complete ? "" : " (within box)") << "\n";
  return os.str();
}

MonotoneReport check_h1_monotone(const ZeroScheme& z, const Box& box) {
  CohomologyCache cache(z);
  return check_h1_monotone(cache, box);
}

MonotoneReport check_h1_monotone(CohomologyCache& cache, const Box& box) {
  MonotoneReport rep;
  for (const auto& a : box.points()) {
    const std::uint64_t h = cache.h1(a);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::uint64_t hn = cache.h1(a.plus(i));
      ++rep.checked;
      if (hn > h) rep.violations.push_back({a, i, h, hn});
    }
  }
  return rep;
}

MonotoneReport check_h1_constant(CohomologyCache& cache, const Box& box, std::size_t i) {
  MonotoneReport rep;
  for (const auto& a : box.points()) {
    const std::uint64_t h = cache.h1(a);
    const std::uint64_t hn = cache.h1(a.plus(i));
    ++rep.checked;
    if (hn != h) rep.violations.push_back({a, i, h, hn});
  }
  return rep;
}

std::uint64_t stabilized_h1(const ZeroScheme& z, const MultiIndex& a, std::size_t i) {
  CohomologyCache cache(z);
  return stabilized_h1(cache, a, i);
}

std::uint64_t stabilized_h1(CohomologyCache& cache, const MultiIndex& a, std::size_t i) {
  const std::size_t deg = cache.scheme().degree();
  std::uint64_t prev = cache.h1(a);
  for (std::size_t t = 1;; ++t) {
    const std::uint64_t cur = cache.h1(a.plus(i, static_cast<int>(t)));
    if (t >= deg && cur == prev) return cur;
    prev = cur;
  }
}

std::vector<std::vector<std::size_t>> fibers(const ZeroScheme& z, std::size_t i) {
  if (i >= z.space().k()) throw std::out_of_range("factor index out of range");
  std::vector<std::vector<Elem>> keys;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < z.size(); ++c) {
    auto key = normalize(z.field(), Point{z.components()[c].point[i]})[0];
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      groups.push_back({c});
    } else {
      groups[static_cast<std::size_t>(it - keys.begin())].push_back(c);
    }
  }
  return groups;
}

std::vector<Functional> fiber_trace_functionals(const ZeroScheme& z, std::size_t i,
                                                const std::vector<std::size_t>& members) {
  std::vector<Functional> out;
  for (auto& phi : scheme_functionals(z)) {
    if (std::find(members.begin(), members.end(), phi.component) == members.end()) continue;
    const auto& comp = z.components()[phi.component];
    bool keep = true;
    if (phi.kind == FunctionalKind::Partial) {
      keep = phi.terms[0].deriv_factor != static_cast<int>(i);
    } else if (phi.kind == FunctionalKind::TangentDerivative) {
      auto w = homogeneous_direction(z.field(), z.space(), comp, i);
      keep = std::all_of(w.begin(), w.end(), [](Elem v) { return v == 0; });
    }
    if (keep) out.push_back(std::move(phi));
  }
  return out;
}

FiberCriterion fiber_criterion(const ZeroScheme& z, const MultiIndex& a, std::size_t i) {
  FiberCriterion fc;
  for (const auto& g : fibers(z, i)) {
    auto phis = fiber_trace_functionals(z, i, g);
    const std::size_t rk = functional_rank(z, phis, a);
    const std::uint64_t h1 = phis.size() - rk;
    if (h1 > fc.max_trace_h1) {
      fc.max_trace_h1 = h1;
      fc.witness_component = g.front();
    }
  }
  fc.fires = fc.max_trace_h1 > 0;
  return fc;
}

}  // namespace mproj
