#include "mproj/scheme.hpp"

#include <algorithm>
#include <stdexcept>

#include "mproj/errors.hpp"
#include "mproj/rng.hpp"

namespace mproj {

std::string to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Reduced: return "reduced";
    case ComponentKind::Tangent: return "tangent";
    case ComponentKind::Double: return "double";
  }
  return "?";
}

ComponentKind parse_kind(const std::string& s) {
  if (s == "reduced") return ComponentKind::Reduced;
  if (s == "tangent") return ComponentKind::Tangent;
  if (s == "double") return ComponentKind::Double;
  throw std::invalid_argument("unknown component kind '" + s + "'");
}

std::size_t LocalComponent::degree(const Space& x) const {
  switch (kind) {
    case ComponentKind::Reduced: return 1;
    case ComponentKind::Tangent: return 2;
    case ComponentKind::Double: return 1 + static_cast<std::size_t>(x.total_dim());
  }
  return 0;
}

std::size_t chart_index(std::span<const Elem> coords) {
  for (std::size_t j = coords.size(); j-- > 0;)
    if (coords[j] != 0) return j;
  throw std::invalid_argument("all-zero coordinate vector is not a projective point");
}

Point normalize(const PrimeField& f, const Point& p) {
  Point out = p;
  for (auto& c : out) {
    Elem s = f.inv(c[chart_index(c)]);
    for (auto& v : c) v = f.mul(v, s);
  }
  return out;
}

bool same_point(const PrimeField& f, const Point& a, const Point& b) { return normalize(f, a) == normalize(f, b); }

std::vector<Elem> homogeneous_direction(const PrimeField& f, const Space& x, const LocalComponent& c,
                                        std::size_t i) {
  std::size_t offset = 0;
  for (std::size_t l = 0; l < i; ++l) offset += static_cast<std::size_t>(x.n(l));
  const auto& q = c.point[i];
  const std::size_t ci = chart_index(q);
  const Elem lambda = q[ci];
  std::vector<Elem> w(q.size(), 0);
  std::size_t b = 0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (j == ci) continue;
    w[j] = f.mul(lambda, c.direction[offset + b]);
    ++b;
  }
  return w;
}

ZeroScheme::ZeroScheme(Space x, PrimeField f, std::vector<LocalComponent> components)
    : ZeroScheme(std::move(x), f, std::move(components), true) {}

ZeroScheme ZeroScheme::from_representatives(Space x, PrimeField f, std::vector<LocalComponent> components) {
  return ZeroScheme(std::move(x), f, std::move(components), false);
}

ZeroScheme::ZeroScheme(Space x, PrimeField f, std::vector<LocalComponent> components, bool normalize_points)
    : space_(std::move(x)), field_(f), comps_(std::move(components)) {
  const std::size_t dirlen = static_cast<std::size_t>(space_.total_dim());
  std::vector<Point> normalized;
  for (std::size_t c = 0; c < comps_.size(); ++c) {
    auto& comp = comps_[c];
    const std::string where = "component " + std::to_string(c);
    if (comp.point.size() != space_.k()) throw DimensionMismatch(where + ": wrong number of factors");
    for (std::size_t i = 0; i < space_.k(); ++i) {
      if (comp.point[i].size() != static_cast<std::size_t>(space_.n(i) + 1))
        throw DimensionMismatch(where + ": factor " + std::to_string(i) + " has wrong coordinate count");
      for (auto& v : comp.point[i]) v = field_.reduce(v);
      if (std::all_of(comp.point[i].begin(), comp.point[i].end(), [](Elem v) { return v == 0; }))
        throw std::invalid_argument(where + ": factor " + std::to_string(i) + " is the zero vector");
    }
    if (comp.kind == ComponentKind::Tangent) {
      if (comp.direction.size() != dirlen) throw DimensionMismatch(where + ": direction must have sum(n_i) entries");
      for (auto& v : comp.direction) v = field_.reduce(v);
      if (std::all_of(comp.direction.begin(), comp.direction.end(), [](Elem v) { return v == 0; }))
        throw std::invalid_argument(where + ": tangent direction is zero");
    } else {
      comp.direction.clear();
    }
    Point np = normalize(field_, comp.point);
    if (std::find(normalized.begin(), normalized.end(), np) != normalized.end())
      throw std::invalid_argument(where + ": support repeats an earlier component");
    if (normalize_points) comp.point = np;
    normalized.push_back(std::move(np));
    degree_ += comp.degree(space_);
  }
}

std::vector<Point> ZeroScheme::support() const {
  std::vector<Point> out;
  for (const auto& c : comps_) out.push_back(c.point);
  return out;
}

std::size_t degree(const ZeroScheme& z) { return z.degree(); }

ZeroScheme disjoint_union(const ZeroScheme& a, const ZeroScheme& b) {
  if (!(a.space() == b.space()) || !(a.field() == b.field()))
    throw DimensionMismatch("disjoint_union: space or field mismatch");
  auto comps = a.components();
  comps.insert(comps.end(), b.components().begin(), b.components().end());
  return ZeroScheme::from_representatives(a.space(), a.field(), std::move(comps));
}

namespace {

std::vector<Elem> random_projective(Rng& rng, const PrimeField& f, int n) {
  std::vector<Elem> c(static_cast<std::size_t>(n + 1));
  do {
    for (auto& v : c) v = rng.element(f);
  } while (std::all_of(c.begin(), c.end(), [](Elem v) { return v == 0; }));
  return c;
}

Point random_point(Rng& rng, const PrimeField& f, const Space& x) {
  Point p;
  for (std::size_t i = 0; i < x.k(); ++i) p.push_back(random_projective(rng, f, x.n(i)));
  return normalize(f, p);
}

std::vector<Elem> random_direction(Rng& rng, const PrimeField& f, const Space& x, int skip_factor) {
  std::vector<Elem> d(static_cast<std::size_t>(x.total_dim()), 0);
  std::size_t off = 0;
  bool nonzero = false;
  while (!nonzero) {
    off = 0;
    for (std::size_t i = 0; i < x.k(); ++i) {
      for (int j = 0; j < x.n(i); ++j) {
        Elem v = static_cast<int>(i) == skip_factor ? 0 : rng.element(f);
        d[off++] = v;
        nonzero = nonzero || v != 0;
      }
    }
  }
  return d;
}

bool support_taken(const std::vector<LocalComponent>& comps, const Point& p) {
  return std::any_of(comps.begin(), comps.end(), [&](const LocalComponent& c) { return c.point == p; });
}

}  // namespace

ZeroScheme random_general(const Space& x, std::size_t s, ComponentKind kind, std::uint64_t seed,
                          const PrimeField& f) {
  Rng rng(seed);
  std::vector<LocalComponent> comps;
  while (comps.size() < s) {
    LocalComponent c;
    c.kind = kind;
    c.point = random_point(rng, f, x);
    if (kind == ComponentKind::Tangent) c.direction = random_direction(rng, f, x, -1);
    if (support_taken(comps, c.point)) continue;
    comps.push_back(std::move(c));
  }
  return ZeroScheme(x, f, std::move(comps));
}

ZeroScheme random_in_fiber(const Space& x, std::size_t i, const std::vector<Elem>& p, std::size_t s,
                           std::uint64_t seed, const PrimeField& f, ComponentKind kind) {
  if (i >= x.k()) throw std::out_of_range("factor index out of range");
  if (p.size() != static_cast<std::size_t>(x.n(i) + 1)) throw DimensionMismatch("fiber point coordinate count");
  if (kind == ComponentKind::Double) throw Unsupported("double points are never contained in a fiber");
  if (x.k() == 1 && (s > 1 || kind == ComponentKind::Tangent))
    throw std::invalid_argument("a fiber of a single factor is one reduced point");
  std::vector<Elem> fixed(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) fixed[j] = f.reduce(p[j]);
  chart_index(fixed);
  Rng rng(seed);
  std::vector<LocalComponent> comps;
  while (comps.size() < s) {
    LocalComponent c;
    c.kind = kind;
    c.point = random_point(rng, f, x);
    c.point[i] = fixed;
    c.point = normalize(f, c.point);
    if (kind == ComponentKind::Tangent) c.direction = random_direction(rng, f, x, static_cast<int>(i));
    if (support_taken(comps, c.point)) continue;
    comps.push_back(std::move(c));
  }
  return ZeroScheme(x, f, std::move(comps));
}

ZeroScheme random_mixed(const Space& x, std::size_t max_degree, std::uint64_t seed, const PrimeField& f) {
  Rng rng(seed);
  std::size_t remaining = rng.below(max_degree + 1);
  const std::size_t dbl = 1 + static_cast<std::size_t>(x.total_dim());
  std::vector<LocalComponent> comps;
  while (remaining > 0) {
    std::vector<ComponentKind> allowed{ComponentKind::Reduced};
    if (remaining >= 2) allowed.push_back(ComponentKind::Tangent);
    if (remaining >= dbl) allowed.push_back(ComponentKind::Double);
    LocalComponent c;
    c.kind = allowed[rng.below(allowed.size())];
    c.point = random_point(rng, f, x);
    if (c.kind == ComponentKind::Tangent) c.direction = random_direction(rng, f, x, -1);
    if (support_taken(comps, c.point)) continue;
    remaining -= c.degree(x);
    comps.push_back(std::move(c));
  }
  return ZeroScheme(x, f, std::move(comps));
}

ZeroScheme residual(const ZeroScheme& z, std::size_t i, const std::vector<Elem>& h) {
  const Space& x = z.space();
  const PrimeField& f = z.field();
  if (i >= x.k()) throw std::out_of_range("factor index out of range");
  if (h.size() != static_cast<std::size_t>(x.n(i) + 1)) throw DimensionMismatch("hyperplane coefficient count");
  auto dot = [&](const std::vector<Elem>& v) {
    Elem s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s = f.add(s, f.mul(f.reduce(h[j]), v[j]));
    return s;
  };
  std::vector<LocalComponent> out;
  for (const auto& c : z.components()) {
    if (dot(c.point[i]) != 0) {
      out.push_back(c);
      continue;
    }
    LocalComponent r;
    r.kind = ComponentKind::Reduced;
    r.point = c.point;
    switch (c.kind) {
      case ComponentKind::Reduced:
        break;
      case ComponentKind::Double:
        out.push_back(r);
        break;
      case ComponentKind::Tangent:
        // Transverse to D: the quotient leaves the reduced point.
        if (dot(homogeneous_direction(f, x, c, i)) != 0) out.push_back(r);
        break;
    }
  }
  return ZeroScheme::from_representatives(x, f, std::move(out));
}

nlohmann::json to_json(const ZeroScheme& z) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : z.components()) {
    nlohmann::json jc;
    jc["kind"] = to_string(c.kind);
    jc["point"] = c.point;
    if (c.kind == ComponentKind::Tangent) jc["direction"] = c.direction;
    comps.push_back(std::move(jc));
  }
  return {{"space", z.space().dims()}, {"components", std::move(comps)}};
}

namespace {

Elem json_elem(const nlohmann::json& v, const PrimeField& f, const std::string& field) {
  if (v.is_number_unsigned()) return f.reduce(v.get<std::uint64_t>());
  if (v.is_number_integer()) return f.from_int(v.get<std::int64_t>());
  throw FormatError(field, "expected an integer");
}

std::vector<Elem> json_vector(const nlohmann::json& v, const PrimeField& f, const std::string& field) {
  if (!v.is_array()) throw FormatError(field, "expected an array of integers");
  std::vector<Elem> out;
  for (std::size_t j = 0; j < v.size(); ++j) out.push_back(json_elem(v[j], f, field + "[" + std::to_string(j) + "]"));
  return out;
}

}  // namespace

ZeroScheme scheme_from_json(const nlohmann::json& j, const PrimeField& f) {
  if (!j.is_object()) throw FormatError("<root>", "expected an object");
  if (!j.contains("space")) throw FormatError("space", "missing");
  const auto& js = j["space"];
  if (!js.is_array() || js.empty()) throw FormatError("space", "expected a nonempty array of dimensions");
  std::vector<int> dims;
  for (std::size_t i = 0; i < js.size(); ++i) {
    if (!js[i].is_number_integer() || js[i].get<std::int64_t>() < 1 || js[i].get<std::int64_t>() > 64)
      throw FormatError("space[" + std::to_string(i) + "]", "expected an integer in [1, 64]");
    dims.push_back(js[i].get<int>());
  }
  Space x(dims);
  if (!j.contains("components")) throw FormatError("components", "missing");
  const auto& jc = j["components"];
  if (!jc.is_array()) throw FormatError("components", "expected an array");
  std::vector<LocalComponent> comps;
  for (std::size_t c = 0; c < jc.size(); ++c) {
    const std::string base = "components[" + std::to_string(c) + "]";
    const auto& e = jc[c];
    if (!e.is_object()) throw FormatError(base, "expected an object");
    if (!e.contains("kind") || !e["kind"].is_string()) throw FormatError(base + ".kind", "expected a string");
    LocalComponent lc;
    try {
      lc.kind = parse_kind(e["kind"].get<std::string>());
    } catch (const std::invalid_argument& err) {
      throw FormatError(base + ".kind", err.what());
    }
    if (!e.contains("point") || !e["point"].is_array()) throw FormatError(base + ".point", "expected an array");
    const auto& jp = e["point"];
    if (jp.size() != x.k()) throw FormatError(base + ".point", "expected " + std::to_string(x.k()) + " factors");
    for (std::size_t i = 0; i < x.k(); ++i) {
      const std::string pf = base + ".point[" + std::to_string(i) + "]";
      auto v = json_vector(jp[i], f, pf);
      if (v.size() != static_cast<std::size_t>(x.n(i) + 1))
        throw FormatError(pf, "expected " + std::to_string(x.n(i) + 1) + " coordinates");
      if (std::all_of(v.begin(), v.end(), [](Elem q) { return q == 0; }))
        throw FormatError(pf, "all coordinates are zero");
      lc.point.push_back(std::move(v));
    }
    if (lc.kind == ComponentKind::Tangent) {
      if (!e.contains("direction")) throw FormatError(base + ".direction", "missing for a tangent component");
      lc.direction = json_vector(e["direction"], f, base + ".direction");
      if (lc.direction.size() != static_cast<std::size_t>(x.total_dim()))
        throw FormatError(base + ".direction", "expected " + std::to_string(x.total_dim()) + " entries");
      if (std::all_of(lc.direction.begin(), lc.direction.end(), [](Elem q) { return q == 0; }))
        throw FormatError(base + ".direction", "tangent direction is zero");
    }
    comps.push_back(std::move(lc));
  }
  try {
    return ZeroScheme(x, f, std::move(comps));
  } catch (const std::invalid_argument& err) {
    throw FormatError("components", err.what());
  }
}

}  // namespace mproj
