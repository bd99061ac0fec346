#include <doctest.h>

#include "mproj/cohomo.hpp"
#include "mproj/errors.hpp"
#include "mproj/rng.hpp"
#include "mproj/scheme.hpp"
#include "oracles.hpp"

using namespace mproj;

namespace {

const PrimeField F;

// Matrix of g -> h * g from degree a - e_i to degree a, h linear in factor i.
DenseMatrix multiplication_matrix(const Space& x, const MultiIndex& a, std::size_t i, const std::vector<Elem>& h) {
  MultiIndex src = a.minus(i);
  MonomialIndexer tix(x, a);
  auto mons = basis(x, src);
  DenseMatrix m(tix.size(), mons.size());
  for (std::size_t c = 0; c < mons.size(); ++c)
    for (std::size_t j = 0; j < h.size(); ++j) {
      std::size_t r = tix.index_of(mult_by_var(mons[c], i, j));
      m(r, c) = F.add(m(r, c), h[j]);
    }
  return m;
}

DenseMatrix product(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      if (!a(i, l)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = F.mul_add(c(i, j), a(i, l), b(l, j));
    }
  return c;
}

// dim{ g in degree a - e_i : h g vanishes on Z }.
std::uint64_t quotient_sections(const ZeroScheme& z, const MultiIndex& a, std::size_t i, const std::vector<Elem>& h) {
  DenseMatrix m = multiplication_matrix(z.space(), a, i, h);
  DenseMatrix c = conditions_matrix(z, a).matrix;
  return m.cols() - oracle::naive_rank(product(c, m), F.modulus());
}

// Random linear form on factor i vanishing at coordinates p.
std::vector<Elem> form_through(Rng& rng, const std::vector<Elem>& p) {
  std::vector<Elem> h(p.size());
  for (auto& v : h) v = rng.element(F);
  std::size_t c = chart_index(p);
  Elem s = 0;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (j != c) s = F.add(s, F.mul(h[j], p[j]));
  h[c] = F.mul(F.neg(s), F.inv(p[c]));
  return h;
}

}  // namespace

TEST_CASE("random_general") {
  CHECK(random_general(Space{1, 1}, 0, ComponentKind::Reduced, 1).degree() == 0);
  ZeroScheme z = random_general(Space{1, 1}, 5, ComponentKind::Reduced, 42);
  CHECK(z.degree() == 5);
  CHECK(z == random_general(Space{1, 1}, 5, ComponentKind::Reduced, 42));
  CHECK_FALSE(z == random_general(Space{1, 1}, 5, ComponentKind::Reduced, 43));
  CHECK(random_general(Space{2, 1}, 3, ComponentKind::Tangent, 1).degree() == 6);
  CHECK(random_general(Space{2, 1}, 2, ComponentKind::Double, 1).degree() == 8);
  for (const auto& c : z.components())
    for (const auto& f : c.point) CHECK(f[chart_index(f)] == 1);
}

TEST_CASE("random_in_fiber") {
  const std::vector<Elem> p{3, 1};
  ZeroScheme one = random_in_fiber(Space{1, 1}, 0, p, 1, 9);
  CHECK(one.size() == 1);
  CHECK(one.components()[0].point[0] == p);
  ZeroScheme z = random_in_fiber(Space{1, 2}, 1, {1, 2, 1}, 4, 9);
  for (const auto& c : z.components()) CHECK(same_point(F, Point{c.point[1]}, Point{{1, 2, 1}}));
  ZeroScheme t = random_in_fiber(Space{1, 2}, 0, p, 2, 3, F, ComponentKind::Tangent);
  for (const auto& c : t.components()) CHECK(homogeneous_direction(F, t.space(), c, 0) == std::vector<Elem>{0, 0});
  CHECK_THROWS_AS(random_in_fiber(Space{1, 1}, 0, p, 1, 1, F, ComponentKind::Double), Unsupported);

  // Three reduced points in a fiber of the first projection: the 3 x 2(t+1)
  // conditions matrix at (t,1) has rank 2.
  ZeroScheme three = random_in_fiber(Space{1, 1}, 0, p, 3, 5);
  for (int t = 0; t <= 3; ++t) {
    auto rows = oracle::conditions_rows(three, MultiIndex{t, 1});
    CHECK(oracle::naive_rank(rows, F.modulus()) == 2);
    CHECK(h0_h1(three, MultiIndex{t, 1}).h1 == 1);
  }
}

TEST_CASE("degree") {
  CHECK(degree(ZeroScheme(Space{1, 1}, F, {})) == 0);
  LocalComponent d{ComponentKind::Double, {{1, 0}, {1, 0}}, {}};
  CHECK(degree(ZeroScheme(Space{1, 1}, F, {d})) == 3);
  LocalComponent d2{ComponentKind::Double, {{1, 0, 0}, {1, 0, 0}}, {}};
  CHECK(degree(ZeroScheme(Space{2, 2}, F, {d2})) == 5);
}

TEST_CASE("degree is additive over disjoint unions") {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    Space x{1 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(2))};
    ZeroScheme a = random_mixed(x, 8, rng.next());
    ZeroScheme b = random_mixed(x, 8, rng.next());
    CHECK(disjoint_union(a, b).degree() == a.degree() + b.degree());
  }
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(ZeroScheme(Space{1, 1}, F, {{ComponentKind::Reduced, {{1, 0}}, {}}}), DimensionMismatch);
  CHECK_THROWS_AS(ZeroScheme(Space{1, 1}, F, {{ComponentKind::Reduced, {{0, 0}, {1, 0}}, {}}}), std::invalid_argument);
  CHECK_THROWS_AS(ZeroScheme(Space{1, 1}, F, {{ComponentKind::Tangent, {{1, 0}, {1, 0}}, {0, 0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ZeroScheme(Space{1, 1}, F, {{ComponentKind::Reduced, {{1, 2}, {1, 0}}, {}},
                                              {ComponentKind::Double, {{2, 4}, {3, 0}}, {}}}),
                  std::invalid_argument);
}

TEST_CASE("residual examples") {
  Rng rng(2);
  const Space x{1, 1};
  ZeroScheme z = random_general(x, 3, ComponentKind::Reduced, 4);
  // D through none of the supports.
  std::vector<Elem> h{1, 0};
  for (const auto& c : z.components()) REQUIRE(c.point[0][0] != 0);
  CHECK(residual(z, 0, h) == z);

  LocalComponent r{ComponentKind::Reduced, {{5, 1}, {2, 1}}, {}};
  ZeroScheme one(x, F, {r});
  CHECK(residual(one, 0, form_through(rng, {5, 1})).empty());

  LocalComponent d{ComponentKind::Double, {{5, 1}, {2, 1}}, {}};
  ZeroScheme dbl(x, F, {d});
  ZeroScheme res = residual(dbl, 0, form_through(rng, {5, 1}));
  REQUIRE(res.size() == 1);
  CHECK(res.components()[0].kind == ComponentKind::Reduced);
  CHECK(res.components()[0].point == dbl.components()[0].point);
  // 3 = 1 + 2: at a high twist the sections h*g vanishing on the double point
  // impose exactly deg(residual) = 1 condition on g.
  const MultiIndex a{4, 4};
  CHECK(quotient_sections(dbl, a, 0, form_through(rng, {5, 1})) == count_monomials(x, a.minus(0)) - 1);
}

TEST_CASE("residual tangent vectors follow the ideal quotient") {
  Rng rng(3);
  const Space x{2, 1};
  const std::vector<Elem> p{4, 7, 1};
  std::vector<Elem> h = form_through(rng, p);
  // Direction inside D: the chart block of factor 0 satisfies h . W = 0.
  std::vector<Elem> inside{F.mul(h[1], 1), F.neg(h[0]), 9};
  LocalComponent tin{ComponentKind::Tangent, {p, {3, 1}}, inside};
  LocalComponent ttr{ComponentKind::Tangent, {p, {3, 1}}, {1, 0, 0}};
  REQUIRE(h[0] != 0);
  ZeroScheme zin(x, F, {tin});
  ZeroScheme ztr(x, F, {ttr});
  CHECK(residual(zin, 0, h).empty());
  ZeroScheme rtr = residual(ztr, 0, h);
  REQUIRE(rtr.size() == 1);
  CHECK(rtr.components()[0].kind == ComponentKind::Reduced);
}

TEST_CASE("residual sections match the quotient-ideal sections") {
  Rng rng(4);
  for (int t = 0; t < 60; ++t) {
    Space x{1 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(2))};
    ZeroScheme base = random_mixed(x, 6, rng.next());
    if (base.empty()) continue;
    const std::size_t i = rng.below(2);
    // Put a random subset of components on D by choosing D through one support
    // and moving others into the same fiber.
    const auto& anchor = base.components()[0].point[i];
    std::vector<Elem> h = form_through(rng, anchor);
    std::vector<LocalComponent> comps = base.components();
    for (std::size_t c = 1; c < comps.size(); ++c)
      if (rng.below(2)) comps[c].point[i] = anchor;
    if (rng.below(2)) {
      for (auto& c : comps)
        if (c.kind == ComponentKind::Tangent) {
          std::size_t off = i == 0 ? 0 : static_cast<std::size_t>(x.n(0));
          for (int j = 0; j < x.n(i); ++j) c.direction[off + static_cast<std::size_t>(j)] = 0;
          if (std::all_of(c.direction.begin(), c.direction.end(), [](Elem v) { return v == 0; })) c.direction[0] = 1;
        }
    }
    ZeroScheme z(x, F, {});
    try {
      z = ZeroScheme(x, F, comps);
    } catch (const std::invalid_argument&) {
      continue;
    }
    ZeroScheme res = residual(z, i, h);
    for (const auto& a : Box::cube(2, 3).points()) {
      if (a[i] == 0) continue;
      CHECK(quotient_sections(z, a, i, h) == h0_h1(res, a.minus(i)).h0);
    }
    const int high = static_cast<int>(z.degree()) + 1;
    MultiIndex a{high, high};
    CHECK(count_monomials(x, a.minus(i)) - quotient_sections(z, a, i, h) == res.degree());
  }
}

TEST_CASE("scheme JSON round trip and diagnostics") {
  ZeroScheme z = random_mixed(Space{1, 2}, 10, 77);
  nlohmann::json j = to_json(z);
  CHECK(scheme_from_json(j) == z);

  auto parse = [](const char* s) { return scheme_from_json(nlohmann::json::parse(s)); };
  ZeroScheme neg = parse(R"({"space":[1],"components":[{"kind":"reduced","point":[[-1,1]]}]})");
  CHECK(neg.components()[0].point[0][0] == F.modulus() - 1);

  auto field_of = [&](const char* s) {
    try {
      parse(s);
    } catch (const FormatError& e) {
      return e.field();
    }
    return std::string("none");
  };
  CHECK(field_of(R"({"components":[]})") == "space");
  CHECK(field_of(R"({"space":[1,0],"components":[]})") == "space[1]");
  CHECK(field_of(R"({"space":[1]})") == "components");
  CHECK(field_of(R"({"space":[1],"components":[{"kind":"fat","point":[[1,0]]}]})") == "components[0].kind");
  CHECK(field_of(R"({"space":[1],"components":[{"kind":"reduced","point":[[1,0,2]]}]})") ==
        "components[0].point[0]");
  CHECK(field_of(R"({"space":[1],"components":[{"kind":"reduced","point":[["a",0]]}]})") ==
        "components[0].point[0][0]");
  CHECK(field_of(R"({"space":[1,1],"components":[{"kind":"tangent","point":[[1,0],[0,1]]}]})") ==
        "components[0].direction");
  CHECK(field_of(R"({"space":[1],"components":[{"kind":"reduced","point":[[1,1]]},{"kind":"reduced","point":[[2,2]]}]})") ==
        "components");
}
