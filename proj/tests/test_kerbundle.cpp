#include <doctest.h>

#include "mproj/errors.hpp"
#include "mproj/kerbundle.hpp"
#include "mproj/rng.hpp"
#include "oracles.hpp"

using namespace mproj;

namespace {

const PrimeField F;

CampaignConfig small_campaign(std::size_t seeds) {
  CampaignConfig c;
  c.seed = 3;
  c.seeds = seeds;
  return c;
}

// Koszul sections g (x_k e_j - x_j e_k) with g of degree t-2 in the slot.
std::vector<std::vector<oracle::u64>> koszul_sections(const KernelSectionSpace& v) {
  std::vector<std::vector<oracle::u64>> out;
  if (v.t < 2) return out;
  const MultiIndex low = v.degree.minus(v.slot);
  const auto mons = basis(v.space, v.degree);
  std::map<Monomial, std::size_t> where;
  for (std::size_t m = 0; m < mons.size(); ++m) where[mons[m]] = m;
  const std::size_t vars = static_cast<std::size_t>(v.space.n(v.slot) + 1);
  for (const auto& g : basis(v.space, low))
    for (std::size_t j = 0; j < vars; ++j)
      for (std::size_t k = j + 1; k < vars; ++k) {
        std::vector<oracle::u64> vec(vars * v.block, 0);
        vec[j * v.block + where.at(mult_by_var(g, v.slot, k))] = 1;
        vec[k * v.block + where.at(mult_by_var(g, v.slot, j))] = F.modulus() - 1;
        out.push_back(vec);
      }
  return out;
}

std::vector<std::vector<oracle::u64>> as_rows(const std::vector<std::vector<Elem>>& b) {
  std::vector<std::vector<oracle::u64>> r;
  for (const auto& v : b) r.emplace_back(v.begin(), v.end());
  return r;
}

const FormulaRecord* find(const SeedRun& run, std::size_t s, const std::string& note, int x = -1) {
  for (const auto& r : run.records)
    if (r.s == s && r.note == note && (x < 0 || r.a[r.i] == x)) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("build_sections examples") {
  CHECK(build_sections(F, Space{2}, 0, 2, MultiIndex()).dim() == 3);
  CHECK(build_sections(F, Space{2}, 0, 1, MultiIndex()).dim() == 0);
  for (int a = 0; a < 4; ++a) {
    auto v = build_sections(F, Space{1, 2}, 1, 2, MultiIndex{a});
    CHECK(v.dim() == static_cast<std::size_t>(3 * (a + 1)));
    auto k = koszul_sections(v);
    CHECK(oracle::naive_rank(k, F.modulus()) == v.dim());
  }
  for (int x = 1; x < 7; ++x) CHECK(omega_h0(2, x) == static_cast<std::uint64_t>(x * x - 1));
  CHECK(omega_h0(2, 0) == 0);
  CHECK(omega_h0(1, 3) == 2);
  CHECK_THROWS_AS(build_sections(F, Space{2}, 0, 0, MultiIndex()), UnsupportedTwist);
  CHECK_THROWS_AS(build_sections(F, Space{2}, 0, -1, MultiIndex()), UnsupportedTwist);
  CHECK_THROWS_AS(build_sections(F, Space{1, 2}, 1, 2, MultiIndex()), DimensionMismatch);
}

TEST_CASE("section spaces: Euler closure, dimension and the Koszul span") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t k = 1 + rng.below(3);
    std::vector<int> dims;
    for (std::size_t h = 0; h < k; ++h) dims.push_back(1 + static_cast<int>(rng.below(k == 3 ? 2 : 3)));
    const Space x(dims);
    const std::size_t slot = rng.below(k);
    const int t = 1 + static_cast<int>(rng.below(4));
    std::vector<int> outer;
    for (std::size_t h = 0; h + 1 < k; ++h) outer.push_back(static_cast<int>(rng.below(3)));
    const MultiIndex o = outer.empty() ? MultiIndex() : MultiIndex(outer);
    auto v = build_sections(F, x, slot, t, o);

    for (const auto& sec : v.basis) {
      auto img = euler_image(F, v, sec);
      CHECK(std::all_of(img.begin(), img.end(), [](Elem e) { return e == 0; }));
    }
    const auto expected = static_cast<std::uint64_t>(x.n(slot) + 1) * count_monomials(x, v.degree) -
                          count_monomials(x, v.degree.plus(slot));
    CHECK(v.dim() == expected);
    std::uint64_t outer_n = 1;
    for (std::size_t h = 0; h < k; ++h)
      if (h != slot) outer_n *= binomial(x.n(h) + v.degree[h], x.n(h));
    CHECK(v.dim() == omega_h0(x.n(slot), t) * outer_n);

    auto kos = koszul_sections(v);
    CHECK(oracle::naive_rank(kos, F.modulus()) == v.dim());
    auto both = as_rows(v.basis);
    both.insert(both.end(), kos.begin(), kos.end());
    CHECK(oracle::naive_rank(both, F.modulus()) == v.dim());
  }
}

TEST_CASE("impose_points examples") {
  auto p2 = build_sections(F, Space{2}, 0, 2, MultiIndex());
  ZeroScheme empty(Space{2}, F, {});
  CHECK(impose_points(empty, p2).h0 == 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto c = impose_points(random_general(Space{2}, 1, ComponentKind::Reduced, seed), p2);
    CHECK(c.h0 == 1);
    CHECK(c.rank == 2);
  }
  auto v = build_sections(F, Space{1, 2}, 1, 2, MultiIndex{1});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto c = impose_points(random_general(Space{1, 2}, 3, ComponentKind::Reduced, seed), v);
    CHECK(c.h0 == 0);
    CHECK(c.h1 == 0);
  }
  CHECK_THROWS_AS(impose_points(random_general(Space{1, 2}, 1, ComponentKind::Double, 0), v), Unsupported);
  CHECK_THROWS_AS(impose_points(random_general(Space{2, 2}, 1, ComponentKind::Reduced, 0), v), DimensionMismatch);
}

TEST_CASE("impose_points properties") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const Space x{1 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(3))};
    const std::size_t slot = rng.below(2);
    const int t = 1 + static_cast<int>(rng.below(3));
    auto v = build_sections(F, x, slot, t, MultiIndex{static_cast<int>(rng.below(3))});
    const std::size_t s = rng.below(8);
    ZeroScheme pts = random_general(x, s, ComponentKind::Reduced, rng.next());
    auto c = impose_points(pts, v);
    const auto n = static_cast<std::uint64_t>(x.n(slot));
    CHECK(static_cast<std::int64_t>(c.h0) - static_cast<std::int64_t>(c.h1) ==
          static_cast<std::int64_t>(v.dim()) - static_cast<std::int64_t>(n * s));

    // Oracle: Koszul spanning set evaluated at the points.
    auto kos = koszul_sections(v);
    std::vector<std::vector<oracle::u64>> rows;
    const auto mons = basis(x, v.degree);
    for (const auto& comp : pts.components()) {
      std::vector<std::vector<oracle::u64>> block;
      for (std::size_t j = 0; j <= n; ++j) {
        std::vector<oracle::u64> row;
        for (const auto& sec : kos) {
          oracle::u64 acc = 0;
          for (std::size_t m = 0; m < mons.size(); ++m)
            acc = (acc + oracle::mulmod(sec[j * v.block + m], oracle::monomial_value(mons[m], comp.point, F.modulus()),
                                        F.modulus())) %
                  F.modulus();
          row.push_back(acc);
        }
        rows.push_back(row);
        block.push_back(row);
      }
      // One point never imposes more than n_i conditions.
      if (!kos.empty()) CHECK(oracle::naive_rank(block, F.modulus()) <= n);
      if (!kos.empty() && v.dim() >= n) CHECK(oracle::naive_rank(block, F.modulus()) == n);
    }
    const std::size_t rk = (rows.empty() || kos.empty()) ? 0 : oracle::naive_rank(rows, F.modulus());
    CHECK(c.rank == rk);
  }
}

TEST_CASE("verify_bg2") {
  auto r = verify_bg2({}, {}, {1, 2, 3}, small_campaign(5));
  CHECK(r.pass());
  for (const auto& run : r.runs) {
    for (std::size_t s = 0; s <= 2; ++s) {
      REQUIRE(find(run, s, "h0", 1));
      CHECK(find(run, s, "h0", 1)->computed == 0);
      CHECK(find(run, s, "h1", 1)->computed == static_cast<std::int64_t>(2 * s));
    }
    CHECK(find(run, 4, "h0", 3)->computed == 0);
    CHECK(find(run, 4, "h1", 3)->computed == 0);
  }
  auto two = verify_bg2({1}, {1}, {2}, small_campaign(5));
  CHECK(two.pass());
  CHECK(two.extra["bundle"]["alpha"] == 2);
  CHECK(two.extra["bundle"]["slot"] == 2);
  CHECK(two.extra["bundle"]["t"] == 2);
  for (const auto& run : two.runs) {
    CHECK(find(run, 2, "h0")->computed == 2);
    CHECK(run.records.size() == 2 * 6);
  }
  CHECK_THROWS_AS(verify_bg2({}, {}, {0}, small_campaign(1)), UnsupportedTwist);
}

TEST_CASE("verify_ee2") {
  auto th = ee2_thresholds(Space{1, 2}, 1, MultiIndex{1, 2});
  CHECK(th.omega == 8);
  CHECK(th.tau1 == 8);
  CHECK(th.tau2 == 8);
  auto odd = ee2_thresholds(Space{1, 2}, 1, MultiIndex{0, 1});
  CHECK(odd.omega == 3);
  CHECK(odd.tau1 == 1);
  CHECK(odd.tau2 == 2);

  auto r = verify_ee2(Space{1, 2}, 1, MultiIndex{1, 2}, std::nullopt, small_campaign(4));
  CHECK(r.pass());
  CHECK(r.extra["hypothesis"] == "unknown");
  for (const auto& run : r.runs) {
    CHECK(find(run, 0, "h1")->computed == 0);
    CHECK(find(run, 8, "h1")->computed == 0);
    CHECK(find(run, 9, "h0")->computed == 0);
    CHECK(find(run, 9, "h1") == nullptr);
  }
}
