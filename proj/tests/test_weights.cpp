#include <doctest.h>

#include <set>

#include "klcells/weights.hpp"

using namespace klc;

namespace {

Monomial xy(int i, int j) {
  Monomial m;
  m.e[0] = i;
  m.e[1] = j;
  return m;
}

MonomialSet set_of(std::initializer_list<std::pair<int, int>> ms) {
  MonomialSet s;
  for (auto [i, j] : ms) s.insert(xy(i, j), gamma_a);
  return s;
}

Elt elt(const CoxeterSystem& W, std::vector<int> word) { return W.from_word(word); }

}  // namespace

TEST_CASE("normalize_weight divides by the gcd") {
  CHECK(normalize_weight({2, 2, 4, 4}) == std::vector<int>{1, 1, 2, 2});
  CHECK(normalize_weight({1, 1, 1, 1}) == std::vector<int>{1, 1, 1, 1});
  CHECK(normalize_weight({6, 6, 9, 9}) == std::vector<int>{2, 2, 3, 3});
}

TEST_CASE("validity intervals of small sets") {
  SUBCASE("both coordinates positive") {
    auto iv = validity_interval(set_of({{1, 0}, {0, 1}}));
    CHECK_FALSE(iv.empty);
    CHECK(iv.lo == Ratio(0));
    CHECK_FALSE(iv.hi.has_value());
  }
  SUBCASE("pure lex set with the tight monomial x^-4 y") {
    auto iv = validity_interval(set_of({{1, 0}, {3, 0}, {-4, 1}, {-1, 1}, {2, 3}}));
    CHECK(iv.lo == Ratio(4));
    CHECK_FALSE(iv.hi.has_value());
    REQUIRE(iv.lo_binding.size() == 1);
    CHECK(iv.lo_binding[0] == xy(-4, 1));
  }
  SUBCASE("set bounded on both sides") {
    auto iv = validity_interval(set_of({{1, 0}, {-1, 1}, {3, -1}, {6, -2}, {-5, 2}, {-2, 1}}));
    CHECK(iv.lo == Ratio(5, 2));
    REQUIRE(iv.hi.has_value());
    CHECK(*iv.hi == Ratio(3));
    CHECK(iv.contains(Ratio(11, 4)));
    CHECK_FALSE(iv.contains(Ratio(3)));
  }
  SUBCASE("contradictory set") {
    CHECK(validity_interval(set_of({{-1, 0}})).empty);
    CHECK(validity_interval(set_of({{-4, 1}, {3, -1}})).empty);
  }
  SUBCASE("empty set") { CHECK(check_star({1, 1}, MonomialSet{}, 2).ok); }
}

TEST_CASE("check_star at the tight boundary") {
  auto s = set_of({{1, 0}, {-4, 1}, {0, 1}});
  CHECK(check_star({1, 5}, s, 2).ok);
  auto r = check_star({1, 4}, s, 2);
  CHECK_FALSE(r.ok);
  CHECK(r.violations.size() == 1);
}

TEST_CASE("gamma_plus of A1 is {v_s}") {
  auto W = CoxeterSystem::build(CoxeterSpec::parse("A1"));
  auto kl = compute_kl(W, ParamAssignment::generic(W.spec()), MonomialOrder::single());
  auto g = gamma_plus_W(kl);
  REQUIRE(g.size() == 1);
  CHECK(g.items[0] == Monomial::unit(0));
}

TEST_CASE("dihedral gamma_plus under the lex order") {
  for (int m : {4, 6, 8}) {
    auto W = CoxeterSystem::build(CoxeterSpec::parse("I2:" + std::to_string(m)));
    auto kl = compute_kl(W, ParamAssignment::generic(W.spec()), MonomialOrder::lex2(0));
    auto g = gamma_plus_W(kl);
    CHECK(g.size() > 0);
    for (const auto& mono : g.items) {
      const int i = mono.e[0], j = mono.e[1];
      CHECK(i >= 0);
      CHECK(i + j >= 0);
      CHECK_FALSE(mono.is_one());
    }
    auto left = left_cells(left_edges(W, kl.M));
    auto gp = gamma_plus_prime_W(kl, left);
    for (const auto& mono : g.items) CHECK(gp.contains(mono));
  }
}

TEST_CASE("dihedral distinguished involutions with L(s) > L(t)") {
  for (int m : {4, 6, 8}) {
    auto W = CoxeterSystem::build(CoxeterSpec::parse("I2:" + std::to_string(m)));
    auto a = analyze_weights(W, {2, 1});
    CHECK(a.distinguished.check.ok);
    std::set<Elt> got;
    for (const auto& c : a.distinguished.cells) got.insert(c.d);
    std::vector<int> w0, tw0;
    for (int k = 0; k < m; ++k) w0.push_back(k % 2);
    for (int k = 0; k < m - 1; ++k) tw0.push_back(k % 2);
    const std::set<Elt> want{0, elt(W, {0}), elt(W, {1}), elt(W, {1, 0, 1}), elt(W, tw0), elt(W, w0)};
    CHECK(got == want);
    CHECK(W.length(elt(W, tw0)) == m - 1);
    CHECK(elt(W, tw0) == W.left(1, elt(W, w0)));
  }
}

TEST_CASE("the identity cell has d = 1, Delta = 0, n = 1") {
  auto W = CoxeterSystem::build(CoxeterSpec::parse("B3"));
  auto a = analyze_weights(W, {1, 2});
  REQUIRE(!a.distinguished.cells.empty());
  const auto& c = a.distinguished.cells[a.left.block_of[0]];
  CHECK(c.d == 0);
  CHECK(c.delta == 0);
  CHECK(c.n == Integer(1));
}

TEST_CASE("specialization agrees with direct weight computations") {
  for (const char* type : {"I2:6", "I2:8", "B3"}) {
    auto W = CoxeterSystem::build(CoxeterSpec::parse(type));
    auto generic = compute_kl(W, ParamAssignment::generic(W.spec()), MonomialOrder::lex2(1));
    auto g = gamma_plus_W(generic);
    auto iv = validity_interval(g);
    const std::vector<int> w{1, static_cast<int>(iv.lo.numerator() / iv.lo.denominator()) + 1};
    REQUIRE(iv.contains(Ratio(w[1], w[0])));
    CHECK(check_star(w, g, 2).ok);
    auto direct = compute_kl(W, ParamAssignment::from_weights(W.spec(), w), MonomialOrder::single());
    CHECK(check_specialization(generic, direct, w).ok);
  }
}

TEST_CASE("refinement") {
  auto W = CoxeterSystem::build(CoxeterSpec::parse("B3"));
  auto eq = analyze_weights(W, {1, 1});
  auto asym = analyze_weights(W, {1, 5});
  CHECK(check_refinement(eq.left, eq.left).ok);
  CHECK(check_refinement(eq.left, asym.left).ok);
  CHECK_FALSE(check_refinement(asym.left, eq.left).ok);
}

TEST_CASE("asymptotic bound") {
  CHECK(asymptotic_class_bound(CoxeterSystem::build(CoxeterSpec::parse("F4"))) == 48);
  CHECK(asymptotic_class_bound(CoxeterSystem::build(CoxeterSpec::parse("I2:4"))) == 8);
  CHECK(asymptotic_class_bound(CoxeterSystem::build(CoxeterSpec::parse("B3"))) == 18);
}

TEST_CASE("dihedral scan has three classes") {
  for (int m : {4, 6, 8}) {
    auto W = CoxeterSystem::build(CoxeterSpec::parse("I2:" + std::to_string(m)));
    auto rep = scan_equivalence_classes(W);
    CHECK(rep.class_count == 3);
    CHECK(rep.breakpoints == std::vector<Ratio>{Ratio(1)});
    CHECK(rep.threshold == Ratio(1));
    CHECK(rep.regions.size() == 3);
    CHECK(rep.locate(Ratio(1, 2)) != rep.locate(Ratio(2)));
  }
}

TEST_CASE("B3 scan tiles the ratio line and matches direct computations") {
  auto W = CoxeterSystem::build(CoxeterSpec::parse("B3"));
  auto rep = scan_equivalence_classes(W);
  CHECK(rep.breakpoints == std::vector<Ratio>{Ratio(1, 2), Ratio(1)});
  CHECK(rep.class_count == 5);
  CHECK(rep.threshold <= Ratio(rep.bound));
  REQUIRE(!rep.regions.empty());
  CHECK(rep.regions.front().lo == Ratio(0));
  CHECK_FALSE(rep.regions.back().hi.has_value());
  for (std::size_t k = 1; k < rep.regions.size(); ++k) CHECK(rep.regions[k].lo == *rep.regions[k - 1].hi);
  for (const auto& r : rep.regions) {
    CHECK(r.interval_ok);
    CHECK(r.analysis.property_L);
    CHECK(r.analysis.distinguished.check.ok);
    if (!r.exact) CHECK(r.specialization_ok);
  }

  std::set<std::pair<int, int>> seen;
  for (int a = 1; a <= 10; ++a)
    for (int b = 1; b <= 10; ++b) {
      auto n = normalize_weight({a, b});
      if (!seen.insert({n[0], n[1]}).second) continue;
      const int k = rep.locate(Ratio(n[1], n[0]));
      REQUIRE(k >= 0);
      auto direct = analyze_weights(W, n);
      CHECK(same_blocks(direct.left, rep.regions[static_cast<std::size_t>(k)].analysis.left));
    }
}
