#include <doctest.h>

#include "dihedral.hpp"
#include "klcells/kl.hpp"

using namespace klc;
using namespace klc::testing;

TEST_CASE("rank one") {
  auto W = CoxeterSystem::build(CoxeterSpec::parse("A1"));
  auto kl = compute_kl(W, ParamAssignment::from_weights(W.spec(), {1}), MonomialOrder::single());
  CHECK(kl.P.get(0, 1) == parse_poly("v^-1", 1));
  CHECK(kl.P.get(1, 1) == LaurentPoly(1));
  CHECK(kl.M.entry_count() == 0);
}

TEST_CASE("dihedral closed forms") {
  for (int m : {4, 6, 8}) {
    auto W = CoxeterSystem::build(CoxeterSpec::parse("I2:" + std::to_string(m)));
    BruhatOrder bo(W);
    auto params = ParamAssignment::generic(W.spec());
    auto kl = compute_kl(W, params, MonomialOrder::lex2(0));
    for (Elt w = 0; w < W.size(); ++w) {
      const Monomial vw = params.v_of(W, w);
      for (Elt y = 0; y <= w; ++y) {
        if (!bo.leq(y, w)) {
          REQUIRE(kl.P.get(y, w).is_zero());
          continue;
        }
        const LaurentPoly p = kl.P.get(y, w).shifted(vw / params.v_of(W, y));
        REQUIRE(p == dihedral_p(W, bo, y, w));
      }
      for (int s = 0; s < 2; ++s) {
        if (W.is_left_descent(w, s)) continue;
        for (Elt y = 0; y < W.size(); ++y) {
          if (!W.is_left_descent(y, s) || W.length(y) >= W.length(w)) continue;
          REQUIRE(kl.M.get(s, y, w) == dihedral_m(W, bo, s, y, w));
        }
      }
    }
  }
}

TEST_CASE("oracle agreement and R recursion") {
  struct Case {
    const char* type;
    std::vector<MonomialOrder> orders;
  };
  std::vector<Case> cases = {
      {"I2:4", {MonomialOrder::lex2(0), MonomialOrder::lex2(1), MonomialOrder::weighted2(1, 1, true)}},
      {"B3", {MonomialOrder::lex2(0), MonomialOrder::weighted2(2, 1, false), MonomialOrder::weighted2(1, 1, false)}},
  };
  for (const auto& c : cases) {
    auto W = CoxeterSystem::build(CoxeterSpec::parse(c.type));
    auto params = ParamAssignment::generic(W.spec());
    BruhatOrder bo(W);
    auto r = compute_r(W, params, bo);
    auto A = bar_t_expansion(W, params);
    for (Elt y = 0; y < W.size(); ++y)
      for (Elt x = 0; x < W.size(); ++x) REQUIRE(r.get(x, y) == bar(A[y][x]));
    CHECK(check_r_normalization(W, params, r).ok);
    for (const auto& order : c.orders) {
      auto kl = compute_kl(W, params, order);
      CHECK(kl.P == oracle_kl(W, params, order));
      CHECK(kl.P == compute_kl_serial(W, params, order).P);
      CHECK(check_p_normalization(W, kl).ok);
      CHECK(check_m_normalization(W, kl).ok);
      CHECK(check_bounds(W, kl).ok);
      auto bi = verify_bar_identity(W, kl.P, r);
      CHECK(bi.ok);
      CHECK(check_descent_independence(W, kl, 20, 1).ok);
    }
  }
}

TEST_CASE("oracle guard and invalid orders") {
  auto W = CoxeterSystem::build(CoxeterSpec::parse("A4"));
  auto params = ParamAssignment::generic(W.spec());
  CHECK_THROWS_AS(oracle_kl(W, params, MonomialOrder::single()), KLError);
  auto B = CoxeterSystem::build(CoxeterSpec::parse("B2"));
  // v_t = y is negative under a functional with a negative y weight
  CHECK_THROWS_AS(compute_kl(B, ParamAssignment::generic(B.spec()), MonomialOrder(2, {{1, -1, 0, 0}, {1, 0, 0, 0}})),
                  KLError);
}

TEST_CASE("specialization matches weight mode") {
  auto W = CoxeterSystem::build(CoxeterSpec::parse("I2:6"));
  auto gen = compute_kl(W, ParamAssignment::generic(W.spec()), MonomialOrder::lex2(0));
  auto wt = compute_kl(W, ParamAssignment::from_weights(W.spec(), {3, 1}), MonomialOrder::single());
  for (Elt w = 0; w < W.size(); ++w) {
    for (const auto& [y, p] : gen.P.row(w)) REQUIRE(specialize(p, {3, 1}) == wt.P.get(y, w));
    for (const auto& e : gen.M.by_w[w]) REQUIRE(specialize(e.m, {3, 1}) == wt.M.get(e.s, e.y, w));
  }
}
