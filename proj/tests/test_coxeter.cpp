#include <doctest.h>

#include <algorithm>

#include "klcells/coxeter.hpp"

using namespace klc;

namespace {

void check_axioms(const CoxeterSystem& W) {
  for (Elt w = 0; w < W.size(); ++w) {
    for (int s = 0; s < W.rank(); ++s) {
      REQUIRE(W.left(s, W.left(s, w)) == w);
      REQUIRE(W.right(W.right(w, s), s) == w);
      REQUIRE(std::abs(W.length(W.left(s, w)) - W.length(w)) == 1);
      REQUIRE(std::abs(W.length(W.right(w, s)) - W.length(w)) == 1);
    }
    REQUIRE(W.from_word(W.word(w)) == w);
    REQUIRE(static_cast<int>(W.word(w).size()) == W.length(w));
    Word rev(W.word(w).rbegin(), W.word(w).rend());
    REQUIRE(W.from_word(rev) == W.inverse(w));
  }
  auto h = W.length_histogram();
  for (std::size_t k = 0; k < h.size(); ++k) REQUIRE(h[k] == h[h.size() - 1 - k]);
}

}  // namespace

TEST_CASE("preset sizes") {
  CHECK(CoxeterSystem::build(CoxeterSpec::parse("A1")).size() == 2);
  CHECK(CoxeterSystem::build(CoxeterSpec::parse("A_3")).size() == 24);
  CHECK(CoxeterSystem::build(CoxeterSpec::parse("B3")).size() == 48);
  CHECK(CoxeterSystem::build(CoxeterSpec::parse("D4")).size() == 192);
  CHECK(CoxeterSystem::build(CoxeterSpec::parse("H3")).size() == 120);
  CHECK(CoxeterSystem::build(CoxeterSpec::parse("A1xB2")).size() == 16);
  auto i24 = CoxeterSystem::build(CoxeterSpec::parse("I_2(4)"));
  CHECK(i24.size() == 8);
  CHECK(i24.max_length() == 4);
  auto f4 = CoxeterSystem::build(CoxeterSpec::parse("F4"));
  CHECK(f4.size() == 1152);
  CHECK(f4.max_length() == 24);
  check_axioms(f4);
}

TEST_CASE("matrix input and validation") {
  auto a2 = CoxeterSystem::build(CoxeterSpec::parse("[[1,3],[3,1]]"));
  CHECK(a2.size() == 6);
  CHECK_THROWS_AS(CoxeterSpec::parse("[[1,3],[2,1]]"), CoxeterError);
  CHECK_THROWS_AS(CoxeterSpec::parse("Q7"), CoxeterError);
  // affine A2 is infinite
  CHECK_THROWS_AS(CoxeterSystem::build(CoxeterSpec::parse("[[1,3,3],[3,1,3],[3,3,1]]"), 5000), CoxeterError);
}

TEST_CASE("indexing is by length then canonical word") {
  auto W = CoxeterSystem::build(CoxeterSpec::parse("A1"));
  CHECK(W.word(0).empty());
  CHECK(W.word(1) == Word{0});
  auto B = CoxeterSystem::build(CoxeterSpec::parse("B3"));
  check_axioms(B);
  for (Elt w = 1; w < B.size(); ++w) {
    REQUIRE(B.length(w - 1) <= B.length(w));
    if (B.length(w - 1) == B.length(w)) REQUIRE(B.word(w - 1) < B.word(w));
  }
  for (int k = 0; k <= B.max_length(); ++k)
    for (std::size_t i = B.level_begin(k); i < B.level_begin(k + 1); ++i) REQUIRE(B.length(static_cast<Elt>(i)) == k);
}

TEST_CASE("bruhat order agrees with subwords") {
  for (const char* t : {"I2:4", "A3", "B3", "I2:6", "A1xA2"}) {
    auto W = CoxeterSystem::build(CoxeterSpec::parse(t));
    BruhatOrder bo(W);
    for (Elt y = 0; y < W.size(); ++y)
      for (Elt w = 0; w < W.size(); ++w) {
        const bool le = bo.leq(y, w);
        REQUIRE(le == bruhat_leq_by_subwords(W, y, w));
        if (le) REQUIRE((W.length(y) < W.length(w) || y == w));
      }
    for (Elt w = 0; w < W.size(); ++w) {
      CHECK(bo.leq(0, w));
      CHECK(bo.leq(w, W.longest()));
    }
  }
  auto W = CoxeterSystem::build(CoxeterSpec::parse("I2:4"));
  BruhatOrder bo(W);
  const Elt sts = W.from_word(Word{0, 1, 0});
  const Elt tst = W.from_word(Word{1, 0, 1});
  CHECK_FALSE(bo.leq(sts, tst));
}

TEST_CASE("generator classes") {
  auto f4 = generator_classes(CoxeterSpec::parse("F4"));
  REQUIRE(f4.count() == 2);
  CHECK(f4.members[0] == std::vector<int>{0, 1});
  CHECK(f4.members[1] == std::vector<int>{2, 3});
  CHECK(generator_classes(CoxeterSpec::parse("I2:6")).count() == 2);
  CHECK(generator_classes(CoxeterSpec::parse("I2:5")).count() == 1);
  CHECK(generator_classes(CoxeterSpec::parse("A3")).count() == 1);
  auto b4 = generator_classes(CoxeterSpec::parse("B4"));
  CHECK(b4.members[0] == std::vector<int>{0});
  CHECK(b4.members[1] == std::vector<int>{1, 2, 3});
}

TEST_CASE("conjugacy classes") {
  auto count = [](const char* t) {
    auto W = CoxeterSystem::build(CoxeterSpec::parse(t));
    auto cl = conjugacy_classes(W);
    std::size_t total = 0;
    for (const auto& c : cl) total += c.size;
    REQUIRE(total == W.size());
    return cl.size();
  };
  CHECK(count("A1") == 2);
  CHECK(count("I2:4") == 5);
  CHECK(count("A3") == 5);
  CHECK(count("B3") == 10);
  CHECK(count("F4") == 25);
}

TEST_CASE("class swapping automorphism") {
  auto spec = CoxeterSpec::parse("F4");
  auto perm = class_swapping_automorphism(spec, generator_classes(spec));
  CHECK(perm == std::vector<int>{3, 2, 1, 0});
  auto b3 = CoxeterSpec::parse("B3");
  CHECK(class_swapping_automorphism(b3, generator_classes(b3)).empty());
  auto W = CoxeterSystem::build(spec);
  for (Elt w = 0; w < W.size(); w += 37)
    CHECK(W.length(W.apply_graph_automorphism(w, perm)) == W.length(w));
}

TEST_CASE("word strings") {
  CHECK(word_to_string(Word{}) == "e");
  CHECK(word_to_string(Word{0, 2, 1}) == "1.3.2");
  CHECK(word_from_string("1.3.2") == Word{0, 2, 1});
  CHECK(word_from_string("e").empty());
}
