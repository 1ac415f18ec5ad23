#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace klc {

using Elt = std::uint32_t;
using Word = std::vector<int>;

class CoxeterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coxeter matrix of a finite Coxeter system. Generators are numbered from 0.
/// Presets follow the usual diagram numbering; for B_n generator 0 is the
/// generator on the double bond, for F_4 generators 0,1 carry one class and
/// 2,3 the other.
struct CoxeterSpec {
  std::string name;
  std::vector<std::vector<int>> m;

  int rank() const { return static_cast<int>(m.size()); }

  /// Validates symmetry, diagonal and bond orders; throws CoxeterError.
  void validate() const;

  /// Accepts "A3", "A_3", "B4", "D4", "F4", "F_4", "H3", "I2:4", "I_2(4)",
  /// products joined by 'x' ("A1xB2"), or a direct matrix "[[1,3],[3,1]]".
  static CoxeterSpec parse(std::string_view text);
  static CoxeterSpec from_matrix(std::vector<std::vector<int>> m, std::string name = "");
  static CoxeterSpec product(const CoxeterSpec& a, const CoxeterSpec& b);
};

/// Enumerated finite Coxeter group. Elements are dense indices ordered by
/// length, then lexicographically by their canonical (lex-minimal) reduced
/// word; index 0 is the identity. Immutable after build.
class CoxeterSystem {
 public:
  static constexpr std::size_t kDefaultCap = 20000;

  static CoxeterSystem build(const CoxeterSpec& spec, std::size_t cap = kDefaultCap);

  const CoxeterSpec& spec() const { return spec_; }
  int rank() const { return rank_; }
  std::size_t size() const { return length_.size(); }
  Elt identity() const { return 0; }
  Elt longest() const { return static_cast<Elt>(size() - 1); }
  int max_length() const { return length_.back(); }

  int length(Elt w) const { return length_[w]; }
  Elt left(int s, Elt w) const { return left_[static_cast<std::size_t>(w) * rank_ + s]; }
  Elt right(Elt w, int s) const { return right_[static_cast<std::size_t>(w) * rank_ + s]; }
  Elt inverse(Elt w) const { return inverse_[w]; }
  bool is_left_descent(Elt w, int s) const { return length_[left(s, w)] < length_[w]; }
  bool is_right_descent(Elt w, int s) const { return length_[right(w, s)] < length_[w]; }
  /// Smallest generator s with sw < w, or -1 for the identity.
  int first_left_descent(Elt w) const;

  const Word& word(Elt w) const { return words_[w]; }
  Elt from_word(std::span<const int> word) const;
  Elt multiply(Elt x, Elt y) const;
  /// First index of each length level; level k is [level_begin(k), level_begin(k+1)).
  std::size_t level_begin(int k) const { return level_start_[static_cast<std::size_t>(k)]; }
  std::vector<std::size_t> length_histogram() const;
  /// Image of w under a permutation of the generators that preserves the
  /// Coxeter matrix.
  Elt apply_graph_automorphism(Elt w, std::span<const int> perm) const;

 private:
  CoxeterSpec spec_;
  int rank_ = 0;
  std::vector<int> length_;
  std::vector<Elt> left_, right_, inverse_;
  std::vector<Word> words_;
  std::vector<std::size_t> level_start_;
};

/// Full Bruhat order as one bitset row per element, built by the lifting
/// recursion {y <= w} = {y <= sw} u s{y <= sw} for a left descent s of w.
class BruhatOrder {
 public:
  explicit BruhatOrder(const CoxeterSystem& sys);

  bool leq(Elt y, Elt w) const {
    return (rows_[static_cast<std::size_t>(w) * words_per_row_ + (y >> 6)] >> (y & 63)) & 1u;
  }
  /// All y <= w in increasing index order.
  std::vector<Elt> below(Elt w) const;
  std::size_t interval_size(Elt w) const;

 private:
  std::size_t n_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// Reference check of y <= w: y has a reduced word that is a subword of the
/// canonical reduced word of w. Exponential; only for small groups.
bool bruhat_leq_by_subwords(const CoxeterSystem& sys, Elt y, Elt w);

struct GeneratorClasses {
  std::vector<int> class_of;                 // generator -> class index
  std::vector<std::vector<int>> members;     // class index -> generators
  int count() const { return static_cast<int>(members.size()); }
};

/// Classes of generators connected by bonds of odd order.
GeneratorClasses generator_classes(const CoxeterSpec& spec);

struct ConjugacyClass {
  Elt representative;
  std::size_t size;
  std::vector<Elt> elements;
};

/// Orbits under conjugation by generators. Representatives have minimal
/// length, then minimal index; classes are sorted by representative.
std::vector<ConjugacyClass> conjugacy_classes(const CoxeterSystem& sys);

/// Permutation of generators swapping two classes while preserving the Coxeter
/// matrix, if one exists (F_4, I_2(m) with m even). Empty otherwise.
std::vector<int> class_swapping_automorphism(const CoxeterSpec& spec, const GeneratorClasses& gc);

std::string word_to_string(const Word& w);
Word word_from_string(std::string_view s);

}  // namespace klc
