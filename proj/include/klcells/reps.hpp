#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "klcells/cells.hpp"
#include "klcells/coxeter.hpp"
#include "klcells/kl.hpp"

namespace klc {

class RepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense square integer matrix with overflow-checked products.
struct IntMatrix {
  std::size_t n = 0;
  std::vector<std::int64_t> a;

  static IntMatrix identity(std::size_t n);
  std::int64_t& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  std::int64_t at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  std::int64_t trace() const;
  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

/// Matrix of T_s on the basis e_w (w in `cell`, in the given order): column
/// j holds T_s.e_{cell[j]}, truncated to the cell.
std::vector<std::vector<LaurentPoly>> cell_action_matrix(const CoxeterSystem& sys, const KLResult& kl,
                                                         const std::vector<Elt>& cell, int s);
/// Same action after v_s -> 1, one matrix per generator.
std::vector<IntMatrix> cell_action_at_one(const CoxeterSystem& sys, const KLResult& kl,
                                          const std::vector<Elt>& cell);

/// Values on the conjugacy classes of `conjugacy_classes(sys)`, in that order.
using ClassFunction = std::vector<std::int64_t>;

ClassFunction character_of(const CoxeterSystem& sys, const std::vector<ConjugacyClass>& classes,
                           const std::vector<IntMatrix>& generators);
ClassFunction cell_character(const CoxeterSystem& sys, const KLResult& kl, const std::vector<ConjugacyClass>& classes,
                             const std::vector<Elt>& cell);

/// s^2 = 1 and (st)^m(s,t) = 1 for all generator pairs.
CheckReport check_representation(const CoxeterSystem& sys, const std::vector<IntMatrix>& generators);

struct Irreducible {
  std::string label;
  ClassFunction values;
  /// Number of Galois-conjugate irreducibles merged into this row.
  int orbit = 1;
  int b = -1;
};

/// Character table of a finite Coxeter group, with columns reordered to
/// match conjugacy_classes(sys).
struct CharacterTable {
  std::string system;
  std::vector<std::size_t> class_sizes;
  std::vector<Irreducible> rows;

  std::size_t find(const std::string& label) const;
};

/// Parses and validates: class words map onto the classes of `sys` with the
/// stated sizes, and rows are orthogonal with the stated norms.
CharacterTable character_table_from_json(const CoxeterSystem& sys, const nlohmann::json& j);
CharacterTable load_character_table(const CoxeterSystem& sys, const std::string& path);
nlohmann::json character_table_to_json(const CoxeterSystem& sys, const std::vector<ConjugacyClass>& classes,
                                       const std::string& system, const std::vector<Irreducible>& rows);

/// (row index, multiplicity) in table order, zero multiplicities omitted.
using Decomposition = std::vector<std::pair<std::size_t, std::int64_t>>;

/// Throws RepError unless the multiplicities are non-negative integers that
/// reconstruct chi exactly.
Decomposition decompose(const ClassFunction& chi, const CharacterTable& table);
/// "4_1 + 2*16_1"
std::string decomposition_to_string(const Decomposition& d, const CharacterTable& table);

/// Sum of the given characters equals the regular character.
bool is_regular_character(const std::vector<ConjugacyClass>& classes, const std::vector<ClassFunction>& chars,
                          std::size_t group_order);

/// Inverse of decomposition_to_string; spaces are ignored.
Decomposition parse_decomposition(std::string_view text, const CharacterTable& table);

/// Characters and decompositions of every block of a left-cell partition.
struct CellCharacters {
  std::vector<ClassFunction> chars;
  std::vector<Decomposition> decompositions;
};
CellCharacters cell_characters(const CoxeterSystem& sys, const KLResult& kl, const CharacterTable& table,
                               const CellPartition& left, bool parallel = true);

/// Expected two-sided cells (each named by one irreducible), their left cell
/// characters, and the covering pairs (lower, higher) of the order between them.
struct CellReference {
  struct Node {
    std::string label;
    std::vector<Decomposition> constructible;
  };
  std::string system, name, condition;
  std::vector<int> weights;
  std::vector<Node> nodes;
  std::vector<std::pair<std::string, std::string>> order;
  std::vector<Decomposition> absent;
};
CellReference cell_reference_from_json(const nlohmann::json& j, const CharacterTable& table);
CellReference load_cell_reference(const std::string& path, const CharacterTable& table);

/// Names every two-sided cell by the reference node whose label occurs in it,
/// then compares left cell characters per node and the order between nodes.
/// detail["names"] lists the node label of each two-sided block.
CheckReport compare_with_reference(const CellPartition& left, const CellPartition& two_sided,
                                   const CellCharacters& chars, const CharacterTable& table,
                                   const CellReference& ref);

}  // namespace klc
