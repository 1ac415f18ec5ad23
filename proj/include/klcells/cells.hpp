#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "klcells/coxeter.hpp"
#include "klcells/kl.hpp"

namespace klc {

enum class EdgeReason { descent, mu };

/// Which way the generator edge points. `standard`: sw <=_L w for sw > w,
/// so that H C_w lies in the span of C_y with y <=_L w. `literal`: y <=_L sy
/// for sy > y, taken word for word from the defining relation.
enum class EdgeOrientation { standard, literal };

/// from <=_L to, witnessed by generator s.
struct Edge {
  Elt from;
  Elt to;
  int s;
  EdgeReason reason;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeSet {
  std::size_t n = 0;
  std::vector<Edge> edges;  // sorted by (from, to, s, reason)
};

EdgeSet left_edges(const CoxeterSystem& sys, const MuTable& mu,
                   EdgeOrientation orientation = EdgeOrientation::standard);

enum class CellKind { left, right, two_sided };
std::string to_string(CellKind k);

/// Blocks sorted by their minimal element. `dag` holds the covering pairs
/// (a, b) of the induced order, meaning block a <= block b.
struct CellPartition {
  CellKind kind = CellKind::left;
  std::vector<std::vector<Elt>> blocks;
  std::vector<std::uint32_t> block_of;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> dag;

  std::size_t size() const { return blocks.size(); }
  /// Row a lists every block b with a <= b (reflexive).
  std::vector<boost::dynamic_bitset<>> closure() const;
  friend bool operator==(const CellPartition&, const CellPartition&) = default;
};

/// Equality of the underlying set partitions, ignoring the order between blocks.
inline bool same_blocks(const CellPartition& a, const CellPartition& b) { return a.blocks == b.blocks; }

/// Strongly connected components of an arbitrary digraph on n vertices.
CellPartition condense(std::size_t n, const std::vector<std::pair<Elt, Elt>>& arcs, CellKind kind);

CellPartition left_cells(const EdgeSet& edges);
/// Inverses of left blocks, with the order transported along w -> w^-1.
CellPartition right_cells(const CoxeterSystem& sys, const CellPartition& left);
/// Components of the edges together with their images under inversion.
CellPartition two_sided_cells(const CoxeterSystem& sys, const EdgeSet& edges);

/// If B1 <= B2 for left blocks inside one two-sided block then B1 = B2.
CheckReport check_property_L(const CellPartition& left, const CellPartition& two_sided);
/// Blocks partition W, the DAG is acyclic and reduced, and every two-sided
/// block is exactly a union of left blocks and of right blocks.
CheckReport check_cell_structure(const CellPartition& left, const CellPartition& right,
                                 const CellPartition& two_sided);

/// Graphviz digraph with edges drawn from the larger block down to the smaller.
std::string to_dot(const CellPartition& p, const std::vector<std::string>& labels = {});
nlohmann::json to_json(const CoxeterSystem& sys, const CellPartition& p);

}  // namespace klc
