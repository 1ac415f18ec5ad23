#include "klcells/cells.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace klc {

EdgeSet left_edges(const CoxeterSystem& sys, const MuTable& mu, EdgeOrientation orientation) {
  EdgeSet out;
  out.n = sys.size();
  for (Elt w = 0; w < sys.size(); ++w) {
    for (int s = 0; s < sys.rank(); ++s) {
      const Elt sw = sys.left(s, w);
      if (sys.length(sw) < sys.length(w)) continue;
      if (orientation == EdgeOrientation::standard)
        out.edges.push_back({sw, w, s, EdgeReason::descent});
      else
        out.edges.push_back({w, sw, s, EdgeReason::descent});
    }
    for (const auto& e : mu.by_w[w])
      if (!e.m.is_zero()) out.edges.push_back({e.y, w, e.s, EdgeReason::mu});
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::string to_string(CellKind k) {
  switch (k) {
    case CellKind::left: return "left";
    case CellKind::right: return "right";
    case CellKind::two_sided: return "two_sided";
  }
  return "?";
}

namespace {

// Iterative Tarjan; returns component ids in reverse topological order of
// discovery, which callers renumber anyway.
std::vector<std::uint32_t> tarjan(std::size_t n, const std::vector<std::vector<Elt>>& adj) {
  constexpr std::uint32_t none = UINT32_MAX;
  std::vector<std::uint32_t> index(n, none), low(n, 0), comp(n, none);
  std::vector<Elt> stack;
  std::vector<char> on_stack(n, 0);
  std::uint32_t counter = 0, ncomp = 0;
  std::vector<std::pair<Elt, std::size_t>> call;
  for (Elt root = 0; root < n; ++root) {
    if (index[root] != none) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i == 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      if (i < adj[v].size()) {
        const Elt u = adj[v][i++];
        if (index[u] == none) {
          call.push_back({u, 0});
        } else if (on_stack[u]) {
          low[v] = std::min(low[v], index[u]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        Elt x;
        do {
          x = stack.back();
          stack.pop_back();
          on_stack[x] = 0;
          comp[x] = ncomp;
        } while (x != v);
        ++ncomp;
      }
      const Elt done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

std::vector<boost::dynamic_bitset<>> reach_sets(std::size_t nb,
                                                const std::vector<std::pair<std::uint32_t, std::uint32_t>>& arcs) {
  std::vector<std::vector<std::uint32_t>> succ(nb);
  std::vector<int> indeg(nb, 0);
  for (auto [a, b] : arcs) {
    succ[a].push_back(b);
    ++indeg[b];
  }
  std::vector<std::uint32_t> topo;
  for (std::uint32_t a = 0; a < nb; ++a)
    if (indeg[a] == 0) topo.push_back(a);
  for (std::size_t i = 0; i < topo.size(); ++i)
    for (auto b : succ[topo[i]])
      if (--indeg[b] == 0) topo.push_back(b);
  if (topo.size() != nb) throw std::logic_error("block graph has a cycle");
  std::vector<boost::dynamic_bitset<>> reach(nb, boost::dynamic_bitset<>(nb));
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    reach[*it].set(*it);
    for (auto b : succ[*it]) reach[*it] |= reach[b];
  }
  return reach;
}

void reduce_dag(CellPartition& p, std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs) {
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  const auto reach = reach_sets(p.size(), arcs);
  std::vector<std::vector<std::uint32_t>> succ(p.size());
  for (auto [a, b] : arcs) succ[a].push_back(b);
  p.dag.clear();
  for (auto [a, b] : arcs) {
    bool covered = true;
    for (auto c : succ[a])
      if (c != b && reach[c].test(b)) {
        covered = false;
        break;
      }
    if (covered) p.dag.push_back({a, b});
  }
}

}  // namespace

std::vector<boost::dynamic_bitset<>> CellPartition::closure() const { return reach_sets(size(), dag); }

CellPartition condense(std::size_t n, const std::vector<std::pair<Elt, Elt>>& arcs, CellKind kind) {
  std::vector<std::vector<Elt>> adj(n);
  for (auto [a, b] : arcs) adj[a].push_back(b);
  const auto comp = tarjan(n, adj);
  std::uint32_t ncomp = 0;
  for (auto c : comp) ncomp = std::max(ncomp, c + 1);
  // renumber by minimal element; indices are sorted by length already
  std::vector<std::uint32_t> rename(ncomp, UINT32_MAX);
  std::uint32_t next = 0;
  for (Elt w = 0; w < n; ++w)
    if (rename[comp[w]] == UINT32_MAX) rename[comp[w]] = next++;
  CellPartition p;
  p.kind = kind;
  p.blocks.assign(ncomp, {});
  p.block_of.resize(n);
  for (Elt w = 0; w < n; ++w) {
    p.block_of[w] = rename[comp[w]];
    p.blocks[p.block_of[w]].push_back(w);
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> barcs;
  for (auto [a, b] : arcs)
    if (p.block_of[a] != p.block_of[b]) barcs.push_back({p.block_of[a], p.block_of[b]});
  reduce_dag(p, std::move(barcs));
  return p;
}

CellPartition left_cells(const EdgeSet& edges) {
  std::vector<std::pair<Elt, Elt>> arcs;
  arcs.reserve(edges.edges.size());
  for (const auto& e : edges.edges) arcs.push_back({e.from, e.to});
  return condense(edges.n, arcs, CellKind::left);
}

CellPartition right_cells(const CoxeterSystem& sys, const CellPartition& left) {
  std::vector<std::vector<Elt>> blocks;
  for (const auto& b : left.blocks) {
    std::vector<Elt> inv;
    for (Elt w : b) inv.push_back(sys.inverse(w));
    std::sort(inv.begin(), inv.end());
    blocks.push_back(std::move(inv));
  }
  std::vector<std::uint32_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return blocks[a].front() < blocks[b].front(); });
  std::vector<std::uint32_t> pos(blocks.size());
  CellPartition p;
  p.kind = CellKind::right;
  p.block_of.resize(sys.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    pos[order[i]] = i;
    p.blocks.push_back(std::move(blocks[order[i]]));
    for (Elt w : p.blocks.back()) p.block_of[w] = i;
  }
  for (auto [a, b] : left.dag) p.dag.push_back({pos[a], pos[b]});
  std::sort(p.dag.begin(), p.dag.end());
  return p;
}

CellPartition two_sided_cells(const CoxeterSystem& sys, const EdgeSet& edges) {
  std::vector<std::pair<Elt, Elt>> arcs;
  arcs.reserve(2 * edges.edges.size());
  for (const auto& e : edges.edges) {
    arcs.push_back({e.from, e.to});
    arcs.push_back({sys.inverse(e.from), sys.inverse(e.to)});
  }
  return condense(edges.n, arcs, CellKind::two_sided);
}

CheckReport check_property_L(const CellPartition& left, const CellPartition& two_sided) {
  CheckReport rep{"left order inside two-sided cells", true, 0, {}, {}};
  const auto reach = left.closure();
  std::vector<std::vector<std::uint32_t>> members(two_sided.size());
  for (std::uint32_t b = 0; b < left.size(); ++b) members[two_sided.block_of[left.blocks[b].front()]].push_back(b);
  std::size_t violations = 0;
  for (std::uint32_t t = 0; t < members.size(); ++t) {
    for (auto b1 : members[t])
      for (auto b2 : members[t]) {
        if (b1 == b2) continue;
        ++rep.checked;
        if (reach[b1].test(b2)) {
          ++violations;
          rep.fail("left blocks " + std::to_string(b1) + " <= " + std::to_string(b2) + " inside two-sided block " +
                   std::to_string(t));
        }
      }
  }
  rep.detail["violations"] = violations;
  return rep;
}

namespace {

void check_partition(CheckReport& rep, const CellPartition& p) {
  std::vector<int> seen(p.block_of.size(), 0);
  for (std::uint32_t b = 0; b < p.size(); ++b) {
    if (p.blocks[b].empty()) rep.fail(to_string(p.kind) + " block " + std::to_string(b) + " is empty");
    for (Elt w : p.blocks[b]) {
      ++seen[w];
      if (p.block_of[w] != b) rep.fail(to_string(p.kind) + " block_of disagrees at " + std::to_string(w));
    }
    if (b > 0 && !p.blocks[b].empty() && p.blocks[b - 1].front() >= p.blocks[b].front())
      rep.fail(to_string(p.kind) + " blocks out of order");
  }
  for (std::size_t w = 0; w < seen.size(); ++w)
    if (seen[w] != 1) rep.fail(to_string(p.kind) + " blocks do not partition W at " + std::to_string(w));
  try {
    const auto reach = p.closure();
    for (auto [a, b] : p.dag) {
      ++rep.checked;
      for (auto [c, d] : p.dag)
        if (c == a && d != b && reach[d].test(b)) rep.fail(to_string(p.kind) + " stored DAG is not reduced");
    }
  } catch (const std::logic_error&) {
    rep.fail(to_string(p.kind) + " block order is cyclic");
  }
}

void check_union(CheckReport& rep, const CellPartition& fine, const CellPartition& coarse) {
  std::vector<std::size_t> covered(coarse.size(), 0);
  for (const auto& b : fine.blocks) {
    const auto t = coarse.block_of[b.front()];
    for (Elt w : b)
      if (coarse.block_of[w] != t) rep.fail(to_string(fine.kind) + " block splits across two-sided blocks");
    covered[t] += b.size();
  }
  for (std::uint32_t t = 0; t < coarse.size(); ++t) {
    ++rep.checked;
    if (covered[t] != coarse.blocks[t].size())
      rep.fail("two-sided block " + std::to_string(t) + " is not a union of " + to_string(fine.kind) + " blocks");
  }
}

}  // namespace

CheckReport check_cell_structure(const CellPartition& left, const CellPartition& right,
                                 const CellPartition& two_sided) {
  CheckReport rep{"cell partition structure", true, 0, {}, {}};
  check_partition(rep, left);
  check_partition(rep, right);
  check_partition(rep, two_sided);
  check_union(rep, left, two_sided);
  check_union(rep, right, two_sided);
  return rep;
}

std::string to_dot(const CellPartition& p, const std::vector<std::string>& labels) {
  std::ostringstream os;
  os << "digraph " << to_string(p.kind) << "_cells {\n  rankdir=TB;\n  node [shape=box];\n";
  for (std::uint32_t b = 0; b < p.size(); ++b) {
    os << "  c" << b << " [label=\"";
    if (b < labels.size() && !labels[b].empty())
      os << labels[b] << "\\n";
    os << "#" << b << " size " << p.blocks[b].size() << "\"];\n";
  }
  for (auto [a, b] : p.dag) os << "  c" << b << " -> c" << a << ";\n";
  os << "}\n";
  return os.str();
}

nlohmann::json to_json(const CoxeterSystem& sys, const CellPartition& p) {
  nlohmann::json j;
  j["kind"] = to_string(p.kind);
  auto& blocks = j["blocks"] = nlohmann::json::array();
  for (const auto& b : p.blocks) {
    auto words = nlohmann::json::array();
    for (Elt w : b) words.push_back(word_to_string(sys.word(w)));
    blocks.push_back(std::move(words));
  }
  auto& dag = j["order"] = nlohmann::json::array();
  for (auto [a, b] : p.dag) dag.push_back({a, b});
  return j;
}

}  // namespace klc
