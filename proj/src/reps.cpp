#include "klcells/reps.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>

namespace klc {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m{n, std::vector<std::int64_t>(n * n, 0)};
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

std::int64_t IntMatrix::trace() const {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < n; ++i) t += at(i, i);
  return t;
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
  IntMatrix z{x.n, std::vector<std::int64_t>(x.n * x.n, 0)};
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k) {
      const std::int64_t a = x.at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < x.n; ++j) {
        std::int64_t p;
        if (__builtin_mul_overflow(a, y.at(k, j), &p) || __builtin_add_overflow(z.at(i, j), p, &z.at(i, j)))
          throw RepError("integer overflow in matrix product");
      }
    }
  return z;
}

std::vector<std::vector<LaurentPoly>> cell_action_matrix(const CoxeterSystem& sys, const KLResult& kl,
                                                         const std::vector<Elt>& cell, int s) {
  const std::size_t n = cell.size();
  std::unordered_map<Elt, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[cell[i]] = i;
  std::vector<std::vector<LaurentPoly>> m(n, std::vector<LaurentPoly>(n));
  const Monomial vs = kl.params.v[s];
  for (std::size_t j = 0; j < n; ++j) {
    const Elt w = cell[j];
    const Elt sw = sys.left(s, w);
    if (sys.length(sw) < sys.length(w)) {
      m[j][j] = LaurentPoly::monomial(vs.inverse(), -1);
      continue;
    }
    if (auto it = pos.find(sw); it != pos.end()) m[it->second][j] += LaurentPoly(1);
    m[j][j] += LaurentPoly::monomial(vs);
    for (const auto& e : kl.M.by_w[w]) {
      if (e.s != s) continue;
      auto it = pos.find(e.y);
      if (it == pos.end()) continue;
      if ((sys.length(w) - sys.length(e.y)) % 2 == 0)
        m[it->second][j] -= e.m;
      else
        m[it->second][j] += e.m;
    }
  }
  return m;
}

std::vector<IntMatrix> cell_action_at_one(const CoxeterSystem& sys, const KLResult& kl,
                                          const std::vector<Elt>& cell) {
  std::vector<IntMatrix> out;
  for (int s = 0; s < sys.rank(); ++s) {
    const auto m = cell_action_matrix(sys, kl, cell, s);
    IntMatrix x{cell.size(), std::vector<std::int64_t>(cell.size() * cell.size(), 0)};
    for (std::size_t i = 0; i < cell.size(); ++i)
      for (std::size_t j = 0; j < cell.size(); ++j) {
        const Integer v = m[i][j].eval_at_one();
        if (!v.is_small()) throw RepError("specialized action entry does not fit in 64 bits");
        x.at(i, j) = v.to_int64();
      }
    out.push_back(std::move(x));
  }
  return out;
}

ClassFunction character_of(const CoxeterSystem& sys, const std::vector<ConjugacyClass>& classes,
                           const std::vector<IntMatrix>& generators) {
  ClassFunction chi;
  const std::size_t n = generators.empty() ? 0 : generators[0].n;
  for (const auto& c : classes) {
    IntMatrix m = IntMatrix::identity(n);
    for (int s : sys.word(c.representative)) m = m * generators[s];
    chi.push_back(m.trace());
  }
  return chi;
}

ClassFunction cell_character(const CoxeterSystem& sys, const KLResult& kl, const std::vector<ConjugacyClass>& classes,
                             const std::vector<Elt>& cell) {
  return character_of(sys, classes, cell_action_at_one(sys, kl, cell));
}

CheckReport check_representation(const CoxeterSystem& sys, const std::vector<IntMatrix>& generators) {
  CheckReport rep{"generator relations at v = 1", true, 0, {}, {}};
  if (generators.empty()) return rep;
  const auto one = IntMatrix::identity(generators[0].n);
  const auto& m = sys.spec().m;
  for (int s = 0; s < sys.rank(); ++s) {
    ++rep.checked;
    if (!(generators[s] * generators[s] == one)) rep.fail("s" + std::to_string(s + 1) + " does not square to 1");
    for (int t = s + 1; t < sys.rank(); ++t) {
      ++rep.checked;
      const IntMatrix st = generators[s] * generators[t];
      IntMatrix p = one;
      for (int k = 0; k < m[s][t]; ++k) p = p * st;
      if (!(p == one))
        rep.fail("braid relation fails for s" + std::to_string(s + 1) + ", s" + std::to_string(t + 1));
    }
  }
  return rep;
}

std::size_t CharacterTable::find(const std::string& label) const {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].label == label) return i;
  throw RepError("no character labelled " + label + " in the table for " + system);
}

namespace {

__int128 weighted_product(const std::vector<std::size_t>& sizes, const ClassFunction& a, const ClassFunction& b) {
  __int128 sum = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c)
    sum += static_cast<__int128>(sizes[c]) * static_cast<__int128>(a[c]) * static_cast<__int128>(b[c]);
  return sum;
}

}  // namespace

CharacterTable character_table_from_json(const CoxeterSystem& sys, const nlohmann::json& j) {
  const auto classes = conjugacy_classes(sys);
  std::vector<std::size_t> class_of(sys.size());
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (Elt w : classes[c].elements) class_of[w] = c;
  CharacterTable t;
  t.system = j.at("system").get<std::string>();
  if (j.at("order").get<std::size_t>() != sys.size())
    throw RepError("character table for " + t.system + " has the wrong group order");
  const auto& jc = j.at("classes");
  if (jc.size() != classes.size())
    throw RepError("character table for " + t.system + " has " + std::to_string(jc.size()) + " classes, expected " +
                   std::to_string(classes.size()));
  std::vector<std::size_t> perm;
  std::vector<char> hit(classes.size(), 0);
  for (const auto& c : jc) {
    const Word word = word_from_string(c.at("word").get<std::string>());
    for (int s : word)
      if (s < 0 || s >= sys.rank()) throw RepError("class word uses a generator outside the system");
    const std::size_t k = class_of[sys.from_word(word)];
    if (hit[k]++) throw RepError("two table columns name the same class");
    if (c.at("size").get<std::size_t>() != classes[k].size)
      throw RepError("class size mismatch for class " + c.at("word").get<std::string>());
    perm.push_back(k);
  }
  t.class_sizes.resize(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) t.class_sizes[c] = classes[c].size;
  for (const auto& r : j.at("characters")) {
    Irreducible irr;
    irr.label = r.at("label").get<std::string>();
    irr.orbit = r.value("orbit", 1);
    irr.b = r.value("b", -1);
    const auto vals = r.at("values").get<std::vector<std::int64_t>>();
    if (vals.size() != perm.size()) throw RepError("row " + irr.label + " has the wrong length");
    irr.values.assign(classes.size(), 0);
    for (std::size_t c = 0; c < perm.size(); ++c) irr.values[perm[c]] = vals[c];
    if (irr.values[0] <= 0) throw RepError("row " + irr.label + " has non-positive degree");
    t.rows.push_back(std::move(irr));
  }
  const __int128 order = static_cast<__int128>(sys.size());
  __int128 total = 0;
  for (std::size_t a = 0; a < t.rows.size(); ++a) {
    for (std::size_t b = a; b < t.rows.size(); ++b) {
      const __int128 ip = weighted_product(t.class_sizes, t.rows[a].values, t.rows[b].values);
      const __int128 expect = a == b ? order * t.rows[a].orbit : 0;
      if (ip != expect)
        throw RepError("rows " + t.rows[a].label + " and " + t.rows[b].label + " violate orthogonality");
    }
    total += t.rows[a].orbit;
  }
  if (total != static_cast<__int128>(classes.size()))
    throw RepError("table for " + t.system + " does not list every irreducible");
  return t;
}

CharacterTable load_character_table(const CoxeterSystem& sys, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RepError("cannot open character table " + path);
  nlohmann::json j;
  try {
    in >> j;
    return character_table_from_json(sys, j);
  } catch (const nlohmann::json::exception& e) {
    throw RepError("malformed character table " + path + ": " + e.what());
  }
}

nlohmann::json character_table_to_json(const CoxeterSystem& sys, const std::vector<ConjugacyClass>& classes,
                                       const std::string& system, const std::vector<Irreducible>& rows) {
  nlohmann::json j;
  j["system"] = system;
  j["order"] = sys.size();
  auto& jc = j["classes"] = nlohmann::json::array();
  for (const auto& c : classes) jc.push_back({{"word", word_to_string(sys.word(c.representative))}, {"size", c.size}});
  auto& jr = j["characters"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"label", r.label}, {"values", r.values}};
    if (r.orbit != 1) row["orbit"] = r.orbit;
    if (r.b >= 0) row["b"] = r.b;
    jr.push_back(std::move(row));
  }
  return j;
}

Decomposition decompose(const ClassFunction& chi, const CharacterTable& table) {
  if (chi.size() != table.class_sizes.size()) throw RepError("class function has the wrong number of classes");
  std::size_t order = 0;
  for (auto s : table.class_sizes) order += s;
  Decomposition d;
  ClassFunction rebuilt(chi.size(), 0);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const __int128 ip = weighted_product(table.class_sizes, chi, r.values);
    const __int128 denom = static_cast<__int128>(order) * r.orbit;
    if (ip % denom != 0) throw RepError("non-integral multiplicity of " + r.label);
    const auto m = static_cast<std::int64_t>(ip / denom);
    if (m < 0) throw RepError("negative multiplicity of " + r.label);
    if (m == 0) continue;
    d.push_back({i, m});
    for (std::size_t c = 0; c < chi.size(); ++c) rebuilt[c] += m * r.values[c];
  }
  if (rebuilt != chi) throw RepError("decomposition does not reconstruct the character");
  return d;
}

std::string decomposition_to_string(const Decomposition& d, const CharacterTable& table) {
  std::string out;
  for (const auto& [i, m] : d) {
    if (!out.empty()) out += " + ";
    if (m != 1) out += std::to_string(m) + "*";
    out += table.rows[i].label;
  }
  return out.empty() ? "0" : out;
}

bool is_regular_character(const std::vector<ConjugacyClass>& classes, const std::vector<ClassFunction>& chars,
                          std::size_t group_order) {
  ClassFunction sum(classes.size(), 0);
  for (const auto& c : chars)
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += c[k];
  for (std::size_t k = 0; k < sum.size(); ++k) {
    const bool identity = classes[k].representative == 0;
    if (sum[k] != (identity ? static_cast<std::int64_t>(group_order) : 0)) return false;
  }
  return true;
}

Decomposition parse_decomposition(std::string_view text, const CharacterTable& table) {
  std::map<std::size_t, std::int64_t> acc;
  std::string term;
  auto flush = [&] {
    if (term.empty()) throw RepError("empty term in '" + std::string(text) + "'");
    std::int64_t m = 1;
    std::string label = term;
    if (const auto star = term.find('*'); star != std::string::npos) {
      m = std::stoll(term.substr(0, star));
      label = term.substr(star + 1);
    }
    if (m <= 0) throw RepError("bad multiplicity in '" + term + "'");
    acc[table.find(label)] += m;
    term.clear();
  };
  for (char c : text) {
    if (c == ' ') continue;
    if (c == '+') {
      flush();
    } else {
      term += c;
    }
  }
  flush();
  return Decomposition(acc.begin(), acc.end());
}

CellCharacters cell_characters(const CoxeterSystem& sys, const KLResult& kl, const CharacterTable& table,
                               const CellPartition& left, bool parallel) {
  const auto classes = conjugacy_classes(sys);
  CellCharacters out;
  out.chars.resize(left.size());
  out.decompositions.resize(left.size());
  std::vector<std::string> errors(left.size());
  const auto n = static_cast<std::int64_t>(left.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t b = 0; b < n; ++b) {
    const auto k = static_cast<std::size_t>(b);
    try {
      out.chars[k] = cell_character(sys, kl, classes, left.blocks[k]);
      out.decompositions[k] = decompose(out.chars[k], table);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < errors.size(); ++k)
    if (!errors[k].empty()) throw RepError("left cell " + std::to_string(k) + ": " + errors[k]);
  return out;
}

CellReference cell_reference_from_json(const nlohmann::json& j, const CharacterTable& table) {
  CellReference ref;
  ref.system = j.at("system").get<std::string>();
  ref.name = j.at("case").get<std::string>();
  ref.condition = j.value("condition", "");
  ref.weights = j.at("weights").get<std::vector<int>>();
  for (const auto& c : j.at("two_sided_cells")) {
    CellReference::Node node{c.at("label").get<std::string>(), {}};
    table.find(node.label);
    for (const auto& d : c.at("constructible")) node.constructible.push_back(parse_decomposition(d.get<std::string>(), table));
    ref.nodes.push_back(std::move(node));
  }
  for (const auto& e : j.at("order")) ref.order.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  if (j.contains("not_constructible"))
    for (const auto& d : j.at("not_constructible")) ref.absent.push_back(parse_decomposition(d.get<std::string>(), table));
  return ref;
}

CellReference load_cell_reference(const std::string& path, const CharacterTable& table) {
  std::ifstream in(path);
  if (!in) throw RepError("cannot open " + path);
  return cell_reference_from_json(nlohmann::json::parse(in), table);
}

CheckReport compare_with_reference(const CellPartition& left, const CellPartition& two_sided,
                                   const CellCharacters& chars, const CharacterTable& table,
                                   const CellReference& ref) {
  CheckReport rep{"cells against " + ref.system + " " + ref.name, true, 0, {}, {}};
  const std::size_t nt = two_sided.size();
  std::vector<std::vector<Decomposition>> per_block(nt);
  std::vector<std::vector<bool>> occurs(nt, std::vector<bool>(table.rows.size(), false));
  for (std::size_t b = 0; b < left.size(); ++b) {
    const auto t = two_sided.block_of[left.blocks[b].front()];
    per_block[t].push_back(chars.decompositions[b]);
    for (const auto& [i, m] : chars.decompositions[b]) occurs[t][i] = true;
  }

  std::vector<std::string> names(nt);
  std::map<std::string, std::size_t> block_of_name;
  for (std::size_t t = 0; t < nt; ++t) {
    std::vector<std::string> hits;
    for (const auto& node : ref.nodes)
      if (occurs[t][table.find(node.label)]) hits.push_back(node.label);
    if (hits.size() != 1) {
      rep.fail("two-sided cell " + std::to_string(t) + " matches " + std::to_string(hits.size()) + " reference nodes");
      continue;
    }
    names[t] = hits[0];
    if (!block_of_name.emplace(hits[0], t).second) rep.fail("node " + hits[0] + " names two two-sided cells");
  }
  if (nt != ref.nodes.size())
    rep.fail(std::to_string(nt) + " two-sided cells, reference has " + std::to_string(ref.nodes.size()));
  rep.detail["names"] = names;
  if (!rep.ok) return rep;

  for (const auto& node : ref.nodes) {
    ++rep.checked;
    auto got = per_block[block_of_name.at(node.label)];
    std::sort(got.begin(), got.end());
    got.erase(std::unique(got.begin(), got.end()), got.end());
    auto want = node.constructible;
    std::sort(want.begin(), want.end());
    if (got != want) {
      std::string msg = "cell " + node.label + ": got";
      for (const auto& d : got) msg += " {" + decomposition_to_string(d, table) + "}";
      rep.fail(msg);
    }
  }
  for (const auto& d : chars.decompositions)
    for (const auto& a : ref.absent)
      if (d == a) rep.fail("unexpected left cell character " + decomposition_to_string(a, table));

  std::vector<std::pair<std::string, std::string>> got_order;
  for (auto [a, b] : two_sided.dag) got_order.emplace_back(names[a], names[b]);
  auto want_order = ref.order;
  std::sort(got_order.begin(), got_order.end());
  std::sort(want_order.begin(), want_order.end());
  ++rep.checked;
  if (got_order != want_order) {
    for (const auto& e : got_order)
      if (!std::binary_search(want_order.begin(), want_order.end(), e))
        rep.fail("extra covering pair " + e.first + " < " + e.second);
    for (const auto& e : want_order)
      if (!std::binary_search(got_order.begin(), got_order.end(), e))
        rep.fail("missing covering pair " + e.first + " < " + e.second);
  }
  return rep;
}

}  // namespace klc
