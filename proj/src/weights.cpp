#include "klcells/weights.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "klcells/hash.hpp"

namespace klc {

std::string to_string(const Ratio& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::vector<int> normalize_weight(const std::vector<int>& weights) {
  int g = 0;
  for (int w : weights) g = std::gcd(g, w);
  if (g == 0) return weights;
  std::vector<int> out;
  for (int w : weights) out.push_back(w / g);
  return out;
}

std::vector<int> class_weights_of(const CoxeterSpec& spec, const std::vector<int>& weights) {
  const auto gc = generator_classes(spec);
  const auto p = ParamAssignment::from_weights(spec, weights);
  std::vector<int> out;
  for (const auto& members : gc.members) out.push_back(p.v[members.front()].e[0]);
  return out;
}

void MonomialSet::insert(const Monomial& m, unsigned tag) {
  auto it = std::lower_bound(items.begin(), items.end(), m);
  const auto pos = static_cast<std::size_t>(it - items.begin());
  if (it != items.end() && *it == m) {
    tags[pos] |= tag;
    return;
  }
  items.insert(it, m);
  tags.insert(tags.begin() + static_cast<std::ptrdiff_t>(pos), tag);
}

bool MonomialSet::contains(const Monomial& m) const { return std::binary_search(items.begin(), items.end(), m); }

MonomialSet gamma_plus_W(const KLResult& kl) {
  std::vector<std::pair<Monomial, unsigned>> found;
  for (std::size_t w = 0; w < kl.P.rows.size(); ++w)
    for (const auto& [y, p] : kl.P.rows[w]) {
      if (y == w) continue;
      for (const auto& t : p.terms()) found.push_back({t.m.inverse(), gamma_a});
    }
  for (const auto& row : kl.M.by_w)
    for (const auto& e : row) {
      auto terms = sorted_terms(e.m, kl.order);
      std::reverse(terms.begin(), terms.end());
      for (std::size_t i = 1; i < terms.size(); ++i) found.push_back({terms[i].m / terms[i - 1].m, gamma_b});
    }
  std::sort(found.begin(), found.end());
  MonomialSet out;
  for (const auto& [m, tag] : found) out.insert(m, tag);
  return out;
}

MonomialSet gamma_plus_prime_W(const KLResult& kl, const CellPartition& left,
                               std::vector<std::pair<Elt, Elt>>* duplicates) {
  MonomialSet out = gamma_plus_W(kl);
  const std::size_t n = kl.P.rows.size();
  std::vector<Monomial> delta(n);
  for (Elt w = 1; w < n; ++w) {
    const LaurentPoly p = kl.P.get(0, w);
    const auto terms = sorted_terms(p, kl.order);
    delta[w] = terms.front().m.inverse();
    for (std::size_t i = 1; i < terms.size(); ++i) out.insert(terms.front().m / terms[i].m, MonomialTag::delta);
  }
  for (const auto& block : left.blocks) {
    if (block.size() < 2) continue;
    std::vector<Elt> sorted = block;
    std::sort(sorted.begin(), sorted.end(),
              [&](Elt a, Elt b) { return kl.order.compare(delta[a], delta[b]) < 0; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const Monomial r = delta[sorted[i]] / delta[sorted[i - 1]];
      if (r.is_one()) {
        if (duplicates) duplicates->push_back({sorted[i - 1], sorted[i]});
        continue;
      }
      out.insert(r, delta_chain);
    }
  }
  return out;
}

CheckReport check_star(const std::vector<int>& class_weights, const MonomialSet& set, int rank) {
  CheckReport rep{"specialization positivity", true, 0, {}, {}};
  for (const auto& m : set.items) {
    ++rep.checked;
    std::int64_t deg = 0;
    for (std::size_t k = 0; k < class_weights.size(); ++k) deg += static_cast<std::int64_t>(class_weights[k]) * m.e[k];
    if (deg <= 0) rep.fail(monomial_to_string(m, rank) + " maps to v^" + std::to_string(deg));
  }
  return rep;
}

std::string Interval::describe() const {
  if (empty) return "empty";
  return "(" + to_string(lo) + ", " + (hi ? to_string(*hi) : std::string("inf")) + ")";
}

Interval validity_interval(const MonomialSet& set) {
  Interval iv;
  for (const auto& m : set.items) {
    const std::int64_t i = m.e[0], j = m.e[1];
    if (j == 0) {
      if (i <= 0) iv.empty = true;
      continue;
    }
    const Ratio bound(-i, j);
    if (j > 0) {
      if (bound > iv.lo) {
        iv.lo = bound;
        iv.lo_binding.clear();
      }
      if (bound == iv.lo && bound > Ratio(0)) iv.lo_binding.push_back(m);
    } else {
      if (!iv.hi || bound < *iv.hi) {
        iv.hi = bound;
        iv.hi_binding.clear();
      }
      if (bound == *iv.hi) iv.hi_binding.push_back(m);
    }
  }
  if (iv.hi && *iv.hi <= iv.lo) iv.empty = true;
  return iv;
}

DistinguishedReport distinguished_involutions(const CoxeterSystem& sys, const KLResult& kl, const CellPartition& left,
                                              const std::vector<int>& class_weights) {
  if (kl.params.rank > 1 && class_weights.empty())
    throw KLError("distinguished involutions need class weights for a multi-variable table");
  DistinguishedReport rep;
  rep.check = CheckReport{"distinguished involutions", true, 0, {}, {}};
  rep.delta.resize(sys.size());
  rep.n.resize(sys.size());
  for (Elt w = 0; w < sys.size(); ++w) {
    LaurentPoly p = kl.P.get(0, w);
    if (kl.params.rank > 1) p = specialize(p, class_weights);
    const auto& t = p.terms().back();
    rep.delta[w] = -t.m.e[0];
    rep.n[w] = t.c;
  }
  for (std::uint32_t b = 0; b < left.size(); ++b) {
    const auto& block = left.blocks[b];
    Elt best = block.front();
    int ties = 0;
    for (Elt w : block) {
      if (rep.delta[w] < rep.delta[best]) {
        best = w;
        ties = 0;
      } else if (rep.delta[w] == rep.delta[best] && w != best) {
        ++ties;
      }
    }
    DistinguishedCell c{b, best, rep.delta[best], rep.n[best], ties == 0, sys.inverse(best) == best,
                        rep.n[best] == Integer(1) || rep.n[best] == Integer(-1)};
    ++rep.check.checked;
    const std::string where = "cell " + std::to_string(b) + " (" + element_label(sys, best) + ")";
    if (!c.unique) rep.check.fail(where + ": minimum of Delta is not unique");
    if (!c.involution) rep.check.fail(where + ": minimizer is not an involution");
    if (!c.unit) rep.check.fail(where + ": n = " + c.n.to_string());
    rep.cells.push_back(c);
  }
  return rep;
}

CheckReport check_specialization(const KLResult& generic, const KLResult& weighted,
                                 const std::vector<int>& class_weights) {
  CheckReport rep{"specialization of multi-variable tables", true, 0, {}, {}};
  for (std::size_t w = 0; w < generic.P.rows.size(); ++w) {
    const auto& row = generic.P.rows[w];
    const auto& wrow = weighted.P.rows[w];
    if (row.size() != wrow.size()) rep.fail("P rows differ in support at w = " + std::to_string(w));
    for (const auto& [y, p] : row) {
      ++rep.checked;
      if (!(specialize(p, class_weights) == weighted.P.get(y, static_cast<Elt>(w))))
        rep.fail("P differs at (" + std::to_string(y) + ", " + std::to_string(w) + ")");
    }
    std::size_t nonzero = 0;
    for (const auto& e : generic.M.by_w[w]) {
      ++rep.checked;
      const LaurentPoly s = specialize(e.m, class_weights);
      if (s.is_zero()) rep.fail("nonzero M vanishes after specialization at w = " + std::to_string(w));
      if (!(s == weighted.M.get(e.s, e.y, static_cast<Elt>(w))))
        rep.fail("M differs at (" + std::to_string(e.y) + ", " + std::to_string(w) + ")");
      ++nonzero;
    }
    if (nonzero != weighted.M.by_w[w].size()) rep.fail("M support differs at w = " + std::to_string(w));
  }
  return rep;
}

CheckReport check_refinement(const CellPartition& coarse, const CellPartition& fine) {
  CheckReport rep{"refinement", true, 0, {}, {}};
  for (std::uint32_t b = 0; b < fine.size(); ++b) {
    ++rep.checked;
    const auto target = coarse.block_of[fine.blocks[b].front()];
    for (Elt w : fine.blocks[b])
      if (coarse.block_of[w] != target) {
        rep.fail("fine block " + std::to_string(b) + " meets coarse blocks " + std::to_string(target) + " and " +
                 std::to_string(coarse.block_of[w]));
        break;
      }
  }
  return rep;
}

std::int64_t asymptotic_class_bound(const CoxeterSystem& sys) { return 2 * static_cast<std::int64_t>(sys.max_length()); }

CellPartition transport(const CoxeterSystem& sys, const CellPartition& p, const std::vector<int>& perm) {
  std::vector<std::vector<Elt>> blocks;
  for (const auto& b : p.blocks) {
    std::vector<Elt> img;
    for (Elt w : b) img.push_back(sys.apply_graph_automorphism(w, perm));
    std::sort(img.begin(), img.end());
    blocks.push_back(std::move(img));
  }
  std::vector<std::uint32_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return blocks[a].front() < blocks[b].front(); });
  std::vector<std::uint32_t> pos(blocks.size());
  CellPartition out;
  out.kind = p.kind;
  out.block_of.resize(p.block_of.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    pos[order[i]] = i;
    out.blocks.push_back(std::move(blocks[order[i]]));
    for (Elt w : out.blocks.back()) out.block_of[w] = i;
  }
  for (auto [a, b] : p.dag) out.dag.push_back({pos[a], pos[b]});
  std::sort(out.dag.begin(), out.dag.end());
  return out;
}

std::uint64_t partition_digest(const CellPartition& p) {
  Fnv1a h;
  for (const auto& b : p.blocks) {
    h.add(static_cast<std::uint64_t>(b.size()));
    for (Elt w : b) h.add(static_cast<std::uint64_t>(w));
  }
  return h.value();
}

RegionAnalysis analyze_weights(const CoxeterSystem& sys, const std::vector<int>& class_weights, bool parallel) {
  RegionAnalysis r;
  r.weights = class_weights;
  KLOptions opt;
  opt.parallel = parallel;
  const auto kl = compute_kl(sys, ParamAssignment::from_weights(sys.spec(), class_weights), MonomialOrder::single(), opt);
  const auto edges = left_edges(sys, kl.M);
  r.left = left_cells(edges);
  r.two_sided = two_sided_cells(sys, edges);
  r.property_L = check_property_L(r.left, r.two_sided).ok;
  r.structure_ok = check_cell_structure(r.left, right_cells(sys, r.left), r.two_sided).ok;
  r.distinguished = distinguished_involutions(sys, kl, r.left);
  return r;
}

bool ScanRegion::contains(const Ratio& r) const {
  if (exact) return r == lo;
  return r > lo && (!hi || r < *hi);
}

std::string ScanRegion::describe() const {
  if (exact) return "b/a = " + to_string(lo);
  if (!hi) return "b/a > " + to_string(lo);
  if (lo == Ratio(0)) return "b/a < " + to_string(*hi);
  return to_string(lo) + " < b/a < " + to_string(*hi);
}

int ScanReport::locate(const Ratio& r) const {
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (regions[i].contains(r)) return static_cast<int>(i);
  return -1;
}

namespace {

Ratio interior(const Ratio& lo, const std::optional<Ratio>& hi) {
  if (!hi) return Ratio(boost::rational_cast<std::int64_t>(lo) + 1);
  if (lo == Ratio(0)) {
    const auto k = boost::rational_cast<std::int64_t>(Ratio(1) / *hi);
    return Ratio(1, k + 1);
  }
  return Ratio(lo.numerator() + hi->numerator(), lo.denominator() + hi->denominator());
}

std::vector<int> weights_for(const Ratio& r) {
  return {static_cast<int>(r.denominator()), static_cast<int>(r.numerator())};
}

Ratio invert(const Ratio& r) { return Ratio(1) / r; }

nlohmann::json interval_json(const Interval& iv) {
  nlohmann::json j;
  j["empty"] = iv.empty;
  j["lo"] = to_string(iv.lo);
  j["hi"] = iv.hi ? nlohmann::json(to_string(*iv.hi)) : nlohmann::json("inf");
  auto mono = [](const std::vector<Monomial>& ms) {
    auto a = nlohmann::json::array();
    for (const auto& m : ms) a.push_back(monomial_to_string(m, 2));
    return a;
  };
  j["lo_binding"] = mono(iv.lo_binding);
  j["hi_binding"] = mono(iv.hi_binding);
  return j;
}

}  // namespace

ScanReport scan_equivalence_classes(const CoxeterSystem& sys, const ScanOptions& options) {
  const auto gc = generator_classes(sys.spec());
  if (gc.count() != 2) throw KLError("the scan needs exactly two classes of generators");
  ScanReport rep;
  rep.system = sys.spec().name;
  rep.swap = class_swapping_automorphism(sys.spec(), gc);
  rep.bound = asymptotic_class_bound(sys);
  const bool symmetric = !rep.swap.empty();
  const Ratio floor = symmetric ? Ratio(1) : Ratio(0);
  const auto params = ParamAssignment::generic(sys.spec());
  const std::int64_t guard = 8 * static_cast<std::int64_t>(sys.max_length()) * sys.max_length() * sys.max_length();
  auto log = [&](const std::string& s) {
    if (options.log) options.log(s);
  };
  KLOptions klopt;
  klopt.parallel = options.parallel;

  std::vector<ScanRegion> descending;
  std::vector<MonomialOrder> candidates{MonomialOrder::lex2(1)};
  std::optional<Ratio> upper;
  for (std::int64_t step = 0;; ++step) {
    if (step > guard) throw KLError("scan exceeded the region bound");
    // the first candidate whose validity interval reaches up to the boundary
    std::optional<KLResult> kl;
    MonomialSet gamma;
    Interval iv;
    std::vector<std::string> tried;
    std::size_t chosen = 0;
    for (; chosen < candidates.size(); ++chosen) {
      log("order " + candidates[chosen].describe());
      kl = compute_kl(sys, params, candidates[chosen], klopt);
      gamma = gamma_plus_W(*kl);
      iv = validity_interval(gamma);
      const bool reaches = !iv.empty && (upper ? (!iv.hi || *iv.hi >= *upper) && iv.lo < *upper : !iv.hi);
      if (reaches) break;
      tried.push_back(candidates[chosen].describe() + " -> " + iv.describe());
    }
    if (chosen == candidates.size()) {
      std::string msg = "no order certifies the region below " + (upper ? to_string(*upper) : std::string("inf")) + ":";
      for (const auto& t : tried) msg += " " + t + ";";
      throw KLError(msg);
    }
    const MonomialOrder order = candidates[chosen];
    ScanRegion open;
    open.order = order.describe();
    open.validity = iv;
    open.lo = std::max(iv.lo, floor);
    open.hi = upper;
    open.interval_ok = iv.lo <= open.lo && (!iv.hi || (upper && *iv.hi >= *upper));
    if (options.cross_check_tiebreak && candidates.size() > 1)
      open.other_tiebreak = chosen == 0 ? validity_interval(gamma_plus_W(compute_kl(sys, params, candidates[1], klopt)))
                                        : validity_interval(gamma_plus_W(compute_kl(sys, params, candidates[0], klopt)));
    const Ratio rep_ratio = interior(open.lo, open.hi);
    const auto w = weights_for(rep_ratio);
    log("region " + open.describe() + " at weights " + std::to_string(w[0]) + "," + std::to_string(w[1]));
    open.analysis = analyze_weights(sys, w, options.parallel);
    const auto generic_edges = left_edges(sys, kl->M);
    open.generic_matches = left_cells(generic_edges) == open.analysis.left;
    const auto weighted =
        compute_kl(sys, ParamAssignment::from_weights(sys.spec(), w), MonomialOrder::single(), klopt);
    open.specialization_ok = check_star(w, gamma, 2).ok && check_specialization(*kl, weighted, w).ok;
    open.star_prime = check_star(w, gamma_plus_prime_W(*kl, left_cells(generic_edges)), 2).ok;
    descending.push_back(std::move(open));

    if (iv.lo <= floor) {
      if (symmetric) {
        ScanRegion one;
        one.exact = true;
        one.lo = Ratio(1);
        one.hi = Ratio(1);
        one.order = "weight 1,1";
        one.analysis = analyze_weights(sys, {1, 1}, options.parallel);
        descending.push_back(std::move(one));
        rep.breakpoints.push_back(Ratio(1));
      }
      break;
    }
    ScanRegion exact;
    exact.exact = true;
    exact.lo = iv.lo;
    exact.hi = iv.lo;
    const auto ew = weights_for(iv.lo);
    exact.order = "weight " + std::to_string(ew[0]) + "," + std::to_string(ew[1]);
    log("ratio " + to_string(iv.lo));
    exact.analysis = analyze_weights(sys, ew, options.parallel);
    descending.push_back(std::move(exact));
    rep.breakpoints.push_back(iv.lo);
    upper = iv.lo;
    const bool j_first = ew[1] < ew[0];
    candidates = {MonomialOrder::weighted2(ew[0], ew[1], j_first), MonomialOrder::weighted2(ew[0], ew[1], !j_first)};
  }
  rep.threshold = descending.front().lo;

  std::vector<ScanRegion> regions(descending.rbegin(), descending.rend());
  if (symmetric) {
    std::vector<ScanRegion> below;
    for (auto it = descending.begin(); it != descending.end(); ++it) {
      if (it->exact && it->lo == Ratio(1)) continue;
      ScanRegion m = *it;
      m.mirrored = true;
      if (m.exact) {
        m.lo = invert(it->lo);
        m.hi = m.lo;
      } else {
        m.lo = it->hi ? invert(*it->hi) : Ratio(0);
        m.hi = invert(it->lo);
      }
      m.analysis.weights = {it->analysis.weights[1], it->analysis.weights[0]};
      m.analysis.left = transport(sys, it->analysis.left, rep.swap);
      m.analysis.two_sided = transport(sys, it->analysis.two_sided, rep.swap);
      below.push_back(std::move(m));
    }
    below.insert(below.end(), regions.begin(), regions.end());
    regions = std::move(below);
    std::vector<Ratio> bp;
    for (auto it = rep.breakpoints.rbegin(); it != rep.breakpoints.rend(); ++it)
      if (*it != Ratio(1)) bp.push_back(invert(*it));
    std::reverse(bp.begin(), bp.end());
    std::sort(bp.begin(), bp.end());
    bp.insert(bp.end(), rep.breakpoints.begin(), rep.breakpoints.end());
    std::sort(bp.begin(), bp.end());
    rep.breakpoints = bp;
  } else {
    std::sort(rep.breakpoints.begin(), rep.breakpoints.end());
  }

  std::vector<const CellPartition*> reps_full, reps_sym;
  for (auto& r : regions) {
    r.digest = partition_digest(r.analysis.left);
    for (std::size_t c = 0; c < reps_full.size(); ++c)
      if (same_blocks(*reps_full[c], r.analysis.left)) r.class_id = static_cast<int>(c);
    if (r.class_id < 0) {
      r.class_id = static_cast<int>(reps_full.size());
      reps_full.push_back(&r.analysis.left);
    }
    for (std::size_t c = 0; c < reps_sym.size(); ++c)
      if (same_blocks(*reps_sym[c], r.analysis.left) ||
          (symmetric && same_blocks(transport(sys, *reps_sym[c], rep.swap), r.analysis.left)))
        r.symmetric_class_id = static_cast<int>(c);
    if (r.symmetric_class_id < 0) {
      r.symmetric_class_id = static_cast<int>(reps_sym.size());
      reps_sym.push_back(&r.analysis.left);
    }
  }
  rep.class_count = static_cast<int>(reps_full.size());
  rep.symmetric_class_count = static_cast<int>(reps_sym.size());
  rep.regions = std::move(regions);
  return rep;
}

nlohmann::json ScanReport::to_json(const CoxeterSystem& sys, bool full_partitions) const {
  nlohmann::json j;
  j["system"] = system;
  auto& bp = j["breakpoints"] = nlohmann::json::array();
  for (const auto& b : breakpoints) bp.push_back(to_string(b));
  j["classes"] = class_count;
  j["classes_up_to_symmetry"] = symmetric_class_count;
  j["asymptotic_bound"] = bound;
  j["asymptotic_threshold"] = to_string(threshold);
  auto& regs = j["regions"] = nlohmann::json::array();
  for (const auto& r : regions) {
    nlohmann::json x;
    x["region"] = r.describe();
    x["exact"] = r.exact;
    x["lo"] = to_string(r.lo);
    x["hi"] = r.hi ? nlohmann::json(to_string(*r.hi)) : nlohmann::json("inf");
    x["mirrored"] = r.mirrored;
    x["weights"] = r.analysis.weights;
    x["certified_by"] = r.order;
    if (!r.exact && !r.mirrored) {
      x["validity"] = interval_json(r.validity);
      x["generic_partition_matches"] = r.generic_matches;
      x["specialization_ok"] = r.specialization_ok;
      x["star_prime_at_representative"] = r.star_prime;
      if (r.other_tiebreak) x["other_tiebreak_validity"] = interval_json(*r.other_tiebreak);
    }
    x["left_cells"] = r.analysis.left.size();
    x["two_sided_cells"] = r.analysis.two_sided.size();
    std::ostringstream h;
    h << std::hex << r.digest;
    x["partition_digest"] = h.str();
    x["class"] = r.class_id;
    x["class_up_to_symmetry"] = r.symmetric_class_id;
    if (!r.mirrored) {
      x["property_L"] = r.analysis.property_L;
      x["distinguished_ok"] = r.analysis.distinguished.check.ok;
    }
    if (full_partitions) x["partition"] = klc::to_json(sys, r.analysis.left);
    regs.push_back(std::move(x));
  }
  return j;
}

std::string ScanReport::summary() const {
  std::ostringstream os;
  os << system << ": " << class_count << " partition classes (" << symmetric_class_count
     << " up to the diagram symmetry)\n";
  for (int c = 0; c < class_count; ++c) {
    os << "  class " << c << ":";
    bool first = true;
    for (const auto& r : regions) {
      if (r.class_id != c) continue;
      os << (first ? " " : "; ") << r.describe() << " [" << r.analysis.weights[0] << "," << r.analysis.weights[1]
         << "]";
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

CheckReport check_boundary_refinement(const ScanReport& report) {
  CheckReport rep{"exact ratios coarser than their neighbours", true, 0, {}, {}};
  const auto& rs = report.regions;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (!rs[k].exact) continue;
    for (std::size_t n : {k - 1, k + 1}) {
      if (n >= rs.size() || rs[n].exact) continue;
      ++rep.checked;
      if (!check_refinement(rs[k].analysis.left, rs[n].analysis.left).ok)
        rep.fail(rs[k].describe() + " is not a union of cells of " + rs[n].describe());
    }
  }
  return rep;
}

}  // namespace klc
