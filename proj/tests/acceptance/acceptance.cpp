#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

#include "../dihedral.hpp"
#include "klcells/archive.hpp"

using namespace klc;
using namespace klc::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
  void require(const CheckReport& c, const std::string& where) {
    if (c.ok) return;
    std::string msg = where + ": " + c.name;
    if (!c.violations.empty()) msg += " (" + c.violations.front() + ")";
    require(false, msg);
  }
};

std::string data_dir() { return KLC_DATA_DIR; }

const CoxeterSystem& system_of(const std::string& type) {
  static std::map<std::string, CoxeterSystem> cache;
  auto it = cache.find(type);
  if (it == cache.end()) it = cache.emplace(type, CoxeterSystem::build(CoxeterSpec::parse(type))).first;
  return it->second;
}

std::string ratio_text(const std::vector<int>& w) { return std::to_string(w[0]) + "," + std::to_string(w[1]); }

// F4 weight functions of the four classes with a <= b, class 0 = {s1, s2} carrying a.
struct F4Case {
  std::string name;
  std::vector<int> weights;
  std::size_t two_sided;
};
const std::vector<F4Case> kF4Cases{
    {"equal", {1, 1}, 11}, {"b2a", {1, 2}, 15}, {"between", {2, 3}, 21}, {"beyond", {1, 3}, 21}};

struct F4Run {
  CellPartition left, two_sided;
  std::vector<CheckReport> checks;
  std::string key;
};

struct Shared {
  fs::path tmp;
  std::optional<ScanReport> f4_scan;
  std::map<std::string, F4Run> f4;
  std::map<std::string, ScanReport> small_scans;
  double scan_secs = 0;
  double prep_secs = 0;
  std::map<std::string, double> run_secs;

  const ScanReport& scan(const std::string& type) {
    auto it = small_scans.find(type);
    if (it == small_scans.end()) it = small_scans.emplace(type, scan_equivalence_classes(system_of(type))).first;
    return it->second;
  }
};

RunConfig f4_config(const F4Case& c, const fs::path& out) {
  RunConfig cfg;
  cfg.type = "F4";
  cfg.weights = c.weights;
  cfg.checks = {"P", "M", "bounds", "R", "L", "structure", "D", "chars", "reference"};
  cfg.out = out.string();
  cfg.data_dir = data_dir();
  return cfg;
}

const CheckReport* find_check(const std::vector<CheckReport>& checks, const std::string& prefix) {
  for (const auto& c : checks)
    if (c.name.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void prepare_f4(Shared& sh) {
  if (!sh.f4_scan) {
    const auto t0 = std::chrono::steady_clock::now();
    sh.f4_scan = scan_equivalence_classes(system_of("F4"));
    sh.scan_secs = seconds_since(t0);
    sh.prep_secs += sh.scan_secs;
  }
  for (const auto& c : kF4Cases) {
    if (sh.f4.count(c.name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    auto r = run_pipeline(f4_config(c, sh.tmp / "first"));
    sh.run_secs[c.name] = seconds_since(t0);
    sh.prep_secs += sh.run_secs[c.name];
    sh.f4[c.name] = F4Run{std::move(r.left), std::move(r.two_sided), std::move(r.checks), r.key};
  }
}

void structural_suite(Outcome& o, const CoxeterSystem& W, const ParamAssignment& params, const MonomialOrder& order,
                 const std::string& where, bool strict_bound) {
  const auto kl = compute_kl(W, params, order);
  o.require(check_p_normalization(W, kl), where);
  o.require(check_m_normalization(W, kl), where);
  const auto b = check_bounds(W, kl);
  o.require(b, where);
  if (strict_bound) o.require(b.detail.value("below_length_of_w0", false), where + ": exponents reach l(w0)");
  const BruhatOrder bo(W);
  const auto r = compute_r(W, params, bo);
  o.require(check_r_normalization(W, params, r), where);
  o.require(verify_bar_identity(W, kl.P, r), where);
}

Outcome dihedral_closed_forms(Shared&) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t compared = 0;
  for (int m : {4, 6, 8}) {
    const auto& W = system_of("I2:" + std::to_string(m));
    const BruhatOrder bo(W);
    const auto params = ParamAssignment::generic(W.spec());
    const auto kl = compute_kl(W, params, MonomialOrder::lex2(0));
    for (Elt w = 0; w < W.size(); ++w) {
      for (Elt y = 0; y <= w; ++y) {
        ++compared;
        if (!bo.leq(y, w)) {
          o.require(kl.P.get(y, w).is_zero(), "P nonzero off the Bruhat order");
          continue;
        }
        const auto p = kl.P.get(y, w).shifted(params.v_of(W, w) / params.v_of(W, y));
        o.require(p == dihedral_p(W, bo, y, w), "I2:" + std::to_string(m) + " P_{" + element_label(W, y) + "," +
                                                    element_label(W, w) + "}");
      }
      for (int s = 0; s < 2; ++s) {
        if (W.is_left_descent(w, s)) continue;
        for (Elt y = 0; y < W.size(); ++y) {
          if (!W.is_left_descent(y, s) || W.length(y) >= W.length(w)) continue;
          ++compared;
          o.require(kl.M.get(s, y, w) == dihedral_m(W, bo, s, y, w),
                    "I2:" + std::to_string(m) + " M^" + std::to_string(s + 1) + " at " + element_label(W, y) + "," +
                        element_label(W, w));
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  o.notes.push_back(std::to_string(compared) + " entries");
  return o;
}

Outcome oracle_equivalence(Shared&) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto run = [&](const std::string& type, const ParamAssignment& params, const std::vector<MonomialOrder>& orders) {
    const auto& W = system_of(type);
    std::set<std::string> distinct;
    for (const auto& order : orders) {
      distinct.insert(order.describe());
      o.require(compute_kl(W, params, order).P == oracle_kl(W, params, order), type + " under " + order.describe());
    }
    o.require(distinct.size() >= 3, type + ": fewer than three orders");
  };
  for (const char* type : {"I2:4", "I2:6", "B3"})
    run(type, ParamAssignment::generic(system_of(type).spec()),
        {MonomialOrder::lex2(0), MonomialOrder::lex2(1), MonomialOrder::weighted2(1, 1, false),
         MonomialOrder::weighted2(2, 1, true)});

  // A3 has a single class, so v_s = xy in Z^2 lets three orders act on the same parameters
  const auto& A3 = system_of("A3");
  ParamAssignment xy_params;
  xy_params.rank = 2;
  xy_params.v.assign(A3.rank(), xy(1, 1));
  run("A3", xy_params, {MonomialOrder::lex2(0), MonomialOrder::lex2(1), MonomialOrder::weighted2(1, 2, false)});
  for (int k : {1, 2, 3}) {
    const auto p = ParamAssignment::from_weights(A3.spec(), {k});
    o.require(compute_kl(A3, p, MonomialOrder::single()).P == oracle_kl(A3, p, MonomialOrder::single()),
              "A3 at weight " + std::to_string(k));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 30.0, "took " + std::to_string(secs) + " s");
  return o;
}

Outcome structural_suites(Shared& sh) {
  Outcome o;
  for (const char* type : {"I2:4", "I2:6", "I2:8", "B3", "B4"}) {
    const auto& W = system_of(type);
    for (int k : {0, 1})
      structural_suite(o, W, ParamAssignment::generic(W.spec()), MonomialOrder::lex2(k),
                  std::string(type) + " lex:" + std::to_string(k), true);
  }
  const auto& A3 = system_of("A3");
  structural_suite(o, A3, ParamAssignment::from_weights(A3.spec(), {1}), MonomialOrder::single(), "A3", false);
  std::vector<std::pair<std::string, std::vector<int>>> reps;
  for (const auto& w : std::vector<std::vector<int>>{{3, 1}, {2, 1}, {3, 2}, {1, 1}, {1, 2}}) reps.push_back({"B3", w});
  for (const auto& w : std::vector<std::vector<int>>{{1, 2}, {1, 1}, {2, 1}, {3, 1}, {3, 2}, {5, 2}, {4, 1}})
    reps.push_back({"B4", w});
  for (const auto& [type, w] : reps) {
    const auto& W = system_of(type);
    structural_suite(o, W, ParamAssignment::from_weights(W.spec(), w), MonomialOrder::single(),
                type + " at " + ratio_text(w), false);
  }
  prepare_f4(sh);
  for (const auto& c : kF4Cases) {
    const auto& run = sh.f4.at(c.name);
    for (const char* name : {"P normalization", "M normalization", "exponent bounds", "R normalization",
                             "bar identity"}) {
      const auto* rep = find_check(run.checks, name);
      o.require(rep != nullptr, "F4 " + c.name + ": no " + name + " check");
      if (rep) o.require(*rep, "F4 " + c.name);
    }
  }
  return o;
}

int ratio_group(const ScanRegion& r) {
  // 0: b = a, 1: a < b < 2a, 2: b = 2a, 3: b > 2a
  if (r.exact && r.lo == Ratio(1)) return 0;
  if (r.exact && r.lo == Ratio(2)) return 2;
  if (r.lo >= Ratio(2)) return 3;
  return 1;
}

Outcome f4_classification(Shared& sh) {
  Outcome o;
  prepare_f4(sh);
  const auto& scan = *sh.f4_scan;
  o.require(scan.symmetric_class_count == 4,
            std::to_string(scan.symmetric_class_count) + " classes up to symmetry");
  std::map<int, std::set<int>> groups_of_class;
  std::map<int, std::set<int>> classes_of_group;
  std::map<int, std::set<std::size_t>> blocks_of_group;
  for (const auto& r : scan.regions) {
    if (r.lo < Ratio(1)) continue;
    const int g = ratio_group(r);
    groups_of_class[r.class_id].insert(g);
    classes_of_group[g].insert(r.class_id);
    blocks_of_group[g].insert(r.analysis.two_sided.size());
  }
  o.require(classes_of_group.size() == 4, "missing ratio ranges above b = a");
  for (const auto& [cls, gs] : groups_of_class) o.require(gs.size() == 1, "a class spans two ranges");
  for (const auto& [g, cs] : classes_of_group) o.require(cs.size() == 1, "a range holds two classes");
  for (int g = 0; g < 4; ++g) {
    const auto& c = kF4Cases[g == 0 ? 0 : g == 1 ? 2 : g == 2 ? 1 : 3];
    o.require(blocks_of_group[g] == std::set<std::size_t>{c.two_sided},
              c.name + ": expected " + std::to_string(c.two_sided) + " two-sided cells");
    const auto& run = sh.f4.at(c.name);
    o.require(run.two_sided.size() == c.two_sided, c.name + ": direct run has " +
                                                       std::to_string(run.two_sided.size()) + " two-sided cells");
    const int k = scan.locate(Ratio(c.weights[1], c.weights[0]));
    o.require(k >= 0 && same_blocks(scan.regions[k].analysis.two_sided, run.two_sided),
              c.name + ": scan and direct run disagree");
    const auto* ref = find_check(run.checks, "cells against");
    o.require(ref != nullptr, c.name + ": no reference comparison");
    if (ref) o.require(*ref, c.name);
    o.require(sh.run_secs.at(c.name) <= 900, c.name + ": run over 15 min");
  }
  o.require(sh.scan_secs <= 3600, "scan over 60 min");
  char buf[96];
  std::snprintf(buf, sizeof buf, "scan %.0f s, per-weight runs with R-identity %.0f to %.0f s", sh.scan_secs,
                std::min_element(sh.run_secs.begin(), sh.run_secs.end(),
                                 [](auto& x, auto& y) { return x.second < y.second; })->second,
                std::max_element(sh.run_secs.begin(), sh.run_secs.end(),
                                 [](auto& x, auto& y) { return x.second < y.second; })->second);
  o.notes.push_back(buf);
  return o;
}

Outcome f4_characters(Shared& sh) {
  Outcome o;
  prepare_f4(sh);
  for (const auto& c : kF4Cases) {
    const auto& run = sh.f4.at(c.name);
    const auto* chars = find_check(run.checks, "left cell characters");
    const auto* ref = find_check(run.checks, "cells against");
    o.require(chars && ref, c.name + ": characters were not computed");
    if (chars) o.require(*chars, c.name);
    if (ref) o.require(*ref, c.name);
  }
  return o;
}

Outcome property_L(Shared& sh) {
  Outcome o;
  prepare_f4(sh);
  for (const auto& r : sh.f4_scan->regions) o.require(r.analysis.property_L, "F4 " + r.describe());
  for (const auto& [type, ws] : std::vector<std::pair<std::string, std::vector<std::vector<int>>>>{
           {"B3", {{3, 1}, {2, 1}, {3, 2}, {1, 1}, {1, 2}}},
           {"B4", {{1, 2}, {1, 1}, {2, 1}, {3, 1}, {3, 2}, {5, 2}, {4, 1}}}}) {
    for (const auto& w : ws) {
      const auto a = analyze_weights(system_of(type), w);
      o.require(a.property_L, type + " at " + ratio_text(w));
    }
  }
  return o;
}

Outcome distinguished(Shared& sh) {
  Outcome o;
  prepare_f4(sh);
  for (const auto& r : sh.f4_scan->regions) {
    const auto& d = r.analysis.distinguished;
    o.require(d.check, "F4 " + r.describe());
    o.require(d.cells.size() == r.analysis.left.size(), "F4 " + r.describe() + ": cells without d");
    for (const auto& c : d.cells)
      o.require(c.unique && c.involution && c.unit, "F4 " + r.describe() + ": bad minimizer");
  }
  for (int m : {4, 6, 8}) {
    const auto& W = system_of("I2:" + std::to_string(m));
    std::vector<int> w0, tw0;
    for (int k = 0; k < m; ++k) w0.push_back(k % 2);
    for (int k = 0; k < m - 1; ++k) tw0.push_back(k % 2);
    const std::set<Elt> want{0, W.from_word(std::vector<int>{0}), W.from_word(std::vector<int>{1}),
                             W.from_word(std::vector<int>{1, 0, 1}), W.from_word(tw0), W.from_word(w0)};
    const auto a = analyze_weights(W, {2, 1});
    std::set<Elt> got;
    for (const auto& c : a.distinguished.cells) got.insert(c.d);
    o.require(a.distinguished.check, "I2:" + std::to_string(m));
    o.require(got == want, "I2:" + std::to_string(m) + ": distinguished set differs");
  }
  return o;
}

Outcome b4_classes(Shared&) {
  Outcome o;
  const auto& W = system_of("B4");
  // class 0 is the generator t carrying b
  const std::vector<std::vector<int>> reps{{1, 2}, {1, 1}, {2, 1}, {3, 1}, {3, 2}, {5, 2}, {4, 1}};
  std::vector<CellPartition> parts;
  for (const auto& w : reps) parts.push_back(analyze_weights(W, w).left);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      o.require(!same_blocks(parts[i], parts[j]), ratio_text(reps[i]) + " and " + ratio_text(reps[j]) + " agree");
  auto predicted = [](int b, int a) -> std::size_t {
    const Ratio r(b, a);
    if (r < Ratio(1)) return 0;
    if (r == Ratio(1)) return 1;
    if (r < Ratio(2)) return 4;
    if (r == Ratio(2)) return 2;
    if (r < Ratio(3)) return 5;
    if (r == Ratio(3)) return 3;
    return 6;
  };
  std::map<std::vector<int>, std::size_t> seen;
  std::size_t checked = 0;
  for (int a = 1; a <= 8; ++a)
    for (int b = 1; b <= 8; ++b) {
      const auto n = normalize_weight({b, a});
      if (seen.count(n)) continue;
      seen[n] = 1;
      ++checked;
      const auto left = analyze_weights(W, n).left;
      o.require(same_blocks(left, parts[predicted(b, a)]), "(b,a) = (" + ratio_text(n) + ") misplaced");
    }
  o.notes.push_back(std::to_string(checked) + " weight functions");
  return o;
}

Outcome refinement(Shared& sh) {
  Outcome o;
  prepare_f4(sh);
  const auto& f4 = sh.f4;
  const auto eq_beyond = check_refinement(f4.at("equal").left, f4.at("beyond").left);
  o.require(eq_beyond.ok, "F4: b = a cells are not unions of b > 2a cells (" +
                              std::to_string(eq_beyond.violations.size()) + " offending b > 2a cells, first: " +
                              (eq_beyond.violations.empty() ? std::string() : eq_beyond.violations.front()) + ")");
  if (!eq_beyond.ok && check_refinement(f4.at("equal").left, f4.at("between").left).ok)
    o.notes.push_back("b = a cells are unions of a < b < 2a cells instead");
  o.require(check_refinement(f4.at("b2a").left, f4.at("beyond").left), "F4 b = 2a over b > 2a");
  o.require(check_refinement(f4.at("b2a").left, f4.at("between").left), "F4 b = 2a over a < b < 2a");
  o.require(!same_blocks(f4.at("b2a").left, f4.at("beyond").left), "F4 b = 2a not coarser than b > 2a");
  o.require(check_boundary_refinement(*sh.f4_scan), "F4 scan");
  for (const char* type : {"I2:4", "I2:6", "I2:8", "B3"}) o.require(check_boundary_refinement(sh.scan(type)), type);
  return o;
}

std::map<std::string, std::string> read_entry(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

Outcome determinism(Shared& sh) {
  Outcome o;
  prepare_f4(sh);
  const auto& c = kF4Cases[1];
  const auto second = run_pipeline(f4_config(c, sh.tmp / "second"));
  o.require(!second.cache_hit, "second run hit a cache");
  const auto a = read_entry(sh.tmp / "first" / sh.f4.at(c.name).key);
  const auto b = read_entry(sh.tmp / "second" / second.key);
  o.require(a.size() == b.size() && !a.empty(), "F4: file lists differ");
  for (const auto& [name, content] : a) {
    const auto it = b.find(name);
    o.require(it != b.end() && it->second == content, "F4: " + name + " differs");
  }

  RunConfig cfg;
  cfg.type = "B3";
  cfg.order = "lex:1";
  cfg.checks = {"all"};
  cfg.data_dir = data_dir();
  std::map<std::string, std::string> runs[2];
  for (int k = 0; k < 2; ++k) {
    cfg.out = (sh.tmp / ("b3-" + std::to_string(k))).string();
    const auto r = run_pipeline(cfg);
    runs[k] = read_entry(fs::path(cfg.out) / r.key);
  }
  o.require(runs[0] == runs[1] && !runs[0].empty(), "B3 entries differ");

  const auto& W = system_of("B3");
  const auto s1 = scan_equivalence_classes(W).to_json(W, true).dump();
  const auto s2 = scan_equivalence_classes(W).to_json(W, true).dump();
  o.require(s1 == s2, "B3 scan output differs");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));

  Shared sh;
  sh.tmp = fs::temp_directory_path() / ("klcells-acceptance-" + std::to_string(getpid()));
  fs::remove_all(sh.tmp);
  fs::create_directories(sh.tmp);

  const std::vector<std::pair<std::string, std::function<Outcome(Shared&)>>> criteria{
      {"dihedral closed forms", dihedral_closed_forms},
      {"oracle equivalence", oracle_equivalence},
      {"normalization, bounds and R-identity suites", structural_suites},
      {"F4 classification and cell order", f4_classification},
      {"F4 left cell characters", f4_characters},
      {"property L", property_L},
      {"distinguished involutions", distinguished},
      {"B4 classes", b4_classes},
      {"refinement", refinement},
      {"determinism", determinism},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!only.empty() && !only.count(static_cast<int>(k + 1))) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const double prep0 = sh.prep_secs;
    Outcome o;
    try {
      o = criteria[k].second(sh);
    } catch (const std::exception& e) {
      o.ok = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0) - (sh.prep_secs - prep0);
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << (k + 1) << " " << criteria[k].first << " (" << timing << ")";
    for (std::size_t i = 0; i < o.notes.size() && i < 5; ++i) std::cout << (i ? "; " : ": ") << o.notes[i];
    std::cout << std::endl;
    if (!o.ok) ++failed;
  }
  fs::remove_all(sh.tmp);
  return failed == 0 ? 0 : 1;
}
