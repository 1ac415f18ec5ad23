#include "klcells/archive.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "klcells/hash.hpp"

namespace klc {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kDefaultChecks{"P", "M", "bounds", "L", "structure", "D", "chars", "reference"};
const std::vector<std::string> kAllChecks{"P", "M", "bounds", "R", "L", "structure", "D", "descent", "chars",
                                          "reference"};

std::vector<std::string> expand_checks(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (n == "default") {
      out.insert(out.end(), kDefaultChecks.begin(), kDefaultChecks.end());
    } else if (n == "all") {
      out.insert(out.end(), kAllChecks.begin(), kAllChecks.end());
    } else if (n == "none") {
      out.clear();
    } else if (std::find(kAllChecks.begin(), kAllChecks.end(), n) != kAllChecks.end()) {
      out.push_back(n);
    } else {
      throw ConfigError("unknown check '" + n + "'");
    }
  }
  std::vector<std::string> ordered;
  for (const auto& n : kAllChecks)
    if (std::find(out.begin(), out.end(), n) != out.end()) ordered.push_back(n);
  return ordered;
}

std::vector<std::int64_t> split_ints(std::string_view text, char sep) {
  std::vector<std::int64_t> out;
  std::string cur;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      if (cur.empty()) throw ConfigError("empty number in '" + std::string(text) + "'");
      std::size_t used = 0;
      const auto v = std::stoll(cur, &used);
      if (used != cur.size()) throw ConfigError("bad number '" + cur + "'");
      out.push_back(v);
      cur.clear();
    } else if (text[i] != ' ') {
      cur += text[i];
    }
  }
  return out;
}

std::string table_name(const CoxeterSpec& spec) {
  std::string s = spec.name;
  std::replace(s.begin(), s.end(), ':', '_');
  return s;
}

nlohmann::json monomials_json(const std::vector<Monomial>& ms, int rank) {
  auto a = nlohmann::json::array();
  for (const auto& m : ms) {
    auto e = nlohmann::json::array();
    for (int k = 0; k < rank; ++k) e.push_back(m.e[k]);
    a.push_back(std::move(e));
  }
  return a;
}

nlohmann::json order_json(const MonomialOrder& order) {
  auto a = nlohmann::json::array();
  for (const auto& f : order.functionals()) {
    auto row = nlohmann::json::array();
    for (int k = 0; k < order.rank(); ++k) row.push_back(f[k]);
    a.push_back(std::move(row));
  }
  return a;
}

std::string dump(const nlohmann::json& j) { return j.dump(1) + "\n"; }

}  // namespace

void RunConfig::validate() const {
  if (type.empty()) throw ConfigError("no Coxeter type given");
  if (weight_mode() == !order.empty())
    throw ConfigError("give exactly one of a weight function and a monomial order");
  for (int w : weights)
    if (w <= 0) throw ConfigError("weights must be positive");
  if (threads < 0) throw ConfigError("thread count must be non-negative");
  expand_checks(checks);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["type"] = type;
  if (weight_mode()) j["weights"] = weights;
  if (!order.empty()) j["order"] = order;
  j["checks"] = checks;
  j["parallel"] = parallel;
  j["threads"] = threads;
  j["out"] = out;
  if (!data_dir.empty()) j["data_dir"] = data_dir;
  j["seed"] = seed;
  j["resume"] = resume;
  j["cross_check"] = cross_check;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known{"type", "weights", "order", "checks", "parallel", "threads",
                                              "out", "data_dir", "seed", "resume", "cross_check"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key '" + k + "'");
  RunConfig c;
  try {
    c.type = j.value("type", "");
    if (j.contains("weights")) c.weights = j.at("weights").get<std::vector<int>>();
    c.order = j.value("order", "");
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    c.parallel = j.value("parallel", true);
    c.threads = j.value("threads", 0);
    c.out = j.value("out", c.out);
    c.data_dir = j.value("data_dir", "");
    c.seed = j.value("seed", 1u);
    c.resume = j.value("resume", true);
    c.cross_check = j.value("cross_check", false);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  return c;
}

MonomialOrder parse_order(std::string_view text, int rank) {
  try {
    if (text == "single") return MonomialOrder::single();
    if (text.starts_with("lex:")) {
      if (rank != 2) throw ConfigError("lex:K needs two generator classes");
      return MonomialOrder::lex2(static_cast<int>(split_ints(text.substr(4), ',').at(0)));
    }
    if (text.starts_with("weighted:")) {
      if (rank != 2) throw ConfigError("weighted orders need two generator classes");
      const auto rest = text.substr(9);
      const auto colon = rest.find(':');
      if (colon == std::string_view::npos) throw ConfigError("weighted:C,D:i or weighted:C,D:j");
      const auto cd = split_ints(rest.substr(0, colon), ',');
      const auto tie = rest.substr(colon + 1);
      if (cd.size() != 2 || (tie != "i" && tie != "j")) throw ConfigError("weighted:C,D:i or weighted:C,D:j");
      return MonomialOrder::weighted2(cd[0], cd[1], tie == "j");
    }
    std::vector<MonomialOrder::Functional> fs;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i != text.size() && text[i] != ';') continue;
      const auto v = split_ints(text.substr(start, i - start), ',');
      if (static_cast<int>(v.size()) != rank)
        throw ConfigError("functional needs " + std::to_string(rank) + " entries");
      MonomialOrder::Functional f{};
      std::copy(v.begin(), v.end(), f.begin());
      fs.push_back(f);
      start = i + 1;
    }
    return MonomialOrder(rank, fs);
  } catch (const std::invalid_argument&) {
    throw ConfigError("cannot parse order '" + std::string(text) + "'");
  } catch (const AlgebraError& e) {
    throw ConfigError(e.what());
  }
}

std::string archive_key(const CoxeterSpec& spec, const ParamAssignment& params, const MonomialOrder& order) {
  Fnv1a h;
  h.add(std::string_view("klcells/1"));
  h.add(static_cast<std::uint64_t>(spec.rank()));
  for (const auto& row : spec.m)
    for (int x : row) h.add(static_cast<std::uint64_t>(x));
  h.add(static_cast<std::uint64_t>(params.rank));
  for (const auto& v : params.v)
    for (int k = 0; k < params.rank; ++k) h.add(static_cast<std::uint64_t>(static_cast<std::int64_t>(v.e[k])));
  h.add(static_cast<std::uint64_t>(order.rank()));
  for (const auto& f : order.functionals())
    for (int k = 0; k < order.rank(); ++k) h.add(static_cast<std::uint64_t>(f[k]));
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h.value();
  return os.str();
}

nlohmann::json kl_to_json(const CoxeterSystem& sys, const KLResult& kl) {
  const int r = kl.params.rank;
  nlohmann::json j;
  j["system"] = sys.spec().name;
  j["rank"] = r;
  j["params"] = monomials_json(kl.params.v, r);
  j["order"] = order_json(kl.order);
  auto& P = j["P"] = nlohmann::json::array();
  for (Elt w = 0; w < kl.P.rows.size(); ++w)
    for (const auto& e : kl.P.rows[w])
      P.push_back({element_label(sys, e.y), element_label(sys, w), to_json(e.p, r)});
  auto& M = j["M"] = nlohmann::json::array();
  for (Elt w = 0; w < kl.M.by_w.size(); ++w)
    for (const auto& e : kl.M.by_w[w])
      M.push_back({e.s + 1, element_label(sys, e.y), element_label(sys, w), to_json(e.m, r)});
  return j;
}

KLResult kl_from_json(const CoxeterSystem& sys, const nlohmann::json& j) {
  if (j.at("system").get<std::string>() != sys.spec().name) throw KLError("stored tables belong to another system");
  const int r = j.at("rank").get<int>();
  ParamAssignment params;
  params.rank = r;
  for (const auto& e : j.at("params")) {
    Monomial m;
    for (int k = 0; k < r; ++k) m.e[k] = e.at(k).get<int>();
    params.v.push_back(m);
  }
  std::vector<MonomialOrder::Functional> fs;
  for (const auto& row : j.at("order")) {
    MonomialOrder::Functional f{};
    for (int k = 0; k < r; ++k) f[k] = row.at(k).get<std::int64_t>();
    fs.push_back(f);
  }
  KLResult kl{params, MonomialOrder(r, fs), {}, {}};
  kl.P.rows.assign(sys.size(), {});
  kl.M.by_w.assign(sys.size(), {});
  auto elt = [&](const nlohmann::json& s) { return sys.from_word(word_from_string(s.get<std::string>())); };
  for (const auto& e : j.at("P")) kl.P.rows[elt(e.at(1))].push_back({elt(e.at(0)), poly_from_json(e.at(2), r)});
  for (const auto& e : j.at("M"))
    kl.M.by_w[elt(e.at(2))].push_back({e.at(0).get<int>() - 1, elt(e.at(1)), poly_from_json(e.at(3), r)});
  return kl;
}

std::string p_table_tsv(const CoxeterSystem& sys, const KLResult& kl) {
  std::string out;
  for (Elt w = 0; w < kl.P.rows.size(); ++w)
    for (const auto& e : kl.P.rows[w])
      out += element_label(sys, e.y) + "\t" + element_label(sys, w) + "\t" + to_string(e.p, kl.params.rank, &kl.order) +
             "\n";
  return out;
}

std::string m_table_tsv(const CoxeterSystem& sys, const KLResult& kl) {
  std::string out;
  for (Elt w = 0; w < kl.M.by_w.size(); ++w)
    for (const auto& e : kl.M.by_w[w])
      out += std::to_string(e.s + 1) + "\t" + element_label(sys, e.y) + "\t" + element_label(sys, w) + "\t" +
             to_string(e.m, kl.params.rank, &kl.order) + "\n";
  return out;
}

TableArchive::TableArchive(fs::path root) : root_(std::move(root)) {}

fs::path TableArchive::dir(const std::string& key) const { return root_ / key; }

bool TableArchive::has(const std::string& key, const std::string& name) const { return fs::exists(dir(key) / name); }

void TableArchive::write(const std::string& key, const std::string& name, const std::string& content) const {
  fs::create_directories(dir(key));
  const auto target = dir(key) / name;
  const auto tmp = dir(key) / (name + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string TableArchive::read(const std::string& key, const std::string& name) const {
  std::ifstream in(dir(key) / name, std::ios::binary);
  if (!in) throw ConfigError("archive entry " + key + " has no " + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void TableArchive::remove(const std::string& key, const std::string& name) const {
  std::error_code ec;
  fs::remove(dir(key) / name, ec);
}

std::optional<KLResult> TableArchive::load_tables(const CoxeterSystem& sys, const std::string& key) const {
  if (!has(key, "kl.json")) return std::nullopt;
  return kl_from_json(sys, nlohmann::json::parse(read(key, "kl.json")));
}

void TableArchive::store_tables(const CoxeterSystem& sys, const std::string& key, const KLResult& kl) const {
  write(key, "kl.json", kl_to_json(sys, kl).dump() + "\n");
}

std::optional<std::pair<int, KLResult>> TableArchive::load_checkpoint(const CoxeterSystem& sys,
                                                                      const std::string& key) const {
  if (!has(key, "checkpoint.json")) return std::nullopt;
  const auto j = nlohmann::json::parse(read(key, "checkpoint.json"));
  return std::make_pair(j.at("level").get<int>(), kl_from_json(sys, j.at("tables")));
}

void TableArchive::store_checkpoint(const CoxeterSystem& sys, const std::string& key, int level,
                                    const KLResult& kl) const {
  nlohmann::json j;
  j["level"] = level;
  j["tables"] = kl_to_json(sys, kl);
  write(key, "checkpoint.json", j.dump());
}

bool PipelineResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.ok; });
}

std::string default_data_dir() { return KLC_DATA_DIR; }

std::optional<std::string> reference_for(const CoxeterSystem& sys, const std::vector<int>& class_weights,
                                         const std::string& data_dir) {
  if (sys.spec().name != "F4" || class_weights.size() != 2) return std::nullopt;
  const Ratio r(class_weights[1], class_weights[0]);
  std::string name;
  if (r < Ratio(1)) return std::nullopt;
  if (r == Ratio(1)) {
    name = "equal";
  } else if (r == Ratio(2)) {
    name = "b2a";
  } else if (r < Ratio(2)) {
    name = "between";
  } else {
    name = "beyond";
  }
  const auto path = fs::path(data_dir) / "constructible" / ("f4_" + name + ".json");
  if (!fs::exists(path)) return std::nullopt;
  return path.string();
}

nlohmann::json check_to_json(const CheckReport& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["ok"] = c.ok;
  j["checked"] = c.checked;
  j["violations"] = c.violations;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

std::string checks_report(const std::vector<CheckReport>& checks) {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.ok ? "pass " : "FAIL ") << c.name << " (" << c.checked << " checked)\n";
    for (const auto& v : c.violations) os << "    " << v << "\n";
  }
  return os.str();
}

std::string character_report(const PipelineResult& r) {
  if (!r.characters || !r.table) return "";
  const auto& table = *r.table;
  std::ostringstream os;
  std::vector<std::uint32_t> order(r.two_sided.size());
  for (std::uint32_t t = 0; t < order.size(); ++t) order[t] = t;
  for (std::uint32_t t : order) {
    std::map<Decomposition, int> seen;
    for (std::size_t b = 0; b < r.left.size(); ++b)
      if (r.two_sided.block_of[r.left.blocks[b].front()] == t) ++seen[r.characters->decompositions[b]];
    os << "two-sided cell " << t;
    if (t < r.names.size() && !r.names[t].empty()) os << " [" << r.names[t] << "]";
    os << ", " << r.two_sided.blocks[t].size() << " elements\n";
    for (const auto& [d, count] : seen)
      os << "    " << decomposition_to_string(d, table) << (count > 1 ? "   x" + std::to_string(count) : "") << "\n";
  }
  return os.str();
}

PipelineResult run_pipeline(const RunConfig& config, const Logger& log_fn) {
  config.validate();
  auto log = [&](const std::string& s) {
    if (log_fn) log_fn(s);
  };
  const auto spec = CoxeterSpec::parse(config.type);
  const auto sys = CoxeterSystem::build(spec);
  const auto gc = generator_classes(spec);
  const auto checks = expand_checks(config.checks);
  auto enabled = [&](const char* n) { return std::find(checks.begin(), checks.end(), n) != checks.end(); };
  const std::string data_dir = config.data_dir.empty() ? default_data_dir() : config.data_dir;

  ParamAssignment params;
  MonomialOrder order = MonomialOrder::single();
  std::vector<int> cw;
  if (config.weight_mode()) {
    params = ParamAssignment::from_weights(spec, config.weights);
    cw = class_weights_of(spec, config.weights);
  } else {
    params = ParamAssignment::generic(spec);
    order = parse_order(config.order, params.rank);
  }
  params.validate(spec, order);

  PipelineResult res;
  res.key = archive_key(spec, params, order);
  const TableArchive archive(config.out);
  log("system " + spec.name + ", " + std::to_string(sys.size()) + " elements, entry " + res.key);

  if (auto stored = archive.load_tables(sys, res.key)) {
    res.kl = std::move(*stored);
    res.cache_hit = true;
    log("tables loaded from the archive");
  } else {
    KLOptions opt;
    opt.parallel = config.parallel;
    opt.threads = config.threads;
    std::optional<std::pair<int, KLResult>> cp;
    if (config.resume) cp = archive.load_checkpoint(sys, res.key);
    if (cp) {
      opt.resume_level = cp->first;
      opt.resume = &cp->second;
      res.resumed_from = cp->first;
      log("resuming after length " + std::to_string(cp->first));
    }
    auto last = std::chrono::steady_clock::now();
    opt.progress = [&](int level, int max) {
      log("length " + std::to_string(level) + "/" + std::to_string(max));
    };
    opt.checkpoint = [&](int level, const KLResult& partial) {
      const auto now = std::chrono::steady_clock::now();
      if (level < sys.max_length() && now - last > std::chrono::seconds(10)) {
        archive.store_checkpoint(sys, res.key, level, partial);
        last = now;
      }
    };
    res.kl = compute_kl(sys, params, order, opt);
    archive.store_tables(sys, res.key, res.kl);
    archive.remove(res.key, "checkpoint.json");
  }

  res.edges = left_edges(sys, res.kl.M);
  res.left = left_cells(res.edges);
  res.right = right_cells(sys, res.left);
  res.two_sided = two_sided_cells(sys, res.edges);
  log(std::to_string(res.left.size()) + " left cells, " + std::to_string(res.two_sided.size()) + " two-sided cells");

  if (enabled("P")) res.checks.push_back(check_p_normalization(sys, res.kl));
  if (enabled("M")) res.checks.push_back(check_m_normalization(sys, res.kl));
  if (enabled("bounds")) res.checks.push_back(check_bounds(sys, res.kl));
  if (enabled("R")) {
    log("R-polynomials");
    const BruhatOrder bo(sys);
    const auto r = compute_r(sys, params, bo);
    res.checks.push_back(check_r_normalization(sys, params, r));
    res.checks.push_back(verify_bar_identity(sys, res.kl.P, r));
  }
  if (enabled("L")) res.checks.push_back(check_property_L(res.left, res.two_sided));
  if (enabled("structure")) res.checks.push_back(check_cell_structure(res.left, res.right, res.two_sided));
  if (enabled("D") && config.weight_mode()) {
    auto d = distinguished_involutions(sys, res.kl, res.left, cw);
    res.checks.push_back(d.check);
  }
  if (enabled("descent")) res.checks.push_back(check_descent_independence(sys, res.kl, 200, config.seed));

  const auto table_path = fs::path(data_dir) / "chartables" / (table_name(spec) + ".json");
  if (enabled("chars") && fs::exists(table_path)) {
    res.table = load_character_table(sys, table_path.string());
    CheckReport c{"left cell characters", true, 0, {}, {}};
    try {
      res.characters = cell_characters(sys, res.kl, *res.table, res.left, config.parallel);
      c.checked = res.left.size();
      if (!is_regular_character(conjugacy_classes(sys), res.characters->chars, sys.size()))
        c.fail("left cell characters do not sum to the regular character");
    } catch (const RepError& e) {
      c.fail(e.what());
    }
    res.checks.push_back(std::move(c));
    if (enabled("reference") && res.characters && config.weight_mode()) {
      if (const auto ref_path = reference_for(sys, normalize_weight(cw), data_dir)) {
        res.reference = load_cell_reference(*ref_path, *res.table);
        auto cmp = compare_with_reference(res.left, res.two_sided, *res.characters, *res.table, *res.reference);
        res.names = cmp.detail["names"].get<std::vector<std::string>>();
        res.checks.push_back(std::move(cmp));
      }
    }
  }
  if (config.cross_check && config.weight_mode() && gc.count() > 1) {
    const auto generic = compute_kl(sys, ParamAssignment::generic(spec), MonomialOrder::lex2(1));
    CheckReport c{"weight mode against the multi-variable tables", true, 0, {}, {}};
    const auto g = gamma_plus_W(generic);
    if (gc.count() == 2 && check_star(cw, g, 2).ok) {
      c = check_specialization(generic, res.kl, cw);
    } else {
      c.detail["skipped"] = "the lex order does not certify these weights";
    }
    res.checks.push_back(std::move(c));
  }

  nlohmann::json manifest;
  manifest["key"] = res.key;
  manifest["system"] = spec.name;
  manifest["size"] = sys.size();
  manifest["mode"] = config.weight_mode() ? "weight" : "order";
  if (config.weight_mode()) manifest["class_weights"] = cw;
  manifest["params"] = monomials_json(params.v, params.rank);
  manifest["order"] = order_json(order);
  manifest["order_text"] = order.describe();
  manifest["p_entries"] = res.kl.P.entry_count();
  manifest["m_entries"] = res.kl.M.entry_count();
  manifest["left_cells"] = res.left.size();
  manifest["two_sided_cells"] = res.two_sided.size();
  manifest["checks"] = nlohmann::json::array();
  for (const auto& c : res.checks) manifest["checks"].push_back(check_to_json(c));
  manifest["ok"] = res.ok();

  nlohmann::json cells;
  cells["left"] = to_json(sys, res.left);
  cells["right"] = to_json(sys, res.right);
  cells["two_sided"] = to_json(sys, res.two_sided);
  if (!res.names.empty()) cells["two_sided_names"] = res.names;

  std::vector<std::string> left_labels;
  if (res.characters)
    for (const auto& d : res.characters->decompositions) left_labels.push_back(decomposition_to_string(d, *res.table));
  std::vector<std::string> two_labels = res.names;

  archive.write(res.key, "p.tsv", p_table_tsv(sys, res.kl));
  archive.write(res.key, "m.tsv", m_table_tsv(sys, res.kl));
  archive.write(res.key, "cells.json", dump(cells));
  archive.write(res.key, "left.dot", to_dot(res.left, left_labels));
  archive.write(res.key, "two_sided.dot", to_dot(res.two_sided, two_labels));
  if (res.characters) {
    nlohmann::json ch = nlohmann::json::array();
    for (std::size_t b = 0; b < res.left.size(); ++b) {
      nlohmann::json x;
      x["cell"] = b;
      x["two_sided"] = res.two_sided.block_of[res.left.blocks[b].front()];
      x["size"] = res.left.blocks[b].size();
      x["decomposition"] = left_labels[b];
      x["values"] = res.characters->chars[b];
      ch.push_back(std::move(x));
    }
    archive.write(res.key, "characters.json", dump(ch));
    archive.write(res.key, "report.txt", character_report(res));
  }
  archive.write(res.key, "checks.txt", checks_report(res.checks));
  archive.write(res.key, "manifest.json", dump(manifest));
  return res;
}

}  // namespace klc
