#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "klcells/archive.hpp"

using namespace klc;
namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config_file;
  std::string type, weight, order, out, data;
  std::vector<std::string> checks;
  int threads = -1;
  bool serial = false, no_resume = false, cross_check = false, quiet = false;
  unsigned seed = 0;
};

std::vector<int> parse_weights(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("bad weight '" + item + "'");
    }
  }
  return out;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_file, "JSON file with the same keys as the flags");
  app->add_option("-t,--type", f.type, "Coxeter type: A3, B4, F4, I2:6, H3, a matrix, ...");
  app->add_option("-w,--weight", f.weight, "weights per generator or per generator class, e.g. 1,1,2,2");
  app->add_option("--order", f.order, "lex:K, weighted:C,D:i|j, single, or functionals 1,0;0,1");
  app->add_option("-o,--out", f.out, "archive directory");
  app->add_option("--data", f.data, "directory with chartables/ and constructible/");
  app->add_option("--check", f.checks, "checks to run: default, all, none, P, M, bounds, R, L, structure, D, "
                                       "descent, chars, reference")
      ->delimiter(',');
  app->add_option("--threads", f.threads, "OpenMP threads (0: runtime default)");
  app->add_flag("--serial", f.serial, "disable the parallel kernels");
  app->add_flag("--no-resume", f.no_resume, "ignore a stored checkpoint");
  app->add_flag("--cross-check", f.cross_check, "compare against the multi-variable tables");
  app->add_option("--seed", f.seed, "seed for sampled checks");
  app->add_flag("-q,--quiet", f.quiet, "no progress output");
}

RunConfig make_config(const CLI::App* app, const Flags& f) {
  RunConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw ConfigError("cannot open " + f.config_file);
    try {
      c = RunConfig::from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(f.config_file + ": " + e.what());
    }
  }
  auto given = [&](const char* name) { return app->count(name) > 0; };
  if (given("--type")) c.type = f.type;
  if (given("--weight")) {
    c.weights = parse_weights(f.weight);
    c.order.clear();
  }
  if (given("--order")) {
    c.order = f.order;
    c.weights.clear();
  }
  if (given("--out")) c.out = f.out;
  if (given("--data")) c.data_dir = f.data;
  if (given("--check")) c.checks = f.checks;
  if (given("--threads")) c.threads = f.threads;
  if (f.serial) c.parallel = false;
  if (f.no_resume) c.resume = false;
  if (f.cross_check) c.cross_check = true;
  if (given("--seed")) c.seed = f.seed;
  c.validate();
  return c;
}

Logger logger(const Flags& f) {
  if (f.quiet) return {};
  return [](const std::string& s) { std::cerr << s << "\n"; };
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << content;
}

int cmd_compute(const RunConfig& c, const Flags& f) {
  const auto r = run_pipeline(c, logger(f));
  std::cout << "entry " << r.key << (r.cache_hit ? " (from archive)" : "") << "\n";
  std::cout << "left cells " << r.left.size() << ", right cells " << r.right.size() << ", two-sided cells "
            << r.two_sided.size() << "\n";
  std::cout << checks_report(r.checks);
  return r.ok() ? 0 : 1;
}

int cmd_check(const RunConfig& c, const Flags& f, const std::vector<std::string>& refine) {
  auto r = run_pipeline(c, logger(f));
  std::vector<CheckReport> all = r.checks;
  for (const auto& pair : refine) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos) throw ConfigError("--refine takes COARSE:FINE weight lists");
    RunConfig a = c, b = c;
    a.weights = parse_weights(pair.substr(0, colon));
    b.weights = parse_weights(pair.substr(colon + 1));
    a.order.clear();
    b.order.clear();
    a.checks = b.checks = {"none"};
    const auto ra = run_pipeline(a, logger(f));
    const auto rb = run_pipeline(b, logger(f));
    auto rep = check_refinement(ra.left, rb.left);
    rep.name = "cells at " + pair.substr(0, colon) + " are unions of cells at " + pair.substr(colon + 1);
    all.push_back(std::move(rep));
  }
  std::cout << character_report(r);
  std::cout << checks_report(all);
  bool ok = true;
  for (const auto& x : all) ok = ok && x.ok;
  return ok ? 0 : 1;
}

int cmd_scan(const RunConfig& c, const Flags& f, bool full) {
  const auto sys = CoxeterSystem::build(CoxeterSpec::parse(c.type));
  ScanOptions opt;
  opt.parallel = c.parallel;
  opt.cross_check_tiebreak = c.cross_check;
  opt.log = logger(f);
  const auto rep = scan_equivalence_classes(sys, opt);
  std::string name = sys.spec().name;
  std::replace(name.begin(), name.end(), ':', '_');
  const fs::path dir = fs::path(c.out) / ("scan-" + name);
  fs::create_directories(dir);
  write_file(dir / "scan.json", rep.to_json(sys, full).dump(1) + "\n");
  write_file(dir / "scan.txt", rep.summary());
  for (std::size_t k = 0; k < rep.regions.size(); ++k) {
    std::ostringstream fn;
    fn << "region" << (k < 10 ? "0" : "") << k << ".dot";
    write_file(dir / fn.str(), to_dot(rep.regions[k].analysis.two_sided));
  }
  std::cout << rep.summary();
  bool ok = true;
  for (const auto& r : rep.regions) {
    const bool region_ok = r.interval_ok && r.specialization_ok && r.analysis.property_L &&
                           r.analysis.structure_ok && r.analysis.distinguished.check.ok;
    if (!region_ok) std::cout << "FAIL " << r.describe() << "\n";
    ok = ok && region_ok;
  }
  const auto refinement = check_boundary_refinement(rep);
  std::cout << checks_report({refinement});
  std::cout << "written to " << dir.string() << "\n";
  return ok && refinement.ok ? 0 : 1;
}

int cmd_export(const RunConfig& c, const std::string& dest, const std::vector<std::string>& formats) {
  const auto spec = CoxeterSpec::parse(c.type);
  const auto params = c.weight_mode() ? ParamAssignment::from_weights(spec, c.weights) : ParamAssignment::generic(spec);
  const auto order = c.weight_mode() ? MonomialOrder::single() : parse_order(c.order, params.rank);
  const auto key = archive_key(spec, params, order);
  const TableArchive archive(c.out);
  if (!archive.has(key, "manifest.json")) {
    std::cerr << "no archive entry " << key << " under " << c.out << "; run compute first\n";
    return 2;
  }
  fs::create_directories(dest);
  std::vector<std::string> files;
  for (const auto& fmt : formats) {
    if (fmt == "dot") {
      files.insert(files.end(), {"left.dot", "two_sided.dot"});
    } else if (fmt == "json") {
      files.insert(files.end(), {"kl.json", "cells.json", "manifest.json"});
      if (archive.has(key, "characters.json")) files.push_back("characters.json");
    } else if (fmt == "tsv") {
      files.insert(files.end(), {"p.tsv", "m.tsv"});
    } else {
      throw ConfigError("unknown export format '" + fmt + "'");
    }
  }
  for (const auto& name : files) {
    write_file(fs::path(dest) / name, archive.read(key, name));
    std::cout << (fs::path(dest) / name).string() << "\n";
  }
  return 0;
}

int cmd_dump(RunConfig c, const Flags& f, const std::string& table) {
  if (table != "P" && table != "M") throw ConfigError("--table is P or M");
  c.checks = {"none"};
  const auto r = run_pipeline(c, logger(f));
  const TableArchive archive(c.out);
  std::cout << archive.read(r.key, table == "P" ? "p.tsv" : "m.tsv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kazhdan-Lusztig cells of finite Coxeter groups with unequal parameters"};
  app.require_subcommand(1);
  Flags f;

  auto* compute = app.add_subcommand("compute", "compute tables, cells and characters into the archive");
  add_common(compute, f);

  auto* check = app.add_subcommand("check", "run the checks and print a pass/fail list");
  add_common(check, f);
  std::vector<std::string> refine;
  check->add_option("--refine", refine, "COARSE:FINE weight lists, e.g. 1,1:1,3");

  auto* scan = app.add_subcommand("scan", "classify the weight functions of a two-class system");
  add_common(scan, f);
  bool full = false;
  scan->add_flag("--full", full, "include every partition in scan.json");

  auto* exp = app.add_subcommand("export", "copy DOT/JSON/TSV files of an archive entry");
  add_common(exp, f);
  std::string dest = "export";
  std::vector<std::string> formats{"dot", "json", "tsv"};
  exp->add_option("--dest", dest, "destination directory");
  exp->add_option("--format", formats, "dot, json, tsv")->delimiter(',');

  auto* dmp = app.add_subcommand("dump", "print the P or M table as TSV");
  add_common(dmp, f);
  std::string table = "P";
  dmp->add_option("--table", table, "P or M");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compute) return cmd_compute(make_config(compute, f), f);
    if (*check) return cmd_check(make_config(check, f), f, refine);
    if (*scan) {
      RunConfig c;
      if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw ConfigError("cannot open " + f.config_file);
        c = RunConfig::from_json(nlohmann::json::parse(in));
      }
      if (scan->count("--type")) c.type = f.type;
      if (scan->count("--out")) c.out = f.out;
      if (f.serial) c.parallel = false;
      if (f.cross_check) c.cross_check = true;
      if (c.type.empty()) throw ConfigError("scan needs --type");
      return cmd_scan(c, f, full);
    }
    if (*exp) return cmd_export(make_config(exp, f), dest, formats);
    if (*dmp) return cmd_dump(make_config(dmp, f), f, table);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
