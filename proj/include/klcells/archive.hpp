#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "klcells/cells.hpp"
#include "klcells/kl.hpp"
#include "klcells/reps.hpp"
#include "klcells/weights.hpp"

namespace klc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string type;
  std::vector<int> weights;  // weight mode
  std::string order;         // order mode, see parse_order
  std::vector<std::string> checks{"default"};
  bool parallel = true;
  int threads = 0;
  std::string out = "klcells-out";
  std::string data_dir;
  unsigned seed = 1;
  bool resume = true;
  bool cross_check = false;

  bool weight_mode() const { return !weights.empty(); }
  /// Exactly one of weights and order must be set.
  void validate() const;
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

/// "lex:K" (class K dominant), "weighted:C,D:i" or "weighted:C,D:j",
/// "single", or explicit functionals "1,0;0,1".
MonomialOrder parse_order(std::string_view text, int rank);

/// Canonical hash of the system, the parameters and the order.
std::string archive_key(const CoxeterSpec& spec, const ParamAssignment& params, const MonomialOrder& order);

nlohmann::json kl_to_json(const CoxeterSystem& sys, const KLResult& kl);
KLResult kl_from_json(const CoxeterSystem& sys, const nlohmann::json& j);
/// y_word <TAB> w_word <TAB> polynomial
std::string p_table_tsv(const CoxeterSystem& sys, const KLResult& kl);
/// s <TAB> y_word <TAB> w_word <TAB> polynomial
std::string m_table_tsv(const CoxeterSystem& sys, const KLResult& kl);

/// Directory per key under a root; every write goes through a temporary file
/// and a rename so an interrupted run never leaves a truncated file.
class TableArchive {
 public:
  explicit TableArchive(std::filesystem::path root);

  std::filesystem::path dir(const std::string& key) const;
  bool has(const std::string& key, const std::string& name) const;
  void write(const std::string& key, const std::string& name, const std::string& content) const;
  std::string read(const std::string& key, const std::string& name) const;
  void remove(const std::string& key, const std::string& name) const;

  std::optional<KLResult> load_tables(const CoxeterSystem& sys, const std::string& key) const;
  void store_tables(const CoxeterSystem& sys, const std::string& key, const KLResult& kl) const;
  std::optional<std::pair<int, KLResult>> load_checkpoint(const CoxeterSystem& sys, const std::string& key) const;
  void store_checkpoint(const CoxeterSystem& sys, const std::string& key, int level, const KLResult& kl) const;

 private:
  std::filesystem::path root_;
};

struct PipelineResult {
  std::string key;
  bool cache_hit = false;
  int resumed_from = 0;
  KLResult kl;
  EdgeSet edges;
  CellPartition left, right, two_sided;
  std::optional<CharacterTable> table;
  std::optional<CellCharacters> characters;
  std::optional<CellReference> reference;
  std::vector<std::string> names;  // two-sided block labels, empty when unknown
  std::vector<CheckReport> checks;

  bool ok() const;
};

using Logger = std::function<void(const std::string&)>;

/// coxeter -> kl -> cells -> reps with the checks named in the config, and
/// every output written into the archive entry.
PipelineResult run_pipeline(const RunConfig& config, const Logger& log = {});

/// Path of the reference file for a weight function, if one applies.
std::optional<std::string> reference_for(const CoxeterSystem& sys, const std::vector<int>& class_weights,
                                         const std::string& data_dir);
std::string default_data_dir();

/// Text report of the left cell characters grouped by two-sided cell.
std::string character_report(const PipelineResult& r);
std::string checks_report(const std::vector<CheckReport>& checks);
nlohmann::json check_to_json(const CheckReport& c);

}  // namespace klc
