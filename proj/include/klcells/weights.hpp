#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "klcells/cells.hpp"
#include "klcells/kl.hpp"

namespace klc {

using Ratio = boost::rational<std::int64_t>;
std::string to_string(const Ratio& r);

/// Divide by the gcd of all values.
std::vector<int> normalize_weight(const std::vector<int>& weights);

/// One value per generator class, from a list given per generator or per class.
std::vector<int> class_weights_of(const CoxeterSpec& spec, const std::vector<int>& weights);

enum MonomialTag : unsigned { gamma_a = 1, gamma_b = 2, delta = 4, delta_chain = 8 };

struct MonomialSet {
  std::vector<Monomial> items;  // sorted, unique
  std::vector<unsigned> tags;

  void insert(const Monomial& m, unsigned tag);
  std::size_t size() const { return items.size(); }
  bool contains(const Monomial& m) const;
};

/// Inverses of the monomials of every P*_{y,w} (y < w), and the consecutive
/// ratios of the monomials of every nonzero M listed in increasing order.
MonomialSet gamma_plus_W(const KLResult& kl);

/// Adds top(P*_{1,w}) / gamma for the other monomials gamma of P*_{1,w}, and
/// the consecutive ratios of the sorted delta values inside each left cell. Duplicate delta values in a
/// cell are reported in `duplicates` and skipped in the chain.
MonomialSet gamma_plus_prime_W(const KLResult& kl, const CellPartition& left,
                               std::vector<std::pair<Elt, Elt>>* duplicates = nullptr);

/// sigma(m) = v^{sum_k w_k e_k} has positive degree for every member.
CheckReport check_star(const std::vector<int>& class_weights, const MonomialSet& set, int rank);

/// Ratios rho = b/a for which a*i + b*j > 0 holds on every x^i y^j in the set.
struct Interval {
  bool empty = false;
  Ratio lo{0};
  std::optional<Ratio> hi;  // none: unbounded
  std::vector<Monomial> lo_binding, hi_binding;

  bool contains(const Ratio& r) const { return !empty && r > lo && (!hi || r < *hi); }
  std::string describe() const;
};
Interval validity_interval(const MonomialSet& set);

struct DistinguishedCell {
  std::uint32_t block;
  Elt d;
  std::int64_t delta;
  Integer n;
  bool unique, involution, unit;
};

struct DistinguishedReport {
  std::vector<std::int64_t> delta;  // per element
  std::vector<Integer> n;
  std::vector<DistinguishedCell> cells;
  CheckReport check;
};

/// Delta(w) = -(top degree of sigma(P*_{1,w})) and n_w its coefficient; per
/// cell the minimizer must be unique, an involution, and have n = +-1.
/// `class_weights` is required when `kl` has more than one variable.
DistinguishedReport distinguished_involutions(const CoxeterSystem& sys, const KLResult& kl, const CellPartition& left,
                                              const std::vector<int>& class_weights = {});

/// Weight-mode tables equal the specialization of the multi-variable ones,
/// and no nonzero M specializes to zero.
CheckReport check_specialization(const KLResult& generic, const KLResult& weighted, const std::vector<int>& class_weights);

/// Every block of `coarse` is a union of blocks of `fine`.
CheckReport check_refinement(const CellPartition& coarse, const CellPartition& fine);

/// 2 l(w0); every ratio beyond it lies in the asymptotic class.
std::int64_t asymptotic_class_bound(const CoxeterSystem& sys);

/// Image of a partition under a generator permutation.
CellPartition transport(const CoxeterSystem& sys, const CellPartition& p, const std::vector<int>& perm);
std::uint64_t partition_digest(const CellPartition& p);

struct RegionAnalysis {
  std::vector<int> weights;  // per class
  CellPartition left, two_sided;
  bool property_L = false;
  bool structure_ok = false;
  DistinguishedReport distinguished;
};

/// Weight-mode pipeline at one weight function.
RegionAnalysis analyze_weights(const CoxeterSystem& sys, const std::vector<int>& class_weights, bool parallel = true);

struct ScanRegion {
  bool exact = false;
  Ratio lo{0};
  std::optional<Ratio> hi;  // for exact regions lo == *hi
  bool mirrored = false;
  std::string order;        // order that certifies an open region
  Interval validity;        // its validity interval
  bool interval_ok = true;  // assigned interval inside validity
  bool star_prime = false;  // condition (*') at the representative
  bool generic_matches = true;
  bool specialization_ok = true;
  std::optional<Interval> other_tiebreak;
  RegionAnalysis analysis;
  std::uint64_t digest = 0;
  int class_id = -1;
  int symmetric_class_id = -1;

  bool contains(const Ratio& r) const;
  std::string describe() const;
};

struct ScanOptions {
  bool cross_check_tiebreak = false;
  bool parallel = true;
  std::function<void(const std::string&)> log;
};

struct ScanReport {
  std::string system;
  std::vector<Ratio> breakpoints;
  std::vector<ScanRegion> regions;  // ordered by ratio, increasing
  std::vector<int> swap;            // class-swapping generator permutation, if any
  int class_count = 0;
  int symmetric_class_count = 0;
  std::int64_t bound = 0;
  Ratio threshold{0};  // lower end of the top region

  /// Region containing the ratio b/a, or -1.
  int locate(const Ratio& r) const;
  nlohmann::json to_json(const CoxeterSystem& sys, bool full_partitions = false) const;
  std::string summary() const;
};

/// Left cells at every exact ratio are unions of the left cells of the two
/// neighbouring open regions.
CheckReport check_boundary_refinement(const ScanReport& report);

/// Walks down from the order with y dominant through weighted orders at each
/// boundary ratio, then mirrors across 1 when the classes can be swapped.
ScanReport scan_equivalence_classes(const CoxeterSystem& sys, const ScanOptions& options = {});

}  // namespace klc
