#pragma once

#include <functional>
#include <string>
#include <vector>

#include "klcells/coxeter.hpp"
#include "klcells/laurent.hpp"

namespace klc {

class KLError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hecke parameters v_s in Gamma = Z^rank.
struct ParamAssignment {
  int rank = 1;
  std::vector<Monomial> v;

  /// One independent variable per generator class (x for class 0, y for class 1, ...).
  static ParamAssignment generic(const CoxeterSpec& spec);
  /// Single variable v with v_s = v^L(s).
  static ParamAssignment from_weights(const CoxeterSpec& spec, const std::vector<int>& weights);

  /// Constancy on generator classes and v_s > 1 under the order; throws KLError.
  void validate(const CoxeterSpec& spec, const MonomialOrder& order) const;
  Monomial v_of(const CoxeterSystem& sys, Elt w) const;
  friend bool operator==(const ParamAssignment&, const ParamAssignment&) = default;
};

struct PolyEntry {
  Elt y;
  LaurentPoly p;
  friend bool operator==(const PolyEntry&, const PolyEntry&) = default;
};

struct MuEntry {
  int s;
  Elt y;
  LaurentPoly m;
  friend bool operator==(const MuEntry&, const MuEntry&) = default;
};

/// P*_{y,w} for y <= w; row(w) is sorted by y and ends with (w, 1).
class KLTable {
 public:
  std::vector<std::vector<PolyEntry>> rows;

  const std::vector<PolyEntry>& row(Elt w) const { return rows[w]; }
  LaurentPoly get(Elt y, Elt w) const;
  std::size_t entry_count() const;
  friend bool operator==(const KLTable&, const KLTable&) = default;
};

/// Nonzero M^s_{y,w} (sy < y < w < sw), grouped by w, sorted by (s, y).
class MuTable {
 public:
  std::vector<std::vector<MuEntry>> by_w;

  LaurentPoly get(int s, Elt y, Elt w) const;
  std::size_t entry_count() const;
  friend bool operator==(const MuTable&, const MuTable&) = default;
};

struct KLResult {
  ParamAssignment params;
  MonomialOrder order;
  KLTable P;
  MuTable M;
};

struct KLOptions {
  bool parallel = true;
  int threads = 0;  // 0: OpenMP default
  /// Called after each completed length level with (level, max_level).
  std::function<void(int, int)> progress;
  /// Called with (level, tables so far); passing these back as `resume`
  /// with resume_level = level continues the run.
  std::function<void(int, const KLResult&)> checkpoint;
  /// Levels below this are taken from `resume` instead of recomputed.
  int resume_level = 0;
  const KLResult* resume = nullptr;
};

KLResult compute_kl(const CoxeterSystem& sys, const ParamAssignment& params, const MonomialOrder& order,
                    const KLOptions& options = {});
/// Single-threaded reference for the same computation.
KLResult compute_kl_serial(const CoxeterSystem& sys, const ParamAssignment& params, const MonomialOrder& order);

/// Row of C_u obtained through the left descent s of u; the M^s_{., su}
/// produced on the way are appended to `mu_out` when non-null.
std::vector<PolyEntry> kl_row_via(const CoxeterSystem& sys, const KLResult& kl, Elt u, int s,
                                  std::vector<MuEntry>* mu_out = nullptr);

/// R_{x,y} for x <= y; rows[y] sorted by x.
class RTable {
 public:
  std::vector<std::vector<PolyEntry>> rows;
  LaurentPoly get(Elt x, Elt y) const;
  std::size_t entry_count() const;
};

RTable compute_r(const CoxeterSystem& sys, const ParamAssignment& params, const BruhatOrder& bruhat);

/// Coefficients a_{x,y} of bar(T_y) = sum_x a_{x,y} T_x computed by direct
/// multiplication of inverted generators. Dense, for small groups.
std::vector<std::vector<LaurentPoly>> bar_t_expansion(const CoxeterSystem& sys, const ParamAssignment& params);

/// Solves bar-invariance plus the Gamma_- condition directly, without M.
KLTable oracle_kl(const CoxeterSystem& sys, const ParamAssignment& params, const MonomialOrder& order,
                  std::size_t max_size = 48);

struct CheckReport {
  std::string name;
  bool ok = true;
  std::size_t checked = 0;
  std::vector<std::string> violations;
  nlohmann::json detail = nlohmann::json::object();

  void fail(std::string msg) {
    ok = false;
    if (violations.size() < 50) violations.push_back(std::move(msg));
  }
};

/// v_w v_y^-1 P*_{y,w} is a polynomial in the v_s^2 with constant term 1.
CheckReport check_p_normalization(const CoxeterSystem& sys, const KLResult& kl);
/// v_s v_w v_y^-1 M^s_{y,w} is a polynomial in the v_t^2 with constant term 0,
/// and M is bar-invariant.
CheckReport check_m_normalization(const CoxeterSystem& sys, const KLResult& kl);
/// |exponent| <= the matching exponent of v_{w0}, coordinatewise, for every
/// monomial of P* and M. detail["below_length_of_w0"] records |i| < l(w0).
CheckReport check_bounds(const CoxeterSystem& sys, const KLResult& kl);
/// v_y v_x^-1 R_{x,y} is a polynomial in the v_s^2 with constant term (-1)^{l(y)-l(x)}.
CheckReport check_r_normalization(const CoxeterSystem& sys, const ParamAssignment& params, const RTable& r);
/// bar(P*_{x,w}) - P*_{x,w} = sum_{x<y<=w} R_{x,y} P*_{y,w}. Columns w listed
/// in `columns` are checked for every x; an empty list checks all columns.
CheckReport verify_bar_identity(const CoxeterSystem& sys, const KLTable& kl, const RTable& r,
                                const std::vector<Elt>& columns = {});
/// Recomputes sampled rows through every other left descent.
CheckReport check_descent_independence(const CoxeterSystem& sys, const KLResult& kl, std::size_t samples,
                                       unsigned seed);

/// sigma: x_k -> v^{weights[k]} applied coefficientwise.
LaurentPoly specialize(const LaurentPoly& p, const std::vector<int>& class_weights);

std::string element_label(const CoxeterSystem& sys, Elt w);

}  // namespace klc
