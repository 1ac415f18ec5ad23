#include "klcells/kl.hpp"

#include <algorithm>
#include <exception>
#include <memory>
#include <random>

#include <omp.h>

namespace klc {

ParamAssignment ParamAssignment::generic(const CoxeterSpec& spec) {
  const auto gc = generator_classes(spec);
  if (gc.count() > kMaxRank) throw KLError("too many generator classes for a generic parameter assignment");
  ParamAssignment p;
  p.rank = gc.count();
  for (int s = 0; s < spec.rank(); ++s) p.v.push_back(Monomial::unit(gc.class_of[s]));
  return p;
}

ParamAssignment ParamAssignment::from_weights(const CoxeterSpec& spec, const std::vector<int>& weights) {
  const auto gc = generator_classes(spec);
  std::vector<int> per_gen;
  if (static_cast<int>(weights.size()) == spec.rank()) {
    per_gen = weights;
  } else if (static_cast<int>(weights.size()) == gc.count()) {
    for (int s = 0; s < spec.rank(); ++s) per_gen.push_back(weights[gc.class_of[s]]);
  } else {
    throw KLError("weight list must have one value per generator or per generator class");
  }
  ParamAssignment p;
  p.rank = 1;
  for (int s = 0; s < spec.rank(); ++s) {
    if (per_gen[s] <= 0) throw KLError("weights must be positive");
    for (int t : gc.members[gc.class_of[s]])
      if (per_gen[t] != per_gen[s])
        throw KLError("weights must be constant on classes of generators joined by odd bonds");
    p.v.push_back(Monomial::unit(0, per_gen[s]));
  }
  return p;
}

void ParamAssignment::validate(const CoxeterSpec& spec, const MonomialOrder& order) const {
  if (static_cast<int>(v.size()) != spec.rank()) throw KLError("parameter list does not match the rank");
  if (order.rank() != rank) throw KLError("order rank does not match the parameter group rank");
  const auto gc = generator_classes(spec);
  for (int s = 0; s < spec.rank(); ++s) {
    for (int t : gc.members[gc.class_of[s]])
      if (!(v[t] == v[s])) throw KLError("parameters must be constant on conjugate generators");
    if (!order.positive(v[s]))
      throw KLError("parameter v_" + std::to_string(s + 1) + " = " + monomial_to_string(v[s], rank) +
                    " is not positive under " + order.describe());
  }
}

Monomial ParamAssignment::v_of(const CoxeterSystem& sys, Elt w) const {
  Monomial m;
  for (int s : sys.word(w)) m = m * v[s];
  return m;
}

namespace {

LaurentPoly lookup(const std::vector<PolyEntry>& row, Elt y) {
  auto it = std::lower_bound(row.begin(), row.end(), y, [](const PolyEntry& e, Elt x) { return e.y < x; });
  if (it != row.end() && it->y == y) return it->p;
  return {};
}

const LaurentPoly* find_entry(const std::vector<PolyEntry>& row, Elt y) {
  auto it = std::lower_bound(row.begin(), row.end(), y, [](const PolyEntry& e, Elt x) { return e.y < x; });
  if (it != row.end() && it->y == y) return &it->p;
  return nullptr;
}

// Expands (T_s + v_s^-1) C_w for sw > w and strips sum M^s_{y,w} C_y; the
// remainder is C_{sw}. E is an all-zero scratch vector of size |W| on entry
// and on exit.
std::vector<PolyEntry> e_process(const CoxeterSystem& sys, const ParamAssignment& params,
                                 const MonomialOrder& order, const std::vector<std::vector<PolyEntry>>& rows,
                                 Elt w, int s, std::vector<LaurentPoly>& E, std::vector<MuEntry>* mu) {
  const Monomial vs = params.v[s];
  const Monomial vs_inv = vs.inverse();
  const Elt u = sys.left(s, w);
  const int lw = sys.length(w);
  for (const auto& [z, p] : rows[w]) {
    const Elt sz = sys.left(s, z);
    E[sz].add_scaled(p, 1, Monomial{});
    E[z].add_scaled(p, 1, sys.length(sz) > sys.length(z) ? vs_inv : vs);
  }
  for (Elt y = u; y-- > 0;) {
    if (E[y].is_zero() || sys.length(y) >= lw || !sys.is_left_descent(y, s)) continue;
    LaurentPoly m = symmetrize_nonneg(E[y], order);
    if (m.is_zero()) continue;
    for (const auto& [z, pz] : rows[y])
      for (const auto& t : m.terms()) E[z].add_scaled(pz, -t.c, t.m);
    if (mu) mu->push_back({s, y, std::move(m)});
  }
  std::vector<PolyEntry> out;
  std::string failure;
  for (Elt y = 0; y <= u; ++y) {
    if (E[y].is_zero()) continue;
    if (y == u) {
      if (!(E[y] == LaurentPoly(1)) && failure.empty())
        failure = "coefficient of T_u is " + to_string(E[y], params.rank) + ", expected 1";
    } else if (!strictly_negative(E[y], order) && failure.empty()) {
      failure = "P*_{y,u} = " + to_string(E[y], params.rank, &order) + " is not in Z[Gamma_-] for y = " +
                element_label(sys, y);
    }
    out.push_back({y, std::move(E[y])});
    E[y].clear();
  }
  if (!failure.empty())
    throw KLError("KL post-condition failed at u = " + element_label(sys, u) + " (order " + order.describe() +
                  "): " + failure);
  return out;
}

void sort_mu(std::vector<MuEntry>& mu) {
  std::sort(mu.begin(), mu.end(), [](const MuEntry& a, const MuEntry& b) {
    return a.s != b.s ? a.s < b.s : a.y < b.y;
  });
}

}  // namespace

LaurentPoly KLTable::get(Elt y, Elt w) const { return lookup(rows[w], y); }

std::size_t KLTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.size();
  return n;
}

LaurentPoly MuTable::get(int s, Elt y, Elt w) const {
  for (const auto& e : by_w[w])
    if (e.s == s && e.y == y) return e.m;
  return {};
}

std::size_t MuTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& r : by_w) n += r.size();
  return n;
}

LaurentPoly RTable::get(Elt x, Elt y) const { return lookup(rows[y], x); }

std::size_t RTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.size();
  return n;
}

KLResult compute_kl(const CoxeterSystem& sys, const ParamAssignment& params, const MonomialOrder& order,
                    const KLOptions& options) {
  params.validate(sys.spec(), order);
  const std::size_t n = sys.size();
  KLResult res{params, order, {}, {}};
  res.P.rows.assign(n, {});
  res.M.by_w.assign(n, {});
  res.P.rows[0] = {{0, LaurentPoly(1)}};
  const int maxlen = sys.max_length();
  int start = 0;
  if (options.resume && options.resume_level > 0) {
    if (!(options.resume->params == params) || !(options.resume->order == order))
      throw KLError("resume state was computed for different parameters");
    start = std::min(options.resume_level, maxlen);
    for (std::size_t i = 0; i < sys.level_begin(start + 1) && i < n; ++i) res.P.rows[i] = options.resume->P.rows[i];
    for (std::size_t i = 0; i < sys.level_begin(start); ++i) res.M.by_w[i] = options.resume->M.by_w[i];
  }
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  for (int k = start; k < maxlen; ++k) {
    const auto lo = static_cast<std::int64_t>(sys.level_begin(k));
    const auto hi = static_cast<std::int64_t>(sys.level_begin(k + 1));
    std::exception_ptr error;
#pragma omp parallel if (options.parallel) num_threads(threads)
    {
      std::vector<LaurentPoly> E(n);
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t i = lo; i < hi; ++i) {
        try {
          const Elt w = static_cast<Elt>(i);
          std::vector<MuEntry> mu;
          for (int s = 0; s < sys.rank(); ++s) {
            const Elt u = sys.left(s, w);
            if (sys.length(u) < sys.length(w)) continue;
            auto row = e_process(sys, params, order, res.P.rows, w, s, E, &mu);
            if (sys.first_left_descent(u) == s) res.P.rows[u] = std::move(row);
          }
          sort_mu(mu);
          res.M.by_w[w] = std::move(mu);
        } catch (...) {
#pragma omp critical(kl_error)
          if (!error) error = std::current_exception();
          for (auto& e : E) e.clear();
        }
      }
    }
    if (error) std::rethrow_exception(error);
    if (options.progress) options.progress(k + 1, maxlen);
    if (options.checkpoint) options.checkpoint(k + 1, res);
  }
  return res;
}

KLResult compute_kl_serial(const CoxeterSystem& sys, const ParamAssignment& params, const MonomialOrder& order) {
  params.validate(sys.spec(), order);
  const std::size_t n = sys.size();
  KLResult res{params, order, {}, {}};
  res.P.rows.assign(n, {});
  res.M.by_w.assign(n, {});
  res.P.rows[0] = {{0, LaurentPoly(1)}};
  std::vector<LaurentPoly> E(n);
  for (Elt w = 0; w < n; ++w) {
    std::vector<MuEntry> mu;
    for (int s = 0; s < sys.rank(); ++s) {
      const Elt u = sys.left(s, w);
      if (sys.length(u) < sys.length(w)) continue;
      auto row = e_process(sys, params, order, res.P.rows, w, s, E, &mu);
      if (sys.first_left_descent(u) == s) res.P.rows[u] = std::move(row);
    }
    sort_mu(mu);
    res.M.by_w[w] = std::move(mu);
  }
  return res;
}

std::vector<PolyEntry> kl_row_via(const CoxeterSystem& sys, const KLResult& kl, Elt u, int s,
                                  std::vector<MuEntry>* mu_out) {
  if (!sys.is_left_descent(u, s)) throw KLError("generator is not a left descent of the element");
  std::vector<LaurentPoly> E(sys.size());
  auto row = e_process(sys, kl.params, kl.order, kl.P.rows, sys.left(s, u), s, E, mu_out);
  if (mu_out) sort_mu(*mu_out);
  return row;
}

RTable compute_r(const CoxeterSystem& sys, const ParamAssignment& params, const BruhatOrder& bruhat) {
  RTable r;
  r.rows.assign(sys.size(), {});
  r.rows[0] = {{0, LaurentPoly(1)}};
  for (Elt y = 1; y < sys.size(); ++y) {
    const int s = sys.first_left_descent(y);
    const Elt sy = sys.left(s, y);
    const LaurentPoly diff = LaurentPoly::monomial(params.v[s]) - LaurentPoly::monomial(params.v[s].inverse());
    for (Elt x : bruhat.below(y)) {
      const Elt sx = sys.left(s, x);
      LaurentPoly val;
      if (const auto* a = find_entry(r.rows[sy], sx)) val = *a;
      if (sys.length(sx) > sys.length(x))
        if (const auto* b = find_entry(r.rows[sy], x)) val += diff * *b;
      if (!val.is_zero()) r.rows[y].push_back({x, std::move(val)});
    }
  }
  return r;
}

std::vector<std::vector<LaurentPoly>> bar_t_expansion(const CoxeterSystem& sys, const ParamAssignment& params) {
  const std::size_t n = sys.size();
  std::vector<std::vector<LaurentPoly>> A(n, std::vector<LaurentPoly>(n));
  A[0][0] = LaurentPoly(1);
  for (Elt y = 1; y < n; ++y) {
    const int s = sys.first_left_descent(y);
    const auto& h = A[sys.left(s, y)];
    const LaurentPoly diff = LaurentPoly::monomial(params.v[s]) - LaurentPoly::monomial(params.v[s].inverse());
    auto& out = A[y];
    for (Elt z = 0; z < n; ++z) {
      if (h[z].is_zero()) continue;
      const Elt sz = sys.left(s, z);
      out[sz] += h[z];
      if (sys.length(sz) < sys.length(z)) out[z] += diff * h[z];
      out[z] -= diff * h[z];
    }
  }
  return A;
}

KLTable oracle_kl(const CoxeterSystem& sys, const ParamAssignment& params, const MonomialOrder& order,
                  std::size_t max_size) {
  if (sys.size() > max_size)
    throw KLError("oracle cost guard: |W| = " + std::to_string(sys.size()) + " exceeds " + std::to_string(max_size));
  params.validate(sys.spec(), order);
  const auto A = bar_t_expansion(sys, params);
  const std::size_t n = sys.size();
  KLTable t;
  t.rows.assign(n, {});
  for (Elt w = 0; w < n; ++w) {
    std::vector<LaurentPoly> P(n);
    P[w] = LaurentPoly(1);
    for (Elt x = w; x-- > 0;) {
      LaurentPoly r;
      for (Elt y = x + 1; y <= w; ++y)
        if (!P[y].is_zero() && !A[y][x].is_zero()) r += bar(P[y]) * A[y][x];
      if (!(bar(r) == -r))
        throw KLError("oracle: bar-invariance system is inconsistent at x = " + element_label(sys, x));
      auto parts = split(r, order);
      if (!parts.constant.is_zero()) throw KLError("oracle: nonzero constant term");
      P[x] = parts.negative;
    }
    for (Elt x = 0; x <= w; ++x)
      if (!P[x].is_zero()) t.rows[w].push_back({x, std::move(P[x])});
  }
  return t;
}

namespace {

// Membership in the monoid generated by the v_s^2.
class SquareMonoid {
 public:
  explicit SquareMonoid(const ParamAssignment& p) : rank_(p.rank) {
    if (rank_ == 1) {
      for (const auto& m : p.v) steps_.push_back(2 * m.e[0]);
      std::sort(steps_.begin(), steps_.end());
      steps_.erase(std::unique(steps_.begin(), steps_.end()), steps_.end());
      reach_ = {1};
      return;
    }
    has_.fill(false);
    for (const auto& m : p.v) {
      int nonzero = 0, k0 = -1;
      for (int k = 0; k < kMaxRank; ++k)
        if (m.e[k] != 0) {
          ++nonzero;
          k0 = k;
        }
      if (nonzero != 1 || m.e[k0] != 1)
        throw KLError("normalization checks need one independent variable per class or a single variable");
      has_[k0] = true;
    }
  }

  bool contains(const Monomial& g) {
    if (rank_ == 1) {
      const int n = g.e[0];
      if (n < 0) return false;
      while (static_cast<int>(reach_.size()) <= n) {
        const int k = static_cast<int>(reach_.size());
        char ok = 0;
        for (int s : steps_)
          if (s <= k && reach_[k - s]) ok = 1;
        reach_.push_back(ok);
      }
      return reach_[n] != 0;
    }
    for (int k = 0; k < kMaxRank; ++k) {
      if (g.e[k] < 0 || g.e[k] % 2 != 0) return false;
      if (g.e[k] != 0 && !has_[k]) return false;
    }
    return true;
  }

 private:
  int rank_;
  std::vector<int> steps_;
  std::vector<char> reach_;
  std::array<bool, kMaxRank> has_{};
};

std::string pair_label(const CoxeterSystem& sys, Elt y, Elt w) {
  return "(" + element_label(sys, y) + ", " + element_label(sys, w) + ")";
}

}  // namespace

CheckReport check_p_normalization(const CoxeterSystem& sys, const KLResult& kl) {
  CheckReport rep{"P normalization", true, 0, {}, {}};
  SquareMonoid monoid(kl.params);
  std::vector<Monomial> vw(sys.size());
  for (Elt w = 0; w < sys.size(); ++w) vw[w] = kl.params.v_of(sys, w);
  for (Elt w = 0; w < sys.size(); ++w) {
    for (const auto& [y, p] : kl.P.row(w)) {
      ++rep.checked;
      const LaurentPoly q = p.shifted(vw[w] / vw[y]);
      bool ok = q.coeff(Monomial{}) == Integer(1);
      for (const auto& t : q.terms()) ok = ok && monoid.contains(t.m);
      if (!ok) rep.fail("P at " + pair_label(sys, y, w) + ": v_w/v_y P* = " + to_string(q, kl.params.rank));
    }
  }
  return rep;
}

CheckReport check_m_normalization(const CoxeterSystem& sys, const KLResult& kl) {
  CheckReport rep{"M normalization and bar-invariance", true, 0, {}, {}};
  SquareMonoid monoid(kl.params);
  for (Elt w = 0; w < sys.size(); ++w) {
    const Monomial vw = kl.params.v_of(sys, w);
    for (const auto& e : kl.M.by_w[w]) {
      ++rep.checked;
      if (!(bar(e.m) == e.m)) rep.fail("M not bar-invariant at s=" + std::to_string(e.s + 1) + " " + pair_label(sys, e.y, w));
      if (!(sys.is_left_descent(e.y, e.s) && !sys.is_left_descent(w, e.s) && sys.length(e.y) < sys.length(w)))
        rep.fail("M stored outside sy<y<w<sw at " + pair_label(sys, e.y, w));
      const LaurentPoly q = e.m.shifted(kl.params.v[e.s] * vw / kl.params.v_of(sys, e.y));
      bool ok = q.coeff(Monomial{}).is_zero();
      for (const auto& t : q.terms()) ok = ok && monoid.contains(t.m);
      if (!ok) rep.fail("M at s=" + std::to_string(e.s + 1) + " " + pair_label(sys, e.y, w) + ": " + to_string(q, kl.params.rank));
    }
  }
  return rep;
}

CheckReport check_bounds(const CoxeterSystem& sys, const KLResult& kl) {
  CheckReport rep{"exponent bounds", true, 0, {}, {}};
  SquareMonoid monoid(kl.params);  // rejects non-coordinate parameters
  const Monomial top = kl.params.v_of(sys, sys.longest());
  const int l0 = sys.max_length();
  std::array<int, kMaxRank> maxabs{};
  auto visit = [&](const LaurentPoly& p, const std::string& where) {
    ++rep.checked;
    for (const auto& t : p.terms())
      for (int k = 0; k < kl.params.rank; ++k) {
        maxabs[k] = std::max(maxabs[k], std::abs(t.m.e[k]));
        if (std::abs(t.m.e[k]) > top.e[k]) rep.fail("exponent out of range in " + where);
      }
  };
  for (Elt w = 0; w < sys.size(); ++w) {
    for (const auto& [y, p] : kl.P.row(w)) visit(p, "P" + pair_label(sys, y, w));
    for (const auto& e : kl.M.by_w[w]) visit(e.m, "M" + pair_label(sys, e.y, w));
  }
  bool strict = true;
  for (int k = 0; k < kl.params.rank; ++k) strict = strict && maxabs[k] < l0;
  rep.detail["bound"] = std::vector<int>(top.e.begin(), top.e.begin() + kl.params.rank);
  rep.detail["max_abs_exponent"] = std::vector<int>(maxabs.begin(), maxabs.begin() + kl.params.rank);
  rep.detail["below_length_of_w0"] = strict;
  return rep;
}

CheckReport check_r_normalization(const CoxeterSystem& sys, const ParamAssignment& params, const RTable& r) {
  CheckReport rep{"R normalization", true, 0, {}, {}};
  SquareMonoid monoid(params);
  std::vector<Monomial> vw(sys.size());
  for (Elt w = 0; w < sys.size(); ++w) vw[w] = params.v_of(sys, w);
  for (Elt y = 0; y < sys.size(); ++y) {
    for (const auto& [x, p] : r.rows[y]) {
      ++rep.checked;
      const LaurentPoly q = p.shifted(vw[y] / vw[x]);
      const Integer expect = ((sys.length(y) - sys.length(x)) % 2 == 0) ? 1 : -1;
      bool ok = q.coeff(Monomial{}) == expect;
      for (const auto& t : q.terms()) ok = ok && monoid.contains(t.m);
      if (!ok) rep.fail("R at " + pair_label(sys, x, y) + ": " + to_string(q, params.rank));
    }
  }
  return rep;
}

namespace {

// Sums products of terms into a dense box of exponents when every exponent
// fits and no int64 overflow occurs; `exact` reports whether it stayed valid.
class BoxAccumulator {
 public:
  BoxAccumulator(int rank, int radius) : rank_(rank), radius_(radius), side_(2 * radius + 1) {
    std::size_t cells = 1;
    for (int k = 0; k < rank_; ++k) cells *= static_cast<std::size_t>(side_);
    cells_.assign(cells, 0);
  }

  void add(const Monomial& m, std::int64_t c) {
    std::size_t idx = 0;
    for (int k = 0; k < rank_; ++k) {
      const int e = m.e[k];
      if (e < -radius_ || e > radius_) {
        exact_ = false;
        return;
      }
      idx = idx * static_cast<std::size_t>(side_) + static_cast<std::size_t>(e + radius_);
    }
    if (cells_[idx] == 0) touched_.push_back(idx);
    if (__builtin_add_overflow(cells_[idx], c, &cells_[idx])) exact_ = false;
  }

  void add_product(const LaurentPoly& a, const LaurentPoly& b) {
    for (const auto& s : a.terms()) {
      if (!s.c.is_small()) {
        exact_ = false;
        return;
      }
      for (const auto& t : b.terms()) {
        std::int64_t c;
        if (!t.c.is_small() || __builtin_mul_overflow(s.c.to_int64(), t.c.to_int64(), &c)) {
          exact_ = false;
          return;
        }
        add(s.m * t.m, c);
      }
    }
  }

  void add_poly(const LaurentPoly& a, int sign) {
    for (const auto& t : a.terms()) {
      if (!t.c.is_small()) {
        exact_ = false;
        return;
      }
      add(t.m, sign * t.c.to_int64());
    }
  }

  bool exact() const { return exact_; }
  bool all_zero() const {
    for (auto idx : touched_)
      if (cells_[idx] != 0) return false;
    return true;
  }
  void reset() {
    for (auto idx : touched_) cells_[idx] = 0;
    touched_.clear();
    exact_ = true;
  }

 private:
  int rank_, radius_, side_;
  std::vector<std::int64_t> cells_;
  std::vector<std::size_t> touched_;
  bool exact_ = true;
};

}  // namespace

CheckReport verify_bar_identity(const CoxeterSystem& sys, const KLTable& kl, const RTable& r,
                                const std::vector<Elt>& columns) {
  CheckReport rep{"bar identity via R-polynomials", true, 0, {}, {}};
  std::vector<Elt> cols = columns;
  if (cols.empty()) {
    cols.resize(sys.size());
    for (Elt w = 0; w < sys.size(); ++w) cols[w] = w;
  }
  int rank = 1;
  int radius = 0;
  for (const auto& row : r.rows)
    for (const auto& e : row)
      for (const auto& t : e.p.terms())
        for (int k = 0; k < kMaxRank; ++k) {
          if (t.m.e[k] != 0) rank = std::max(rank, k + 1);
          radius = std::max(radius, std::abs(t.m.e[k]));
        }
  for (const auto& row : kl.rows)
    for (const auto& e : row)
      for (const auto& t : e.p.terms())
        for (int k = 0; k < kMaxRank; ++k) {
          if (t.m.e[k] != 0) rank = std::max(rank, k + 1);
          radius = std::max(radius, std::abs(t.m.e[k]));
        }
  radius *= 2;
  const bool dense = rank <= 2 && radius <= 256;
  const auto ncols = static_cast<std::int64_t>(cols.size());
  std::vector<std::vector<std::string>> failures(cols.size());
  std::vector<std::size_t> counts(cols.size(), 0);
#pragma omp parallel
  {
    std::unique_ptr<BoxAccumulator> acc;
    if (dense) acc = std::make_unique<BoxAccumulator>(rank, radius);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < ncols; ++c) {
      const Elt w = cols[c];
      const auto& row = kl.row(w);
      for (Elt x = 0; x < w; ++x) {
        ++counts[c];
        const LaurentPoly p = kl.get(x, w);
        bool done = false;
        bool ok = false;
        if (acc) {
          acc->reset();
          for (const auto& [y, py] : row)
            if (y > x)
              if (const auto* rxy = find_entry(r.rows[y], x)) acc->add_product(*rxy, py);
          acc->add_poly(bar(p), -1);
          acc->add_poly(p, 1);
          if (acc->exact()) {
            done = true;
            ok = acc->all_zero();
          }
        }
        if (!done) {
          LaurentPoly sum;
          for (const auto& [y, py] : row)
            if (y > x)
              if (const auto* rxy = find_entry(r.rows[y], x)) sum += *rxy * py;
          ok = sum == bar(p) - p;
        }
        if (!ok && failures[c].size() < 5) failures[c].push_back("identity fails at " + pair_label(sys, x, w));
      }
    }
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    rep.checked += counts[c];
    for (auto& f : failures[c]) rep.fail(std::move(f));
  }
  rep.detail["columns"] = cols.size();
  return rep;
}

CheckReport check_descent_independence(const CoxeterSystem& sys, const KLResult& kl, std::size_t samples,
                                       unsigned seed) {
  CheckReport rep{"descent independence", true, 0, {}, {}};
  std::vector<Elt> candidates;
  for (Elt u = 0; u < sys.size(); ++u) {
    int d = 0;
    for (int s = 0; s < sys.rank(); ++s) d += sys.is_left_descent(u, s);
    if (d >= 2) candidates.push_back(u);
  }
  std::mt19937 rng(seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  if (candidates.size() > samples) candidates.resize(samples);
  std::sort(candidates.begin(), candidates.end());
  for (Elt u : candidates) {
    for (int s = 0; s < sys.rank(); ++s) {
      if (!sys.is_left_descent(u, s) || s == sys.first_left_descent(u)) continue;
      ++rep.checked;
      std::vector<MuEntry> mu;
      auto row = kl_row_via(sys, kl, u, s, &mu);
      if (!(row.size() == kl.P.row(u).size() &&
            std::equal(row.begin(), row.end(), kl.P.row(u).begin(),
                       [](const PolyEntry& a, const PolyEntry& b) { return a.y == b.y && a.p == b.p; })))
        rep.fail("row of " + element_label(sys, u) + " differs through descent " + std::to_string(s + 1));
      const Elt w = sys.left(s, u);
      std::vector<MuEntry> stored;
      for (const auto& e : kl.M.by_w[w])
        if (e.s == s) stored.push_back(e);
      if (!(mu.size() == stored.size() &&
            std::equal(mu.begin(), mu.end(), stored.begin(),
                       [](const MuEntry& a, const MuEntry& b) { return a.y == b.y && a.m == b.m; })))
        rep.fail("M^s_{., w} differs for w = " + element_label(sys, w));
    }
  }
  rep.detail["elements"] = candidates.size();
  return rep;
}

LaurentPoly specialize(const LaurentPoly& p, const std::vector<int>& class_weights) {
  std::vector<Term> t;
  t.reserve(p.size());
  for (const auto& term : p.terms()) {
    int n = 0;
    for (std::size_t k = 0; k < class_weights.size(); ++k) n += class_weights[k] * term.m.e[k];
    t.push_back({Monomial::unit(0, n), term.c});
  }
  return LaurentPoly::from_terms(std::move(t));
}

std::string element_label(const CoxeterSystem& sys, Elt w) { return word_to_string(sys.word(w)); }

}  // namespace klc
