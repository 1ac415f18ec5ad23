#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace klc {

using BigInt = boost::multiprecision::cpp_int;

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact integer with an int64 fast path that promotes to BigInt on overflow.
class Integer {
 public:
  Integer() = default;
  Integer(long long v) : small_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Integer(const BigInt& b) { assign(b); }

  static Integer parse(std::string_view s);

  bool is_zero() const { return !big_ && small_ == 0; }
  bool is_small() const { return !big_; }
  int sign() const;
  std::int64_t to_int64() const;  // throws if out of range
  BigInt to_big() const { return big_ ? *big_ : BigInt(small_); }
  std::string to_string() const;

  Integer operator-() const;
  Integer& operator+=(const Integer& o);
  Integer& operator-=(const Integer& o);
  Integer& operator*=(const Integer& o);
  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
  friend bool operator==(const Integer& a, const Integer& b);
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b);

 private:
  void assign(const BigInt& b);
  std::int64_t small_ = 0;
  std::shared_ptr<const BigInt> big_;
};

constexpr int kMaxRank = 4;

/// Element of Gamma = Z^r written multiplicatively; unused coordinates are 0.
struct Monomial {
  std::array<std::int32_t, kMaxRank> e{};

  static Monomial unit(int k, int power = 1) {
    Monomial m;
    m.e[static_cast<std::size_t>(k)] = power;
    return m;
  }
  bool is_one() const { return e == std::array<std::int32_t, kMaxRank>{}; }
  Monomial inverse() const {
    Monomial m;
    for (int k = 0; k < kMaxRank; ++k) m.e[k] = -e[k];
    return m;
  }
  Monomial pow(int n) const {
    Monomial m;
    for (int k = 0; k < kMaxRank; ++k) m.e[k] = e[k] * n;
    return m;
  }
  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int k = 0; k < kMaxRank; ++k) m.e[k] = a.e[k] + b.e[k];
    return m;
  }
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int k = 0; k < kMaxRank; ++k) m.e[k] = a.e[k] - b.e[k];
    return m;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

struct Term {
  Monomial m;
  Integer c;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Element of Z[Gamma]. Terms are kept sorted by exponent vector
/// (lexicographic), with no zero coefficients.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(const Integer& c);  // NOLINT(google-explicit-constructor)
  LaurentPoly(long long c) : LaurentPoly(Integer(c)) {}  // NOLINT(google-explicit-constructor)
  static LaurentPoly monomial(const Monomial& m, const Integer& c = 1);
  /// Builds from arbitrary (possibly repeated, unsorted) terms.
  static LaurentPoly from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  void clear() { terms_.clear(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  Integer coeff(const Monomial& m) const;
  /// Value at v_s = 1 for all s: the sum of the coefficients.
  Integer eval_at_one() const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o) { add_scaled(o, 1, Monomial{}); return *this; }
  LaurentPoly& operator-=(const LaurentPoly& o) { add_scaled(o, -1, Monomial{}); return *this; }
  /// this += c * g * p
  void add_scaled(const LaurentPoly& p, const Integer& c, const Monomial& g);
  LaurentPoly shifted(const Monomial& g) const;

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  std::vector<Term> terms_;
};

LaurentPoly bar(const LaurentPoly& p);

/// Total order on Gamma given by a stack of integer functionals; gamma1 and
/// gamma2 compare by the first functional that separates them.
class MonomialOrder {
 public:
  using Functional = std::array<std::int64_t, kMaxRank>;

  MonomialOrder() = default;
  /// Throws AlgebraError unless the functionals have full rank r.
  MonomialOrder(int rank, std::vector<Functional> functionals);

  /// Order on Z (single variable v, v > 1).
  static MonomialOrder single();
  /// Lexicographic order on Z^2 with coordinate `dominant` compared first.
  static MonomialOrder lex2(int dominant);
  /// ci + dj first; ties broken by j > 0 (tiebreak_j) or by i > 0.
  static MonomialOrder weighted2(std::int64_t c, std::int64_t d, bool tiebreak_j);

  int rank() const { return rank_; }
  const std::vector<Functional>& functionals() const { return f_; }
  int sign(const Monomial& g) const;
  int compare(const Monomial& a, const Monomial& b) const { return sign(a / b); }
  bool positive(const Monomial& g) const { return sign(g) > 0; }
  std::string describe() const;
  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;

 private:
  int rank_ = 0;
  std::vector<Functional> f_;
};

struct SplitParts {
  LaurentPoly positive;
  Integer constant;
  LaurentPoly negative;
};

SplitParts split(const LaurentPoly& p, const MonomialOrder& order);
/// True iff every monomial of p lies strictly in Gamma_-.
bool strictly_negative(const LaurentPoly& p, const MonomialOrder& order);
/// a_1 + sum over gamma > 1 of a_gamma (gamma + gamma^-1).
LaurentPoly symmetrize_nonneg(const LaurentPoly& q, const MonomialOrder& order);
/// Terms sorted descending under the order.
std::vector<Term> sorted_terms(const LaurentPoly& p, const MonomialOrder& order);

/// Text form "c*x^i*y^j + ..." with variables v (rank 1), x,y (rank 2) or
/// x1..x4. Terms descend by the order when given, else by exponent vector.
std::string to_string(const LaurentPoly& p, int rank, const MonomialOrder* order = nullptr);
LaurentPoly parse_poly(std::string_view text, int rank);
std::string monomial_to_string(const Monomial& m, int rank);

nlohmann::json to_json(const LaurentPoly& p, int rank);
LaurentPoly poly_from_json(const nlohmann::json& j, int rank);

}  // namespace klc
