#include "klcells/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace klc {

namespace {

bool fits_int64(const BigInt& b) {
  return b >= std::numeric_limits<std::int64_t>::min() && b <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

void Integer::assign(const BigInt& b) {
  if (fits_int64(b)) {
    small_ = static_cast<std::int64_t>(b);
    big_.reset();
  } else {
    small_ = 0;
    big_ = std::make_shared<const BigInt>(b);
  }
}

Integer Integer::parse(std::string_view s) {
  std::string t(s);
  if (t.empty()) throw AlgebraError("empty integer literal");
  try {
    return Integer(BigInt(t));
  } catch (const std::exception&) {
    throw AlgebraError("bad integer literal '" + t + "'");
  }
}

int Integer::sign() const {
  if (big_) return big_->sign();
  return (small_ > 0) - (small_ < 0);
}

std::int64_t Integer::to_int64() const {
  if (big_) throw AlgebraError("integer does not fit in 64 bits");
  return small_;
}

std::string Integer::to_string() const { return big_ ? big_->str() : std::to_string(small_); }

Integer Integer::operator-() const {
  if (!big_ && small_ != std::numeric_limits<std::int64_t>::min()) return Integer(-small_);
  return Integer(BigInt(-to_big()));
}

Integer& Integer::operator+=(const Integer& o) {
  std::int64_t r;
  if (!big_ && !o.big_ && !__builtin_add_overflow(small_, o.small_, &r)) {
    small_ = r;
  } else {
    assign(to_big() + o.to_big());
  }
  return *this;
}

Integer& Integer::operator-=(const Integer& o) {
  std::int64_t r;
  if (!big_ && !o.big_ && !__builtin_sub_overflow(small_, o.small_, &r)) {
    small_ = r;
  } else {
    assign(to_big() - o.to_big());
  }
  return *this;
}

Integer& Integer::operator*=(const Integer& o) {
  std::int64_t r;
  if (!big_ && !o.big_ && !__builtin_mul_overflow(small_, o.small_, &r)) {
    small_ = r;
  } else {
    assign(to_big() * o.to_big());
  }
  return *this;
}

bool operator==(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  return a.to_big() == b.to_big();
}

std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  const BigInt x = a.to_big(), y = b.to_big();
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

LaurentPoly::LaurentPoly(const Integer& c) {
  if (!c.is_zero()) terms_.push_back({Monomial{}, c});
}

LaurentPoly LaurentPoly::monomial(const Monomial& m, const Integer& c) {
  LaurentPoly p;
  if (!c.is_zero()) p.terms_.push_back({m, c});
  return p;
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.m < b.m; });
  LaurentPoly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().m == t.m) {
      p.terms_.back().c += t.c;
      if (p.terms_.back().c.is_zero()) p.terms_.pop_back();
    } else if (!t.c.is_zero()) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

Integer LaurentPoly::coeff(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& x) { return t.m < x; });
  if (it != terms_.end() && it->m == m) return it->c;
  return 0;
}

Integer LaurentPoly::eval_at_one() const {
  Integer s;
  for (const auto& t : terms_) s += t.c;
  return s;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.c = -t.c;
  return p;
}

void LaurentPoly::add_scaled(const LaurentPoly& p, const Integer& c, const Monomial& g) {
  if (p.terms_.empty() || c.is_zero()) return;
  const bool unit_shift = g.is_one();
  const bool unit_coeff = c == Integer(1);
  if (terms_.empty()) {
    terms_.reserve(p.terms_.size());
    for (const auto& t : p.terms_)
      terms_.push_back({unit_shift ? t.m : t.m * g, unit_coeff ? t.c : t.c * c});
    return;
  }
  std::vector<Term> out;
  out.reserve(terms_.size() + p.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < p.terms_.size()) {
    if (j == p.terms_.size()) {
      out.push_back(std::move(terms_[i++]));
      continue;
    }
    const Monomial m = unit_shift ? p.terms_[j].m : p.terms_[j].m * g;
    if (i == terms_.size() || m < terms_[i].m) {
      out.push_back({m, unit_coeff ? p.terms_[j].c : p.terms_[j].c * c});
      ++j;
    } else if (terms_[i].m < m) {
      out.push_back(std::move(terms_[i++]));
    } else {
      Integer sum = terms_[i].c;
      sum += unit_coeff ? p.terms_[j].c : p.terms_[j].c * c;
      if (!sum.is_zero()) out.push_back({m, std::move(sum)});
      ++i;
      ++j;
    }
  }
  terms_.swap(out);
}

LaurentPoly LaurentPoly::shifted(const Monomial& g) const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.m = t.m * g;
  return p;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.size() == 1) {
    LaurentPoly r;
    r.add_scaled(b, a.terms_[0].c, a.terms_[0].m);
    return r;
  }
  if (b.size() == 1) {
    LaurentPoly r;
    r.add_scaled(a, b.terms_[0].c, b.terms_[0].m);
    return r;
  }
  std::vector<Term> t;
  t.reserve(a.size() * b.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) t.push_back({x.m * y.m, x.c * y.c});
  return LaurentPoly::from_terms(std::move(t));
}

LaurentPoly bar(const LaurentPoly& p) {
  std::vector<Term> t;
  t.reserve(p.size());
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) t.push_back({it->m.inverse(), it->c});
  return LaurentPoly::from_terms(std::move(t));
}

namespace {

int integer_rank(int cols, const std::vector<MonomialOrder::Functional>& rows) {
  std::vector<std::vector<BigInt>> a;
  for (const auto& r : rows) {
    std::vector<BigInt> row;
    for (int k = 0; k < cols; ++k) row.emplace_back(r[k]);
    a.push_back(std::move(row));
  }
  int rank = 0;
  BigInt prev = 1;
  for (int col = 0; col < cols && rank < static_cast<int>(a.size()); ++col) {
    int piv = -1;
    for (int i = rank; i < static_cast<int>(a.size()); ++i)
      if (a[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    for (int i = rank + 1; i < static_cast<int>(a.size()); ++i) {
      for (int k = col + 1; k < cols; ++k) a[i][k] = (a[rank][col] * a[i][k] - a[i][col] * a[rank][k]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

}  // namespace

MonomialOrder::MonomialOrder(int rank, std::vector<Functional> functionals)
    : rank_(rank), f_(std::move(functionals)) {
  if (rank_ < 1 || rank_ > kMaxRank) throw AlgebraError("monomial order rank must be in 1..4");
  for (auto& f : f_)
    for (int k = rank_; k < kMaxRank; ++k) f[k] = 0;
  if (integer_rank(rank_, f_) != rank_)
    throw AlgebraError("monomial order " + describe() + " is not total: functionals have rank < " +
                       std::to_string(rank_));
}

MonomialOrder MonomialOrder::single() { return MonomialOrder(1, {{1, 0, 0, 0}}); }

MonomialOrder MonomialOrder::lex2(int dominant) {
  if (dominant == 1) return MonomialOrder(2, {{0, 1, 0, 0}, {1, 0, 0, 0}});
  return MonomialOrder(2, {{1, 0, 0, 0}, {0, 1, 0, 0}});
}

MonomialOrder MonomialOrder::weighted2(std::int64_t c, std::int64_t d, bool tiebreak_j) {
  return MonomialOrder(2, {{c, d, 0, 0}, tiebreak_j ? Functional{0, 1, 0, 0} : Functional{1, 0, 0, 0}});
}

int MonomialOrder::sign(const Monomial& g) const {
  for (const auto& f : f_) {
    std::int64_t s = 0;
    for (int k = 0; k < rank_; ++k) s += f[k] * g.e[k];
    if (s != 0) return s > 0 ? 1 : -1;
  }
  return 0;
}

std::string MonomialOrder::describe() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < f_.size(); ++i) {
    if (i) os << ',';
    os << '(';
    for (int k = 0; k < rank_; ++k) os << (k ? "," : "") << f_[i][k];
    os << ')';
  }
  os << ']';
  return os.str();
}

SplitParts split(const LaurentPoly& p, const MonomialOrder& order) {
  std::vector<Term> pos, neg;
  SplitParts out;
  for (const auto& t : p.terms()) {
    const int s = order.sign(t.m);
    if (s > 0) pos.push_back(t);
    else if (s < 0) neg.push_back(t);
    else out.constant = t.c;
  }
  out.positive = LaurentPoly::from_terms(std::move(pos));
  out.negative = LaurentPoly::from_terms(std::move(neg));
  return out;
}

bool strictly_negative(const LaurentPoly& p, const MonomialOrder& order) {
  for (const auto& t : p.terms())
    if (order.sign(t.m) >= 0) return false;
  return true;
}

LaurentPoly symmetrize_nonneg(const LaurentPoly& q, const MonomialOrder& order) {
  std::vector<Term> t;
  for (const auto& term : q.terms()) {
    const int s = order.sign(term.m);
    if (s > 0) {
      t.push_back(term);
      t.push_back({term.m.inverse(), term.c});
    } else if (s == 0) {
      t.push_back(term);
    }
  }
  return LaurentPoly::from_terms(std::move(t));
}

std::vector<Term> sorted_terms(const LaurentPoly& p, const MonomialOrder& order) {
  std::vector<Term> t = p.terms();
  std::stable_sort(t.begin(), t.end(), [&](const Term& a, const Term& b) { return order.compare(a.m, b.m) > 0; });
  return t;
}

namespace {

std::string var_name(int k, int rank) {
  if (rank == 1) return "v";
  if (rank == 2) return k == 0 ? "x" : "y";
  return "x" + std::to_string(k + 1);
}

}  // namespace

std::string monomial_to_string(const Monomial& m, int rank) {
  std::string s;
  for (int k = 0; k < rank; ++k) {
    if (m.e[k] == 0) continue;
    if (!s.empty()) s.push_back('*');
    s += var_name(k, rank);
    if (m.e[k] != 1) s += "^" + std::to_string(m.e[k]);
  }
  return s.empty() ? "1" : s;
}

std::string to_string(const LaurentPoly& p, int rank, const MonomialOrder* order) {
  if (p.is_zero()) return "0";
  std::vector<Term> t;
  if (order) {
    t = sorted_terms(p, *order);
  } else {
    t.assign(p.terms().rbegin(), p.terms().rend());
  }
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::string term;
    const bool one = t[i].m.is_one();
    const std::string c = t[i].c.to_string();
    if (one) term = c;
    else if (c == "1") term = monomial_to_string(t[i].m, rank);
    else if (c == "-1") term = "-" + monomial_to_string(t[i].m, rank);
    else term = c + "*" + monomial_to_string(t[i].m, rank);
    if (i == 0) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out;
}

LaurentPoly parse_poly(std::string_view text, int rank) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> AlgebraError {
    return AlgebraError("cannot parse polynomial '" + std::string(text) + "': " + why);
  };
  auto read_int = [&]() {
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      throw fail("expected integer");
    return s.substr(start, pos - start);
  };
  auto read_var = [&]() -> int {
    if (pos >= s.size()) throw fail("expected variable");
    const char c = s[pos];
    if (rank == 1 && c == 'v') {
      ++pos;
      return 0;
    }
    if (rank == 2 && (c == 'x' || c == 'y')) {
      ++pos;
      return c == 'x' ? 0 : 1;
    }
    if (rank > 2 && c == 'x' && pos + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[pos + 1]))) {
      const int k = s[pos + 1] - '1';
      pos += 2;
      if (k < 0 || k >= rank) throw fail("variable index out of range");
      return k;
    }
    throw fail(std::string("unexpected character '") + c + "'");
  };

  std::vector<Term> terms;
  if (s == "0") return {};
  while (pos < s.size()) {
    int sgn = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sgn = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!terms.empty()) {
      throw fail("expected '+' or '-'");
    }
    Integer c = sgn;
    Monomial m;
    bool first = true;
    while (true) {
      if (!first) {
        if (pos < s.size() && s[pos] == '*') ++pos;
        else break;
      }
      first = false;
      if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        c *= Integer::parse(read_int());
      } else {
        const int k = read_var();
        int e = 1;
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          e = std::stoi(read_int());
        }
        m.e[k] += e;
      }
    }
    terms.push_back({m, c});
  }
  return LaurentPoly::from_terms(std::move(terms));
}

nlohmann::json to_json(const LaurentPoly& p, int rank) {
  auto arr = nlohmann::json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    auto e = nlohmann::json::array();
    for (int k = 0; k < rank; ++k) e.push_back(it->m.e[k]);
    nlohmann::json c = it->c.is_small() ? nlohmann::json(it->c.to_int64()) : nlohmann::json(it->c.to_string());
    arr.push_back(nlohmann::json::array({e, c}));
  }
  return arr;
}

LaurentPoly poly_from_json(const nlohmann::json& j, int rank) {
  std::vector<Term> terms;
  for (const auto& t : j) {
    Monomial m;
    const auto& e = t.at(0);
    if (static_cast<int>(e.size()) != rank) throw AlgebraError("exponent vector has wrong length");
    for (int k = 0; k < rank; ++k) m.e[k] = e.at(k).get<int>();
    const auto& c = t.at(1);
    terms.push_back({m, c.is_string() ? Integer::parse(c.get<std::string>()) : Integer(c.get<long long>())});
  }
  return LaurentPoly::from_terms(std::move(terms));
}

}  // namespace klc
