#include "klcells/coxeter.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace klc {

namespace {

std::vector<std::vector<int>> identity_matrix(int n) {
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 2));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

void bond(std::vector<std::vector<int>>& m, int i, int j, int order) {
  m[i][j] = order;
  m[j][i] = order;
}

CoxeterSpec irreducible_preset(std::string_view raw) {
  std::string t;
  for (char c : raw)
    if (c != '_' && c != '(' && c != ')' && !std::isspace(static_cast<unsigned char>(c)))
      t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (t.empty()) throw CoxeterError("empty Coxeter type");
  const char family = t[0];
  const std::string rest = t.substr(1);

  if (family == 'I') {
    // I2:m, I2(m) (parentheses already stripped, so "I24" is ambiguous; require ':' or "2" prefix)
    std::string order;
    if (rest.rfind("2:", 0) == 0) order = rest.substr(2);
    else if (rest.size() > 1 && rest[0] == '2') order = rest.substr(1);
    else throw CoxeterError("dihedral type must be written I2:m or I_2(m)");
    const int mm = std::stoi(order);
    if (mm < 2) throw CoxeterError("dihedral order must be at least 2");
    auto m = identity_matrix(2);
    bond(m, 0, 1, mm);
    return {"I2:" + std::to_string(mm), m};
  }

  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(rest, &used);
    if (used != rest.size()) throw CoxeterError("bad rank");
  } catch (const std::exception&) {
    throw CoxeterError("cannot parse Coxeter type '" + std::string(raw) + "'");
  }
  if (n < 1) throw CoxeterError("rank must be positive");
  auto m = identity_matrix(n);
  std::string name = std::string(1, family) + std::to_string(n);
  switch (family) {
    case 'A':
      for (int i = 0; i + 1 < n; ++i) bond(m, i, i + 1, 3);
      break;
    case 'B':
    case 'C':
      if (n < 2) throw CoxeterError("B_n needs n >= 2");
      bond(m, 0, 1, 4);
      for (int i = 1; i + 1 < n; ++i) bond(m, i, i + 1, 3);
      name = "B" + std::to_string(n);
      break;
    case 'D':
      if (n < 4) throw CoxeterError("D_n needs n >= 4");
      for (int i = 0; i + 2 < n; ++i) bond(m, i, i + 1, 3);
      bond(m, n - 3, n - 1, 3);
      break;
    case 'E':
      if (n < 6 || n > 8) throw CoxeterError("E_n needs 6 <= n <= 8");
      // Bourbaki numbering shifted to 0: 0-2-3-4-...; 1 attached to 3.
      bond(m, 0, 2, 3);
      bond(m, 1, 3, 3);
      for (int i = 2; i + 1 < n; ++i) bond(m, i, i + 1, 3);
      break;
    case 'F':
      if (n != 4) throw CoxeterError("F_n exists only for n = 4");
      bond(m, 0, 1, 3);
      bond(m, 1, 2, 4);
      bond(m, 2, 3, 3);
      break;
    case 'G':
      if (n != 2) throw CoxeterError("G_n exists only for n = 2");
      bond(m, 0, 1, 6);
      break;
    case 'H':
      if (n != 3 && n != 4) throw CoxeterError("H_n needs n = 3 or 4");
      bond(m, 0, 1, 5);
      for (int i = 1; i + 1 < n; ++i) bond(m, i, i + 1, 3);
      break;
    default:
      throw CoxeterError("unknown Coxeter family '" + std::string(1, family) + "'");
  }
  return {name, m};
}

std::vector<std::vector<int>> parse_matrix(std::string_view text) {
  std::vector<std::vector<int>> rows;
  std::vector<int> row;
  int depth = 0;
  std::string num;
  auto flush = [&] {
    if (!num.empty()) {
      row.push_back(std::stoi(num));
      num.clear();
    }
  };
  for (char c : text) {
    if (c == '[') {
      ++depth;
    } else if (c == ']') {
      flush();
      if (depth == 2) {
        rows.push_back(row);
        row.clear();
      }
      --depth;
    } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      num.push_back(c);
    } else {
      throw CoxeterError("unexpected character in Coxeter matrix");
    }
  }
  if (depth != 0) throw CoxeterError("unbalanced brackets in Coxeter matrix");
  return rows;
}

struct RootSystem {
  std::vector<std::vector<double>> roots;
  std::vector<std::vector<std::uint32_t>> gen_perm;  // generator -> root permutation
  std::vector<std::uint32_t> simple;                 // index of simple root i
};

RootSystem build_roots(const CoxeterSpec& spec, std::size_t cap) {
  const int n = spec.rank();
  std::vector<std::vector<double>> form(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      form[i][j] = (i == j) ? 1.0 : -std::cos(std::numbers::pi / spec.m[i][j]);

  auto key_of = [](const std::vector<double>& v) {
    std::string k;
    k.reserve(v.size() * 10);
    for (double x : v) {
      const long long q = std::llround(x * 1e6);
      k.append(std::to_string(q)).push_back(',');
    }
    return k;
  };
  auto reflect = [&](int s, const std::vector<double>& v) {
    double b = 0.0;
    for (int j = 0; j < n; ++j) b += form[s][j] * v[j];
    std::vector<double> r = v;
    r[s] -= 2.0 * b;
    return r;
  };

  RootSystem rs;
  std::unordered_map<std::string, std::uint32_t> index;
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    index.emplace(key_of(e), static_cast<std::uint32_t>(rs.roots.size()));
    rs.simple.push_back(static_cast<std::uint32_t>(rs.roots.size()));
    rs.roots.push_back(e);
  }
  // Orbit closure; the root set is finite iff the group is.
  const std::size_t root_cap = std::max<std::size_t>(4 * cap, 64);
  for (std::size_t k = 0; k < rs.roots.size(); ++k) {
    for (int s = 0; s < n; ++s) {
      auto r = reflect(s, rs.roots[k]);
      auto key = key_of(r);
      if (index.find(key) == index.end()) {
        if (rs.roots.size() >= root_cap)
          throw CoxeterError("enumeration cap exceeded: group is infinite or too large");
        index.emplace(std::move(key), static_cast<std::uint32_t>(rs.roots.size()));
        rs.roots.push_back(std::move(r));
      }
    }
  }
  rs.gen_perm.assign(n, std::vector<std::uint32_t>(rs.roots.size()));
  for (int s = 0; s < n; ++s)
    for (std::size_t k = 0; k < rs.roots.size(); ++k)
      rs.gen_perm[s][k] = index.at(key_of(reflect(s, rs.roots[k])));
  return rs;
}

struct PermHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

void CoxeterSpec::validate() const {
  const int n = rank();
  if (n == 0) throw CoxeterError("Coxeter matrix is empty");
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n) throw CoxeterError("Coxeter matrix is not square");
  for (int i = 0; i < n; ++i) {
    if (m[i][i] != 1) throw CoxeterError("Coxeter matrix must have 1 on the diagonal");
    for (int j = 0; j < n; ++j) {
      if (m[i][j] != m[j][i]) throw CoxeterError("Coxeter matrix must be symmetric");
      if (i != j && m[i][j] < 2) throw CoxeterError("off-diagonal Coxeter entries must be >= 2");
    }
  }
}

CoxeterSpec CoxeterSpec::from_matrix(std::vector<std::vector<int>> m, std::string name) {
  CoxeterSpec spec{std::move(name), std::move(m)};
  spec.validate();
  if (spec.name.empty()) {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < spec.rank(); ++i) {
      if (i) os << ',';
      os << '[';
      for (int j = 0; j < spec.rank(); ++j) os << (j ? "," : "") << spec.m[i][j];
      os << ']';
    }
    os << ']';
    spec.name = os.str();
  }
  return spec;
}

CoxeterSpec CoxeterSpec::product(const CoxeterSpec& a, const CoxeterSpec& b) {
  const int n = a.rank() + b.rank();
  auto m = identity_matrix(n);
  for (int i = 0; i < a.rank(); ++i)
    for (int j = 0; j < a.rank(); ++j) m[i][j] = a.m[i][j];
  for (int i = 0; i < b.rank(); ++i)
    for (int j = 0; j < b.rank(); ++j) m[a.rank() + i][a.rank() + j] = b.m[i][j];
  return {a.name + "x" + b.name, m};
}

CoxeterSpec CoxeterSpec::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  if (!text.empty() && text.front() == '[') return from_matrix(parse_matrix(text));
  CoxeterSpec result;
  bool first = true;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == 'x' || text[i] == 'X' || text[i] == '*') {
      auto part = irreducible_preset(text.substr(start, i - start));
      result = first ? part : product(result, part);
      first = false;
      start = i + 1;
    }
  }
  result.validate();
  return result;
}

CoxeterSystem CoxeterSystem::build(const CoxeterSpec& spec, std::size_t cap) {
  spec.validate();
  const int n = spec.rank();
  const RootSystem rs = build_roots(spec, cap);
  const std::size_t nroots = rs.roots.size();

  // Elements as permutations of the roots, keyed by the images of the simple roots.
  std::vector<std::vector<std::uint32_t>> perms;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, PermHash> index;
  auto key_of = [&](const std::vector<std::uint32_t>& p) {
    std::vector<std::uint32_t> k(n);
    for (int i = 0; i < n; ++i) k[i] = p[rs.simple[i]];
    return k;
  };
  std::vector<std::uint32_t> id(nroots);
  std::iota(id.begin(), id.end(), 0u);
  index.emplace(key_of(id), 0u);
  perms.push_back(id);
  std::vector<int> depth{0};
  std::vector<std::uint32_t> left_old;
  for (std::size_t k = 0; k < perms.size(); ++k) {
    for (int s = 0; s < n; ++s) {
      std::vector<std::uint32_t> p(nroots);
      for (std::size_t r = 0; r < nroots; ++r) p[r] = rs.gen_perm[s][perms[k][r]];
      auto key = key_of(p);
      auto it = index.find(key);
      std::uint32_t idx;
      if (it == index.end()) {
        if (perms.size() >= cap)
          throw CoxeterError("enumeration cap of " + std::to_string(cap) +
                             " elements exceeded: group is infinite or too large");
        idx = static_cast<std::uint32_t>(perms.size());
        index.emplace(std::move(key), idx);
        perms.push_back(std::move(p));
        depth.push_back(depth[k] + 1);
      } else {
        idx = it->second;
      }
      left_old.push_back(idx);
    }
  }
  const std::size_t size = perms.size();

  // Canonical words: w = s_min . NF(s_min w) with s_min the smallest left descent.
  std::vector<Word> words_old(size);
  for (std::size_t k = 1; k < size; ++k) {  // BFS order is nondecreasing in length
    for (int s = 0; s < n; ++s) {
      const auto sw = left_old[k * n + s];
      if (depth[sw] < depth[k]) {
        Word w{s};
        w.insert(w.end(), words_old[sw].begin(), words_old[sw].end());
        words_old[k] = std::move(w);
        break;
      }
    }
  }
  std::vector<std::uint32_t> order(size);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (depth[a] != depth[b]) return depth[a] < depth[b];
    return words_old[a] < words_old[b];
  });
  std::vector<std::uint32_t> new_of(size);
  for (std::size_t i = 0; i < size; ++i) new_of[order[i]] = static_cast<std::uint32_t>(i);

  CoxeterSystem sys;
  sys.spec_ = spec;
  sys.rank_ = n;
  sys.length_.resize(size);
  sys.words_.resize(size);
  sys.left_.resize(size * n);
  sys.right_.resize(size * n);
  sys.inverse_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto old = order[i];
    sys.length_[i] = depth[old];
    sys.words_[i] = words_old[old];
    for (int s = 0; s < n; ++s) sys.left_[i * n + s] = new_of[left_old[old * n + s]];
    const auto& p = perms[old];
    for (int s = 0; s < n; ++s) {
      std::vector<std::uint32_t> q(nroots);
      for (std::size_t r = 0; r < nroots; ++r) q[r] = p[rs.gen_perm[s][r]];
      sys.right_[i * n + s] = new_of[index.at(key_of(q))];
    }
    std::vector<std::uint32_t> inv(nroots);
    for (std::size_t r = 0; r < nroots; ++r) inv[p[r]] = static_cast<std::uint32_t>(r);
    sys.inverse_[i] = new_of[index.at(key_of(inv))];
  }
  const int maxlen = sys.length_.back();
  sys.level_start_.assign(static_cast<std::size_t>(maxlen) + 2, size);
  for (std::size_t i = size; i-- > 0;) sys.level_start_[sys.length_[i]] = i;
  return sys;
}

int CoxeterSystem::first_left_descent(Elt w) const {
  for (int s = 0; s < rank_; ++s)
    if (is_left_descent(w, s)) return s;
  return -1;
}

Elt CoxeterSystem::from_word(std::span<const int> word) const {
  Elt w = identity();
  for (int s : word) {
    if (s < 0 || s >= rank_) throw CoxeterError("generator index out of range in word");
    w = right(w, s);
  }
  return w;
}

Elt CoxeterSystem::multiply(Elt x, Elt y) const {
  for (int s : words_[y]) x = right(x, s);
  return x;
}

std::vector<std::size_t> CoxeterSystem::length_histogram() const {
  std::vector<std::size_t> h(static_cast<std::size_t>(max_length()) + 1, 0);
  for (int l : length_) ++h[l];
  return h;
}

Elt CoxeterSystem::apply_graph_automorphism(Elt w, std::span<const int> perm) const {
  Word mapped;
  mapped.reserve(words_[w].size());
  for (int s : words_[w]) mapped.push_back(perm[s]);
  return from_word(mapped);
}

BruhatOrder::BruhatOrder(const CoxeterSystem& sys)
    : n_(sys.size()), words_per_row_((sys.size() + 63) / 64), rows_(n_ * words_per_row_, 0) {
  rows_[0] = 1;  // identity
  for (Elt w = 1; w < n_; ++w) {
    const int s = sys.first_left_descent(w);
    const Elt sw = sys.left(s, w);
    std::uint64_t* dst = &rows_[static_cast<std::size_t>(w) * words_per_row_];
    const std::uint64_t* src = &rows_[static_cast<std::size_t>(sw) * words_per_row_];
    for (std::size_t k = 0; k < words_per_row_; ++k) {
      std::uint64_t bits = src[k];
      dst[k] |= bits;
      while (bits) {
        const int b = std::countr_zero(bits);
        bits &= bits - 1;
        const Elt y = static_cast<Elt>(k * 64 + b);
        const Elt sy = sys.left(s, y);
        dst[sy >> 6] |= std::uint64_t{1} << (sy & 63);
      }
    }
  }
}

std::vector<Elt> BruhatOrder::below(Elt w) const {
  std::vector<Elt> out;
  const std::uint64_t* row = &rows_[static_cast<std::size_t>(w) * words_per_row_];
  for (std::size_t k = 0; k < words_per_row_; ++k) {
    std::uint64_t bits = row[k];
    while (bits) {
      out.push_back(static_cast<Elt>(k * 64 + std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

std::size_t BruhatOrder::interval_size(Elt w) const {
  std::size_t c = 0;
  const std::uint64_t* row = &rows_[static_cast<std::size_t>(w) * words_per_row_];
  for (std::size_t k = 0; k < words_per_row_; ++k) c += static_cast<std::size_t>(std::popcount(row[k]));
  return c;
}

bool bruhat_leq_by_subwords(const CoxeterSystem& sys, Elt y, Elt w) {
  // Elements reachable as products of reduced subexpressions of word(w).
  std::vector<char> reach(sys.size(), 0);
  reach[sys.identity()] = 1;
  for (int s : sys.word(w)) {
    std::vector<char> next = reach;
    for (Elt x = 0; x < sys.size(); ++x)
      if (reach[x]) {
        const Elt xs = sys.right(x, s);
        if (sys.length(xs) > sys.length(x)) next[xs] = 1;
      }
    reach.swap(next);
  }
  return reach[y] != 0;
}

GeneratorClasses generator_classes(const CoxeterSpec& spec) {
  const int n = spec.rank();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (spec.m[i][j] % 2 == 1) parent[find(i)] = find(j);
  GeneratorClasses gc;
  gc.class_of.assign(n, -1);
  std::vector<int> root_class(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (root_class[r] < 0) {
      root_class[r] = gc.count();
      gc.members.emplace_back();
    }
    gc.class_of[i] = root_class[r];
    gc.members[root_class[r]].push_back(i);
  }
  return gc;
}

std::vector<ConjugacyClass> conjugacy_classes(const CoxeterSystem& sys) {
  std::vector<char> seen(sys.size(), 0);
  std::vector<ConjugacyClass> out;
  for (Elt w = 0; w < sys.size(); ++w) {
    if (seen[w]) continue;
    ConjugacyClass c{w, 0, {w}};
    seen[w] = 1;
    for (std::size_t k = 0; k < c.elements.size(); ++k) {
      for (int s = 0; s < sys.rank(); ++s) {
        const Elt x = sys.right(sys.left(s, c.elements[k]), s);
        if (!seen[x]) {
          seen[x] = 1;
          c.elements.push_back(x);
        }
      }
    }
    std::sort(c.elements.begin(), c.elements.end());
    c.size = c.elements.size();
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> class_swapping_automorphism(const CoxeterSpec& spec, const GeneratorClasses& gc) {
  const int n = spec.rank();
  if (gc.count() != 2 || n > 8) return {};
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (gc.class_of[perm[i]] == gc.class_of[i]) ok = false;
      for (int j = 0; j < n && ok; ++j)
        if (spec.m[perm[i]][perm[j]] != spec.m[i][j]) ok = false;
    }
    if (ok) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {};
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s.push_back('.');
    s += std::to_string(w[i] + 1);
  }
  return s;
}

Word word_from_string(std::string_view s) {
  Word w;
  if (s == "e" || s.empty()) return w;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '.') {
      w.push_back(std::stoi(std::string(s.substr(start, i - start))) - 1);
      start = i + 1;
    }
  }
  return w;
}

}  // namespace klc
