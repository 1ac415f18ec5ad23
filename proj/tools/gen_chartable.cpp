#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "klcells/reps.hpp"

using namespace klc;

namespace {

constexpr double kTol = 1e-6;

std::int64_t round_checked(double x, const std::string& what) {
  const double r = std::round(x);
  if (std::abs(x - r) > kTol) throw std::runtime_error(what + " is not an integer: " + std::to_string(x));
  return static_cast<std::int64_t>(r);
}

// Linear action on the span of the simple roots, through the Tits form.
struct ReflectionRep {
  std::vector<Eigen::MatrixXd> gens;

  explicit ReflectionRep(const CoxeterSpec& spec) {
    const int n = spec.rank();
    Eigen::MatrixXd B(n, n);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) B(s, t) = -std::cos(std::numbers::pi / spec.m[s][t]);
    for (int s = 0; s < n; ++s) {
      Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
      for (int t = 0; t < n; ++t) g(s, t) -= 2 * B(s, t);
      gens.push_back(g);
    }
  }

  Eigen::MatrixXd of(const Word& w) const {
    const auto n = gens[0].rows();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (int s : w) m = m * gens[s];
    return m;
  }
};

// Coefficients of det(1 - q g), rounded.
std::vector<std::int64_t> char_poly_at(const Eigen::MatrixXd& g) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(g.cast<std::complex<double>>());
  std::vector<std::complex<double>> c{1.0};
  for (int i = 0; i < g.rows(); ++i) {
    const auto lam = es.eigenvalues()[i];
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += c[k];
      next[k + 1] -= lam * c[k];
    }
    c = std::move(next);
  }
  std::vector<std::int64_t> out;
  for (auto z : c) out.push_back(round_checked(z.real(), "characteristic polynomial coefficient"));
  return out;
}

// Lowest degree of the symmetric algebra containing chi.
int b_value(const std::vector<ConjugacyClass>& classes, const std::vector<std::vector<std::int64_t>>& polys,
            const ClassFunction& chi, std::size_t order, int max_degree) {
  std::vector<__int128> total(max_degree + 1, 0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto& p = polys[c];
    std::vector<__int128> inv(max_degree + 1, 0);
    inv[0] = 1;
    for (int d = 1; d <= max_degree; ++d) {
      __int128 acc = 0;
      for (std::size_t k = 1; k < p.size() && static_cast<int>(k) <= d; ++k) acc -= p[k] * inv[d - k];
      inv[d] = acc;
    }
    for (int d = 0; d <= max_degree; ++d) total[d] += static_cast<__int128>(classes[c].size) * chi[c] * inv[d];
  }
  for (int d = 0; d <= max_degree; ++d) {
    if (total[d] % static_cast<__int128>(order) != 0) throw std::runtime_error("Molien coefficient not integral");
    if (total[d] != 0) return d;
  }
  return -1;
}

std::vector<ClassFunction> burnside(const CoxeterSystem& W, const std::vector<ConjugacyClass>& classes) {
  const std::size_t r = classes.size();
  std::vector<std::size_t> class_of(W.size());
  for (std::size_t c = 0; c < r; ++c)
    for (Elt w : classes[c].elements) class_of[w] = c;
  // A_i(j, k) = #{x in C_i : x^-1 z_k in C_j}
  std::vector<Eigen::MatrixXd> A(r, Eigen::MatrixXd::Zero(r, r));
  for (std::size_t k = 0; k < r; ++k) {
    const Elt z = classes[k].representative;
    for (Elt x = 0; x < W.size(); ++x) A[class_of[x]](class_of[W.multiply(W.inverse(x), z)], k) += 1;
  }
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> coef(1, 1000);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(r, r);
  for (std::size_t i = 0; i < r; ++i) M += coef(rng) * A[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  std::vector<ClassFunction> rows;
  for (std::size_t e = 0; e < r; ++e) {
    Eigen::VectorXcd omega = es.eigenvectors().col(static_cast<Eigen::Index>(e));
    omega /= omega(0);
    double norm = 0;
    for (std::size_t j = 0; j < r; ++j) norm += std::norm(omega(j)) / classes[j].size;
    const double deg = std::sqrt(static_cast<double>(W.size()) / norm);
    ClassFunction chi;
    for (std::size_t j = 0; j < r; ++j) {
      const auto v = deg * omega(j) / static_cast<double>(classes[j].size);
      if (std::abs(v.imag()) > kTol) throw std::runtime_error("non-real character value");
      chi.push_back(round_checked(v.real(), "character value"));
    }
    rows.push_back(std::move(chi));
  }
  return rows;
}

std::size_t class_index(const std::vector<ConjugacyClass>& classes, Elt w) {
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (std::binary_search(classes[c].elements.begin(), classes[c].elements.end(), w)) return c;
  throw std::logic_error("element outside every class");
}

std::vector<Elt> generate(const CoxeterSystem& W, const std::vector<Elt>& gens) {
  std::set<Elt> seen{0};
  std::vector<Elt> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (Elt g : gens) {
      const Elt x = W.multiply(queue[i], g);
      if (seen.insert(x).second) queue.push_back(x);
    }
  return {seen.begin(), seen.end()};
}

// Which of the two 6-dimensional characters of F4 is obtained by truncated
// induction of the sign character from the reflection subgroup A2 x A2 that
// contains s1 and the reflection in the highest root.
std::size_t f4_j_induced_six(const CoxeterSystem& W, const std::vector<ConjugacyClass>& classes,
                             const std::vector<ClassFunction>& rows, const std::vector<int>& bvals,
                             const std::vector<std::vector<std::int64_t>>& polys) {
  const Elt s1 = W.from_word(Word{0}), s2 = W.from_word(Word{1}), s3 = W.from_word(Word{2}), s4 = W.from_word(Word{3});
  Elt s0 = 0;
  for (Elt w = 0; w < W.size(); ++w) {
    const Elt t = W.multiply(W.multiply(w, s1), W.inverse(w));
    if (t == s1) continue;
    bool ok = true;
    for (Elt g : {s2, s3, s4}) ok = ok && W.multiply(t, g) == W.multiply(g, t);
    const Elt p = W.multiply(t, s1);
    ok = ok && p != 0 && W.multiply(p, p) != 0 && W.multiply(W.multiply(p, p), p) == 0;
    if (ok) {
      s0 = t;
      break;
    }
  }
  if (s0 == 0) throw std::runtime_error("no highest-root reflection found");
  const auto sub = generate(W, {s0, s1, s3, s4});
  if (sub.size() != 36) throw std::runtime_error("reflection subgroup has the wrong order");
  ClassFunction ind(classes.size(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::size_t meet = 0;
    for (Elt h : sub)
      if (std::binary_search(classes[c].elements.begin(), classes[c].elements.end(), h)) ++meet;
    const std::size_t centralizer = W.size() / classes[c].size;
    const std::int64_t sign = W.length(classes[c].representative) % 2 ? -1 : 1;
    ind[c] = sign * static_cast<std::int64_t>(centralizer * meet / sub.size());
  }
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i][0] != 6 || bvals[i] != 6) continue;
    __int128 ip = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) ip += static_cast<__int128>(classes[c].size) * ind[c] * rows[i][c];
    if (ip == 0) continue;
    // coefficient of q^6 in the fake degree
    std::vector<__int128> total(7, 0);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      std::vector<__int128> inv(7, 0);
      inv[0] = 1;
      for (int d = 1; d <= 6; ++d)
        for (std::size_t k = 1; k < polys[c].size() && static_cast<int>(k) <= d; ++k) inv[d] -= polys[c][k] * inv[d - k];
      total[6] += static_cast<__int128>(classes[c].size) * rows[i][c] * inv[6];
    }
    if (total[6] != 0) hits.push_back(i);
  }
  if (hits.size() != 1) throw std::runtime_error("truncated induction does not single out one 6-dimensional character");
  return hits[0];
}

std::vector<Irreducible> label_f4(const CoxeterSystem& W, const std::vector<ConjugacyClass>& classes,
                                  const std::vector<ClassFunction>& rows, const std::vector<int>& bvals,
                                  const std::vector<std::vector<std::int64_t>>& polys) {
  const std::size_t c1 = class_index(classes, W.from_word(Word{0}));
  const std::size_t c3 = class_index(classes, W.from_word(Word{2}));
  const std::map<std::pair<int, int>, std::string> single = {
      {{1, 0}, "1_1"},  {{1, 24}, "1_4"}, {{4, 1}, "4_2"},  {{4, 8}, "4_1"},   {{4, 13}, "4_5"},
      {{9, 2}, "9_1"},  {{9, 10}, "9_4"}, {{12, 4}, "12_1"}, {{16, 5}, "16_1"}};
  // (primed, double primed); primed means chi(s3) > chi(s1)
  const std::map<std::pair<int, int>, std::pair<std::string, std::string>> pairs = {
      {{1, 12}, {"1_3", "1_2"}}, {{2, 4}, {"2_3", "2_1"}}, {{2, 16}, {"2_2", "2_4"}}, {{4, 7}, {"4_4", "4_3"}},
      {{8, 3}, {"8_3", "8_1"}},  {{8, 9}, {"8_2", "8_4"}}, {{9, 6}, {"9_3", "9_2"}}};
  const std::size_t six = f4_j_induced_six(W, classes, rows, bvals, polys);
  std::vector<Irreducible> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::pair<int, int> key{static_cast<int>(rows[i][0]), bvals[i]};
    std::string label;
    if (auto it = single.find(key); it != single.end()) {
      label = it->second;
    } else if (auto jt = pairs.find(key); jt != pairs.end()) {
      if (rows[i][c3] == rows[i][c1]) throw std::runtime_error("pair not separated by the reflection classes");
      label = rows[i][c3] > rows[i][c1] ? jt->second.first : jt->second.second;
    } else if (key == std::pair{6, 6}) {
      label = i == six ? "6_1" : "6_2";
    } else {
      throw std::runtime_error("unexpected degree/b pair");
    }
    out.push_back({label, rows[i], 1, bvals[i]});
  }
  return out;
}

std::vector<Irreducible> label_generic(const std::vector<ConjugacyClass>& classes, const std::vector<ClassFunction>& rows,
                                       const std::vector<int>& bvals) {
  std::vector<Irreducible> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.push_back({"phi" + std::to_string(rows[i][0]) + "," + std::to_string(bvals[i]), rows[i], 1, bvals[i]});
  std::map<std::string, std::vector<std::size_t>> same;
  for (std::size_t i = 0; i < out.size(); ++i) same[out[i].label].push_back(i);
  for (auto& [label, idx] : same) {
    if (idx.size() == 1) continue;
    // break ties by the values on the classes in table order
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return out[a].values > out[b].values; });
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]].label += std::string(k + 1, '\'');
  }
  (void)classes;
  return out;
}

std::vector<Irreducible> dihedral(const CoxeterSystem& W, const std::vector<ConjugacyClass>& classes, int m) {
  std::vector<Irreducible> out;
  auto linear = [&](const std::string& label, int sign_s, int sign_t) {
    ClassFunction chi;
    for (const auto& c : classes) {
      std::int64_t v = 1;
      for (int g : W.word(c.representative)) v *= g == 0 ? sign_s : sign_t;
      chi.push_back(v);
    }
    out.push_back({label, chi, 1, -1});
  };
  linear("1", 1, 1);
  linear("sgn", -1, -1);
  if (m % 2 == 0) {
    linear("eps1", -1, 1);
    linear("eps2", 1, -1);
  }
  // rho_j and rho_k are Galois conjugate iff gcd(j, m) = gcd(k, m)
  std::map<int, std::vector<int>> orbits;
  for (int j = 1; 2 * j < m; ++j) orbits[std::gcd(j, m)].push_back(j);
  for (const auto& [g, js] : orbits) {
    ClassFunction chi;
    for (const auto& c : classes) {
      const auto& w = W.word(c.representative);
      if (w.size() % 2 == 1) {
        chi.push_back(0);
        continue;
      }
      double v = 0;
      for (int j : js) v += 2 * std::cos(2 * std::numbers::pi * j * static_cast<double>(w.size() / 2) / m);
      chi.push_back(round_checked(v, "dihedral orbit sum"));
    }
    std::string label = "r" + std::to_string(js[0]);
    for (std::size_t k = 1; k < js.size(); ++k) label += "+r" + std::to_string(js[k]);
    out.push_back({label, chi, static_cast<int>(js.size()), -1});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate a character table for a finite Coxeter group"};
  std::string type, out;
  app.add_option("--type", type, "Coxeter type")->required();
  app.add_option("--out", out, "output JSON file")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    const auto spec = CoxeterSpec::parse(type);
    const auto W = CoxeterSystem::build(spec);
    const auto classes = conjugacy_classes(W);
    std::vector<Irreducible> rows;
    if (spec.name.rfind("I", 0) == 0) {
      rows = dihedral(W, classes, spec.m[0][1]);
    } else {
      const auto chars = burnside(W, classes);
      ReflectionRep refl(spec);
      std::vector<std::vector<std::int64_t>> polys;
      for (const auto& c : classes) polys.push_back(char_poly_at(refl.of(W.word(c.representative))));
      std::vector<int> bvals;
      for (const auto& chi : chars) bvals.push_back(b_value(classes, polys, chi, W.size(), W.max_length()));
      rows = spec.name == "F4" ? label_f4(W, classes, chars, bvals, polys) : label_generic(classes, chars, bvals);
      std::sort(rows.begin(), rows.end(), [](const Irreducible& a, const Irreducible& b) {
        return a.values[0] != b.values[0] ? a.values[0] < b.values[0] : a.label < b.label;
      });
    }
    auto j = character_table_to_json(W, classes, spec.name, rows);
    character_table_from_json(W, j);
    std::ofstream(out) << j.dump(1) << "\n";
    std::cout << spec.name << ": " << rows.size() << " rows written to " << out << "\n";
  } catch (const std::exception& e) {
    std::cerr << "gen_chartable: " << e.what() << "\n";
    return 1;
  }
}
