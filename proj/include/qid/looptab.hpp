#pragma once

#include "qid/symcore/tensor_expr.hpp"

#include <functional>
#include <tuple>

namespace qid::looptab {

/// ∫ d^4p/(2π)^4 p^{μ1}…p^{μr} / Π_j (p+q_j)^2 with q_1 = 0, q_j = k_2 + … + k_j.
struct LoopIntegral {
  int rank = 0;
  int denoms = 1;

  [[nodiscard]] std::vector<IndexLabel> labels() const;
};

/// Coefficient of the formal pole Ω₄/ε (the factor i is kept inside).
struct DivergentPart {
  TensorExpr pole_coeff;

  [[nodiscard]] TensorExpr with_pole() const {
    return pole_coeff * (ScalarMonomial::of(symbol_key(sym::Omega4)) * ScalarMonomial::of(symbol_key(sym::eps), -1));
  }
};

inline const std::vector<std::string>& numerator_names() {
  static const std::vector<std::string> n = {"mu", "nu", "rho", "sigma"};
  return n;
}

inline std::vector<IndexLabel> LoopIntegral::labels() const {
  std::vector<IndexLabel> out;
  for (int r = 0; r < rank; ++r) out.push_back(lor_up(numerator_names()[r]));
  return out;
}

inline std::string leg(int j) { return std::to_string(j); }

inline void check_supported(const LoopIntegral& I) {
  if (I.rank < 0 || I.rank > 4) throw UnsupportedCase("numerator rank " + std::to_string(I.rank) + " outside 0..4");
  if (I.denoms < 1 || I.denoms > 4)
    throw UnsupportedCase("denominator count " + std::to_string(I.denoms) + " outside 1..4");
}

/// All perfect matchings of `items`.
inline void pairings(const std::vector<int>& items, const std::function<void(const std::vector<std::pair<int, int>>&)>& f) {
  std::vector<std::pair<int, int>> cur;
  std::function<void(std::vector<int>)> rec = [&](std::vector<int> rest) {
    if (rest.empty()) {
      f(cur);
      return;
    }
    int a = rest[0];
    for (size_t j = 1; j < rest.size(); ++j) {
      std::vector<int> nxt;
      for (size_t t = 1; t < rest.size(); ++t)
        if (t != j) nxt.push_back(rest[t]);
      cur.emplace_back(a, rest[j]);
      rec(nxt);
      cur.pop_back();
    }
  };
  rec(items);
}

namespace detail {

inline std::string xname(int j) { return "x" + std::to_string(j); }

inline TensorExpr xsym(int j) { return TensorExpr::symbol(xname(j)); }

/// q_j^μ as a sum of external momenta.
inline TensorExpr offset(int j, const IndexLabel& mu) {
  TensorExpr out;
  for (int l = 2; l <= j; ++l) out += TensorExpr::atom(mom(leg(l), mu));
  return out;
}

inline TensorExpr offset_dot(int i, int j) {
  TensorExpr out;
  for (int a = 2; a <= i; ++a)
    for (int b = 2; b <= j; ++b) out += TensorExpr::scalar(1, ScalarMonomial::of(dot_key(leg(a), leg(b), Space::lorentz)));
  return out;
}

/// ∫_simplex Π x_j^{a_j} = Π a_j! / (Σ a_j + n − 1)!
inline TensorExpr integrate_simplex(const TensorExpr& e, int n) {
  TensorExpr out;
  for (auto t : e.terms()) {
    int total = 0;
    Rational num = 1;
    for (int j = 1; j <= n; ++j) {
      Exponent p = t.scalars.power(symbol_key(xname(j)));
      num *= factorial(p.p);
      total += p.p;
      t.scalars.mul(symbol_key(xname(j)), Exponent{-p.p, 0});
    }
    t.coeff *= num / factorial(total + n - 1);
    out += TensorExpr({t});
  }
  return canonicalize(out);
}

}  // namespace detail

/// Independent reduction: Feynman parameters, shift, symmetric tensor reduction and the
/// 1/ε pole of the Wick-rotated radial integral in d = 4 − ε.
inline DivergentPart reduce_oracle(const LoopIntegral& I) {
  check_supported(I);
  const int n = I.denoms, r = I.rank;
  auto labels = I.labels();
  auto s = [&](const IndexLabel& mu) {
    TensorExpr out;
    for (int j = 2; j <= n; ++j) out += detail::xsym(j) * detail::offset(j, mu);
    return out;
  };
  TensorExpr delta_sq;  // Σ x_j q_j^2 − (Σ x_j q_j)^2
  for (int j = 2; j <= n; ++j) delta_sq += detail::xsym(j) * detail::offset_dot(j, j);
  for (int i = 2; i <= n; ++i)
    for (int j = 2; j <= n; ++j) delta_sq -= detail::xsym(i) * detail::xsym(j) * detail::offset_dot(i, j);

  TensorExpr integrand;
  for (int mask = 0; mask < (1 << r); ++mask) {
    std::vector<int> loop, ext;
    for (int b = 0; b < r; ++b) (mask >> b & 1 ? loop : ext).push_back(b);
    if (loop.size() % 2) continue;
    int a = static_cast<int>(loop.size()) / 2;
    int m = a + 2 - n;
    if (m < 0) continue;
    Rational c = factorial(a + 1) / factorial(m) * (m % 2 ? -1 : 1);
    for (int j = 0; j < a; ++j) c /= 4 + 2 * j;
    TensorExpr metrics;
    pairings(loop, [&](const std::vector<std::pair<int, int>>& ps) {
      std::vector<TensorAtom> as;
      for (auto [x, y] : ps) as.push_back(eta(labels[x], labels[y]));
      metrics += TensorExpr::product(as);
    });
    TensorExpr term = metrics * c;
    for (int j = 0; j < m; ++j) term = term * delta_sq;
    for (int b : ext) term = term * (s(labels[b]) * Rational(-1));
    integrand += canonicalize(term);
  }
  auto pole = detail::integrate_simplex(integrand, n);
  return {canonicalize(pole * ScalarMonomial::of(symbol_key(sym::i)))};
}

/// The published table entries, keyed by (rank, denominators).
inline std::optional<DivergentPart> published(int rank, int denoms) {
  auto i = ScalarMonomial::of(symbol_key(sym::i));
  auto k = [](const std::string& l, const std::string& idx) { return mom(l, lor_up(idx)); };
  auto dot22 = ScalarMonomial::of(dot_key("2", "2", Space::lorentz));
  auto E = [](const std::string& a, const std::string& b) { return eta(lor_up(a), lor_up(b)); };
  if (rank == 0 && denoms == 1) return DivergentPart{};
  if (rank == 0 && denoms == 2) return DivergentPart{TensorExpr::scalar(1, i)};
  if (rank == 1 && denoms == 2) return DivergentPart{TensorExpr::product({k("2", "mu")}, Rational(-1, 2), i)};
  if (rank == 2 && denoms == 2)
    return DivergentPart{TensorExpr::product({k("2", "mu"), k("2", "nu")}, Rational(1, 3), i) +
                         TensorExpr::product({E("mu", "nu")}, Rational(-1, 12), i * dot22)};
  if (rank == 2 && denoms == 3) return DivergentPart{TensorExpr::product({E("mu", "nu")}, Rational(1, 4), i)};
  if (rank == 3 && denoms == 3) {
    TensorExpr e;
    for (auto [a, b, c] : {std::tuple{"mu", "nu", "rho"}, std::tuple{"nu", "rho", "mu"}, std::tuple{"rho", "mu", "nu"}})
      e += TensorExpr::product({E(a, b), k("2", c)}, Rational(-2, 12), i) + TensorExpr::product({E(a, b), k("3", c)}, Rational(-1, 12), i);
    return DivergentPart{canonicalize(e)};
  }
  if (rank == 4 && denoms == 4)
    return DivergentPart{TensorExpr::product({E("mu", "nu"), E("rho", "sigma")}, Rational(1, 24), i) +
                         TensorExpr::product({E("mu", "rho"), E("nu", "sigma")}, Rational(1, 24), i) +
                         TensorExpr::product({E("mu", "sigma"), E("nu", "rho")}, Rational(1, 24), i)};
  return std::nullopt;
}

inline const std::vector<std::pair<int, int>>& published_cases() {
  static const std::vector<std::pair<int, int>> c = {{0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 3}, {3, 3}, {4, 4}};
  return c;
}

/// Table lookup for the published entries, reduction oracle otherwise.
inline DivergentPart div_part(const LoopIntegral& I) {
  check_supported(I);
  if (auto p = published(I.rank, I.denoms)) return {canonicalize(p->pole_coeff)};
  return reduce_oracle(I);
}

/// Power of λ picked up by the pole under k → λk.
inline int scaling_weight(const LoopIntegral& I) { return I.rank - 2 * I.denoms + 4; }

}  // namespace qid::looptab
