#pragma once

#include "qid/symcore/tensor_expr.hpp"

#include <optional>

namespace qid::rules {

enum class LegKind : unsigned char { gauge, ghost_in, ghost_out };

/// External line: momenta k_id, K_id (all incoming) and its index slots.
struct Leg {
  int id = 1;
  LegKind kind = LegKind::gauge;
  std::optional<IndexLabel> lorentz;
  IndexLabel inner;

  [[nodiscard]] std::string name() const { return std::to_string(id); }
  [[nodiscard]] TensorAtom k(const IndexLabel& l) const { return mom(name(), l); }
  [[nodiscard]] TensorAtom K(const IndexLabel& l) const { return mom(name(), l); }
};

inline Leg gauge_leg(int id, const std::string& mu, const std::string& M) {
  return {id, LegKind::gauge, lor_lo(mu), inn_up(M)};
}
inline Leg ghost_leg(int id, LegKind kind, const std::string& R) { return {id, kind, std::nullopt, inn_up(R)}; }

/// Σ_legs k = 0 in one space.
struct Constraint {
  Space space;
  std::vector<std::string> legs;
};

struct RuleResult {
  TensorExpr expr;
  std::vector<Constraint> constraints;
};

namespace detail {

inline std::vector<Constraint> conservation(const std::vector<Leg>& legs) {
  std::vector<std::string> ids;
  for (const auto& l : legs) ids.push_back(l.name());
  return {{Space::lorentz, ids}, {Space::inner, ids}};
}

inline void require(const std::vector<Leg>& legs, const std::vector<LegKind>& kinds, const char* what) {
  if (legs.size() != kinds.size())
    throw StructuralError(std::string(what) + " needs " + std::to_string(kinds.size()) + " legs");
  for (size_t i = 0; i < legs.size(); ++i) {
    if (legs[i].kind != kinds[i]) throw StructuralError(std::string(what) + ": wrong kind for leg " + legs[i].name());
    if ((legs[i].kind == LegKind::gauge) != legs[i].lorentz.has_value())
      throw StructuralError(std::string(what) + ": leg " + legs[i].name() + " has the wrong index slots");
  }
}

inline ScalarMonomial lambda2() { return ScalarMonomial::of(symbol_key(sym::Lambda), 2); }

inline IndexLabel lo(const Leg& l) { return *l.lorentz; }

}  // namespace detail

/// (η_{μν} − (1−ξ) k_μ k_ν / k²) δ^{MN} / (k² − iε). With no ξ given the gauge parameter stays symbolic.
inline TensorExpr gauge_propagator(std::optional<Rational> xi, const std::string& k, const IndexLabel& mu,
                                   const IndexLabel& M, const IndexLabel& nu, const IndexLabel& N) {
  auto prop = ScalarMonomial::of(prop_key(k));
  TensorExpr one_minus_xi = xi ? TensorExpr::scalar(1 - *xi) : TensorExpr::scalar(1) - TensorExpr::symbol(sym::xi);
  auto inv_k2 = ScalarMonomial::of(dot_key(k, k, Space::lorentz), -1);
  TensorExpr body = TensorExpr::product({eta(mu, nu)}) -
                    one_minus_xi * TensorExpr::product({mom(k, mu), mom(k, nu)}, 1, inv_k2);
  return canonicalize(body * TensorExpr::product({delta(M, N)}, 1, prop));
}

inline TensorExpr ghost_propagator(const std::string& k, const IndexLabel& R, const IndexLabel& S) {
  return canonicalize(TensorExpr::product({delta(R, S)}, 1, ScalarMonomial::of(prop_key(k))));
}

/// The three-gauge vertex exactly as tabulated (cyclic in the legs only).
inline TensorExpr vertex3_published(const std::vector<Leg>& legs) {
  detail::require(legs, {LegKind::gauge, LegKind::gauge, LegKind::gauge}, "vertex3");
  const Leg &a = legs[0], &b = legs[1], &c = legs[2];
  auto mu = detail::lo(a), nu = detail::lo(b), la = detail::lo(c);
  auto M = a.inner, N = b.inner, L = c.inner;
  auto E = [](const IndexLabel& x, const IndexLabel& y) { return eta(x, y); };
  TensorExpr e = TensorExpr::product({a.K(L), delta(M, N), b.k(la), E(mu, nu)}) -
                 TensorExpr::product({a.K(L), delta(M, N), b.k(mu), E(nu, la)}) +
                 TensorExpr::product({b.K(M), delta(N, L), c.k(mu), E(nu, la)}) -
                 TensorExpr::product({b.K(M), delta(N, L), c.k(nu), E(la, mu)}) +
                 TensorExpr::product({c.K(N), delta(L, M), a.k(nu), E(la, mu)}) -
                 TensorExpr::product({c.K(N), delta(L, M), a.k(la), E(mu, nu)});
  return canonicalize(e * Rational(-2) * detail::lambda2());
}

/// Bose-symmetric three-gauge vertex: the tabulated form averaged with its 1↔2 image.
inline RuleResult vertex3(const std::vector<Leg>& legs) {
  auto p = vertex3_published(legs);
  auto q = vertex3_published({legs[1], legs[0], legs[2]});
  return {canonicalize((p + q) * Rational(1, 2)), detail::conservation(legs)};
}

inline RuleResult vertex4(const std::vector<Leg>& legs) {
  detail::require(legs, {LegKind::gauge, LegKind::gauge, LegKind::gauge, LegKind::gauge}, "vertex4");
  const Leg &l1 = legs[0], &l2 = legs[1], &l3 = legs[2], &l4 = legs[3];
  auto mu = detail::lo(l1), nu = detail::lo(l2), rho = detail::lo(l3), sg = detail::lo(l4);
  auto M = l1.inner, N = l2.inner, R = l3.inner, S = l4.inner;
  auto P = [](TensorAtom x, TensorAtom y, TensorAtom d) { return TensorExpr::product({x, y, d}); };
  auto EE = [](const IndexLabel& a, const IndexLabel& b, const IndexLabel& c, const IndexLabel& d) {
    return TensorExpr::product({eta(a, b), eta(c, d)});
  };
  TensorExpr g1 = P(l1.K(R), l2.K(S), delta(M, N)) - P(l2.K(S), l3.K(M), delta(N, R)) +
                  P(l3.K(M), l4.K(N), delta(R, S)) - P(l1.K(R), l4.K(N), delta(M, S));
  TensorExpr g2 = P(l1.K(S), l2.K(R), delta(M, N)) - P(l1.K(S), l3.K(N), delta(M, R)) +
                  P(l3.K(N), l4.K(M), delta(R, S)) - P(l2.K(R), l4.K(M), delta(N, S));
  TensorExpr g3 = P(l1.K(N), l3.K(S), delta(M, R)) - P(l1.K(N), l4.K(R), delta(M, S)) +
                  P(l2.K(M), l4.K(R), delta(N, S)) - P(l2.K(M), l3.K(S), delta(N, R));
  TensorExpr e = g1 * (EE(mu, nu, rho, sg) - EE(mu, sg, nu, rho)) + g2 * (EE(mu, nu, rho, sg) - EE(mu, rho, nu, sg)) +
                 g3 * (EE(mu, rho, nu, sg) - EE(mu, sg, nu, rho));
  return {canonicalize(e * Rational(-1) * detail::lambda2()), detail::conservation(legs)};
}

/// Legs: (outgoing ghost R, incoming ghost S, gauge μM).
inline RuleResult vertex_ghost(const std::vector<Leg>& legs) {
  detail::require(legs, {LegKind::ghost_out, LegKind::ghost_in, LegKind::gauge}, "vertex_ghost");
  const Leg &out = legs[0], &in = legs[1], &g = legs[2];
  auto R = out.inner, S = in.inner, M = g.inner, mu = detail::lo(g);
  TensorExpr e = TensorExpr::product({in.K(M), delta(R, S), out.k(mu)}) - TensorExpr::product({g.K(S), delta(M, R), out.k(mu)});
  return {canonicalize(e * Rational(-1) * detail::lambda2()), detail::conservation(legs)};
}

/// Eliminates the momentum of `leg` in both spaces using the conservation relations.
inline TensorExpr eliminate(const RuleResult& r, const std::string& leg) {
  TensorExpr e = r.expr;
  for (const auto& c : r.constraints) {
    std::vector<std::pair<Rational, std::string>> combo;
    for (const auto& l : c.legs)
      if (l != leg) combo.emplace_back(-1, l);
    e = substitute_momentum(e, leg, c.space, combo);
  }
  return e;
}

/// Standard leg sets used by the CLI.
inline std::vector<Leg> default_gauge_legs(int n) {
  static const char* lor[] = {"mu", "nu", "lambda", "sigma"};
  static const char* inn[] = {"M", "N", "L", "S"};
  static const char* lor4[] = {"mu", "nu", "rho", "sigma"};
  static const char* inn4[] = {"M", "N", "R", "S"};
  std::vector<Leg> out;
  for (int i = 0; i < n; ++i) out.push_back(gauge_leg(i + 1, n == 4 ? lor4[i] : lor[i], n == 4 ? inn4[i] : inn[i]));
  return out;
}

inline std::vector<Leg> default_ghost_legs() {
  return {ghost_leg(1, LegKind::ghost_out, "R"), ghost_leg(2, LegKind::ghost_in, "S"), gauge_leg(3, "mu", "M")};
}

}  // namespace qid::rules
