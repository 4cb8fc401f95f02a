#pragma once

// Vertex factors read off from interaction monomials of the action: every way of
// attaching the external legs to the field factors, with ∂ → k and ∇ → K of the leg.

#include "qid/rules.hpp"

#include <algorithm>

namespace oracle {

using namespace qid;

enum class F { A, ghost, antighost };

struct Factor {
  F kind;
  std::optional<IndexLabel> lor;
  IndexLabel inn;
  std::vector<IndexLabel> d;
};

struct Monomial {
  Rational c;
  std::vector<Factor> f;
};

inline bool fits(F f, rules::LegKind k) {
  return (f == F::A && k == rules::LegKind::gauge) || (f == F::ghost && k == rules::LegKind::ghost_in) ||
         (f == F::antighost && k == rules::LegKind::ghost_out);
}

inline TensorExpr attach(const Monomial& m, const std::vector<rules::Leg>& legs, const std::vector<int>& who) {
  std::vector<TensorAtom> as;
  for (size_t i = 0; i < m.f.size(); ++i) {
    const auto& f = m.f[i];
    const auto& leg = legs[who[i]];
    if (f.lor) as.push_back(eta(*f.lor, *leg.lorentz));
    as.push_back(delta(f.inn, leg.inner));
    for (const auto& l : f.d) as.push_back(mom(leg.name(), l));
  }
  return TensorExpr::product(as, m.c);
}

/// prefactor · Σ_monomials Σ_attachments
inline TensorExpr vertex(const Rational& prefactor, const std::vector<Monomial>& ms, const std::vector<rules::Leg>& legs) {
  TensorExpr out;
  for (const auto& m : ms) {
    std::vector<int> who(legs.size());
    for (size_t i = 0; i < who.size(); ++i) who[i] = static_cast<int>(i);
    do {
      bool ok = true;
      for (size_t i = 0; i < who.size(); ++i) ok = ok && fits(m.f[i].kind, legs[who[i]].kind);
      if (ok) out += attach(m, legs, who);
    } while (std::next_permutation(who.begin(), who.end()));
  }
  return canonicalize(out * prefactor * ScalarMonomial::of(symbol_key(sym::Lambda), 2));
}

// −Λ² (∂_a A_b^P − ∂_b A_a^P) A^a_Q ∇^Q A^b_P
inline std::vector<Monomial> cubic() {
  return {{1, {{F::A, lor_lo("b"), inn_up("P"), {lor_lo("a")}}, {F::A, lor_up("a"), inn_lo("Q"), {}},
               {F::A, lor_up("b"), inn_lo("P"), {inn_up("Q")}}}},
          {-1, {{F::A, lor_lo("a"), inn_up("P"), {lor_lo("b")}}, {F::A, lor_up("a"), inn_lo("Q"), {}},
                {F::A, lor_up("b"), inn_lo("P"), {inn_up("Q")}}}}};
}

// −Λ²/2 (A_a^Q ∇_Q A_b^P − A_b^Q ∇_Q A_a^P) A^a_T ∇^T A^b_P
inline std::vector<Monomial> quartic() {
  return {{Rational(1, 2), {{F::A, lor_lo("a"), inn_up("Q"), {}}, {F::A, lor_lo("b"), inn_up("P"), {inn_lo("Q")}},
                            {F::A, lor_up("a"), inn_lo("T"), {}}, {F::A, lor_up("b"), inn_lo("P"), {inn_up("T")}}}},
          {Rational(-1, 2), {{F::A, lor_lo("b"), inn_up("Q"), {}}, {F::A, lor_lo("a"), inn_up("P"), {inn_lo("Q")}},
                             {F::A, lor_up("a"), inn_lo("T"), {}}, {F::A, lor_up("b"), inn_lo("P"), {inn_up("T")}}}}};
}

// −Λ² ∂^a ω*_P (A_a^Q ∇_Q ω^P − ω^Q ∇_Q A_a^P)
inline std::vector<Monomial> ghost() {
  return {{1, {{F::antighost, std::nullopt, inn_lo("P"), {lor_up("a")}}, {F::A, lor_lo("a"), inn_up("Q"), {}},
               {F::ghost, std::nullopt, inn_up("P"), {inn_lo("Q")}}}},
          {-1, {{F::antighost, std::nullopt, inn_lo("P"), {lor_up("a")}}, {F::ghost, std::nullopt, inn_up("Q"), {}},
                {F::A, lor_lo("a"), inn_up("P"), {inn_lo("Q")}}}}};
}

}  // namespace oracle
