#pragma once

#include "qid/symcore/graded_serialize.hpp"

namespace qid::brst {

enum class Generator { A, omega, omega_star, h, psi };

inline const char* generator_name(Generator g) {
  switch (g) {
    case Generator::A: return "A";
    case Generator::omega: return "omega";
    case Generator::omega_star: return "omega-star";
    case Generator::h: return "h";
    case Generator::psi: return "psi";
  }
  return "?";
}

inline Generator parse_generator(const std::string& s) {
  for (auto g : {Generator::A, Generator::omega, Generator::omega_star, Generator::h, Generator::psi})
    if (s == generator_name(g)) return g;
  throw std::invalid_argument("unknown BRST field: " + s);
}

/// The generator as a single atom with default labels (A_μ^M, ω^S, ω*_R, h_R, ψ).
inline GradedAtom generator_atom(Generator g, bool fermionic_psi = true) {
  switch (g) {
    case Generator::A: return atoms::gauge(lor_lo("mu"), inn_up("M"));
    case Generator::omega: return atoms::ghost(inn_up("S"));
    case Generator::omega_star: return atoms::antighost(inn_lo("R"));
    case Generator::h: return atoms::aux(inn_lo("R"));
    case Generator::psi: return atoms::matter(fermionic_psi);
  }
  throw std::invalid_argument("unknown generator");
}

namespace detail {

inline GradedAtom with_d(GradedAtom a, std::vector<IndexLabel> d) {
  a.d = std::move(d);
  return a;
}

/// −ω^K ∇_K X
inline GradedExpr transport(const GradedAtom& x) {
  return GradedExpr::word({atoms::ghost(inn_up("K")), with_d(x, {inn_lo("K")})}, -1);
}

/// s on a bare generator.
inline GradedExpr s_atom(const GradedAtom& a) {
  switch (a.sp) {
    case Species::A: {
      const auto& mu = a.idx.at(0);
      const auto& M = a.idx.at(1);
      return GradedExpr::atom(with_d(atoms::ghost(M), {mu})) +
             GradedExpr::word({atoms::gauge(mu, inn_up("K")), with_d(atoms::ghost(M), {inn_lo("K")})}) + transport(a);
    }
    case Species::omega_star: return GradedExpr::atom(atoms::aux(a.idx.at(0)), -1);
    case Species::omega: return transport(a);
    case Species::h: return {};
    case Species::psi: return transport(a);
    default: break;
  }
  throw StructuralError("BRST variation undefined for atom '" + a.name + "'");
}

/// Term-by-term rendering without normalization.
inline std::string raw_latex(const GradedExpr& e) {
  if (e.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    std::string body = latex::scalars(t.scalars);
    for (size_t i = 0; i < t.atoms.size(); ++i) body += (i ? "\\cdot " : "") + latex::atom(t.atoms[i]) + " ";
    std::string coeff = latex::rational(t.coeff, first);
    if (body.empty() && (coeff.empty() || coeff == "-" || coeff == "+")) coeff += "1";
    out += coeff + body;
    first = false;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace detail

/// Left graded derivation: s(a·b) = s(a)·b + (−1)^{|a|} a·s(b); commutes with ∂ and ∇.
inline GradedExpr s(const GradedExpr& e) {
  GradedExpr out;
  for (const auto& t : e.terms()) {
    auto used = qid::detail::names_in(t);
    bool odd = false;
    for (size_t j = 0; j < t.atoms.size(); ++j) {
      auto rep = detail::s_atom(t.atoms[j].bare());
      for (auto& rt : rep.terms()) qid::detail::freshen_dummies(rt, used);
      rep = apply_derivatives(rep, t.atoms[j].d);
      GradedExpr left = GradedExpr::scalar(odd ? -t.coeff : t.coeff, t.scalars);
      for (size_t i = 0; i < j; ++i) left = left * GradedExpr::atom(t.atoms[i]);
      GradedExpr right = GradedExpr::scalar(1);
      for (size_t i = j + 1; i < t.atoms.size(); ++i) right = right * GradedExpr::atom(t.atoms[i]);
      for (const auto& x : left.terms())
        for (const auto& r : rep.terms())
          for (const auto& y : right.terms()) {
            GradedTerm u{x.coeff * r.coeff * y.coeff, x.scalars * r.scalars * y.scalars, x.atoms};
            u.atoms.insert(u.atoms.end(), r.atoms.begin(), r.atoms.end());
            u.atoms.insert(u.atoms.end(), y.atoms.begin(), y.atoms.end());
            out.terms().push_back(std::move(u));
          }
      odd ^= t.atoms[j].odd;
    }
  }
  return out;
}

struct Report {
  std::string subject;
  GradedExpr first;     // s X, normalized
  GradedExpr expanded;  // raw expansion of the checked expression
  GradedExpr residue;   // normalized result, empty on success
  [[nodiscard]] bool ok() const { return residue.empty(); }
  [[nodiscard]] std::vector<std::string> trace() const {
    return {"s X = " + to_latex(first), "expansion = " + detail::raw_latex(expanded), "result = " + to_latex(residue)};
  }
};

inline Report verify_nilpotent(const GradedExpr& x, std::string subject) {
  Report r;
  r.subject = std::move(subject);
  r.first = graded_normalize(s(x));
  r.expanded = s(s(x));
  r.residue = graded_normalize(r.expanded);
  return r;
}

inline Report verify_nilpotent(Generator g, bool fermionic_psi = true) {
  return verify_nilpotent(GradedExpr::atom(generator_atom(g, fermionic_psi)), generator_name(g));
}

/// f^R = ∂^μ A_μ^R
inline GradedExpr default_gauge_condition() {
  auto a = atoms::gauge(lor_lo("nu"), inn_up("R"));
  a.d = {lor_up("nu")};
  return GradedExpr::atom(a);
}

/// ℱ^R_S ω^S = ∂^μ(∂_μω^R + A_μ^K∇_Kω^R − ∇_S A_μ^R ω^S)
inline GradedExpr faddeev_popov_ghost_term() {
  using namespace atoms;
  auto inner = GradedExpr::atom(detail::with_d(ghost(inn_up("R")), {lor_lo("nu")})) +
               GradedExpr::word({gauge(lor_lo("nu"), inn_up("K")), detail::with_d(ghost(inn_up("R")), {inn_lo("K")})}) -
               GradedExpr::word({detail::with_d(gauge(lor_lo("nu"), inn_up("R")), {inn_lo("T")}), ghost(inn_up("T"))});
  return apply_derivative(inner, lor_up("nu"));
}

struct ExactnessReport {
  GradedExpr delta;        // s f
  GradedExpr lhs;          // Λ²(ω*_R Δ^R + h_R f^R + ξ/2 h_R h^R)
  GradedExpr s_psi;        // s Ψ
  GradedExpr residue;      // lhs − sΨ
  GradedExpr ghost_match;  // Δ − ℱω, only for the default condition
  GradedExpr s_s_psi;      // s(sΨ)
  [[nodiscard]] bool ok() const { return residue.empty() && ghost_match.empty() && s_s_psi.empty(); }
};

/// Ψ = −Λ²(ω*_R f^R + ξ/2 ω*_R h^R)
inline GradedExpr gauge_fermion(const GradedExpr& f, bool with_xi = true) {
  auto L2 = ScalarMonomial::of(symbol_key(sym::Lambda), 2);
  auto psi = GradedExpr::atom(atoms::antighost(inn_lo("R"))) * f * Rational(-1);
  if (with_xi)
    psi -= GradedExpr::word({atoms::antighost(inn_lo("R")), atoms::aux(inn_up("R"))}, Rational(1, 2),
                            ScalarMonomial::of(symbol_key(sym::xi)));
  return psi * L2;
}

/// Verifies Λ²(ω*Δ + hf + ξ/2 hh) = sΨ for a gauge condition linear in A with free inner label R.
inline ExactnessReport exactness_check(const GradedExpr& f = default_gauge_condition(), bool with_xi = true) {
  for (const auto& t : f.terms()) {
    int nA = 0;
    for (const auto& a : t.atoms) {
      if (a.sp != Species::A) throw UnsupportedCase("gauge condition must be built from A alone");
      ++nA;
    }
    if (nA != 1) throw UnsupportedCase("gauge condition must be linear in A");
  }
  ExactnessReport r;
  auto L2 = ScalarMonomial::of(symbol_key(sym::Lambda), 2);
  r.delta = graded_normalize(s(f));
  auto lhs = GradedExpr::atom(atoms::antighost(inn_lo("R"))) * r.delta + GradedExpr::atom(atoms::aux(inn_lo("R"))) * f;
  if (with_xi)
    lhs += GradedExpr::word({atoms::aux(inn_lo("R")), atoms::aux(inn_up("R"))}, Rational(1, 2), ScalarMonomial::of(symbol_key(sym::xi)));
  r.lhs = graded_normalize(lhs * L2);
  auto psi = gauge_fermion(f, with_xi);
  r.s_psi = graded_normalize(s(psi));
  r.residue = graded_normalize(r.lhs - r.s_psi);
  if (is_zero(f - default_gauge_condition())) r.ghost_match = graded_normalize(r.delta - faddeev_popov_ghost_term());
  r.s_s_psi = graded_normalize(s(s(psi)));
  return r;
}

}  // namespace qid::brst
