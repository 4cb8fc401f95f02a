#pragma once

#include "qid/heatkernel.hpp"
#include "qid/innerspace.hpp"

namespace qid::renorm {

enum class Determinant { gauge, ghost };
enum class MatterKind { gauge_field, dirac, chiral, scalar_doublet, complex_scalar };

inline const char* matter_name(MatterKind k) {
  switch (k) {
    case MatterKind::gauge_field: return "gauge_field";
    case MatterKind::dirac: return "dirac";
    case MatterKind::chiral: return "chiral";
    case MatterKind::scalar_doublet: return "scalar_doublet";
    case MatterKind::complex_scalar: return "complex_scalar";
  }
  return "?";
}

inline const std::vector<MatterKind>& matter_kinds() {
  static const std::vector<MatterKind> k = {MatterKind::gauge_field, MatterKind::dirac, MatterKind::chiral,
                                            MatterKind::scalar_doublet, MatterKind::complex_scalar};
  return k;
}

struct MatterContent {
  int n_gauge = 0;
  int n_dirac = 0;
  int n_chiral = 0;
  int n_scalar_doublet = 0;
  int n_complex_scalar = 0;

  void validate() const {
    if (n_gauge < 0 || n_dirac < 0 || n_chiral < 0 || n_scalar_doublet < 0 || n_complex_scalar < 0)
      throw std::invalid_argument("matter counts must be non-negative");
  }
  [[nodiscard]] int count(MatterKind k) const {
    switch (k) {
      case MatterKind::gauge_field: return n_gauge;
      case MatterKind::dirac: return n_dirac;
      case MatterKind::chiral: return n_chiral;
      case MatterKind::scalar_doublet: return n_scalar_doublet;
      case MatterKind::complex_scalar: return n_complex_scalar;
    }
    return 0;
  }
  /// 12 gauge fields, 45 chiral fermions, one Higgs doublet
  static MatterContent standard_model(bool higgs = true) { return {12, 0, 45, higgs ? 1 : 0, 0}; }
};

/// Second-variation operator −𝒟_μ𝒟^μ + ℰ with its internal (Lorentz, spinor, multiplet) structure.
/// ℰ = ℱ^{ab} Γ_{ab}; `e_squared` holds tr(Γ_{ab}Γ_{cd}) with free lower labels a, b, c, d.
struct OneLoopOperator {
  std::string name;
  heatkernel::FluctuationOperator op;
  bool vector_inner = true;  // 𝒜 acts on inner vectors (adjoint) or scalars
  TensorExpr identity;       // tr 1 over internal indices
  TensorExpr e_squared;
  Rational weight;           // contribution i·weight·Tr Ln to the one-loop action
};

namespace detail {

inline const std::vector<IndexLabel>& abcd() {
  static const std::vector<IndexLabel> l = {lor_lo("a"), lor_lo("b"), lor_lo("c"), lor_lo("d")};
  return l;
}

/// tr over Lorentz vectors of Γ_{ab}Γ_{cd} with (Γ_{ab})_{mn} = c η_{ma}η_{nb}
inline TensorExpr vector_e_squared(const Rational& c) {
  auto e = TensorExpr::product({eta(lor_lo("m"), lor_lo("a")), eta(lor_lo("n"), lor_lo("b")), eta(lor_up("n"), lor_up("p")),
                                eta(lor_lo("p"), lor_lo("c")), eta(lor_lo("q"), lor_lo("d")), eta(lor_up("q"), lor_up("m"))},
                               c * c);
  return canonicalize(e);
}

/// tr(γ_aγ_bγ_cγ_d) = d_s(η_abη_cd − η_acη_bd + η_adη_bc), ℰ = −½ℱ^{ab}γ_aγ_b
inline TensorExpr spinor_e_squared(int spinor_dim) {
  auto E = [](const char* x, const char* y) { return eta(lor_lo(x), lor_lo(y)); };
  Rational c = Rational(spinor_dim, 4);
  return canonicalize(TensorExpr::product({E("a", "b"), E("c", "d")}, c) - TensorExpr::product({E("a", "c"), E("b", "d")}, c) +
                      TensorExpr::product({E("a", "d"), E("b", "c")}, c));
}

inline TensorExpr lorentz_identity() { return canonicalize(TensorExpr::product({eta(lor_lo("m"), lor_lo("n")), eta(lor_up("m"), lor_up("n"))})); }

inline Rational as_rational(const TensorExpr& e) {
  auto c = canonicalize(e);
  if (c.empty()) return 0;
  if (c.terms().size() != 1 || !c.terms()[0].atoms.empty() || !c.terms()[0].scalars.factors().empty())
    throw StructuralError("expected a pure number");
  return c.terms()[0].coeff;
}

/// Coefficient κ in ℱ^{ab}ℱ^{cd}T_{abcd} = κ ℱ_{μν}ℱ^{μν} for antisymmetric ℱ.
inline Rational ff_projection(const TensorExpr& T) {
  if (T.empty()) return 0;
  auto P = TensorExpr::product({eta(lor_up("a"), lor_up("c")), eta(lor_up("b"), lor_up("d"))}) -
           TensorExpr::product({eta(lor_up("a"), lor_up("d")), eta(lor_up("b"), lor_up("c"))});
  return as_rational(T * P) / 12;
}

/// a / b for single-term scalar expressions.
inline TensorExpr ratio(const TensorExpr& a, const TensorExpr& b) {
  auto cb = canonicalize(b);
  if (cb.terms().size() != 1 || !cb.terms()[0].atoms.empty()) throw StructuralError("ratio needs a scalar monomial divisor");
  ScalarMonomial inv;
  for (const auto& [k, e] : cb.terms()[0].scalars.factors()) inv.mul(k, Exponent{-e.p, -e.q});
  return canonicalize(a * TensorExpr::scalar(1 / cb.terms()[0].coeff, inv));
}

inline heatkernel::FluctuationOperator covariant(bool with_e) {
  auto f = heatkernel::generic_covariant();
  if (!with_e) f.E = GradedExpr();
  return heatkernel::from_covariant(f);
}

}  // namespace detail

/// Tr_Λ of ℱ_{μν}·ℱ^{μν} for the inner action of 𝒜 (vector or scalar form).
inline TensorExpr inner_trace_ff(bool vector_inner) {
  auto lo = std::vector<IndexLabel>{lor_lo("fa"), lor_lo("fb")};
  auto up = std::vector<IndexLabel>{lor_up("fa"), lor_up("fb")};
  auto tr = innerspace::trace_quadratic(innerspace::inner_operator("F", lo, vector_inner),
                                        innerspace::inner_operator("F", up, vector_inner));
  auto basis = GradedExpr::word({atoms::field("F", {lor_lo("fa"), lor_lo("fb"), inn_up("Q")}),
                                 atoms::field("F", {lor_up("fa"), lor_up("fb"), inn_up("Q")})});
  return innerspace::scalar_coefficient(tr, basis, innerspace::inner_ibp().norm);
}

/// Ω_D Λ^{D+2}/(D(D+2)), the normalization of Λ²∫Λ^D F·F.
inline TensorExpr action_unit() {
  return TensorExpr::scalar(1, innerspace::omega_lambda(2) * ScalarMonomial::of(dimshift_key(0), -1) *
                                   ScalarMonomial::of(dimshift_key(2), -1));
}

/// Gauge (ℰ = −2ℱ on Lorentz vectors, weight ½) and ghost (ℰ = 0, weight −1) operators.
inline std::pair<OneLoopOperator, OneLoopOperator> qid_fluctuation_operators() {
  OneLoopOperator gauge{"gauge", detail::covariant(true), true, detail::lorentz_identity(), detail::vector_e_squared(-2),
                        Rational(1, 2)};
  OneLoopOperator ghost{"ghost", detail::covariant(false), true, TensorExpr::scalar(1), TensorExpr(), Rational(-1)};
  return {gauge, ghost};
}

/// Tr Ln coefficient r with (Tr Ln)^div = iΩ₄/ε · r · Tr_Λ(ℱ·ℱ), from the closed two-term form.
inline Rational trace_ln_coefficient(const OneLoopOperator& o) {
  auto c = heatkernel::covariant_simplify(o.op);
  if (!c.closes()) throw StructuralError("covariant closure failed for " + o.name);
  Rational ee = o.op.covariant->E.empty() ? Rational(0) : c.ee;
  return -(c.ff * detail::as_rational(o.identity) + ee * detail::ff_projection(o.e_squared));
}

/// Multiple of D in units of iΩ₄/ε·Tr_Λ F·F (F acting on inner scalars).
inline TensorExpr determinant_div(Determinant kind) {
  auto ops = qid_fluctuation_operators();
  const auto& o = kind == Determinant::gauge ? ops.first : ops.second;
  auto inner = detail::ratio(inner_trace_ff(o.vector_inner), inner_trace_ff(false));
  return canonicalize(inner * trace_ln_coefficient(o));
}

/// Σ i·w·(Tr Ln)^div over operators, as the coefficient of (Ω₄/ε)∫F·F.
inline TensorExpr divergent_action(const std::vector<OneLoopOperator>& ops) {
  TensorExpr out;
  for (const auto& o : ops) {
    // i·w · iΩ₄/ε · r · Tr_Λ = −w r Tr_Λ
    auto tr = inner_trace_ff(o.vector_inner);
    out += tr * (-o.weight * trace_ln_coefficient(o));
  }
  return canonicalize(out);
}

inline TensorExpr qid_divergent_action() {
  auto ops = qid_fluctuation_operators();
  return divergent_action({ops.first, ops.second});
}

/// 11/12·D·Ω_D/(D(D+2))·Λ^{D+2}
inline TensorExpr published_divergent_action() {
  return canonicalize(action_unit() * TensorExpr::scalar(Rational(11, 12), ScalarMonomial::of(dimshift_key(0))));
}

inline std::vector<OneLoopOperator> matter_operators(MatterKind k) {
  auto scalar_inner = [](std::string name, bool with_e, TensorExpr id, TensorExpr e2, Rational w) {
    return OneLoopOperator{std::move(name), detail::covariant(with_e), false, std::move(id), std::move(e2), w};
  };
  switch (k) {
    case MatterKind::gauge_field:
      return {scalar_inner("vector", true, detail::lorentz_identity(), detail::vector_e_squared(1), Rational(1, 2)),
              scalar_inner("ghost", false, TensorExpr::scalar(1), TensorExpr(), Rational(-1))};
    case MatterKind::dirac:
      return {scalar_inner("dirac", true, TensorExpr::scalar(4), detail::spinor_e_squared(4), Rational(-1, 2))};
    case MatterKind::chiral:
      return {scalar_inner("chiral", true, TensorExpr::scalar(2), detail::spinor_e_squared(2), Rational(-1, 2))};
    case MatterKind::scalar_doublet:
      return {scalar_inner("doublet", false, TensorExpr::scalar(2), TensorExpr(), Rational(1))};
    case MatterKind::complex_scalar:
      return {scalar_inner("scalar", false, TensorExpr::scalar(1), TensorExpr(), Rational(1))};
  }
  return {};
}

/// Per-unit contribution in units of (Ω₄/ε)·Ω_D/(D(D+2))·Λ²∫Λ^D F·F.
inline Rational matter_div(MatterKind k) {
  return detail::as_rational(detail::ratio(divergent_action(matter_operators(k)), action_unit()));
}

/// coefficient(D) = a·D + b in units of 1/12.
struct BetaResult {
  Rational a, b;
  MatterContent content;

  [[nodiscard]] Rational coefficient(const Rational& D) const { return a * D + b; }
  [[nodiscard]] bool asymptotically_free(int D) const { return coefficient(D) > 0; }
  [[nodiscard]] std::string coefficient_string() const {
    std::string s = a.str() + "D";
    if (b > 0) s += " + " + b.str();
    if (b < 0) s += " - " + Rational(-b).str();
    return s;
  }
  /// −g³/(4π²) Ω_D/(D(D+2)) (1/12)(coefficient)
  [[nodiscard]] std::string beta_latex() const {
    return "-\\frac{g^3}{4\\pi^2} \\frac{\\Omega_D}{D(D+2)} \\frac{1}{12} (" + coefficient_string() + ")";
  }
  /// g(1 + g²/(4π²) Ω_D/(D(D+2)) (1/12)(coefficient)/ε + O(g⁴))
  [[nodiscard]] std::string coupling_latex() const {
    return "g\\left(1 + \\frac{g^2}{4\\pi^2} \\frac{\\Omega_D}{D(D+2)} \\frac{1}{12} (" + coefficient_string() +
           ") \\frac{1}{\\varepsilon} + O(g^4)\\right)";
  }
  /// β(g)/g³ at integer D.
  [[nodiscard]] double beta_over_g3(int D) const {
    return -1.0 / (4 * M_PI * M_PI) * innerspace::omega_numeric(D) / (D * (D + 2.0)) / 12.0 * to_double(coefficient(D));
  }
};

/// Coefficient of D in the pure-gauge divergent action (units of the action unit).
inline Rational qid_slope() {
  static const Rational s = [] {
    auto r = canonicalize(detail::ratio(qid_divergent_action(), action_unit()) *
                          TensorExpr::scalar(1, ScalarMonomial::of(dimshift_key(0), -1)));
    return detail::as_rational(r);
  }();
  return s;
}

inline BetaResult beta(const MatterContent& content) {
  content.validate();
  BetaResult r;
  r.content = content;
  r.a = 12 * qid_slope();
  static const std::map<MatterKind, Rational> per_unit = [] {
    std::map<MatterKind, Rational> m;
    for (auto k : matter_kinds()) m[k] = matter_div(k);
    return m;
  }();
  for (auto k : matter_kinds()) r.b += 12 * content.count(k) * per_unit.at(k);
  return r;
}

}  // namespace qid::renorm
