#pragma once

#include "qid/symcore/integrated_normal_form.hpp"
#include "qid/symcore/tensor_expr.hpp"

#include <cmath>

namespace qid::innerspace {

/// c · π^e with half-integer e.
struct PiPower {
  Rational coeff;
  Rational pi_exp;

  [[nodiscard]] double value() const { return to_double(coeff) * std::pow(M_PI, to_double(pi_exp)); }
  bool operator==(const PiPower& o) const { return coeff == o.coeff && pi_exp == o.pi_exp; }
};

/// Ω_D = 2π^{D/2} / Γ(D/2) / (2π)^D, exactly.
inline PiPower omega_exact(int D) {
  if (D < 1) throw std::invalid_argument("inner dimension must be positive");
  // Γ(D/2) = g · π^{h}
  Rational g;
  Rational h = 0;
  if (D % 2 == 0) {
    g = factorial(D / 2 - 1);
  } else {
    g = 1;  // Γ(1/2) = √π, Γ(x+1) = xΓ(x)
    for (Rational x(1, 2); x < Rational(D, 2); x += 1) g *= x;
    h = Rational(1, 2);
  }
  return {Rational(2) / g / rational_pow(2, D), Rational(D, 2) - h - D};
}

inline double omega_numeric(double D) { return 2 * std::pow(M_PI, D / 2) / std::tgamma(D / 2) / std::pow(2 * M_PI, D); }

struct InnerMoment {
  int degree = 0;
  TensorExpr result;
  std::string note;
};

inline ScalarMonomial omega_lambda(int extra) {
  return ScalarMonomial::of(symbol_key(sym::OmegaD)) * ScalarMonomial::of(symbol_key(sym::Lambda), Exponent{extra, 1});
}

/// ∫_{|P|≤Λ} d^DP/(2π)^D P^{I1}…P^{In}.
inline InnerMoment moment(int n) {
  static const char* names[] = {"I", "J", "K", "L"};
  if (n < 0) throw std::invalid_argument("negative moment degree");
  if (n > 4) throw UnsupportedCase("moments above degree 4 are not supported");
  if (n % 2) return {n, TensorExpr(), "odd moment vanishes over the symmetric ball"};
  // Ω_D Λ^{D+n} / (D (D+2) … (D+n))
  ScalarMonomial s = omega_lambda(n);
  for (int j = 0; j <= n; j += 2) s *= ScalarMonomial::of(dimshift_key(j), -1);
  if (n == 0) return {0, canonicalize(TensorExpr::scalar(1, s)), ""};
  auto d = [](int a, int b) { return delta(inn_up(names[a]), inn_up(names[b])); };
  if (n == 2) return {2, canonicalize(TensorExpr::product({d(0, 1)}, 1, s)), ""};
  TensorExpr e = TensorExpr::product({d(0, 1), d(2, 3)}, 1, s) + TensorExpr::product({d(0, 2), d(1, 3)}, 1, s) +
                 TensorExpr::product({d(0, 3), d(1, 2)}, 1, s);
  return {4, canonicalize(e), ""};
}

/// Λ → ρΛ multiplies moment(n) by ρ^{D+n}.
inline bool scaling_check(int n, const Rational& rho) {
  if (rho <= 0) throw std::invalid_argument("scale factor must be positive");
  auto m = moment(n).result;
  auto scaled = rescale_symbol(m, sym::Lambda, rho);
  auto expected = m * ScalarMonomial::of(base_key(rho), Exponent{n, 1});
  if (!equal(scaled, expected)) return false;
  for (const auto& e : symbol_degrees(m, sym::Lambda))
    if (!m.empty() && !(e == Exponent{n, 1})) return false;
  return true;
}

/// a^K ∇_K δ^M_N − ∇_N a^M for a linear combination of coefficient fields a; with
/// `vector_action` false only the scalar part a^K ∇_K is kept (operator on inner scalars).
struct InnerOperator {
  std::vector<std::pair<Rational, GradedAtom>> fields;  // inner index is the last label, filled in per use
  bool vector_action = true;

  InnerOperator& add(const Rational& c, const InnerOperator& o) {
    for (const auto& f : o.fields) fields.emplace_back(c * f.first, f.second);
    return *this;
  }
};

inline InnerOperator inner_operator(const std::string& field, std::vector<IndexLabel> lorentz = {}, bool vector_action = true) {
  lorentz.push_back(inn_up("_"));
  return {{{Rational(1), atoms::field(field, std::move(lorentz))}}, vector_action};
}

namespace detail {

inline GradedAtom at(GradedAtom a, const IndexLabel& inner, std::vector<IndexLabel> d = {}) {
  a.idx.back() = inner;
  a.d = std::move(d);
  return a;
}

/// Symbol σ = s δ^M_N + m^M_N with labels (row, col); tag keeps dummies distinct.
struct Symbol {
  GradedExpr s;
  GradedExpr m;
};

inline Symbol symbol_of(const InnerOperator& op, const std::string& row, const std::string& col, const std::string& tag) {
  Symbol out;
  auto i = ScalarMonomial::of(symbol_key(sym::i));
  std::string K = "k" + tag;
  for (const auto& [c, a] : op.fields) {
    out.s += GradedExpr::word({at(a, inn_up(K)), atoms::inner_momentum(inn_lo(K))}, c, i);
    if (op.vector_action) out.m += GradedExpr::word({at(a, inn_up(row), {inn_lo(col)})}, -c);
  }
  return out;
}

inline GradedExpr rename(GradedExpr e, const std::string& from, const std::string& to) {
  for (auto& t : e.terms()) qid::detail::rename_in_term(t, {from, Space::inner}, to);
  return e;
}

/// a^K ∇_K applied to e.
inline GradedExpr transport(const InnerOperator& op, const GradedExpr& e, const std::string& tag) {
  GradedExpr out;
  std::string K = "t" + tag;
  for (const auto& [c, a] : op.fields)
    out += GradedExpr::word({at(a, inn_up(K))}, c) * apply_derivative(e, inn_lo(K));
  return out;
}

/// Replaces P-monomials by the ball moments.
inline GradedExpr integrate_momentum(const GradedExpr& e) {
  GradedExpr out;
  for (auto t : e.terms()) {
    std::vector<IndexLabel> ps;
    std::vector<GradedAtom> rest;
    for (const auto& a : t.atoms) (a.sp == Species::P ? ps.push_back(a.idx[0]) : rest.push_back(a));
    if (ps.size() % 2) continue;
    if (ps.size() > 2) throw UnsupportedCase("momentum moments above degree 2 in a quadratic trace");
    t.atoms = rest;
    if (ps.empty()) {
      t.scalars *= omega_lambda(0) * ScalarMonomial::of(dimshift_key(0), -1);
    } else {
      t.scalars *= omega_lambda(2) * ScalarMonomial::of(dimshift_key(0), -1) * ScalarMonomial::of(dimshift_key(2), -1);
      if (ps[0].name == ps[1].name)
        t.scalars *= ScalarMonomial::of(dimshift_key(0));
      else
        qid::detail::rename_in_term(t, {ps[1].name, Space::inner}, ps[0].name);
    }
    out += GradedExpr({t});
  }
  return out;
}

}  // namespace detail

inline IbpOptions inner_ibp() {
  IbpOptions o;
  o.norm.ordering = Ordering::commutative;
  o.norm.divergence_free = true;
  o.space = Space::inner;
  return o;
}

/// Tr_{XΛ}{op_a · op_b} per unit spacetime volume: symbol composition, matrix trace,
/// ball moments for the P-integral, then integration by parts in inner space with
/// divergence-free coefficient fields.
inline GradedExpr trace_quadratic(const InnerOperator& a, const InnerOperator& b) {
  if (a.vector_action != b.vector_action) throw UnsupportedCase("operators act on different inner representations");
  auto sa = detail::symbol_of(a, "r", "x", "a");
  auto sb = detail::symbol_of(b, "x", "c", "b");
  GradedExpr scalar_part = sa.s * sb.s + detail::transport(a, sb.s, "1");
  GradedExpr total = scalar_part;
  if (a.vector_action) {
    auto Dfac = ScalarMonomial::of(dimshift_key(0));
    // tr(s_a m_b + m_a s_b + m_a m_b + a∇ m_b); m_b uses (x, c), m_a uses (r, x)
    GradedExpr mat = sa.s * detail::rename(sb.m, "x", "r") + detail::rename(sa.m, "x", "c") * sb.s + sa.m * sb.m +
                     detail::transport(a, detail::rename(sb.m, "x", "r"), "2");
    total = scalar_part * Dfac + detail::rename(mat, "c", "r");
  }
  auto integrated = detail::integrate_momentum(total);
  return ibp_normal_form(integrated, inner_ibp());
}

/// Σ coeff·scalars over the terms whose atoms match `basis` (a single monomial).
inline TensorExpr scalar_coefficient(const GradedExpr& e, const GradedExpr& basis, const NormalizeOptions& opt) {
  auto b = graded_normalize(basis, opt);
  if (b.terms().size() != 1) throw StructuralError("basis element must be a single monomial");
  auto key = qid::detail::canonical(b.terms()[0], opt).key;
  TensorExpr out;
  for (const auto& t : graded_normalize(e, opt).terms())
    if (qid::detail::canonical(t, opt).key == key) out += TensorExpr::scalar(t.coeff / b.terms()[0].coeff, t.scalars);
  return canonicalize(out);
}

/// ∇_M (op f)^M for a vector field f.
inline GradedExpr divergence_of_action(const InnerOperator& op, const GradedAtom& f) {
  GradedExpr out;
  for (const auto& [c, a] : op.fields) {
    out += GradedExpr::word({detail::at(a, inn_up("k")), detail::at(f, inn_up("m"), {inn_lo("k")})}, c);
    if (op.vector_action) out -= GradedExpr::word({detail::at(f, inn_up("n")), detail::at(a, inn_up("m"), {inn_lo("n")})}, c);
  }
  return apply_derivative(out, inn_lo("m"));
}

}  // namespace qid::innerspace
