#pragma once

#include "qid/looptab.hpp"
#include "qid/symcore/graded_serialize.hpp"
#include "qid/symcore/integrated_normal_form.hpp"

#include <optional>

namespace qid::heatkernel {

/// Name of the free lower Lorentz label carried by B and A.
inline const std::string& slot() {
  static const std::string s = "rho";
  return s;
}

struct CovariantForm {
  GradedExpr A;  // free lower label slot()
  GradedExpr E;
};

/// 𝒟 = −∂² + B_ρ ∂^ρ + C with operator-valued coefficients.
struct FluctuationOperator {
  GradedExpr B;
  GradedExpr C;
  std::optional<CovariantForm> covariant;
};

namespace detail {

inline GradedExpr relabel(GradedExpr e, const std::string& from, const IndexLabel& to) {
  for (auto& t : e.terms())
    for (auto& a : t.atoms) {
      for (auto& l : a.idx)
        if (l.name == from && l.space == to.space) l = to;
      for (auto& l : a.d)
        if (l.name == from && l.space == to.space) l = to;
    }
  return e;
}

inline NormalizeOptions cyclic() { return {Ordering::cyclic, false}; }

}  // namespace detail

inline ScalarMonomial pole() {
  return ScalarMonomial::of(symbol_key(sym::i)) * ScalarMonomial::of(symbol_key(sym::Omega4)) *
         ScalarMonomial::of(symbol_key(sym::eps), -1);
}

/// Divides by iΩ₄/ε.
inline GradedExpr strip_pole(const GradedExpr& e) {
  auto inv = ScalarMonomial::of(symbol_key(sym::i), -1) * ScalarMonomial::of(symbol_key(sym::Omega4), -1) *
             ScalarMonomial::of(symbol_key(sym::eps));
  auto out = e * inv;
  for (auto& t : out.terms()) t.scalars.reduce(t.coeff);
  return out;
}

/// A_μ with its index renamed to `mu`.
inline GradedExpr at(const GradedExpr& field, const IndexLabel& mu) { return detail::relabel(field, slot(), mu); }

/// C = −∂_μA^μ − A_μA^μ + E
inline GradedExpr covariant_C(const CovariantForm& f) {
  auto dA = apply_derivative(at(f.A, lor_up("cm")), lor_lo("cm"));
  auto AA = at(f.A, lor_lo("cn")) * at(f.A, lor_up("cn"));
  return f.E - dA - AA;
}

inline FluctuationOperator from_covariant(const CovariantForm& f) {
  return {f.A * Rational(-2), covariant_C(f), f};
}

inline FluctuationOperator generic() {
  return {GradedExpr::atom(atoms::op_B(lor_lo(slot()))), GradedExpr::atom(atoms::op_C()), std::nullopt};
}

inline CovariantForm generic_covariant() {
  return {GradedExpr::atom(atoms::op_A(lor_lo(slot()))), GradedExpr::atom(atoms::op_E())};
}

/// Throws when B, C disagree with the covariant data.
inline void check_covariant(const FluctuationOperator& op) {
  if (!op.covariant) throw StructuralError("operator has no covariant form");
  auto opt = detail::cyclic();
  if (!is_zero(op.B + op.covariant->A * Rational(2), opt))
    throw StructuralError("covariant-form identity violated: B != -2A");
  if (!is_zero(op.C - covariant_C(*op.covariant), opt))
    throw StructuralError("covariant-form identity violated: C != -dA - AA + E");
}

/// ℱ_{μν} = ∂_μA_ν − ∂_νA_μ + A_μA_ν − A_νA_μ
inline GradedExpr field_strength(const GradedExpr& A, const IndexLabel& mu, const IndexLabel& nu) {
  return apply_derivative(at(A, nu), mu) - apply_derivative(at(A, mu), nu) + at(A, mu) * at(A, nu) -
         at(A, nu) * at(A, mu);
}

/// The nine monomials of the divergent bracket, in display order.
inline std::vector<GradedExpr> bracket_monomials() {
  using namespace atoms;
  auto B = [](IndexLabel l, std::vector<IndexLabel> d = {}) {
    auto a = op_B(std::move(l));
    a.d = std::move(d);
    return a;
  };
  auto C = op_C();
  return {
      GradedExpr::word({B(lor_lo("m"), {lor_up("m")}), B(lor_lo("n"), {lor_up("n")})}),
      GradedExpr::word({B(lor_lo("m"), {lor_up("n")}), B(lor_up("m"), {lor_lo("n")})}),
      GradedExpr::word({B(lor_lo("m"), {lor_up("m")}), C}),
      GradedExpr::word({C, C}),
      GradedExpr::word({B(lor_lo("m"), {lor_up("m")}), B(lor_up("n")), B(lor_lo("n"))}),
      GradedExpr::word({B(lor_lo("m")), B(lor_up("n"), {lor_up("m")}), B(lor_lo("n"))}),
      GradedExpr::word({C, B(lor_up("n")), B(lor_lo("n"))}),
      GradedExpr::word({B(lor_up("m")), B(lor_lo("m")), B(lor_up("n")), B(lor_lo("n"))}),
      GradedExpr::word({B(lor_up("m")), B(lor_up("n")), B(lor_lo("m")), B(lor_lo("n"))}),
  };
}

inline const std::vector<Rational>& bracket_coefficients() {
  static const std::vector<Rational> c = {Rational(-1, 12), Rational(-1, 24), Rational(1, 2),   Rational(-1, 2), Rational(1, 12),
                                          Rational(-1, 12), Rational(-1, 4),  Rational(-1, 48), Rational(-1, 96)};
  return c;
}

/// Trace normal form: cyclic words modulo Lorentz total derivatives, bracket monomials kept.
inline IbpOptions trace_ibp(Ordering o = Ordering::cyclic) {
  IbpOptions opt{{o, false}, Space::lorentz, {}};
  if (o == Ordering::cyclic) opt.preferred = bracket_monomials();
  return opt;
}

/// Published bracket times iΩ₄/ε.
inline GradedExpr published_trace_ln() {
  GradedExpr e;
  auto m = bracket_monomials();
  for (size_t j = 0; j < m.size(); ++j) e += m[j] * bracket_coefficients()[j];
  return e * pole();
}

namespace detail {

inline std::string rl(int j) { return "r" + std::to_string(j); }

/// Expands Tr Π_j p_j^{-2}(iB_ρ p_j^ρ + C) and replaces each pole part, k_j → i∂ on slot j.
inline GradedExpr gamma_raw(int n) {
  GradedExpr out;
  std::map<int, TensorExpr> cache;
  auto table = [&](int r) -> const TensorExpr& {
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, looptab::div_part({r, n}).pole_coeff).first;
    return it->second;
  };
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<GradedAtom> ops;
    std::vector<int> bpos;
    for (int j = 1; j <= n; ++j) {
      if (mask & (1 << (j - 1))) {
        ops.push_back(atoms::op_B(lor_lo(rl(j))));
        bpos.push_back(j);
      } else {
        ops.push_back(atoms::op_C());
      }
    }
    // source of p_j^ρ for each B: 0 is the loop momentum, i ≥ 2 is k_i
    std::vector<int> src(bpos.size(), 0);
    std::function<void(size_t)> rec = [&](size_t b) {
      if (b < bpos.size()) {
        for (int s = 0; s <= bpos[b]; ++s) {
          if (s == 1) continue;
          src[b] = s;
          rec(b + 1);
        }
        return;
      }
      std::vector<GradedAtom> w = ops;
      std::vector<int> ppos;
      int ipow = static_cast<int>(bpos.size());
      for (size_t q = 0; q < bpos.size(); ++q) {
        if (src[q] == 0) {
          ppos.push_back(bpos[q]);
        } else {
          w[src[q] - 1].d.push_back(lor_up(rl(bpos[q])));
          ++ipow;
        }
      }
      int r = static_cast<int>(ppos.size());
      if (looptab::scaling_weight({r, n}) < 0) return;
      const auto& names = looptab::numerator_names();
      auto mapped = [&](const std::string& nm) {
        for (int q = 0; q < r; ++q)
          if (names[q] == nm) return rl(ppos[q]);
        throw StructuralError("unexpected loop label " + nm);
      };
      for (const auto& t : table(r).terms()) {
        GradedTerm g;
        g.coeff = t.coeff;
        g.atoms = w;
        int ip = ipow, fresh = 0;
        for (const auto& [k, e] : t.scalars.factors()) {
          if (k.kind != FactorKind::dot) {
            g.scalars.mul(k, e);
            continue;
          }
          for (int c = 0; c < e.p; ++c) {
            std::string l = "l" + std::to_string(++fresh);
            g.atoms[std::stoi(k.a) - 1].d.push_back(lor_up(l));
            g.atoms[std::stoi(k.b) - 1].d.push_back(lor_lo(l));
            ip += 2;
          }
        }
        for (const auto& a : t.atoms) {
          if (a.kind == AtomKind::momentum) {
            g.atoms[std::stoi(a.leg) - 1].d.push_back(lor_up(mapped(a.i1.name)));
            ++ip;
          } else {
            std::string x = mapped(a.i1.name), y = mapped(a.i2.name);
            for (auto& op : g.atoms)
              for (auto& l : op.idx)
                if (l.name == y) l = lor_up(x);
          }
        }
        g.scalars *= ScalarMonomial::of(symbol_key(sym::i), ip);
        g.scalars *= ScalarMonomial::of(symbol_key(sym::Omega4)) * ScalarMonomial::of(symbol_key(sym::eps), -1);
        out.terms().push_back(std::move(g));
      }
    };
    rec(0);
  }
  return out;
}

inline GradedExpr apply_operator(const GradedExpr& e, const FluctuationOperator& op) {
  auto s = substitute(e, match_species(Species::B), [&](const GradedAtom& a) { return detail::relabel(op.B, slot(), a.idx[0]); });
  return substitute(s, match_species(Species::C), [&](const GradedAtom&) { return op.C; });
}

}  // namespace detail

/// Local pole part with n insertions, in trace normal form.
inline GradedExpr gamma_n_div(const FluctuationOperator& op, int n, Ordering o = Ordering::cyclic) {
  if (n < 1 || n > 4) throw UnsupportedCase("insertion count " + std::to_string(n) + " outside 1..4");
  return ibp_normal_form(detail::apply_operator(detail::gamma_raw(n), op), trace_ibp(o));
}

/// Γ1 − ½Γ2 + ⅓Γ3 − ¼Γ4
inline GradedExpr trace_ln_div(const FluctuationOperator& op, Ordering o = Ordering::cyclic) {
  GradedExpr raw;
  for (int n = 1; n <= 4; ++n) raw += detail::gamma_raw(n) * Rational(n % 2 ? 1 : -1, n);
  return ibp_normal_form(detail::apply_operator(raw, op), trace_ibp(o));
}

/// −iΩ₄/ε (a ℱ_{μν}ℱ^{μν} + b ℰ²) with ℱ expanded through A.
inline GradedExpr covariant_target(const CovariantForm& f, const Rational& a, const Rational& b) {
  auto FF = field_strength(f.A, lor_lo("fm"), lor_lo("fn")) * field_strength(f.A, lor_up("fm"), lor_up("fn"));
  return (FF * a + f.E * f.E * b) * (pole() * ScalarMonomial::of(base_key(-1)));
}

/// The same with ℱ kept as a single antisymmetric atom.
inline GradedExpr covariant_closed(const Rational& a, const Rational& b) {
  auto F = [](IndexLabel x, IndexLabel y) { return atoms::op_F(std::move(x), std::move(y)); };
  auto e = GradedExpr::word({F(lor_lo("fm"), lor_lo("fn")), F(lor_up("fm"), lor_up("fn"))}, a) +
           GradedExpr::word({atoms::op_E(), atoms::op_E()}, b);
  return e * (pole() * ScalarMonomial::of(base_key(-1)));
}

struct Closure {
  GradedExpr expanded;  // trace normal form of the substituted bracket
  GradedExpr closed;    // two-term form with ℱ atoms
  GradedExpr residue;   // expanded minus the two-term form, in normal form
  Rational ff, ee;      // coefficients relative to −iΩ₄/ε
  [[nodiscard]] bool closes() const { return residue.empty(); }
};

/// Substitutes the covariant data into the bracket and reduces it to the two-term form.
inline Closure covariant_simplify(const FluctuationOperator& op, Ordering o = Ordering::cyclic) {
  check_covariant(op);
  const auto& f = *op.covariant;
  auto opt = trace_ibp(o);
  opt.preferred.clear();
  Closure c;
  c.expanded = ibp_normal_form(detail::apply_operator(trace_ln_div(generic(), Ordering::cyclic), op), opt);
  auto ff = ibp_normal_form(covariant_target(f, 1, 0), opt);
  auto ee = ibp_normal_form(covariant_target(f, 0, 1), opt);
  auto pick = [&](const GradedExpr& basis, const GradedExpr& other) -> Rational {
    for (const auto& t : basis.terms()) {
      GradedExpr m({t});
      if (coefficient_of(other, m, opt.norm) != 0) continue;
      return coefficient_of(c.expanded, m, opt.norm);
    }
    return 0;
  };
  c.ff = pick(ff, ee);
  c.ee = pick(ee, ff);
  c.residue = ibp_normal_form(c.expanded - covariant_target(f, c.ff, c.ee), opt);
  c.closed = covariant_closed(c.ff, c.ee);
  return c;
}

}  // namespace qid::heatkernel
