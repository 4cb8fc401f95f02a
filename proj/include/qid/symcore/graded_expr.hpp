#pragma once

#include "qid/core/errors.hpp"
#include "qid/core/index.hpp"
#include "qid/core/rational.hpp"
#include "qid/core/scalar.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qid {

/// Field species (supercommuting) and operator species (noncommuting, kept in order).
enum class Species : unsigned char {
  A,           // gauge field A_mu^M
  h,           // auxiliary h_R
  psi,         // matter field
  omega,       // ghost omega^S
  omega_star,  // antighost omega*_R
  theta,       // BRST parameter
  field,       // generic named coefficient field
  P,           // inner momentum (symbol calculus)
  B,           // operator B_rho
  C,           // operator C
  M,           // operator M_IJ
  N,           // operator N_I
  E,           // operator E
  Aop,         // operator A_mu (covariant slot)
  Fop          // field-strength operator F_mu,nu
};

inline bool is_operator(Species s) { return s >= Species::B; }

inline const char* species_name(Species s) {
  switch (s) {
    case Species::A: return "A";
    case Species::h: return "h";
    case Species::psi: return "psi";
    case Species::omega: return "omega";
    case Species::omega_star: return "omegabar";
    case Species::theta: return "theta";
    case Species::field: return "field";
    case Species::P: return "P";
    case Species::B: return "B";
    case Species::C: return "C";
    case Species::M: return "M";
    case Species::N: return "N";
    case Species::E: return "E";
    case Species::Aop: return "Aop";
    case Species::Fop: return "Fop";
  }
  return "?";
}

/// One graded atom with attached derivatives (lorentz labels mean d, inner labels mean nabla).
struct GradedAtom {
  Species sp = Species::field;
  std::string name;
  std::vector<IndexLabel> idx;
  std::vector<IndexLabel> d;
  bool odd = false;
  int ghost = 0;
  bool antisymmetric = false;  // antisymmetric in its first two indices

  [[nodiscard]] GradedAtom bare() const {
    GradedAtom a = *this;
    a.d.clear();
    return a;
  }
};

namespace atoms {

inline GradedAtom gauge(IndexLabel mu, IndexLabel M) { return {Species::A, "A", {std::move(mu), std::move(M)}, {}, false, 0}; }
inline GradedAtom ghost(IndexLabel S) { return {Species::omega, "omega", {std::move(S)}, {}, true, 1}; }
inline GradedAtom antighost(IndexLabel R) { return {Species::omega_star, "omegabar", {std::move(R)}, {}, true, -1}; }
inline GradedAtom aux(IndexLabel R) { return {Species::h, "h", {std::move(R)}, {}, false, 0}; }
inline GradedAtom matter(bool fermionic = false) { return {Species::psi, "psi", {}, {}, fermionic, 0}; }
inline GradedAtom theta() { return {Species::theta, "theta", {}, {}, true, -1}; }
inline GradedAtom field(std::string name, std::vector<IndexLabel> idx, bool odd = false) {
  return {Species::field, std::move(name), std::move(idx), {}, odd, 0};
}
inline GradedAtom inner_momentum(IndexLabel I) { return {Species::P, "P", {std::move(I)}, {}, false, 0}; }
inline GradedAtom op_B(IndexLabel rho) { return {Species::B, "B", {std::move(rho)}, {}, false, 0}; }
inline GradedAtom op_C() { return {Species::C, "C", {}, {}, false, 0}; }
inline GradedAtom op_M(IndexLabel I, IndexLabel J) { return {Species::M, "M", {std::move(I), std::move(J)}, {}, false, 0}; }
inline GradedAtom op_N(IndexLabel I) { return {Species::N, "N", {std::move(I)}, {}, false, 0}; }
inline GradedAtom op_E(std::vector<IndexLabel> idx = {}) { return {Species::E, "E", std::move(idx), {}, false, 0}; }
inline GradedAtom op_A(IndexLabel mu) { return {Species::Aop, "Aop", {std::move(mu)}, {}, false, 0}; }
inline GradedAtom op_F(IndexLabel mu, IndexLabel nu) {
  GradedAtom a{Species::Fop, "Fop", {std::move(mu), std::move(nu)}, {}, false, 0};
  a.antisymmetric = true;
  return a;
}

}  // namespace atoms

struct GradedTerm {
  Rational coeff = 1;
  ScalarMonomial scalars;
  std::vector<GradedAtom> atoms;
};

namespace detail {

using LabelId = std::pair<std::string, Space>;

inline std::map<LabelId, int> label_counts(const GradedTerm& t) {
  std::map<LabelId, int> c;
  for (const auto& a : t.atoms) {
    for (const auto& l : a.idx) ++c[{l.name, l.space}];
    for (const auto& l : a.d) ++c[{l.name, l.space}];
  }
  return c;
}

inline void rename_in_term(GradedTerm& t, const LabelId& from, const std::string& to) {
  for (auto& a : t.atoms) {
    for (auto& l : a.idx)
      if (l.name == from.first && l.space == from.second) l.name = to;
    for (auto& l : a.d)
      if (l.name == from.first && l.space == from.second) l.name = to;
  }
}

/// Renames dummies of `t` away from every name in `avoid` (and from each other).
inline void freshen_dummies(GradedTerm& t, std::set<std::string> avoid) {
  auto counts = label_counts(t);
  for (const auto& [id, n] : counts) avoid.insert(id.first);
  int next = 1;
  for (const auto& [id, n] : counts) {
    if (n != 2) continue;
    std::string fresh;
    do fresh = "_d" + std::to_string(next++);
    while (avoid.count(fresh));
    avoid.insert(fresh);
    rename_in_term(t, id, fresh);
  }
}

inline std::set<std::string> names_in(const GradedTerm& t) {
  std::set<std::string> s;
  for (const auto& [id, n] : label_counts(t)) s.insert(id.first);
  return s;
}

}  // namespace detail

/// Linear combination of ordered graded monomials with exact coefficients.
class GradedExpr {
 public:
  GradedExpr() = default;
  explicit GradedExpr(std::vector<GradedTerm> terms) : terms_(std::move(terms)) {}

  static GradedExpr atom(GradedAtom a, const Rational& c = 1) {
    GradedTerm t;
    t.coeff = c;
    t.atoms.push_back(std::move(a));
    return GradedExpr({t});
  }
  static GradedExpr word(std::vector<GradedAtom> as, const Rational& c = 1, ScalarMonomial m = {}) {
    return GradedExpr({GradedTerm{c, std::move(m), std::move(as)}});
  }
  static GradedExpr scalar(const Rational& c, ScalarMonomial m = {}) { return GradedExpr({GradedTerm{c, std::move(m), {}}}); }

  [[nodiscard]] const std::vector<GradedTerm>& terms() const& { return terms_; }
  [[nodiscard]] std::vector<GradedTerm>& terms() & { return terms_; }
  [[nodiscard]] std::vector<GradedTerm> terms() && { return std::move(terms_); }
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  GradedExpr& operator+=(const GradedExpr& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  GradedExpr& operator*=(const Rational& c) {
    for (auto& t : terms_) t.coeff *= c;
    return *this;
  }
  GradedExpr& operator*=(const ScalarMonomial& m) {
    for (auto& t : terms_) t.scalars *= m;
    return *this;
  }
  GradedExpr& operator-=(const GradedExpr& o) { return *this += o * Rational(-1); }

  friend GradedExpr operator+(GradedExpr a, const GradedExpr& b) { return a += b; }
  friend GradedExpr operator-(GradedExpr a, const GradedExpr& b) { return a -= b; }
  friend GradedExpr operator-(GradedExpr a) { return a *= Rational(-1); }
  friend GradedExpr operator*(GradedExpr a, const Rational& c) { return a *= c; }
  friend GradedExpr operator*(const Rational& c, GradedExpr a) { return a *= c; }
  friend GradedExpr operator*(GradedExpr a, const ScalarMonomial& m) { return a *= m; }

  /// Ordered product. Labels free in both factors become contracted; dummies of the
  /// right factor are renamed if they would collide.
  friend GradedExpr operator*(const GradedExpr& a, const GradedExpr& b) {
    GradedExpr out;
    for (const auto& x : a.terms_) {
      auto used = detail::names_in(x);
      for (const auto& y0 : b.terms_) {
        GradedTerm y = y0;
        auto counts = detail::label_counts(y);
        bool clash = false;
        for (const auto& [id, n] : counts)
          if (n == 2 && used.count(id.first)) clash = true;
        if (clash) {
          std::set<std::string> avoid = used;
          for (const auto& [id, n] : counts)
            if (n == 1) avoid.insert(id.first);
          detail::freshen_dummies(y, avoid);
        }
        GradedTerm t;
        t.coeff = x.coeff * y.coeff;
        t.scalars = x.scalars * y.scalars;
        t.atoms = x.atoms;
        t.atoms.insert(t.atoms.end(), y.atoms.begin(), y.atoms.end());
        out.terms_.push_back(std::move(t));
      }
    }
    return out;
  }

 private:
  std::vector<GradedTerm> terms_;
};

inline bool term_odd(const GradedTerm& t) {
  bool odd = false;
  for (const auto& a : t.atoms) odd ^= a.odd;
  return odd;
}

inline int term_ghost(const GradedTerm& t) {
  int g = 0;
  for (const auto& a : t.atoms) g += a.ghost;
  return g;
}

/// Leibniz expansion of d_l or nabla_l (by the label's space) applied to every term.
inline GradedExpr apply_derivative(const GradedExpr& e, const IndexLabel& l) {
  GradedExpr out;
  for (const auto& t : e.terms()) {
    for (size_t j = 0; j < t.atoms.size(); ++j) {
      if (t.atoms[j].sp == Species::theta || t.atoms[j].sp == Species::P) continue;  // constants
      GradedTerm u = t;
      u.atoms[j].d.push_back(l);
      out.terms().push_back(std::move(u));
    }
  }
  return out;
}

inline GradedExpr apply_derivatives(GradedExpr e, const std::vector<IndexLabel>& ls) {
  for (const auto& l : ls) e = apply_derivative(e, l);
  return e;
}

using AtomMatcher = std::function<bool(const GradedAtom&)>;
using AtomBinder = std::function<GradedExpr(const GradedAtom&)>;

inline AtomMatcher match_species(Species s) {
  return [s](const GradedAtom& a) { return a.sp == s; };
}
inline AtomMatcher match_field(std::string name) {
  return [name](const GradedAtom& a) { return a.sp == Species::field && a.name == name; };
}

/// Capture-avoiding substitution. The binder receives the bare atom (no derivatives)
/// and must return an expression whose free labels are the atom's index labels; the
/// atom's derivatives are then applied by the Leibniz rule.
inline GradedExpr substitute(const GradedExpr& e, const AtomMatcher& match, const AtomBinder& bind) {
  GradedExpr out;
  for (const auto& t : e.terms()) {
    auto used = detail::names_in(t);
    GradedExpr acc = GradedExpr::scalar(t.coeff, t.scalars);
    for (const auto& a : t.atoms) {
      if (!match(a)) {
        acc = acc * GradedExpr::atom(a);
        continue;
      }
      // the binder sees placeholder labels so its own dummies cannot capture the atom's
      GradedAtom probe = a.bare();
      std::map<detail::LabelId, std::string> back;
      for (size_t n = 0; n < probe.idx.size(); ++n) {
        std::string ph = "#" + std::to_string(n);
        back[{ph, probe.idx[n].space}] = probe.idx[n].name;
        probe.idx[n].name = ph;
      }
      GradedExpr rep = bind(probe);
      for (auto& rt : rep.terms()) {
        if (term_odd(rt) != a.odd)
          throw StructuralError("parity-violating binding for atom '" + a.name + "'");
        auto avoid = used;
        for (const auto& [id, nm] : back) avoid.insert(nm);
        detail::freshen_dummies(rt, avoid);
        for (const auto& [id, nm] : back) detail::rename_in_term(rt, id, nm);
      }
      rep = apply_derivatives(rep, a.d);
      acc = acc * rep;
    }
    out += acc;
  }
  return out;
}

}  // namespace qid
