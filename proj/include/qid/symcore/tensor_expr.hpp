#pragma once

#include "qid/core/errors.hpp"
#include "qid/core/index.hpp"
#include "qid/core/rational.hpp"
#include "qid/core/scalar.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qid {

/// Indexed commuting atoms. Dot products, propagator markers and formal
/// scalars live in the term's ScalarMonomial.
enum class AtomKind : unsigned char { metric_eta, kron_delta, momentum };

struct TensorAtom {
  AtomKind kind = AtomKind::momentum;
  std::string leg;  // momentum only
  IndexLabel i1;
  IndexLabel i2;  // metric/delta only

  bool operator==(const TensorAtom& o) const {
    return kind == o.kind && leg == o.leg && i1 == o.i1 && (kind == AtomKind::momentum || i2 == o.i2);
  }
  [[nodiscard]] int slots() const { return kind == AtomKind::momentum ? 1 : 2; }
  [[nodiscard]] IndexLabel& slot(int s) { return s == 0 ? i1 : i2; }
  [[nodiscard]] const IndexLabel& slot(int s) const { return s == 0 ? i1 : i2; }
};

inline TensorAtom eta(IndexLabel a, IndexLabel b) {
  if (a.space != Space::lorentz || b.space != Space::lorentz)
    throw StructuralError("eta needs two lorentz labels: " + a.name + ", " + b.name);
  return {AtomKind::metric_eta, {}, std::move(a), std::move(b)};
}
inline TensorAtom delta(IndexLabel a, IndexLabel b) {
  if (a.space != Space::inner || b.space != Space::inner)
    throw StructuralError("delta needs two inner labels: " + a.name + ", " + b.name);
  return {AtomKind::kron_delta, {}, std::move(a), std::move(b)};
}
/// k_leg (lorentz label) or K_leg (inner label).
inline TensorAtom mom(std::string leg, IndexLabel i) { return {AtomKind::momentum, std::move(leg), std::move(i), {}}; }

struct TensorTerm {
  Rational coeff = 1;
  ScalarMonomial scalars;
  std::vector<TensorAtom> atoms;
};

namespace detail {

inline std::string label_key(const IndexLabel& l) {
  std::string s = l.name;
  s += l.space == Space::lorentz ? "|l" : "|i";
  s += l.variance == Variance::upper ? "^" : "_";
  return s;
}

inline std::string atom_key(const TensorAtom& a) {
  std::string s = std::to_string(static_cast<int>(a.kind));
  s += '#';
  s += a.leg;
  s += '#';
  s += label_key(a.i1);
  if (a.kind != AtomKind::momentum) {
    s += '#';
    s += label_key(a.i2);
  }
  return s;
}

inline std::string term_key(const TensorTerm& t) {
  std::string s = t.scalars.key();
  s += '|';
  for (const auto& a : t.atoms) {
    s += atom_key(a);
    s += ';';
  }
  return s;
}

}  // namespace detail

/// Exact linear combination of commuting tensor monomials.
class TensorExpr {
 public:
  TensorExpr() = default;
  explicit TensorExpr(std::vector<TensorTerm> terms) : terms_(std::move(terms)) {}

  static TensorExpr scalar(const Rational& c, ScalarMonomial m = {}) {
    TensorTerm t;
    t.coeff = c;
    t.scalars = std::move(m);
    return TensorExpr({t});
  }
  static TensorExpr symbol(const std::string& name, int power = 1) {
    return scalar(1, ScalarMonomial::of(symbol_key(name), power));
  }
  static TensorExpr atom(TensorAtom a) {
    TensorTerm t;
    t.atoms.push_back(std::move(a));
    return TensorExpr({t});
  }
  static TensorExpr product(std::vector<TensorAtom> atoms, const Rational& c = 1, ScalarMonomial m = {}) {
    TensorTerm t{c, std::move(m), std::move(atoms)};
    return TensorExpr({t});
  }

  [[nodiscard]] const std::vector<TensorTerm>& terms() const& { return terms_; }
  [[nodiscard]] std::vector<TensorTerm>& terms() & { return terms_; }
  [[nodiscard]] std::vector<TensorTerm> terms() && { return std::move(terms_); }
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  TensorExpr& operator+=(const TensorExpr& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  TensorExpr& operator-=(const TensorExpr& o) { return *this += o * Rational(-1); }
  TensorExpr& operator*=(const Rational& c) {
    for (auto& t : terms_) t.coeff *= c;
    return *this;
  }
  TensorExpr& operator*=(const ScalarMonomial& m) {
    for (auto& t : terms_) t.scalars *= m;
    return *this;
  }

  friend TensorExpr operator+(TensorExpr a, const TensorExpr& b) { return a += b; }
  friend TensorExpr operator-(TensorExpr a, const TensorExpr& b) { return a -= b; }
  friend TensorExpr operator-(TensorExpr a) { return a *= Rational(-1); }
  friend TensorExpr operator*(TensorExpr a, const Rational& c) { return a *= c; }
  friend TensorExpr operator*(const Rational& c, TensorExpr a) { return a *= c; }
  friend TensorExpr operator*(TensorExpr a, const ScalarMonomial& m) { return a *= m; }

  /// Distributive product. Labels shared between the factors become dummies.
  friend TensorExpr operator*(const TensorExpr& a, const TensorExpr& b) {
    TensorExpr out;
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) {
        TensorTerm t;
        t.coeff = x.coeff * y.coeff;
        t.scalars = x.scalars * y.scalars;
        t.atoms = x.atoms;
        t.atoms.insert(t.atoms.end(), y.atoms.begin(), y.atoms.end());
        out.terms_.push_back(std::move(t));
      }
    return out;
  }

 private:
  std::vector<TensorTerm> terms_;
};

namespace detail {

struct Occurrence {
  int atom;
  int slot;
};

inline std::map<std::pair<std::string, Space>, std::vector<Occurrence>> occurrences(const TensorTerm& t) {
  std::map<std::pair<std::string, Space>, std::vector<Occurrence>> occ;
  for (int a = 0; a < static_cast<int>(t.atoms.size()); ++a)
    for (int s = 0; s < t.atoms[a].slots(); ++s) occ[{t.atoms[a].slot(s).name, t.atoms[a].slot(s).space}].push_back({a, s});
  return occ;
}

inline void validate_pairs(const TensorTerm& t) {
  for (const auto& [key, occ] : occurrences(t)) {
    if (occ.size() > 2)
      throw StructuralError("index label '" + key.first + "' appears " + std::to_string(occ.size()) + " times");
    if (occ.size() == 2 && key.second == Space::lorentz) {
      const auto& l1 = t.atoms[occ[0].atom].slot(occ[0].slot);
      const auto& l2 = t.atoms[occ[1].atom].slot(occ[1].slot);
      if (l1.variance == l2.variance)
        throw StructuralError("index label '" + key.first + "' contracted with equal variance");
    }
  }
}

/// Eliminates every dummy pair of a term by metric substitution, trace or dot product.
inline void contract_all(TensorTerm& t) {
  for (auto& a : t.atoms)
    for (int s = 0; s < a.slots(); ++s)
      if (a.slot(s).space == Space::inner) a.slot(s).variance = Variance::upper;
  while (true) {
    auto occ = occurrences(t);
    auto it = std::find_if(occ.begin(), occ.end(), [](const auto& kv) { return kv.second.size() == 2; });
    if (it == occ.end()) break;
    Occurrence x = it->second[0], y = it->second[1];
    Space sp = it->first.second;
    auto& ax = t.atoms[x.atom];
    auto& ay = t.atoms[y.atom];
    if (x.atom == y.atom) {
      // trace of a metric
      if (sp == Space::lorentz)
        t.coeff *= 4;
      else
        t.scalars.mul(dimshift_key(0), Exponent{1, 0});
      t.atoms.erase(t.atoms.begin() + x.atom);
      continue;
    }
    if (ax.kind != AtomKind::momentum || ay.kind != AtomKind::momentum) {
      Occurrence metric = ax.kind != AtomKind::momentum ? x : y;
      Occurrence other = metric.atom == x.atom ? y : x;
      IndexLabel keep = t.atoms[metric.atom].slot(1 - metric.slot);
      t.atoms[other.atom].slot(other.slot) = keep;
      t.atoms.erase(t.atoms.begin() + metric.atom);
      continue;
    }
    t.scalars.mul(dot_key(ax.leg, ay.leg, sp), Exponent{1, 0});
    int hi = std::max(x.atom, y.atom), lo = std::min(x.atom, y.atom);
    t.atoms.erase(t.atoms.begin() + hi);
    t.atoms.erase(t.atoms.begin() + lo);
  }
  for (auto& a : t.atoms) {
    if (a.kind == AtomKind::momentum) continue;
    if (detail::label_key(a.i2) < detail::label_key(a.i1)) std::swap(a.i1, a.i2);
  }
  std::sort(t.atoms.begin(), t.atoms.end(),
            [](const TensorAtom& p, const TensorAtom& q) { return detail::atom_key(p) < detail::atom_key(q); });
}

inline std::set<std::string> free_set(const TensorTerm& t) {
  std::set<std::string> out;
  for (const auto& [key, occ] : occurrences(t))
    if (occ.size() == 1) out.insert(label_key(t.atoms[occ[0].atom].slot(occ[0].slot)));
  return out;
}

}  // namespace detail

/// Free labels of the expression (taken from its first term).
inline std::vector<IndexLabel> free_indices(const TensorExpr& e) {
  std::vector<IndexLabel> out;
  if (e.empty()) return out;
  const auto& t = e.terms().front();
  for (const auto& [key, occ] : detail::occurrences(t))
    if (occ.size() == 1) out.push_back(t.atoms[occ[0].atom].slot(occ[0].slot));
  return out;
}

/// Unique canonical form: all dummies contracted away, atoms sorted, like terms combined.
inline TensorExpr canonicalize(const TensorExpr& e) {
  std::map<std::string, TensorTerm> acc;
  std::optional<std::set<std::string>> frees;
  for (auto t : e.terms()) {
    if (t.coeff == 0) continue;
    detail::validate_pairs(t);
    detail::contract_all(t);
    auto fs = detail::free_set(t);
    if (!frees)
      frees = fs;
    else if (*frees != fs) {
      std::string bad;
      for (const auto& l : fs)
        if (!frees->count(l)) bad = l;
      for (const auto& l : *frees)
        if (!fs.count(l)) bad = l;
      throw StructuralError("terms carry different free labels: '" + bad.substr(0, bad.find('|')) + "'");
    }
    for (auto& [c, m] : expand_dimshifts(t.scalars)) {
      TensorTerm u{t.coeff * c, std::move(m), t.atoms};
      u.scalars.reduce(u.coeff);
      auto k = detail::term_key(u);
      auto it = acc.find(k);
      if (it == acc.end())
        acc.emplace(k, std::move(u));
      else
        it->second.coeff += u.coeff;
    }
  }
  std::vector<TensorTerm> out;
  for (auto& [k, t] : acc)
    if (t.coeff != 0) out.push_back(std::move(t));
  return TensorExpr(std::move(out));
}

inline bool is_zero(const TensorExpr& e) { return canonicalize(e).empty(); }

inline bool equal(const TensorExpr& a, const TensorExpr& b) { return is_zero(a - b); }

/// Identifies two free labels (one upper, one lower, same space) as a summed pair.
inline TensorExpr contract(const TensorExpr& e, const IndexLabel& upper, const IndexLabel& lower) {
  if (upper.space != lower.space)
    throw StructuralError("cannot contract '" + upper.name + "' with '" + lower.name + "': space mismatch");
  if (upper.space == Space::lorentz && upper.variance == lower.variance)
    throw StructuralError("cannot contract '" + upper.name + "' with '" + lower.name + "': equal variance");
  auto fr = free_indices(canonicalize(e));
  auto has = [&](const IndexLabel& l) {
    return std::any_of(fr.begin(), fr.end(), [&](const IndexLabel& f) {
      return f.same_slot(l) && (l.space == Space::inner || f.variance == l.variance);
    });
  };
  if (!has(upper)) throw StructuralError("label '" + upper.name + "' is not free");
  if (!has(lower)) throw StructuralError("label '" + lower.name + "' is not free");
  TensorExpr out = e;
  for (auto& t : out.terms())
    for (auto& a : t.atoms)
      for (int s = 0; s < a.slots(); ++s)
        if (a.slot(s).same_slot(lower)) a.slot(s).name = upper.name;
  return canonicalize(out);
}

/// Replaces a formal symbol by a scalar expression (positive powers only when the
/// replacement has more than one term).
inline TensorExpr substitute_symbol(const TensorExpr& e, const std::string& name, const TensorExpr& value) {
  TensorExpr out;
  auto key = symbol_key(name);
  for (const auto& t : e.terms()) {
    Exponent p = t.scalars.power(key);
    if (p.zero()) {
      out += TensorExpr({t});
      continue;
    }
    if (p.q != 0) throw UnsupportedCase("cannot substitute symbol with D-dependent power: " + name);
    TensorTerm base = t;
    base.scalars.mul(key, Exponent{-p.p, 0});
    TensorExpr acc({base});
    if (p.p > 0) {
      for (int i = 0; i < p.p; ++i) acc = acc * value;
    } else {
      auto cv = canonicalize(value);
      if (cv.terms().size() != 1 || !cv.terms()[0].atoms.empty())
        throw UnsupportedCase("negative power of '" + name + "' needs a single scalar monomial");
      auto& vt = cv.terms()[0];
      if (vt.coeff == 0) throw std::domain_error("division by zero substituting " + name);
      for (int i = 0; i < -p.p; ++i) {
        acc *= Rational(1) / vt.coeff;
        acc *= vt.scalars.inverse();
      }
    }
    out += acc;
  }
  return canonicalize(out);
}

inline TensorExpr substitute_symbol(const TensorExpr& e, const std::string& name, const Rational& value) {
  return substitute_symbol(e, name, TensorExpr::scalar(value));
}

/// Replaces momentum `leg` in `space` by the linear combination sum c_j * leg_j.
inline TensorExpr substitute_momentum(const TensorExpr& e, const std::string& leg, Space space,
                                      const std::vector<std::pair<Rational, std::string>>& combo) {
  TensorExpr out;
  for (const auto& t : e.terms()) {
    TensorTerm base = t;
    base.atoms.clear();
    std::vector<TensorAtom> hits;
    for (const auto& a : t.atoms) {
      if (a.kind == AtomKind::momentum && a.leg == leg && a.i1.space == space)
        hits.push_back(a);
      else
        base.atoms.push_back(a);
    }
    std::vector<std::pair<FactorKey, int>> dots;
    for (const auto& [k, ex] : t.scalars.factors()) {
      if (k.kind == FactorKind::prop && k.a == leg && space == Space::lorentz)
        throw UnsupportedCase("cannot substitute a momentum carried by a propagator marker");
      if (k.kind == FactorKind::dot && k.space == space && (k.a == leg || k.b == leg)) {
        if (ex.q != 0 || ex.p < 0) throw UnsupportedCase("cannot substitute inside a negative power of a dot product");
        dots.emplace_back(k, ex.p);
      }
    }
    for (const auto& [k, p] : dots) base.scalars.mul(k, Exponent{-p, 0});
    TensorExpr acc({base});
    for (const auto& h : hits) {
      TensorExpr lin;
      for (const auto& [c, l] : combo) lin += TensorExpr::product({mom(l, h.i1)}, c);
      acc = acc * lin;
    }
    for (const auto& [k, p] : dots) {
      for (int n = 0; n < p; ++n) {
        std::string other = k.a == leg ? k.b : k.a;
        bool self = k.a == k.b;
        TensorExpr lin;
        for (const auto& [c1, l1] : combo) {
          if (self) {
            for (const auto& [c2, l2] : combo)
              lin += TensorExpr::scalar(c1 * c2, ScalarMonomial::of(dot_key(l1, l2, space)));
          } else {
            lin += TensorExpr::scalar(c1, ScalarMonomial::of(dot_key(l1, other, space)));
          }
        }
        acc = acc * lin;
      }
    }
    out += acc;
  }
  return canonicalize(out);
}

/// Simultaneous renaming of momentum legs (permutation oracle support).
inline TensorExpr rename_legs(const TensorExpr& e, const std::map<std::string, std::string>& m) {
  auto map = [&](const std::string& l) {
    auto it = m.find(l);
    return it == m.end() ? l : it->second;
  };
  TensorExpr out;
  for (const auto& t : e.terms()) {
    TensorTerm u = t;
    for (auto& a : u.atoms)
      if (a.kind == AtomKind::momentum) a.leg = map(a.leg);
    ScalarMonomial s;
    for (const auto& [k, ex] : t.scalars.factors()) {
      FactorKey nk = k;
      if (k.kind == FactorKind::dot) nk = dot_key(map(k.a), map(k.b), k.space);
      if (k.kind == FactorKind::prop) nk = prop_key(map(k.a));
      s.mul(nk, ex);
    }
    u.scalars = s;
    out += TensorExpr({u});
  }
  return canonicalize(out);
}

/// Simultaneous renaming of index label names within one space.
inline TensorExpr rename_indices(const TensorExpr& e, const std::map<std::string, std::string>& m, Space space) {
  TensorExpr out = e;
  for (auto& t : out.terms())
    for (auto& a : t.atoms)
      for (int s = 0; s < a.slots(); ++s) {
        auto& l = a.slot(s);
        if (l.space != space) continue;
        auto it = m.find(l.name);
        if (it != m.end()) l.name = it->second;
      }
  return canonicalize(out);
}

/// Multiplies every term whose scalar part contains symbol^p by value^p for a
/// rational `value`, keeping D-dependent parts as base factors.
inline TensorExpr rescale_symbol(const TensorExpr& e, const std::string& name, const Rational& value) {
  TensorExpr out = e;
  for (auto& t : out.terms()) {
    Exponent p = t.scalars.power(symbol_key(name));
    if (p.zero()) continue;
    t.scalars.mul(base_key(value), p);
  }
  return canonicalize(out);
}

/// Degree of each term in inner momenta (K atoms and inner dot products).
inline std::set<int> inner_momentum_degrees(const TensorExpr& e) {
  std::set<int> out;
  for (const auto& t : canonicalize(e).terms()) {
    int d = 0;
    for (const auto& a : t.atoms)
      if (a.kind == AtomKind::momentum && a.i1.space == Space::inner) ++d;
    for (const auto& [k, ex] : t.scalars.factors())
      if (k.kind == FactorKind::dot && k.space == Space::inner) d += 2 * ex.p;
    out.insert(d);
  }
  return out;
}

/// Distinct exponents of a symbol across the terms.
inline std::set<Exponent> symbol_degrees(const TensorExpr& e, const std::string& name) {
  std::set<Exponent> out;
  for (const auto& t : canonicalize(e).terms()) out.insert(t.scalars.power(symbol_key(name)));
  return out;
}

/// Degree of each term in spacetime momenta (lorentz k atoms, dots count twice,
/// propagator markers count -2).
inline std::set<int> lorentz_momentum_degrees(const TensorExpr& e) {
  std::set<int> out;
  for (const auto& t : canonicalize(e).terms()) {
    int d = 0;
    for (const auto& a : t.atoms)
      if (a.kind == AtomKind::momentum && a.i1.space == Space::lorentz) ++d;
    for (const auto& [k, ex] : t.scalars.factors()) {
      if (k.kind == FactorKind::dot && k.space == Space::lorentz) d += 2 * ex.p;
      if (k.kind == FactorKind::prop) d -= 2 * ex.p;
    }
    out.insert(d);
  }
  return out;
}

}  // namespace qid
