#pragma once

#include "qid/core/index.hpp"
#include "qid/core/rational.hpp"

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace qid {

/// Commuting scalar factors that multiply a term.
///   symbol   : named formal scalar (Lambda, xi, g, eps, Omega4, OmegaD, m, i, pi, ...)
///   dimshift : (D + shift); shift 0 is D itself
///   dot      : (a . b) over the given space, legs stored sorted
///   prop     : inert marker 1/(k^2 - i eps) for leg a
///   base     : a rational base raised to a D-dependent power (value in `value`)
enum class FactorKind : unsigned char { symbol, dimshift, dot, prop, base };

struct FactorKey {
  FactorKind kind = FactorKind::symbol;
  std::string a;
  std::string b;
  int shift = 0;
  Space space = Space::lorentz;
  Rational value = 0;

  bool operator==(const FactorKey& o) const {
    return kind == o.kind && a == o.a && b == o.b && shift == o.shift && space == o.space &&
           value == o.value;
  }
  bool operator<(const FactorKey& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    if (shift != o.shift) return shift < o.shift;
    if (space != o.space) return space < o.space;
    return value < o.value;
  }
};

/// Exponent p + q*D.
struct Exponent {
  int p = 0;
  int q = 0;
  auto operator<=>(const Exponent&) const = default;
  Exponent& operator+=(const Exponent& o) {
    p += o.p;
    q += o.q;
    return *this;
  }
  [[nodiscard]] bool zero() const { return p == 0 && q == 0; }
};

namespace sym {
inline const std::string Lambda = "Lambda";
inline const std::string xi = "xi";
inline const std::string g = "g";
inline const std::string eps = "eps";
inline const std::string Omega4 = "Omega4";
inline const std::string OmegaD = "OmegaD";
inline const std::string m = "m";
inline const std::string i = "i";
inline const std::string pi = "pi";
}  // namespace sym

inline FactorKey symbol_key(std::string name) {
  FactorKey k;
  k.a = std::move(name);
  return k;
}
inline FactorKey dimshift_key(int s) {
  FactorKey k;
  k.kind = FactorKind::dimshift;
  k.shift = s;
  return k;
}
inline FactorKey dot_key(std::string l1, std::string l2, Space space) {
  if (l2 < l1) std::swap(l1, l2);
  FactorKey k;
  k.kind = FactorKind::dot;
  k.a = std::move(l1);
  k.b = std::move(l2);
  k.space = space;
  return k;
}
inline FactorKey prop_key(std::string leg) {
  FactorKey k;
  k.kind = FactorKind::prop;
  k.a = std::move(leg);
  return k;
}
inline FactorKey base_key(const Rational& v) {
  FactorKey k;
  k.kind = FactorKind::base;
  k.value = v;
  return k;
}

/// Product of scalar factors with integer (possibly D-dependent) exponents.
class ScalarMonomial {
 public:
  using Map = std::map<FactorKey, Exponent>;

  ScalarMonomial() = default;

  static ScalarMonomial of(const FactorKey& k, Exponent e) {
    ScalarMonomial m;
    m.mul(k, e);
    return m;
  }
  static ScalarMonomial of(const FactorKey& k, int p = 1) { return of(k, Exponent{p, 0}); }

  void mul(const FactorKey& k, Exponent e) {
    if (e.zero()) return;
    auto& slot = f_[k];
    slot += e;
    if (slot.zero()) f_.erase(k);
  }

  ScalarMonomial& operator*=(const ScalarMonomial& o) {
    for (const auto& [k, e] : o.f_) mul(k, e);
    return *this;
  }
  friend ScalarMonomial operator*(ScalarMonomial a, const ScalarMonomial& b) { return a *= b; }

  [[nodiscard]] ScalarMonomial inverse() const {
    ScalarMonomial out;
    for (const auto& [k, e] : f_) out.f_[k] = Exponent{-e.p, -e.q};
    return out;
  }

  [[nodiscard]] Exponent power(const FactorKey& k) const {
    auto it = f_.find(k);
    return it == f_.end() ? Exponent{} : it->second;
  }
  [[nodiscard]] const Map& factors() const { return f_; }
  [[nodiscard]] bool empty() const { return f_.empty(); }

  /// Folds i^2 = -1 and rational bases with integer exponent into `coeff`.
  void reduce(Rational& coeff) {
    auto it = f_.find(symbol_key(sym::i));
    if (it != f_.end()) {
      int p = ((it->second.p % 4) + 4) % 4;
      if (p >= 2) {
        coeff = -coeff;
        p -= 2;
      }
      if (p == 0)
        f_.erase(it);
      else
        it->second.p = p;
    }
    for (auto jt = f_.begin(); jt != f_.end();) {
      if (jt->first.kind == FactorKind::base) {
        if (jt->second.p != 0) {
          coeff *= rational_pow(jt->first.value, jt->second.p);
          jt->second.p = 0;
        }
        if (jt->second.q == 0 || jt->first.value == 1) {
          jt = f_.erase(jt);
          continue;
        }
      }
      ++jt;
    }
  }

  bool operator==(const ScalarMonomial& o) const { return f_ == o.f_; }
  bool operator<(const ScalarMonomial& o) const {
    return std::lexicographical_compare(f_.begin(), f_.end(), o.f_.begin(), o.f_.end());
  }

  /// Deterministic text key (also used for ordering terms).
  [[nodiscard]] std::string key() const {
    std::string s;
    for (const auto& [k, e] : f_) {
      s += std::to_string(static_cast<int>(k.kind));
      s += ':';
      s += k.a;
      s += ',';
      s += k.b;
      s += ',';
      s += std::to_string(k.shift);
      s += ',';
      s += space_name(k.space);
      s += ',';
      s += k.value.str();
      s += '^';
      s += std::to_string(e.p);
      s += '+';
      s += std::to_string(e.q);
      s += "D;";
    }
    return s;
  }

 private:
  Map f_;
};

/// Expands positive integer powers of (D+s), s != 0, into powers of D.
/// Returns a list of (coefficient multiplier, monomial) pairs.
inline std::vector<std::pair<Rational, ScalarMonomial>> expand_dimshifts(const ScalarMonomial& m) {
  std::vector<std::pair<Rational, ScalarMonomial>> out{{Rational(1), ScalarMonomial{}}};
  for (const auto& [k, e] : m.factors()) {
    bool expand = k.kind == FactorKind::dimshift && k.shift != 0 && e.q == 0 && e.p > 0;
    if (!expand) {
      for (auto& [c, mm] : out) mm.mul(k, e);
      continue;
    }
    std::vector<std::pair<Rational, ScalarMonomial>> next;
    // (D+s)^p = sum_j C(p,j) D^j s^(p-j)
    Rational binom = 1;
    for (int j = 0; j <= e.p; ++j) {
      if (j > 0) binom = binom * (e.p - j + 1) / j;
      Rational c = binom * rational_pow(Rational(k.shift), e.p - j);
      for (const auto& [oc, om] : out) {
        ScalarMonomial nm = om;
        nm.mul(dimshift_key(0), Exponent{j, 0});
        next.emplace_back(oc * c, std::move(nm));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace qid
