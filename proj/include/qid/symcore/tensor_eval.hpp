#pragma once

#include "qid/symcore/tensor_expr.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qid {

/// Exact Gaussian rational a + b i.
struct ComplexQ {
  Rational re = 0;
  Rational im = 0;

  ComplexQ() = default;
  ComplexQ(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}

  ComplexQ& operator+=(const ComplexQ& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend ComplexQ operator+(ComplexQ a, const ComplexQ& b) { return a += b; }
  friend ComplexQ operator-(const ComplexQ& a, const ComplexQ& b) { return {a.re - b.re, a.im - b.im}; }
  friend ComplexQ operator*(const ComplexQ& a, const ComplexQ& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  [[nodiscard]] ComplexQ inverse() const {
    Rational n = re * re + im * im;
    if (n == 0) throw std::domain_error("division by zero in numeric evaluation");
    return {re / n, -im / n};
  }
  bool operator==(const ComplexQ& o) const { return re == o.re && im == o.im; }
};

inline ComplexQ cpow(const ComplexQ& z, int p) {
  ComplexQ base = p < 0 ? z.inverse() : z;
  ComplexQ out(1);
  for (int n = 0; n < (p < 0 ? -p : p); ++n) out = out * base;
  return out;
}

/// Numeric values for the evaluation boundary. D is specialized only here.
struct NumericContext {
  int dim = 3;  // inner dimension
  std::map<std::string, ComplexQ> symbols;
  std::map<std::string, std::vector<Rational>> k;  // spacetime momenta, 4 components
  std::map<std::string, std::vector<Rational>> K;  // inner momenta, dim components

  [[nodiscard]] const std::vector<Rational>& vec(const std::string& leg, Space s) const {
    const auto& m = s == Space::lorentz ? k : K;
    auto it = m.find(leg);
    if (it == m.end()) throw std::invalid_argument("no numeric value for momentum " + leg);
    return it->second;
  }
};

inline Rational eta_diag(int mu) { return mu == 0 ? Rational(-1) : Rational(1); }

namespace detail {

inline ComplexQ scalar_value(const ScalarMonomial& m, const NumericContext& ctx) {
  ComplexQ out(1);
  for (const auto& [key, e] : m.factors()) {
    int p = e.p + e.q * ctx.dim;
    ComplexQ v;
    switch (key.kind) {
      case FactorKind::symbol: {
        if (key.a == sym::i) {
          v = ComplexQ(0, 1);
          break;
        }
        auto it = ctx.symbols.find(key.a);
        if (it == ctx.symbols.end()) throw std::invalid_argument("no numeric value for symbol " + key.a);
        v = it->second;
        break;
      }
      case FactorKind::dimshift:
        v = ComplexQ(Rational(ctx.dim + key.shift));
        break;
      case FactorKind::base:
        v = ComplexQ(key.value);
        break;
      case FactorKind::dot: {
        const auto& a = ctx.vec(key.a, key.space);
        const auto& b = ctx.vec(key.b, key.space);
        Rational s = 0;
        for (size_t c = 0; c < a.size(); ++c) s += (key.space == Space::lorentz ? eta_diag(int(c)) : Rational(1)) * a[c] * b[c];
        v = ComplexQ(s);
        break;
      }
      case FactorKind::prop: {
        const auto& a = ctx.vec(key.a, Space::lorentz);
        Rational s = 0;
        for (size_t c = 0; c < a.size(); ++c) s += eta_diag(int(c)) * a[c] * a[c];
        v = ComplexQ(s).inverse();
        break;
      }
    }
    out = out * cpow(v, p);
  }
  return out;
}

inline Rational atom_value(const TensorAtom& a, const std::map<std::pair<std::string, Space>, int>& val,
                           const NumericContext& ctx) {
  auto get = [&](const IndexLabel& l) { return val.at({l.name, l.space}); };
  switch (a.kind) {
    case AtomKind::metric_eta: {
      int x = get(a.i1), y = get(a.i2);
      if (x != y) return 0;
      return a.i1.variance == a.i2.variance ? eta_diag(x) : Rational(1);
    }
    case AtomKind::kron_delta:
      return get(a.i1) == get(a.i2) ? 1 : 0;
    case AtomKind::momentum: {
      int c = get(a.i1);
      const auto& v = ctx.vec(a.leg, a.i1.space);
      if (a.i1.space == Space::lorentz && a.i1.variance == Variance::lower) return eta_diag(c) * v.at(c);
      return v.at(c);
    }
  }
  return 0;
}

}  // namespace detail

/// Componentwise evaluation summing explicitly over dummy labels.
/// `free_values` gives the component of each free label by name.
inline ComplexQ evaluate(const TensorExpr& e, const NumericContext& ctx, const std::map<std::string, int>& free_values) {
  ComplexQ total;
  for (const auto& t : e.terms()) {
    auto occ = detail::occurrences(t);
    std::map<std::pair<std::string, Space>, int> val;
    std::vector<std::pair<std::string, Space>> dummies;
    for (const auto& [key, o] : occ) {
      if (o.size() == 2) {
        dummies.push_back(key);
      } else {
        auto it = free_values.find(key.first);
        if (it == free_values.end()) throw std::invalid_argument("no component for free label " + key.first);
        val[key] = it->second;
      }
    }
    ComplexQ sc = detail::scalar_value(t.scalars, ctx) * ComplexQ(t.coeff);
    Rational sum = 0;
    std::function<void(size_t)> rec = [&](size_t n) {
      if (n == dummies.size()) {
        Rational p = 1;
        for (const auto& a : t.atoms) {
          p *= detail::atom_value(a, val, ctx);
          if (p == 0) return;
        }
        sum += p;
        return;
      }
      int range = dummies[n].second == Space::lorentz ? 4 : ctx.dim;
      for (int c = 0; c < range; ++c) {
        val[dummies[n]] = c;
        rec(n + 1);
      }
    };
    rec(0);
    total += sc * ComplexQ(sum);
  }
  return total;
}

}  // namespace qid
