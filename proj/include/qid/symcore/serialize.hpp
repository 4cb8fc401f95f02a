#pragma once

#include "qid/symcore/tensor_expr.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace qid {

using json = nlohmann::ordered_json;

inline json label_to_json(const IndexLabel& l) {
  return json{{"name", l.name},
              {"space", space_name(l.space)},
              {"variance", l.variance == Variance::upper ? "upper" : "lower"}};
}

inline IndexLabel label_from_json(const json& j) {
  IndexLabel l;
  l.name = j.at("name").get<std::string>();
  l.space = j.at("space").get<std::string>() == "inner" ? Space::inner : Space::lorentz;
  l.variance = j.at("variance").get<std::string>() == "lower" ? Variance::lower : Variance::upper;
  return l;
}

inline const char* factor_kind_name(FactorKind k) {
  switch (k) {
    case FactorKind::symbol: return "symbol";
    case FactorKind::dimshift: return "dimshift";
    case FactorKind::dot: return "dot";
    case FactorKind::prop: return "prop";
    case FactorKind::base: return "base";
  }
  return "?";
}

inline json scalars_to_json(const ScalarMonomial& m) {
  json arr = json::array();
  for (const auto& [k, e] : m.factors()) {
    json f{{"kind", factor_kind_name(k.kind)}};
    switch (k.kind) {
      case FactorKind::symbol: f["name"] = k.a; break;
      case FactorKind::dimshift: f["shift"] = k.shift; break;
      case FactorKind::dot:
        f["legs"] = json::array({k.a, k.b});
        f["space"] = space_name(k.space);
        break;
      case FactorKind::prop: f["leg"] = k.a; break;
      case FactorKind::base: f["value"] = k.value.str(); break;
    }
    f["pow"] = e.p;
    if (e.q != 0) f["pow_D"] = e.q;
    arr.push_back(f);
  }
  return arr;
}

inline ScalarMonomial scalars_from_json(const json& arr) {
  ScalarMonomial m;
  for (const auto& f : arr) {
    std::string kind = f.at("kind").get<std::string>();
    FactorKey k;
    if (kind == "symbol") {
      k = symbol_key(f.at("name").get<std::string>());
    } else if (kind == "dimshift") {
      k = dimshift_key(f.at("shift").get<int>());
    } else if (kind == "dot") {
      k = dot_key(f.at("legs")[0].get<std::string>(), f.at("legs")[1].get<std::string>(),
                  f.at("space").get<std::string>() == "inner" ? Space::inner : Space::lorentz);
    } else if (kind == "prop") {
      k = prop_key(f.at("leg").get<std::string>());
    } else if (kind == "base") {
      k = base_key(parse_rational(f.at("value").get<std::string>()));
    } else {
      throw std::invalid_argument("unknown scalar factor kind: " + kind);
    }
    m.mul(k, Exponent{f.at("pow").get<int>(), f.value("pow_D", 0)});
  }
  return m;
}

inline const char* atom_kind_name(AtomKind k) {
  switch (k) {
    case AtomKind::metric_eta: return "eta";
    case AtomKind::kron_delta: return "delta";
    case AtomKind::momentum: return "momentum";
  }
  return "?";
}

/// Deterministic JSON of a canonical TensorExpr.
inline json to_json(const TensorExpr& e) {
  json terms = json::array();
  for (const auto& t : canonicalize(e).terms()) {
    json atoms = json::array();
    for (const auto& a : t.atoms) {
      json ja{{"kind", atom_kind_name(a.kind)}};
      if (a.kind == AtomKind::momentum) {
        ja["leg"] = a.leg;
        ja["indices"] = json::array({label_to_json(a.i1)});
      } else {
        ja["indices"] = json::array({label_to_json(a.i1), label_to_json(a.i2)});
      }
      atoms.push_back(ja);
    }
    terms.push_back(json{{"coeff", t.coeff.str()}, {"scalars", scalars_to_json(t.scalars)}, {"atoms", atoms}});
  }
  return json{{"terms", terms}};
}

inline TensorExpr tensor_from_json(const json& j) {
  std::vector<TensorTerm> terms;
  for (const auto& jt : j.at("terms")) {
    TensorTerm t;
    t.coeff = parse_rational(jt.at("coeff").get<std::string>());
    t.scalars = scalars_from_json(jt.at("scalars"));
    for (const auto& ja : jt.at("atoms")) {
      std::string kind = ja.at("kind").get<std::string>();
      const auto& idx = ja.at("indices");
      if (kind == "eta")
        t.atoms.push_back(eta(label_from_json(idx[0]), label_from_json(idx[1])));
      else if (kind == "delta")
        t.atoms.push_back(delta(label_from_json(idx[0]), label_from_json(idx[1])));
      else if (kind == "momentum")
        t.atoms.push_back(mom(ja.at("leg").get<std::string>(), label_from_json(idx[0])));
      else
        throw std::invalid_argument("unknown atom kind: " + kind);
    }
    terms.push_back(std::move(t));
  }
  return canonicalize(TensorExpr(std::move(terms)));
}

namespace latex {

inline std::string name(const std::string& n) {
  static const char* greek[] = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota",
                                "kappa", "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "phi", "chi",
                                "psi", "omega"};
  for (const char* g : greek)
    if (n == g) return std::string("\\") + g;
  if (n.rfind("_", 0) == 0) return n.substr(1);
  return n;
}

inline std::string rational(const Rational& r, bool leading) {
  std::string sign = r < 0 ? "-" : (leading ? "" : "+");
  Rational a = r < 0 ? Rational(-r) : r;
  auto num = boost::multiprecision::numerator(a), den = boost::multiprecision::denominator(a);
  if (den == 1) return sign + (num == 1 ? std::string() : num.str() + " ");
  return sign + "\\frac{" + num.str() + "}{" + den.str() + "} ";
}

inline std::string exponent(const Exponent& e) {
  if (e.q == 0) return e.p == 1 ? "" : "^{" + std::to_string(e.p) + "}";
  std::string s;
  if (e.q == 1)
    s = "D";
  else if (e.q == -1)
    s = "-D";
  else
    s = std::to_string(e.q) + "D";
  if (e.p > 0) s += "+" + std::to_string(e.p);
  if (e.p < 0) s += std::to_string(e.p);
  return "^{" + s + "}";
}

inline std::string scalars(const ScalarMonomial& m) {
  std::string s;
  for (const auto& [k, e] : m.factors()) {
    switch (k.kind) {
      case FactorKind::symbol: {
        std::string n = k.a == sym::Lambda ? "\\Lambda" : k.a == sym::Omega4 ? "\\Omega_4"
                        : k.a == sym::OmegaD ? "\\Omega_D" : k.a == sym::eps ? "\\varepsilon"
                        : k.a == sym::xi ? "\\xi" : k.a == sym::pi ? "\\pi" : k.a;
        s += n + exponent(e) + " ";
        break;
      }
      case FactorKind::dimshift:
        s += (k.shift == 0 ? std::string("D") : "(D" + std::string(k.shift > 0 ? "+" : "") + std::to_string(k.shift) + ")") +
             exponent(e) + " ";
        break;
      case FactorKind::dot:
        s += (k.space == Space::lorentz ? "(k_{" + k.a + "}\\cdot k_{" + k.b + "})" : "(K_{" + k.a + "}\\cdot K_{" + k.b + "})") +
             exponent(e) + " ";
        break;
      case FactorKind::prop:
        s += "(k_{" + k.a + "}^2-i\\varepsilon)" + exponent(Exponent{-e.p, -e.q}) + " ";
        break;
      case FactorKind::base:
        s += k.value.str() + exponent(e) + " ";
        break;
    }
  }
  return s;
}

inline std::string index(const IndexLabel& l) {
  return (l.variance == Variance::upper ? "^{" : "_{") + name(l.name) + "}";
}

/// Runs of equal variance share one script: ^{\mu\nu}, mixed runs are staggered with {}.
inline std::string indices(const std::vector<IndexLabel>& ls) {
  std::string s;
  for (size_t i = 0; i < ls.size();) {
    size_t j = i;
    std::string body;
    for (; j < ls.size() && ls[j].variance == ls[i].variance; ++j) body += (j > i ? " " : "") + name(ls[j].name);
    s += (i ? "{}" : "") + std::string(ls[i].variance == Variance::upper ? "^{" : "_{") + body + "}";
    i = j;
  }
  return s;
}

}  // namespace latex

/// Presentation-only LaTeX rendering.
inline std::string to_latex(const TensorExpr& e) {
  auto c = canonicalize(e);
  if (c.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : c.terms()) {
    std::string body = latex::scalars(t.scalars);
    for (const auto& a : t.atoms) {
      switch (a.kind) {
        case AtomKind::metric_eta: body += "\\eta" + latex::indices({a.i1, a.i2}) + " "; break;
        case AtomKind::kron_delta: body += "\\delta" + latex::indices({a.i1, a.i2}) + " "; break;
        case AtomKind::momentum:
          body += "{" + std::string(a.i1.space == Space::lorentz ? "k" : "K") + "_{" + a.leg + "}}" + latex::index(a.i1) + " ";
          break;
      }
    }
    std::string coeff = latex::rational(t.coeff, first);
    if (body.empty() && (coeff.empty() || coeff == "-" || coeff == "+")) coeff += "1";
    out += coeff + body;
    first = false;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace qid
