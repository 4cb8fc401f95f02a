#pragma once

#include "qid/symcore/graded_normalize.hpp"
#include "qid/symcore/serialize.hpp"

namespace qid {

inline json atom_to_json(const GradedAtom& a) {
  json idx = json::array(), d = json::array();
  for (const auto& l : a.idx) idx.push_back(label_to_json(l));
  for (const auto& l : a.d) d.push_back(label_to_json(l));
  json j{{"species", species_name(a.sp)}, {"name", a.name}, {"indices", idx}, {"derivatives", d},
         {"odd", a.odd}, {"ghost", a.ghost}};
  if (a.antisymmetric) j["antisymmetric"] = true;
  return j;
}

inline GradedAtom atom_from_json(const json& j) {
  GradedAtom a;
  std::string sp = j.at("species").get<std::string>();
  bool found = false;
  for (int s = 0; s <= static_cast<int>(Species::Fop); ++s)
    if (sp == species_name(static_cast<Species>(s))) {
      a.sp = static_cast<Species>(s);
      found = true;
    }
  if (!found) throw std::invalid_argument("unknown species: " + sp);
  a.name = j.at("name").get<std::string>();
  for (const auto& l : j.at("indices")) a.idx.push_back(label_from_json(l));
  for (const auto& l : j.at("derivatives")) a.d.push_back(label_from_json(l));
  a.odd = j.at("odd").get<bool>();
  a.ghost = j.at("ghost").get<int>();
  a.antisymmetric = j.value("antisymmetric", false);
  return a;
}

/// Deterministic JSON of the normalized expression.
inline json to_json(const GradedExpr& e, const NormalizeOptions& opt = {}) {
  json terms = json::array();
  for (const auto& t : graded_normalize(e, opt).terms()) {
    json as = json::array();
    for (const auto& a : t.atoms) as.push_back(atom_to_json(a));
    terms.push_back(json{{"coeff", t.coeff.str()}, {"scalars", scalars_to_json(t.scalars)}, {"atoms", as}});
  }
  return json{{"terms", terms}};
}

inline GradedExpr graded_from_json(const json& j) {
  std::vector<GradedTerm> terms;
  for (const auto& jt : j.at("terms")) {
    GradedTerm t;
    t.coeff = parse_rational(jt.at("coeff").get<std::string>());
    t.scalars = scalars_from_json(jt.at("scalars"));
    for (const auto& ja : jt.at("atoms")) t.atoms.push_back(atom_from_json(ja));
    terms.push_back(std::move(t));
  }
  return GradedExpr(std::move(terms));
}

namespace latex {

inline std::string atom(const GradedAtom& a) {
  static const std::map<Species, std::string> sym = {
      {Species::A, "A"}, {Species::h, "h"}, {Species::psi, "\\psi"}, {Species::omega, "\\omega"},
      {Species::omega_star, "\\omega^*"}, {Species::theta, "\\theta"}, {Species::P, "P"},
      {Species::B, "B"}, {Species::C, "C"}, {Species::M, "M"}, {Species::N, "N"},
      {Species::E, "\\mathcal{E}"}, {Species::Aop, "\\mathcal{A}"}, {Species::Fop, "\\mathcal{F}"}};
  std::string s;
  for (const auto& l : a.d) s += (l.space == Space::lorentz ? "\\partial" : "\\nabla") + index(l) + " ";
  auto it = sym.find(a.sp);
  std::string body = it != sym.end() ? it->second : a.name;
  if (!a.d.empty() || a.sp == Species::omega_star) body = "(" + body;
  body += indices(a.idx);
  if (!a.d.empty() || a.sp == Species::omega_star) body += ")";
  return s + body;
}

}  // namespace latex

/// Presentation-only LaTeX rendering of the normalized expression.
inline std::string to_latex(const GradedExpr& e, const NormalizeOptions& opt = {}) {
  auto n = graded_normalize(e, opt);
  if (n.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : n.terms()) {
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

}  // namespace qid
