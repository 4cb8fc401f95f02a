#pragma once

#include "qid/symcore/graded_normalize.hpp"

#include <deque>
#include <tuple>
#include <unordered_map>

namespace qid {

struct IbpOptions {
  NormalizeOptions norm;
  Space space = Space::lorentz;       // total derivatives of this space integrate to zero
  std::vector<GradedExpr> preferred;  // monomials kept as basis elements when possible (scalars ignored)
};

namespace detail {

struct IbpSystem {
  std::vector<GradedTerm> mono;  // coefficient 1 representatives
  std::vector<std::string> keys;
  std::unordered_map<std::string, int> id;
  std::vector<std::tuple<int, int, std::string>> rank;  // (preferred ? 0 : 1, max derivatives on one atom, key)

  int intern(const GradedTerm& t, const std::string& key, bool preferred, Space sp) {
    auto it = id.find(key);
    if (it != id.end()) return it->second;
    int n = static_cast<int>(mono.size());
    GradedTerm rep = t;
    rep.coeff = 1;
    mono.push_back(rep);
    keys.push_back(key);
    id.emplace(key, n);
    int md = 0;
    for (const auto& a : t.atoms) {
      int c = 0;
      for (const auto& l : a.d)
        if (l.space == sp) ++c;
      md = std::max(md, c);
    }
    rank.emplace_back(preferred ? 0 : 1, md, key);
    return n;
  }
};

using SparseRow = std::map<int, Rational>;

/// Normalized linear combination as a sparse row over interned monomials.
inline SparseRow to_row(const GradedExpr& e, IbpSystem& sys, const IbpOptions& opt, const std::set<std::string>& pref,
                        std::vector<int>* fresh) {
  SparseRow row;
  for (const auto& t : graded_normalize(e, opt.norm).terms()) {
    auto atoms_key = detail::canonical(t, opt.norm).key;
    size_t before = sys.mono.size();
    int i = sys.intern(t, detail::full_key(t.scalars, atoms_key), pref.count(atoms_key) > 0, opt.space);
    if (fresh && sys.mono.size() > before) fresh->push_back(i);
    row[i] += t.coeff;
    if (row[i] == 0) row.erase(i);
  }
  return row;
}

}  // namespace detail

/// Normal form modulo total derivatives. The relation space is closed under all
/// derivative removals; elimination order removes monomials with the most derivatives
/// on a single atom first and keeps preferred monomials last.
inline GradedExpr ibp_normal_form(const GradedExpr& e, const IbpOptions& opt) {
  detail::IbpSystem sys;
  std::set<std::string> pref;
  for (const auto& p : opt.preferred)
    for (const auto& t : graded_normalize(p, opt.norm).terms())
      pref.insert(detail::canonical(t, opt.norm).key);

  std::vector<int> queue;
  detail::SparseRow target = detail::to_row(e, sys, opt, pref, &queue);

  std::vector<detail::SparseRow> relations;
  std::set<std::string> seen_rel;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    GradedTerm m = sys.mono[queue[qi]];
    for (size_t j = 0; j < m.atoms.size(); ++j) {
      for (size_t q = 0; q < m.atoms[j].d.size(); ++q) {
        if (m.atoms[j].d[q].space != opt.space) continue;
        GradedTerm w = m;
        IndexLabel l = w.atoms[j].d[q];
        w.atoms[j].d.erase(w.atoms[j].d.begin() + static_cast<long>(q));
        GradedExpr rel = apply_derivative(GradedExpr({w}), l);
        detail::SparseRow row = detail::to_row(rel, sys, opt, pref, &queue);
        if (row.empty()) continue;
        // normalize the row for deduplication
        Rational lead = row.rbegin()->second;
        std::string sig;
        for (auto& [k, v] : row) {
          v /= lead;
          sig += std::to_string(k) + ":" + v.str() + ";";
        }
        if (seen_rel.insert(sig).second) relations.push_back(std::move(row));
      }
    }
  }

  auto greater = [&](int a, int b) { return sys.rank[a] > sys.rank[b]; };
  auto lead_of = [&](const detail::SparseRow& r) {
    int best = -1;
    for (const auto& [k, v] : r)
      if (best < 0 || greater(k, best)) best = k;
    return best;
  };
  std::map<int, detail::SparseRow> pivots;
  auto reduce = [&](detail::SparseRow r) {
    while (!r.empty()) {
      // find the largest monomial that has a pivot
      int hit = -1;
      for (const auto& [k, v] : r)
        if (pivots.count(k) && (hit < 0 || greater(k, hit))) hit = k;
      if (hit < 0) break;
      Rational c = r[hit];
      for (const auto& [k, v] : pivots[hit]) {
        r[k] -= c * v;
        if (r[k] == 0) r.erase(k);
      }
    }
    return r;
  };
  for (auto& rel : relations) {
    auto r = reduce(rel);
    if (r.empty()) continue;
    int lead = lead_of(r);
    Rational c = r[lead];
    for (auto& [k, v] : r) v /= c;
    pivots.emplace(lead, std::move(r));
  }
  auto nf = reduce(target);
  std::vector<GradedTerm> out;
  for (const auto& [k, v] : nf) {
    GradedTerm t = sys.mono[k];
    t.coeff = v;
    out.push_back(std::move(t));
  }
  return graded_normalize(GradedExpr(std::move(out)), opt.norm);
}

/// Coefficient of a single (normalized) basis monomial in `e`.
inline Rational coefficient_of(const GradedExpr& e, const GradedExpr& basis, const NormalizeOptions& opt = {}) {
  auto b = graded_normalize(basis, opt);
  if (b.terms().size() != 1) throw StructuralError("basis element must be a single monomial");
  const auto& bt = b.terms()[0];
  auto key = detail::full_key(bt.scalars, detail::canonical(bt, opt).key);
  for (const auto& t : graded_normalize(e, opt).terms())
    if (detail::full_key(t.scalars, detail::canonical(t, opt).key) == key) return t.coeff / bt.coeff;
  return 0;
}

}  // namespace qid
