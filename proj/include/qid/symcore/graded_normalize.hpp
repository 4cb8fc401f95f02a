#pragma once

#include "qid/symcore/graded_expr.hpp"

#include <numeric>

namespace qid {

/// super       : fields supercommute, operators keep their order
/// cyclic      : as super, plus cyclic rotation of the operator word (formal trace)
/// commutative : every atom supercommutes (abelian limit)
enum class Ordering : unsigned char { super, cyclic, commutative };

struct NormalizeOptions {
  Ordering ordering = Ordering::super;
  bool divergence_free = false;  // nabla_M X^M = 0 for atoms with one inner index
};

namespace detail {

inline std::string species_key(const GradedAtom& a) {
  std::string s = std::to_string(static_cast<int>(a.sp));
  s += a.name;
  return s;
}

struct Arrangement {
  std::string key;
  int sign = 1;
  std::vector<GradedAtom> atoms;
};

/// Builds the key of a fixed arrangement, renaming dummies by first appearance.
inline Arrangement render(const std::vector<GradedAtom>& as, const std::map<LabelId, int>& counts) {
  Arrangement r;
  r.atoms = as;
  std::map<LabelId, std::string> names;
  std::map<LabelId, int> seen;
  int nl = 0, ni = 0;
  auto fix = [&](IndexLabel& l) {
    LabelId id{l.name, l.space};
    if (counts.at(id) == 2) {
      auto it = names.find(id);
      if (it == names.end())
        it = names.emplace(id, l.space == Space::lorentz ? "_l" + std::to_string(++nl) : "_i" + std::to_string(++ni)).first;
      int k = seen[id]++;
      l.name = it->second;
      if (l.space == Space::lorentz) l.variance = k == 0 ? Variance::upper : Variance::lower;
    }
    if (l.space == Space::inner) l.variance = Variance::upper;
    r.key += l.name;
    r.key += l.space == Space::lorentz ? (l.variance == Variance::upper ? "^" : "_") : "'";
  };
  for (auto& a : r.atoms) {
    r.key += species_key(a);
    r.key += '(';
    for (auto& l : a.idx) fix(l);
    r.key += ")[";
    for (auto& l : a.d) fix(l);
    r.key += "]";
  }
  return r;
}

inline bool operator_order_ok(const std::vector<int>& perm, const std::vector<GradedAtom>& as, Ordering o) {
  if (o == Ordering::commutative) return true;
  std::vector<int> ops;
  for (int p : perm)
    if (is_operator(as[p].sp)) ops.push_back(p);
  if (ops.size() <= 1) return true;
  std::vector<int> orig;
  for (int i = 0; i < static_cast<int>(as.size()); ++i)
    if (is_operator(as[i].sp)) orig.push_back(i);
  if (o == Ordering::super) return ops == orig;
  for (size_t r = 0; r < orig.size(); ++r) {
    bool ok = true;
    for (size_t i = 0; i < orig.size() && ok; ++i) ok = ops[i] == orig[(i + r) % orig.size()];
    if (ok) return true;
  }
  return false;
}

inline int odd_sign(const std::vector<int>& perm, const std::vector<GradedAtom>& as) {
  int inv = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (as[perm[i]].odd && as[perm[j]].odd && perm[i] > perm[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

struct CanonResult {
  bool zero = false;
  int sign = 1;
  std::string key;
  std::vector<GradedAtom> atoms;
};

inline void validate_term(const GradedTerm& t) {
  std::map<LabelId, std::vector<Variance>> var;
  for (const auto& a : t.atoms) {
    for (const auto& l : a.idx) var[{l.name, l.space}].push_back(l.variance);
    for (const auto& l : a.d) var[{l.name, l.space}].push_back(l.variance);
  }
  for (const auto& [id, v] : var) {
    if (v.size() > 2)
      throw StructuralError("index label '" + id.first + "' appears " + std::to_string(v.size()) + " times");
    if (v.size() == 2 && id.second == Space::lorentz && v[0] == v[1])
      throw StructuralError("index label '" + id.first + "' contracted with equal variance");
  }
}

inline CanonResult canonical(const GradedTerm& t, const NormalizeOptions& opt) {
  validate_term(t);
  CanonResult res;
  const auto& as = t.atoms;
  if (opt.divergence_free) {
    for (const auto& a : as) {
      const IndexLabel* inner = nullptr;
      int n = 0;
      for (const auto& l : a.idx)
        if (l.space == Space::inner) inner = &l, ++n;
      if (n != 1) continue;
      for (const auto& l : a.d)
        if (l.space == Space::inner && l.name == inner->name) res.zero = true;
    }
    if (res.zero) return res;
  }
  auto counts = label_counts(t);
  std::vector<int> perm(as.size());
  std::iota(perm.begin(), perm.end(), 0);
  bool have = false;
  std::set<int> signs;
  do {
    if (!operator_order_ok(perm, as, opt.ordering)) continue;
    int psign = odd_sign(perm, as);
    std::vector<GradedAtom> arr;
    arr.reserve(as.size());
    for (int p : perm) arr.push_back(as[p]);
    for (auto& a : arr)
      std::sort(a.d.begin(), a.d.end(), [](const IndexLabel& x, const IndexLabel& y) {
        return std::tie(x.space, x.name, x.variance) < std::tie(y.space, y.name, y.variance);
      });
    // enumerate derivative orderings and antisymmetric swaps atom by atom
    std::function<void(size_t, int)> rec = [&](size_t i, int sign) {
      if (i == arr.size()) {
        Arrangement r = render(arr, counts);
        if (!have || r.key < res.key) {
          have = true;
          res.key = r.key;
          res.atoms = std::move(r.atoms);
          signs = {sign};
          res.sign = sign;
        } else if (r.key == res.key) {
          signs.insert(sign);
        }
        return;
      }
      auto& a = arr[i];
      auto saved_d = a.d;
      do {
        rec(i + 1, sign);
        if (a.antisymmetric && a.idx.size() >= 2) {
          std::swap(a.idx[0], a.idx[1]);
          rec(i + 1, -sign);
          std::swap(a.idx[0], a.idx[1]);
        }
      } while (std::next_permutation(a.d.begin(), a.d.end(), [](const IndexLabel& x, const IndexLabel& y) {
        return std::tie(x.space, x.name, x.variance) < std::tie(y.space, y.name, y.variance);
      }));
      a.d = saved_d;
    };
    rec(0, psign);
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (signs.size() > 1) res.zero = true;
  return res;
}

inline std::string full_key(const ScalarMonomial& s, const std::string& atoms_key) { return s.key() + "|" + atoms_key; }

}  // namespace detail

/// Canonical representative: atoms ordered, dummies renamed, signs applied, like terms
/// combined, vanishing terms dropped. Idempotent.
inline GradedExpr graded_normalize(const GradedExpr& e, const NormalizeOptions& opt = {}) {
  std::map<std::string, GradedTerm> acc;
  for (const auto& t : e.terms()) {
    if (t.coeff == 0) continue;
    auto c = detail::canonical(t, opt);
    if (c.zero) continue;
    for (auto& [mult, m] : expand_dimshifts(t.scalars)) {
      GradedTerm u{t.coeff * mult * c.sign, std::move(m), c.atoms};
      u.scalars.reduce(u.coeff);
      auto k = detail::full_key(u.scalars, c.key);
      auto it = acc.find(k);
      if (it == acc.end())
        acc.emplace(k, std::move(u));
      else
        it->second.coeff += u.coeff;
    }
  }
  std::vector<GradedTerm> out;
  for (auto& [k, t] : acc)
    if (t.coeff != 0) out.push_back(std::move(t));
  return GradedExpr(std::move(out));
}

inline bool is_zero(const GradedExpr& e, const NormalizeOptions& opt = {}) { return graded_normalize(e, opt).empty(); }

/// Canonical key of a single normalized monomial (coefficient ignored).
inline std::string monomial_key(const GradedTerm& t, const NormalizeOptions& opt = {}) {
  auto c = detail::canonical(t, opt);
  return detail::full_key(t.scalars, c.key);
}

}  // namespace qid
