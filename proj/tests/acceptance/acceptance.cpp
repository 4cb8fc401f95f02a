#include "qid/qid.hpp"
#include "qid/symcore/tensor_eval.hpp"
#include "support/ball_quadrature.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>

using namespace qid;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

// 1. divergent-part table against the Feynman-parameter reduction; the reduction itself is
// cross-checked on the unpublished cases against frozen components
Outcome table() {
  for (auto [r, n] : looptab::published_cases()) {
    auto oracle = looptab::reduce_oracle({r, n}).pole_coeff;
    if (!equal(oracle, looptab::published(r, n)->pole_coeff))
      return {false, "rank " + std::to_string(r) + " denoms " + std::to_string(n)};
  }
  std::ifstream in(std::string(QID_SOURCE_DIR) + "/tests/golden/looptab.json");
  auto g = json::parse(in);
  NumericContext ctx;
  for (const auto& [leg, vs] : g.at("momenta").items())
    for (const auto& x : vs) ctx.k[leg].push_back(parse_rational(x.get<std::string>()));
  int checked = 0;
  for (const auto& c : g.at("cases")) {
    looptab::LoopIntegral li{c.at("rank").get<int>(), c.at("denoms").get<int>()};
    auto pole = looptab::reduce_oracle(li).pole_coeff;
    const auto& comps = c.at("components_over_i");
    int total = 1;
    for (int r = 0; r < li.rank; ++r) total *= 4;
    for (int flat = 0; flat < total; ++flat) {
      std::map<std::string, int> fv;
      std::string key;
      std::vector<int> idx(li.rank);
      for (int r = 0, f = flat; r < li.rank; ++r, f /= 4) idx[li.rank - 1 - r] = f % 4;
      for (int r = 0; r < li.rank; ++r) {
        fv[looptab::numerator_names()[r]] = idx[r];
        key += (r ? "," : "") + std::to_string(idx[r]);
      }
      Rational expect = comps.contains(key) ? parse_rational(comps.at(key).get<std::string>()) : Rational(0);
      auto got = evaluate(pole, ctx, fv);
      if (got.re != 0 || got.im != expect) return {false, "golden component " + key};
      ++checked;
    }
  }
  return {true, "7 entries exact, " + std::to_string(checked) + " oracle components against golden"};
}

// 2. nine-term bracket
Outcome bracket() {
  auto got = heatkernel::trace_ln_div(heatkernel::generic());
  auto stripped = heatkernel::strip_pole(got);
  auto opt = heatkernel::trace_ibp().norm;
  auto ms = heatkernel::bracket_monomials();
  std::string coeffs;
  for (size_t j = 0; j < ms.size(); ++j) {
    auto c = coefficient_of(stripped, ms[j], opt);
    coeffs += (j ? " " : "") + to_string(c);
    if (c != heatkernel::bracket_coefficients()[j]) return {false, "term " + std::to_string(j + 1) + " = " + to_string(c)};
  }
  auto residue = ibp_normal_form(got - heatkernel::published_trace_ln(), heatkernel::trace_ibp());
  if (!residue.empty()) return {false, "extra terms"};
  return {true, coeffs};
}

// 3. covariant closure
Outcome closure() {
  auto c = heatkernel::covariant_simplify(heatkernel::from_covariant(heatkernel::generic_covariant()));
  bool ok = c.closes() && c.ff == Rational(1, 12) && c.ee == Rational(1, 2);
  return {ok, "F^2 " + to_string(c.ff) + ", E^2 " + to_string(c.ee) + ", residue terms " + std::to_string(c.residue.terms().size())};
}

// 4. divergent action coefficient with intermediates
Outcome coefficient() {
  auto D = [](const Rational& c) { return TensorExpr::scalar(c, ScalarMonomial::of(dimshift_key(0))); };
  if (!equal(renorm::determinant_div(renorm::Determinant::gauge), D(Rational(5, 3)))) return {false, "gauge determinant"};
  if (!equal(renorm::determinant_div(renorm::Determinant::ghost), D(Rational(-1, 12)))) return {false, "ghost determinant"};
  auto got = renorm::qid_divergent_action();
  auto want = renorm::action_unit() * TensorExpr::scalar(Rational(11, 12), ScalarMonomial::of(dimshift_key(0)));
  if (!equal(got, want)) return {false, to_latex(got)};
  return {true, "5/3 D, -1/12 D, total " + to_latex(got)};
}

// 5. matter contributions
Outcome matter() {
  using renorm::MatterKind;
  std::vector<std::pair<MatterKind, Rational>> want = {{MatterKind::gauge_field, Rational(1, 6)},
                                                       {MatterKind::dirac, Rational(-1, 3)},
                                                       {MatterKind::chiral, Rational(-1, 6)},
                                                       {MatterKind::scalar_doublet, Rational(-1, 6)},
                                                       {MatterKind::complex_scalar, Rational(-1, 12)}};
  std::string d;
  for (auto [k, v] : want) {
    auto got = renorm::matter_div(k);
    d += std::string(d.empty() ? "" : ", ") + renorm::matter_name(k) + " " + to_string(got);
    if (got != v) return {false, d};
  }
  return {true, d};
}

// 6. beta functions
Outcome beta() {
  auto pure = renorm::beta({});
  for (int D = 1; D <= 64; ++D)
    if (pure.coefficient(D) != 11 * D || !pure.asymptotically_free(D)) return {false, "pure at D=" + std::to_string(D)};
  auto sm = renorm::beta(renorm::MatterContent::standard_model());
  for (int D = 1; D <= 64; ++D)
    if (sm.coefficient(D) != 11 * (D - 6) - 2) return {false, "sm at D=" + std::to_string(D)};
  if (!sm.asymptotically_free(7) || sm.asymptotically_free(6)) return {false, "sm verdicts"};
  auto nh = renorm::beta(renorm::MatterContent::standard_model(false));
  if (nh.coefficient(6) != 0) return {false, "no-higgs at D=6"};
  return {true, "pure 11D, sm " + sm.coefficient_string() + ", no-higgs zero at D=6"};
}

// 7. BRST
Outcome brst_checks() {
  for (auto g : {brst::Generator::A, brst::Generator::omega, brst::Generator::omega_star, brst::Generator::h, brst::Generator::psi}) {
    auto r = brst::verify_nilpotent(g);
    if (!r.ok()) return {false, std::string(brst::generator_name(g)) + ": " + to_latex(r.residue)};
  }
  auto ex = brst::exactness_check();
  if (!ex.ok()) return {false, "exactness: " + to_latex(ex.residue)};
  return {true, "s^2 = 0 on five generators, gauge fixing exact"};
}

// 8. power counting, with an independent cycle-rank count
int cycle_rank(const powercount::FeynmanGraph& g) {
  std::map<int, int> comp;
  for (const auto& v : g.vertices) comp[v.id] = v.id;
  int closing = 0;
  for (const auto& e : g.internal_edges) {
    int a = comp[e.a], b = comp[e.b];
    if (a == b) {
      ++closing;
      continue;
    }
    for (auto& [id, c] : comp)
      if (c == b) c = a;
  }
  return closing;
}

Outcome power_counting() {
  std::mt19937 rng(20250611);
  int mismatches = 0;
  for (int n = 0; n < 200; ++n) {
    auto g = powercount::random_graph(rng, 8);
    int d = 0;
    for (const auto& v : g.vertices) d += powercount::lines_and_derivatives(v.type).second;
    int counted = 4 * cycle_rank(g) - 2 * static_cast<int>(g.internal_edges.size()) + d;
    int B = static_cast<int>(g.external_legs.size());
    if (powercount::brute_degree(g) != 4 - B || counted != 4 - B) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 200 graphs"};
}

// 9. inner moments
double moment_value(int n, int D, int L, const std::map<std::string, int>& comps) {
  NumericContext ctx;
  ctx.dim = D;
  ctx.symbols[sym::OmegaD] = ComplexQ(1);
  ctx.symbols[sym::Lambda] = ComplexQ(Rational(L));
  return to_double(evaluate(innerspace::moment(n).result, ctx, comps).re) * innerspace::omega_numeric(D);
}

Outcome inner_moments() {
  double worst = 0;
  for (int D : {2, 3, 4})
    for (int L : {1, 2}) {
      double q0 = oracle::ball_integral(D, L, [](const std::vector<double>&) { return 1.0; });
      double q2 = oracle::ball_integral(D, L, [](const std::vector<double>& p) { return p[0] * p[0]; });
      worst = std::max(worst, std::abs(moment_value(0, D, L, {}) / q0 - 1));
      worst = std::max(worst, std::abs(moment_value(2, D, L, {{"I", 0}, {"J", 0}}) / q2 - 1));
    }
  if (worst > 1e-9) return {false, "relative error " + std::to_string(worst)};
  if (!(innerspace::omega_exact(4) == innerspace::PiPower{Rational(1, 8), Rational(-2)})) return {false, "Omega_4"};
  for (int n : {0, 2, 4})
    if (!innerspace::scaling_check(n, Rational(3, 2))) return {false, "scaling n=" + std::to_string(n)};
  std::ostringstream d;
  d << "max relative error " << worst << ", Omega_4 = 1/(8 pi^2), scaling n = 0,2,4";
  return {true, d.str()};
}

// 10. Feynman rules
template <class F>
int permutations(const std::vector<rules::Leg>& legs, F f) {
  std::vector<int> p(legs.size());
  for (size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
  int bad = 0;
  do {
    std::vector<rules::Leg> q;
    for (int i : p) q.push_back(legs[i]);
    if (!f(q)) ++bad;
  } while (std::next_permutation(p.begin(), p.end()));
  return bad;
}

TensorExpr zero_inner(TensorExpr e, const std::vector<rules::Leg>& legs) {
  for (const auto& l : legs) e = substitute_momentum(e, l.name(), Space::inner, {});
  return e;
}

Outcome feynman_rules() {
  auto l3 = rules::default_gauge_legs(3), l4 = rules::default_gauge_legs(4), lg = rules::default_ghost_legs();
  auto v3 = rules::vertex3(l3).expr, v4 = rules::vertex4(l4).expr;
  int bad3 = permutations(l3, [&](const auto& q) { return equal(rules::vertex3(q).expr, v3); });
  int bad4 = permutations(l4, [&](const auto& q) { return equal(rules::vertex4(q).expr, v4); });
  if (bad3 || bad4) return {false, std::to_string(bad3) + "/6 and " + std::to_string(bad4) + "/24 permutations differ"};
  if (!is_zero(zero_inner(v3, l3)) || !is_zero(zero_inner(v4, l4)) || !is_zero(zero_inner(rules::vertex_ghost(lg).expr, lg)))
    return {false, "vertex survives K -> 0"};
  auto g = rules::gauge_propagator(Rational(0), "1", lor_lo("mu"), inn_up("M"), lor_lo("nu"), inn_up("N"));
  if (!is_zero(g * TensorExpr::atom(mom("1", lor_up("mu"))))) return {false, "propagator not transverse"};
  return {true, "6 and 24 permutations, K -> 0, transverse at xi = 0"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Outcome (*)()>> criteria = {
      {"divergent-part table", table},     {"master bracket", bracket},  {"covariant closure", closure},
      {"divergent action", coefficient},   {"matter contributions", matter}, {"beta functions", beta},
      {"BRST", brst_checks},               {"power counting", power_counting}, {"inner moments", inner_moments},
      {"Feynman rules", feynman_rules}};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail << '\n';
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed ? 1 : 0;
}
