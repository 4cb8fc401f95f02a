#include <gtest/gtest.h>

#include "qid/symcore/graded_serialize.hpp"
#include "qid/symcore/integrated_normal_form.hpp"

using namespace qid;
using namespace qid::atoms;

namespace {

GradedAtom with_d(GradedAtom a, std::vector<IndexLabel> d) {
  a.d = std::move(d);
  return a;
}

GradedExpr W(std::vector<GradedAtom> as, Rational c = 1) { return GradedExpr::word(std::move(as), c); }

}  // namespace

TEST(GradedNormalize, OddAtomsAnticommute) {
  EXPECT_TRUE(is_zero(W({theta(), ghost(inn_up("S"))}) + W({ghost(inn_up("S")), theta()})));
  EXPECT_TRUE(is_zero(W({theta(), theta()})));
  EXPECT_TRUE(is_zero(W({ghost(inn_up("S")), ghost(inn_up("S"))})));
  EXPECT_FALSE(is_zero(W({ghost(inn_up("S")), ghost(inn_up("T"))})));
}

TEST(GradedNormalize, EvenAtomsCommute) {
  auto a = W({gauge(lor_lo("mu"), inn_up("M")), aux(inn_up("R"))});
  auto b = W({aux(inn_up("R")), gauge(lor_lo("mu"), inn_up("M"))});
  EXPECT_TRUE(is_zero(a - b));
}

TEST(GradedNormalize, LeibnizRule) {
  auto e = W({ghost(inn_up("K")), with_d(ghost(inn_up("M")), {inn_lo("K")})});
  auto lhs = apply_derivative(e, lor_lo("mu"));
  auto rhs = W({with_d(ghost(inn_up("K")), {lor_lo("mu")}), with_d(ghost(inn_up("M")), {inn_lo("K")})}) +
             W({ghost(inn_up("K")), with_d(ghost(inn_up("M")), {inn_lo("K"), lor_lo("mu")})});
  EXPECT_TRUE(is_zero(lhs - rhs));
  // derivative order on one atom is irrelevant
  EXPECT_TRUE(is_zero(W({with_d(ghost(inn_up("M")), {inn_lo("K"), lor_lo("mu")})}) -
                      W({with_d(ghost(inn_up("M")), {lor_lo("mu"), inn_lo("K")})})));
}

TEST(GradedNormalize, IdempotentAndPreservesGrading) {
  auto e = W({ghost(inn_up("K")), gauge(lor_lo("mu"), inn_up("M")), with_d(antighost(inn_lo("M")), {inn_lo("K")})}, 3) +
           W({antighost(inn_lo("M")), with_d(ghost(inn_up("K")), {inn_lo("K")}), gauge(lor_lo("mu"), inn_up("M"))}, -2) +
           W({theta(), ghost(inn_up("A")), aux(inn_lo("A")), gauge(lor_lo("mu"), inn_up("Q")), ghost(inn_lo("Q"))});
  auto n = graded_normalize(e);
  EXPECT_EQ(to_json(n).dump(), to_json(graded_normalize(n)).dump());
  for (size_t i = 0; i < e.terms().size(); ++i) {
    auto one = graded_normalize(GradedExpr({e.terms()[i]}));
    for (const auto& t : one.terms()) {
      EXPECT_EQ(term_ghost(t), term_ghost(e.terms()[i]));
      EXPECT_EQ(term_odd(t), term_odd(e.terms()[i]));
    }
  }
}

TEST(GradedNormalize, DummyRenamingInvariance) {
  auto a = W({ghost(inn_up("K")), with_d(ghost(inn_up("M")), {inn_lo("K")})});
  auto b = W({ghost(inn_up("Z")), with_d(ghost(inn_up("M")), {inn_lo("Z")})});
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(GradedNormalize, OperatorOrderIsKept) {
  auto bc = W({op_B(lor_up("mu")), op_C()});
  auto cb = W({op_C(), op_B(lor_up("mu"))});
  EXPECT_FALSE(is_zero(bc - cb));
  EXPECT_TRUE(is_zero(bc - cb, {Ordering::cyclic}));
  EXPECT_TRUE(is_zero(bc - cb, {Ordering::commutative}));
  auto w1 = W({op_B(lor_up("mu")), op_B(lor_lo("mu")), op_B(lor_up("nu")), op_B(lor_lo("nu"))});
  auto w2 = W({op_B(lor_up("mu")), op_B(lor_up("nu")), op_B(lor_lo("mu")), op_B(lor_lo("nu"))});
  EXPECT_FALSE(is_zero(w1 - w2, {Ordering::cyclic}));
  auto w3 = W({op_B(lor_lo("nu")), op_B(lor_up("mu")), op_B(lor_lo("mu")), op_B(lor_up("nu"))});
  EXPECT_TRUE(is_zero(w1 - w3, {Ordering::cyclic}));
}

TEST(GradedNormalize, AntisymmetricOperator) {
  auto f = W({op_F(lor_up("mu"), lor_up("nu")), op_F(lor_lo("mu"), lor_lo("nu"))});
  auto g = W({op_F(lor_up("nu"), lor_up("mu")), op_F(lor_lo("mu"), lor_lo("nu"))});
  EXPECT_TRUE(is_zero(f + g));
  EXPECT_TRUE(is_zero(W({op_F(lor_up("mu"), lor_lo("mu"))})));
}

TEST(GradedNormalize, MalformedPairing) {
  auto e = W({gauge(lor_lo("mu"), inn_up("M")), gauge(lor_lo("mu"), inn_up("N"))});
  try {
    graded_normalize(e);
    FAIL() << "expected structural error";
  } catch (const StructuralError& err) {
    EXPECT_NE(std::string(err.what()).find("mu"), std::string::npos);
  }
}

TEST(Substitute, CaptureAvoidingAndParity) {
  // omega^M -> h_K nabla^K omega^M where K is already a dummy of the host term
  auto e = W({aux(inn_lo("K")), ghost(inn_up("K")), with_d(ghost(inn_up("M")), {lor_lo("nu")})});
  auto out = substitute(e, match_species(Species::omega), [](const GradedAtom& a) {
    return W({aux(inn_lo("K")), with_d(ghost(a.idx[0]), {inn_up("K")})});
  });
  for (const auto& t : out.terms()) detail::validate_term(t);
  auto hA = aux(inn_lo("A")), hB = aux(inn_lo("B"));
  auto expected = W({aux(inn_lo("K")), hA, with_d(ghost(inn_up("K")), {inn_up("A")}), with_d(hB, {lor_lo("nu")}),
                     with_d(ghost(inn_up("M")), {inn_up("B")})}) +
                  W({aux(inn_lo("K")), hA, with_d(ghost(inn_up("K")), {inn_up("A")}), hB,
                     with_d(ghost(inn_up("M")), {inn_up("B"), lor_lo("nu")})});
  EXPECT_TRUE(is_zero(out - expected));
  EXPECT_THROW(substitute(e, match_species(Species::omega),
                          [](const GradedAtom& a) { return W({aux(a.idx[0])}); }),
               StructuralError);
}

TEST(Ibp, TotalDerivativeVanishes) {
  IbpOptions opt;
  auto a = W({gauge(lor_lo("mu"), inn_up("M")), gauge(lor_up("mu"), inn_lo("M"))});
  EXPECT_TRUE(ibp_normal_form(apply_derivative(a, lor_lo("nu")) * W({field("v", {lor_up("nu")})}) -
                                  W({field("v", {lor_up("nu")})}) * apply_derivative(a, lor_lo("nu")),
                              opt)
                  .empty());
  auto b = W({with_d(gauge(lor_lo("mu"), inn_up("M")), {lor_lo("nu")}), gauge(lor_up("mu"), inn_lo("M"))});
  EXPECT_TRUE(ibp_normal_form(apply_derivative(b, lor_up("nu")), opt).empty());
  // d(A) d(A) = - A dd(A)
  auto x = W({with_d(gauge(lor_lo("mu"), inn_up("M")), {lor_lo("nu")}), with_d(gauge(lor_up("mu"), inn_lo("M")), {lor_up("nu")})});
  auto y = W({gauge(lor_lo("mu"), inn_up("M")), with_d(gauge(lor_up("mu"), inn_lo("M")), {lor_up("nu"), lor_lo("nu")})});
  EXPECT_TRUE(ibp_normal_form(x + y, opt).empty());
  EXPECT_FALSE(ibp_normal_form(x, opt).empty());
}

TEST(Ibp, DivergenceFreeOption) {
  NormalizeOptions opt;
  opt.divergence_free = true;
  EXPECT_TRUE(is_zero(W({with_d(ghost(inn_up("M")), {inn_lo("M")})}), opt));
  EXPECT_FALSE(is_zero(W({with_d(ghost(inn_up("M")), {inn_lo("M")})})));
}

TEST(Serialize, GradedJsonRoundTrip) {
  auto e = W({theta(), with_d(ghost(inn_up("K")), {lor_lo("mu")}), op_F(lor_up("mu"), lor_up("nu"))}, Rational(-5, 6));
  auto j = to_json(e);
  EXPECT_EQ(j.dump(), to_json(graded_from_json(j)).dump());
  EXPECT_FALSE(to_latex(e).empty());
  EXPECT_EQ(to_latex(W({theta(), theta()})), "0");
}
