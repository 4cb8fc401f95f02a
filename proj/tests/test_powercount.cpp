#include <gtest/gtest.h>

#include "qid/powercount.hpp"

#include <set>

using namespace qid;
using namespace qid::powercount;

namespace {

FeynmanGraph self_energy() {
  return {{{VertexType::gauge3, 1}, {VertexType::gauge3, 2}},
          {{1, 2, LineKind::gauge}, {1, 2, LineKind::gauge}},
          {{1, LegKind::gauge}, {2, LegKind::gauge}}};
}

/// Independent cycle rank: edges that close a cycle while growing a spanning forest.
int cycle_rank(const FeynmanGraph& g) {
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

}  // namespace

TEST(DivergenceIndex, AllVerticesMarginal) {
  EXPECT_EQ(divergence_index(VertexType::gauge3), 0);
  EXPECT_EQ(divergence_index(VertexType::gauge4), 0);
  EXPECT_EQ(divergence_index(VertexType::ghost), 0);
}

TEST(Degree, WorkedGraphs) {
  auto se = self_energy();
  EXPECT_EQ(brute_degree(se), 2);
  EXPECT_EQ(superficial_degree(se), 2);

  FeynmanGraph tadpole{{{VertexType::gauge4, 1}}, {{1, 1, LineKind::gauge}}, {{1, LegKind::gauge}, {1, LegKind::gauge}}};
  EXPECT_EQ(brute_degree(tadpole), 2);
  EXPECT_EQ(superficial_degree(tadpole), 2);

  FeynmanGraph tree{{{VertexType::gauge3, 1}, {VertexType::gauge3, 2}},
                    {{1, 2, LineKind::gauge}},
                    {{1, LegKind::gauge}, {1, LegKind::gauge}, {2, LegKind::gauge}, {2, LegKind::gauge}}};
  EXPECT_EQ(brute_degree(tree), 0);
  EXPECT_EQ(superficial_degree(tree), 0);

  FeynmanGraph ghost_loop{{{VertexType::ghost, 1}, {VertexType::ghost, 2}},
                          {{1, 2, LineKind::ghost}, {2, 1, LineKind::ghost}},
                          {{1, LegKind::gauge}, {2, LegKind::gauge}}};
  EXPECT_EQ(brute_degree(ghost_loop), 2);
}

TEST(Degree, SuperficialFormula) {
  FeynmanGraph five;
  for (int i = 1; i <= 3; ++i) five.vertices.push_back({VertexType::gauge3, i});
  five.internal_edges = {{1, 2, LineKind::gauge}, {2, 3, LineKind::gauge}};
  five.external_legs = {{1, LegKind::gauge}, {1, LegKind::gauge}, {2, LegKind::gauge}, {3, LegKind::gauge}, {3, LegKind::gauge}};
  EXPECT_EQ(superficial_degree(five), -1);
  EXPECT_EQ(brute_degree(five), -1);
  FeynmanGraph vacuum{{{VertexType::gauge4, 1}}, {{1, 1, LineKind::gauge}, {1, 1, LineKind::gauge}}, {}};
  EXPECT_EQ(superficial_degree(vacuum), 4);
  EXPECT_EQ(brute_degree(vacuum), 4);
}

TEST(Degree, RandomGraphsAgree) {
  std::mt19937 rng(1234);
  std::set<size_t> sizes;
  for (int n = 0; n < 500; ++n) {
    auto g = random_graph(rng, 8);
    sizes.insert(g.vertices.size());
    int L = cycle_rank(g);
    int d = 0;
    for (const auto& v : g.vertices) d += lines_and_derivatives(v.type).second;
    EXPECT_EQ(4 * L - 2 * static_cast<int>(g.internal_edges.size()) + d, brute_degree(g));
    EXPECT_EQ(brute_degree(g), superficial_degree(g)) << to_json(g).dump();
  }
  EXPECT_EQ(sizes.size(), 8u);
}

TEST(Degree, OnlyFewExternalLinesDiverge) {
  EXPECT_EQ(divergent_leg_counts(), (std::vector<int>{1, 2, 3, 4}));
}

TEST(Validate, RejectsMalformedGraphs) {
  auto se = self_energy();
  se.external_legs.pop_back();
  EXPECT_THROW(superficial_degree(se), StructuralError);
  FeynmanGraph ghost_bad{{{VertexType::ghost, 1}}, {}, {{1, LegKind::gauge}, {1, LegKind::ghost_in}, {1, LegKind::ghost_in}}};
  EXPECT_THROW(validate(ghost_bad), StructuralError);
  FeynmanGraph split{{{VertexType::gauge4, 1}, {VertexType::gauge4, 2}},
                     {{1, 1, LineKind::gauge}, {2, 2, LineKind::gauge}},
                     {{1, LegKind::gauge}, {1, LegKind::gauge}, {2, LegKind::gauge}, {2, LegKind::gauge}}};
  EXPECT_THROW(brute_degree(split), StructuralError);
  EXPECT_THROW(validate({{{VertexType::gauge3, 1}}, {{1, 7, LineKind::gauge}}, {{1, LegKind::gauge}}}), StructuralError);
}

TEST(Json, RoundTrip) {
  std::mt19937 rng(5);
  auto g = random_graph(rng, 6);
  auto j = to_json(g);
  EXPECT_EQ(to_json(graph_from_json(j)).dump(), j.dump());
  EXPECT_THROW(graph_from_json(nlohmann::json::parse(R"({"vertices":[{"id":1,"type":"gauge5"}]})")), StructuralError);
}
