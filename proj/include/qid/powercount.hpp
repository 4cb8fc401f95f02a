#pragma once

#include "qid/core/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace qid::powercount {

enum class VertexType : unsigned char { gauge3, gauge4, ghost };
enum class LineKind : unsigned char { gauge, ghost };
/// Ghost external legs carry the ghost-number flow relative to their vertex.
enum class LegKind : unsigned char { gauge, ghost_in, ghost_out };

struct Vertex {
  VertexType type;
  int id;
};

/// Internal line; ghost lines run from `a` to `b`.
struct Edge {
  int a;
  int b;
  LineKind kind;
};

struct ExternalLeg {
  int vertex;
  LegKind kind;
};

struct FeynmanGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> internal_edges;
  std::vector<ExternalLeg> external_legs;
};

/// (lines b, derivatives d) attached to each vertex type.
inline std::pair<int, int> lines_and_derivatives(VertexType t) {
  switch (t) {
    case VertexType::gauge3: return {3, 1};
    case VertexType::gauge4: return {4, 0};
    case VertexType::ghost: return {3, 1};
  }
  return {0, 0};
}

inline int divergence_index(VertexType t) {
  auto [b, d] = lines_and_derivatives(t);
  return b + d - 4;
}

inline const char* type_name(VertexType t) {
  switch (t) {
    case VertexType::gauge3: return "gauge3";
    case VertexType::gauge4: return "gauge4";
    case VertexType::ghost: return "ghost";
  }
  return "?";
}

/// Checks valences, ghost flow and that every id is known.
inline void validate(const FeynmanGraph& g) {
  struct Count {
    int gauge = 0, ghost_in = 0, ghost_out = 0;
  };
  std::map<int, Count> c;
  std::map<int, VertexType> type;
  for (const auto& v : g.vertices) {
    if (!type.emplace(v.id, v.type).second) throw StructuralError("duplicate vertex id " + std::to_string(v.id));
    c[v.id];
  }
  auto at = [&](int id) -> Count& {
    if (!type.count(id)) throw StructuralError("unknown vertex id " + std::to_string(id));
    return c[id];
  };
  for (const auto& e : g.internal_edges) {
    if (e.kind == LineKind::gauge) {
      at(e.a).gauge++;
      at(e.b).gauge++;
    } else {
      at(e.a).ghost_out++;
      at(e.b).ghost_in++;
    }
  }
  for (const auto& l : g.external_legs) {
    auto& x = at(l.vertex);
    if (l.kind == LegKind::gauge) x.gauge++;
    if (l.kind == LegKind::ghost_in) x.ghost_in++;
    if (l.kind == LegKind::ghost_out) x.ghost_out++;
  }
  for (const auto& [id, t] : type) {
    const auto& x = c[id];
    bool ok = t == VertexType::gauge3   ? x.gauge == 3 && x.ghost_in == 0 && x.ghost_out == 0
              : t == VertexType::gauge4 ? x.gauge == 4 && x.ghost_in == 0 && x.ghost_out == 0
                                        : x.gauge == 1 && x.ghost_in == 1 && x.ghost_out == 1;
    if (!ok) throw StructuralError("vertex " + std::to_string(id) + " (" + type_name(t) + ") has the wrong lines attached");
  }
}

inline bool connected(const FeynmanGraph& g) {
  if (g.vertices.empty()) return false;
  std::map<int, int> parent;
  for (const auto& v : g.vertices) parent[v.id] = v.id;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& e : g.internal_edges) parent[find(e.a)] = find(e.b);
  int root = find(g.vertices.front().id);
  for (const auto& v : g.vertices)
    if (find(v.id) != root) return false;
  return true;
}

/// ω = 4 − B with B the number of external lines.
inline int superficial_degree(const FeynmanGraph& g) {
  validate(g);
  return 4 - static_cast<int>(g.external_legs.size());
}

/// ω from loop counting: 4L − 2I + Σ_v d_v with L = I − V + 1.
inline int brute_degree(const FeynmanGraph& g) {
  validate(g);
  if (!connected(g)) throw StructuralError("graph is not connected");
  int I = static_cast<int>(g.internal_edges.size());
  int V = static_cast<int>(g.vertices.size());
  int loops = I - V + 1;
  int d = 0;
  for (const auto& v : g.vertices) d += lines_and_derivatives(v.type).second;
  return 4 * loops - 2 * I + d;
}

/// External line counts B ≥ 1 (up to `max_b`) that admit ω ≥ 0.
inline std::vector<int> divergent_leg_counts(int max_b = 12) {
  std::vector<int> out;
  for (int b = 1; b <= max_b; ++b)
    if (4 - b >= 0) out.push_back(b);
  return out;
}

/// Random valid connected graph with 1..max_vertices vertices (stub matching).
inline FeynmanGraph random_graph(std::mt19937& rng, int max_vertices = 8) {
  std::uniform_int_distribution<int> nv(1, max_vertices), ty(0, 2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    FeynmanGraph g;
    int V = nv(rng);
    std::vector<int> gauge, gin, gout;
    for (int i = 0; i < V; ++i) {
      auto t = static_cast<VertexType>(ty(rng));
      g.vertices.push_back({t, i + 1});
      auto [b, d] = lines_and_derivatives(t);
      if (t == VertexType::ghost) {
        gauge.push_back(i + 1);
        gin.push_back(i + 1);
        gout.push_back(i + 1);
      } else {
        for (int s = 0; s < b; ++s) gauge.push_back(i + 1);
      }
    }
    double p = u(rng);
    std::shuffle(gauge.begin(), gauge.end(), rng);
    std::shuffle(gin.begin(), gin.end(), rng);
    std::shuffle(gout.begin(), gout.end(), rng);
    while (gauge.size() >= 2 && u(rng) < 0.5 + 0.5 * p) {
      int a = gauge.back();
      gauge.pop_back();
      int b = gauge.back();
      gauge.pop_back();
      g.internal_edges.push_back({a, b, LineKind::gauge});
    }
    for (int a : gauge) g.external_legs.push_back({a, LegKind::gauge});
    while (!gout.empty() && !gin.empty() && u(rng) < 0.5 + 0.5 * p) {
      g.internal_edges.push_back({gout.back(), gin.back(), LineKind::ghost});
      gout.pop_back();
      gin.pop_back();
    }
    for (int a : gout) g.external_legs.push_back({a, LegKind::ghost_out});
    for (int a : gin) g.external_legs.push_back({a, LegKind::ghost_in});
    if (connected(g)) return g;
  }
  throw std::runtime_error("random graph generation did not converge");
}

inline nlohmann::json to_json(const FeynmanGraph& g) {
  static const char* lk[] = {"gauge", "ghost_in", "ghost_out"};
  nlohmann::json vs = nlohmann::json::array(), es = nlohmann::json::array(), ls = nlohmann::json::array();
  for (const auto& v : g.vertices) vs.push_back({{"id", v.id}, {"type", type_name(v.type)}});
  for (const auto& e : g.internal_edges)
    es.push_back({{"from", e.a}, {"to", e.b}, {"kind", e.kind == LineKind::gauge ? "gauge" : "ghost"}});
  for (const auto& l : g.external_legs) ls.push_back({{"vertex", l.vertex}, {"kind", lk[static_cast<int>(l.kind)]}});
  return {{"vertices", vs}, {"internal_edges", es}, {"external_legs", ls}};
}

inline FeynmanGraph graph_from_json(const nlohmann::json& j) {
  FeynmanGraph g;
  for (const auto& v : j.at("vertices")) {
    std::string t = v.at("type").get<std::string>();
    VertexType vt;
    if (t == "gauge3")
      vt = VertexType::gauge3;
    else if (t == "gauge4")
      vt = VertexType::gauge4;
    else if (t == "ghost")
      vt = VertexType::ghost;
    else
      throw StructuralError("unknown vertex type '" + t + "'");
    g.vertices.push_back({vt, v.at("id").get<int>()});
  }
  for (const auto& e : j.value("internal_edges", nlohmann::json::array())) {
    std::string k = e.at("kind").get<std::string>();
    if (k != "gauge" && k != "ghost") throw StructuralError("unknown line kind '" + k + "'");
    g.internal_edges.push_back({e.at("from").get<int>(), e.at("to").get<int>(), k == "gauge" ? LineKind::gauge : LineKind::ghost});
  }
  for (const auto& l : j.value("external_legs", nlohmann::json::array())) {
    std::string k = l.at("kind").get<std::string>();
    LegKind lk;
    if (k == "gauge")
      lk = LegKind::gauge;
    else if (k == "ghost_in")
      lk = LegKind::ghost_in;
    else if (k == "ghost_out")
      lk = LegKind::ghost_out;
    else
      throw StructuralError("unknown leg kind '" + k + "'");
    g.external_legs.push_back({l.at("vertex").get<int>(), lk});
  }
  validate(g);
  return g;
}

}  // namespace qid::powercount
