#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mdgs/error.hpp"

namespace mdgs {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double w = 0.0;

  VertexId other(VertexId a) const { return a == u ? v : u; }
};

/// One entry of a vertex's incidence list.
struct Incidence {
  EdgeId edge;
  VertexId neighbor;
};

/// Finite graph with a real weight on every edge and every vertex.
///
/// Immutable after construction. Vertex ids are 0..n-1 and edge ids
/// 0..|E|-1; the incidence lists are stored CSR-style and keep edge-id order.
/// Parallel edges are allowed (and counted), self-loops are rejected.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(std::vector<double> vertex_weights, std::vector<Edge> edges)
      : x_(std::move(vertex_weights)), edges_(std::move(edges)) {
    const auto n = x_.size();
    if (n >= kNoVertex) throw Error(ErrorKind::invalid_graph, "too many vertices");
    for (double xv : x_)
      if (!std::isfinite(xv)) throw Error(ErrorKind::invalid_graph, "vertex weight is not finite");
    offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) {
      if (e.u >= n || e.v >= n) throw Error(ErrorKind::invalid_graph, "edge endpoint out of range");
      if (e.u == e.v) throw Error(ErrorKind::invalid_graph, "self-loop");
      if (!std::isfinite(e.w)) throw Error(ErrorKind::invalid_graph, "edge weight is not finite");
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    incidence_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const Edge& e = edges_[id];
      incidence_[fill[e.u]++] = {id, e.v};
      incidence_[fill[e.v]++] = {id, e.u};
    }
    parallel_edges_ = count_parallel();
  }

  std::size_t vertex_count() const { return x_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<double>& vertex_weights() const { return x_; }
  double x(VertexId v) const { return x_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const Incidence> incident(VertexId v) const {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Number of edges that duplicate an earlier edge's endpoint pair.
  std::size_t parallel_edge_count() const { return parallel_edges_; }

  void check_vertex(VertexId v) const {
    if (v >= vertex_count())
      throw Error(ErrorKind::vertex_out_of_range,
                  "vertex " + std::to_string(v) + " with n = " + std::to_string(vertex_count()));
  }

 private:
  std::size_t count_parallel() const {
    std::vector<std::pair<VertexId, VertexId>> keys;
    keys.reserve(edges_.size());
    for (const Edge& e : edges_) keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    std::sort(keys.begin(), keys.end());
    return static_cast<std::size_t>(keys.end() - std::unique(keys.begin(), keys.end()));
  }

  std::vector<double> x_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidence_;
  std::size_t parallel_edges_ = 0;
};

/// Set of dimers (edge ids) on a fixed graph, validated on construction:
/// every vertex is covered by at most one dimer.
class MonomerDimerConfig {
 public:
  MonomerDimerConfig() = default;

  MonomerDimerConfig(const WeightedGraph& g, std::vector<EdgeId> dimers)
      : dimers_(std::move(dimers)), partner_edge_(g.vertex_count(), kNone) {
    std::sort(dimers_.begin(), dimers_.end());
    dimers_.erase(std::unique(dimers_.begin(), dimers_.end()), dimers_.end());
    for (EdgeId id : dimers_) {
      if (id >= g.edge_count()) throw Error(ErrorKind::invalid_config, "dimer edge id out of range");
      const Edge& e = g.edge(id);
      for (VertexId v : {e.u, e.v}) {
        if (partner_edge_[v] != kNone)
          throw Error(ErrorKind::invalid_config,
                      "vertex " + std::to_string(v) + " is covered by two dimers");
        partner_edge_[v] = id;
      }
    }
  }

  /// Sorted dimer edge ids.
  const std::vector<EdgeId>& dimers() const { return dimers_; }
  bool is_dimer(EdgeId e) const { return std::binary_search(dimers_.begin(), dimers_.end(), e); }
  bool matched(VertexId v) const { return partner_edge_[v] != kNone; }
  /// Edge covering v, if any.
  std::optional<EdgeId> dimer_at(VertexId v) const {
    if (partner_edge_[v] == kNone) return std::nullopt;
    return partner_edge_[v];
  }

  std::vector<VertexId> monomers() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < partner_edge_.size(); ++v)
      if (partner_edge_[v] == kNone) out.push_back(v);
    return out;
  }

  friend bool operator==(const MonomerDimerConfig& a, const MonomerDimerConfig& b) {
    return a.dimers_ == b.dimers_;
  }

 private:
  static constexpr EdgeId kNone = std::numeric_limits<EdgeId>::max();
  std::vector<EdgeId> dimers_;
  std::vector<EdgeId> partner_edge_;
};

/// Sum of dimer weights plus monomer weights.
inline double md_total_weight(const WeightedGraph& g, const MonomerDimerConfig& config) {
  double total = 0.0;
  for (EdgeId id : config.dimers()) total += g.edge(id).w;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (!config.matched(v)) total += g.x(v);
  return total;
}

/// Convenience overload: validates the edge set first (InvalidConfig).
inline double md_total_weight(const WeightedGraph& g, const std::vector<EdgeId>& dimers) {
  return md_total_weight(g, MonomerDimerConfig(g, dimers));
}

/// Breadth-first distances from `source`; unreachable vertices get nullopt.
/// When `max_depth` is set the search stops at that depth.
inline std::vector<std::optional<std::size_t>> bfs_distances(
    const WeightedGraph& g, VertexId source,
    std::optional<std::size_t> max_depth = std::nullopt) {
  g.check_vertex(source);
  std::vector<std::optional<std::size_t>> dist(g.vertex_count());
  std::vector<VertexId> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    if (max_depth && *dist[v] >= *max_depth) continue;
    for (const Incidence& inc : g.incident(v)) {
      if (!dist[inc.neighbor]) {
        dist[inc.neighbor] = *dist[v] + 1;
        queue.push_back(inc.neighbor);
      }
    }
  }
  return dist;
}

/// BFS distance between u and v, nullopt when unreachable.
inline std::optional<std::size_t> graph_distance(const WeightedGraph& g, VertexId u, VertexId v) {
  g.check_vertex(u);
  g.check_vertex(v);
  if (u == v) return 0;
  std::unordered_map<VertexId, std::size_t> dist{{u, 0}};
  std::vector<VertexId> queue{u};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId a = queue[head];
    const std::size_t da = dist[a];
    for (const Incidence& inc : g.incident(a)) {
      if (dist.emplace(inc.neighbor, da + 1).second) {
        if (inc.neighbor == v) return da + 1;
        queue.push_back(inc.neighbor);
      }
    }
  }
  return std::nullopt;
}

/// Ball B_H(G, o): the subgraph induced by vertices within distance H of o.
///
/// Ball-local vertex ids are assigned in BFS order, so local id 0 is the root
/// and depths are non-decreasing in the local id.
struct RootedBall {
  struct BallEdge {
    VertexId a;      // ball-local endpoint
    VertexId b;      // ball-local endpoint
    EdgeId host;     // edge id in the host graph
  };

  VertexId root = 0;                   // host id of the centre
  std::size_t radius = 0;
  std::vector<VertexId> host_vertex;   // ball-local -> host
  std::vector<std::size_t> depth;      // ball-local depth (BFS distance in host)
  std::vector<BallEdge> edges;         // induced edges, ordered by host edge id
  std::vector<VertexId> boundary;      // ball-local ids at depth exactly `radius`
  std::vector<std::size_t> exterior_degree;  // host edges leaving the ball, per vertex
  std::vector<VertexId> parent;        // ball-local parent when `tree`, kNoVertex at root
  bool tree = false;
  std::unordered_map<VertexId, VertexId> local_of;  // host -> ball-local

  std::size_t size() const { return host_vertex.size(); }

  std::optional<VertexId> local(VertexId host) const {
    const auto it = local_of.find(host);
    if (it == local_of.end()) return std::nullopt;
    return it->second;
  }

  /// Standalone weighted copy with ball-local ids; edge i of the copy is
  /// edges[i].
  WeightedGraph as_graph(const WeightedGraph& host) const {
    std::vector<double> x(size());
    for (VertexId i = 0; i < size(); ++i) x[i] = host.x(host_vertex[i]);
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const BallEdge& e : edges) out.push_back({e.a, e.b, host.edge(e.host).w});
    return WeightedGraph(std::move(x), std::move(out));
  }
};

inline RootedBall bfs_ball(const WeightedGraph& g, VertexId o, std::size_t radius) {
  g.check_vertex(o);
  RootedBall ball;
  ball.root = o;
  ball.radius = radius;
  ball.host_vertex.push_back(o);
  ball.depth.push_back(0);
  ball.local_of.emplace(o, 0);
  for (std::size_t head = 0; head < ball.host_vertex.size(); ++head) {
    const VertexId v = ball.host_vertex[head];
    const std::size_t d = ball.depth[head];
    if (d == radius) continue;
    for (const Incidence& inc : g.incident(v)) {
      if (ball.local_of.emplace(inc.neighbor, static_cast<VertexId>(ball.host_vertex.size())).second) {
        ball.host_vertex.push_back(inc.neighbor);
        ball.depth.push_back(d + 1);
      }
    }
  }
  const std::size_t n = ball.size();
  ball.exterior_degree.assign(n, 0);
  for (VertexId i = 0; i < n; ++i) {
    for (const Incidence& inc : g.incident(ball.host_vertex[i])) {
      const auto j = ball.local(inc.neighbor);
      if (!j) {
        ++ball.exterior_degree[i];
      } else if (g.edge(inc.edge).u == ball.host_vertex[i]) {
        ball.edges.push_back({i, *j, inc.edge});
      }
    }
    if (ball.depth[i] == radius) ball.boundary.push_back(i);
  }
  std::sort(ball.edges.begin(), ball.edges.end(),
            [](const auto& a, const auto& b) { return a.host < b.host; });

  // A connected induced subgraph is a tree iff |E| = |V| - 1.
  ball.tree = ball.edges.size() + 1 == n;
  ball.parent.assign(n, kNoVertex);
  if (ball.tree) {
    for (const auto& e : ball.edges) {
      if (ball.depth[e.a] + 1 == ball.depth[e.b]) ball.parent[e.b] = e.a;
      else ball.parent[e.a] = e.b;
    }
  }
  return ball;
}

inline bool is_tree(const RootedBall& ball) { return ball.tree; }

/// True iff g is connected and acyclic.
inline bool is_tree(const WeightedGraph& g) {
  if (g.vertex_count() == 0) return false;
  if (g.edge_count() + 1 != g.vertex_count()) return false;
  const auto dist = bfs_distances(g, 0);
  return std::all_of(dist.begin(), dist.end(), [](const auto& d) { return d.has_value(); });
}

/// True iff g has no cycle (parallel edges count as a cycle).
inline bool is_forest(const WeightedGraph& g) {
  std::vector<VertexId> parent(g.vertex_count());
  for (VertexId v = 0; v < parent.size(); ++v) parent[v] = v;
  auto find = [&parent](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Edge& e : g.edges()) {
    const VertexId a = find(e.u);
    const VertexId b = find(e.v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

/// Edge list as CSV: edge,u,v,w.
inline void write_edge_csv(std::ostream& os, const WeightedGraph& g) {
  os << "edge,u,v,w\n";
  os.precision(17);
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    os << id << ',' << e.u << ',' << e.v << ',' << e.w << '\n';
  }
}

}  // namespace mdgs
