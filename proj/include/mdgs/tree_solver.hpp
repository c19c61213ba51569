#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "mdgs/error.hpp"
#include "mdgs/ext_real.hpp"
#include "mdgs/graph.hpp"

namespace mdgs {

/// Messages Z(u,v) on the directed edges of a forest.
///
/// Z(u,v) is the gain of attaching v to its side of the forest away from u;
/// on interior edges it satisfies
///   Z(u,v) = max(x(v), max_{u' ~ v, u' != u} (w(v,u') - Z(v,u'))).
/// Slot 2e holds the message leaving edges()[e].u, slot 2e+1 the one leaving
/// edges()[e].v. Pinned slots hold externally imposed boundary values.
struct MessageSet {
  std::vector<ExtReal> value;
  std::vector<std::uint8_t> pinned;

  static std::size_t slot(const WeightedGraph& g, VertexId from, EdgeId e) {
    return 2 * static_cast<std::size_t>(e) + (g.edge(e).u == from ? 0 : 1);
  }

  /// Z(from, other end of e).
  const ExtReal& at(const WeightedGraph& g, VertexId from, EdgeId e) const { return value[slot(g, from, e)]; }

  bool empty() const { return value.empty(); }
};

/// Optional pinned value per slot.
using PinMap = std::vector<std::optional<ExtReal>>;

namespace detail {

struct ForestOrder {
  std::vector<VertexId> order;        // BFS order, component by component
  std::vector<EdgeId> parent_edge;    // kNoParent at component roots
  static constexpr EdgeId kNoParent = std::numeric_limits<EdgeId>::max();
};

inline ForestOrder forest_order(const WeightedGraph& g) {
  if (!is_forest(g)) throw Error(ErrorKind::not_a_tree, "message passing needs an acyclic graph");
  ForestOrder fo;
  const std::size_t n = g.vertex_count();
  fo.parent_edge.assign(n, ForestOrder::kNoParent);
  std::vector<std::uint8_t> seen(n, 0);
  fo.order.reserve(n);
  for (VertexId r = 0; r < n; ++r) {
    if (seen[r]) continue;
    seen[r] = 1;
    const std::size_t start = fo.order.size();
    fo.order.push_back(r);
    for (std::size_t head = start; head < fo.order.size(); ++head) {
      const VertexId v = fo.order[head];
      for (const Incidence& inc : g.incident(v)) {
        if (seen[inc.neighbor]) continue;
        seen[inc.neighbor] = 1;
        fo.parent_edge[inc.neighbor] = inc.edge;
        fo.order.push_back(inc.neighbor);
      }
    }
  }
  return fo;
}

}  // namespace detail

/// Two sweeps over a forest: leaves-to-root for messages pointing away from
/// each component root, then root-to-leaves for the reverse direction using
/// the per-vertex top-two maxima of w - Z. Total work O(|E|).
inline MessageSet solve_messages(const WeightedGraph& g, const PinMap& pins = {}) {
  if (!pins.empty() && pins.size() != 2 * g.edge_count())
    throw Error(ErrorKind::boundary_incomplete, "pin map size does not match the edge count");
  const auto fo = detail::forest_order(g);
  MessageSet z;
  z.value.assign(2 * g.edge_count(), ExtReal::neg_inf());
  z.pinned.assign(2 * g.edge_count(), 0);
  for (std::size_t s = 0; s < pins.size(); ++s) {
    if (pins[s]) {
      if (pins[s]->is_neg_inf()) throw Error(ErrorKind::domain, "boundary value -inf is not allowed");
      z.value[s] = *pins[s];
      z.pinned[s] = 1;
    }
  }

  // Leaves to root: Z(parent(v), v).
  for (std::size_t i = fo.order.size(); i-- > 0;) {
    const VertexId v = fo.order[i];
    const EdgeId up = fo.parent_edge[v];
    if (up == detail::ForestOrder::kNoParent) continue;
    const std::size_t s = MessageSet::slot(g, g.edge(up).other(v), up);
    if (z.pinned[s]) continue;
    ExtReal best = g.x(v);
    for (const Incidence& inc : g.incident(v)) {
      if (inc.edge == up) continue;
      best = max(best, ExtReal(g.edge(inc.edge).w) - z.at(g, v, inc.edge));
    }
    z.value[s] = best;
  }

  // Root to leaves: Z(c, p) for every child c of p.
  for (const VertexId p : fo.order) {
    ExtReal first = ExtReal::neg_inf();
    ExtReal second = ExtReal::neg_inf();
    EdgeId first_edge = detail::ForestOrder::kNoParent;
    for (const Incidence& inc : g.incident(p)) {
      const ExtReal term = ExtReal(g.edge(inc.edge).w) - z.at(g, p, inc.edge);
      if (first_edge == detail::ForestOrder::kNoParent || term > first) {
        second = first;
        first = term;
        first_edge = inc.edge;
      } else if (term > second) {
        second = term;
      }
    }
    for (const Incidence& inc : g.incident(p)) {
      if (inc.edge == fo.parent_edge[p]) continue;
      const std::size_t s = MessageSet::slot(g, inc.neighbor, inc.edge);
      if (z.pinned[s]) continue;
      const ExtReal excluded = inc.edge == first_edge ? second : first;
      z.value[s] = max(ExtReal(g.x(p)), excluded);
    }
  }
  return z;
}

/// Exact messages on a finite forest (leaf convention: max over an empty
/// set is -inf, so a leaf's message is its vertex weight).
inline MessageSet all_messages(const WeightedGraph& tree) { return solve_messages(tree); }

/// Pinned values keyed by ball-local boundary vertex u, applied to Z(u', u)
/// where u' is the unique ball neighbour of u.
using BoundaryValues = std::map<VertexId, ExtReal>;

/// Messages on a tree ball with boundary conditions.
///
/// Every boundary vertex with host neighbours outside the ball must have a
/// value; boundary vertices without exterior neighbours are genuine leaves
/// and may be given a value or left to the leaf convention.
inline MessageSet messages_with_boundary(const RootedBall& ball, const WeightedGraph& ball_graph,
                                         const BoundaryValues& boundary) {
  if (!ball.tree) throw Error(ErrorKind::not_a_tree, "ball around the root contains a cycle");
  PinMap pins(2 * ball_graph.edge_count());
  for (const auto& [u, value] : boundary) {
    if (u >= ball.size() || ball.depth[u] != ball.radius)
      throw Error(ErrorKind::boundary_incomplete, "boundary value given for a non-boundary vertex");
    if (ball.radius == 0) continue;
    const VertexId parent = ball.parent[u];
    for (const Incidence& inc : ball_graph.incident(u))
      if (inc.neighbor == parent) pins[MessageSet::slot(ball_graph, parent, inc.edge)] = value;
  }
  if (ball.radius > 0) {
    for (VertexId u : ball.boundary)
      if (ball.exterior_degree[u] > 0 && !boundary.contains(u))
        throw Error(ErrorKind::boundary_incomplete,
                    "boundary vertex " + std::to_string(ball.host_vertex[u]) + " has no value");
  }
  return solve_messages(ball_graph, pins);
}

/// Largest |Z(u,v) - RHS of the recursion| over non-pinned slots, evaluated
/// directly in O(sum deg^2) as an independent check of the two sweeps.
inline double recursion_residual(const WeightedGraph& g, const MessageSet& z) {
  double worst = 0.0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const VertexId from : {g.edge(e).u, g.edge(e).v}) {
      const std::size_t s = MessageSet::slot(g, from, e);
      if (z.pinned[s]) continue;
      const VertexId to = g.edge(e).other(from);
      ExtReal rhs = g.x(to);
      for (const Incidence& inc : g.incident(to)) {
        if (inc.edge == e) continue;
        rhs = max(rhs, ExtReal(g.edge(inc.edge).w) - z.at(g, to, inc.edge));
      }
      worst = std::max(worst, abs_diff(z.value[s], rhs));
    }
  }
  return worst;
}

/// Smallest gap between a message and its vertex weight, over non-pinned
/// slots. Non-negative when every interior message satisfies Z(u,v) >= x(v).
inline double min_message_excess(const WeightedGraph& g, const MessageSet& z) {
  double worst = std::numeric_limits<double>::infinity();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const VertexId from : {g.edge(e).u, g.edge(e).v}) {
      const std::size_t s = MessageSet::slot(g, from, e);
      if (z.pinned[s]) continue;
      const ExtReal gap = z.value[s] - ExtReal(g.x(g.edge(e).other(from)));
      worst = std::min(worst, gap.to_double());
    }
  }
  return worst;
}

inline constexpr double kNearTieTolerance = 1e-9;

struct Decision {
  MonomerDimerConfig config;
  std::size_t near_ties = 0;
};

/// Edge {u,v} is a dimer iff w(u,v) > Z(u,v) + Z(v,u) (strict). Near ties,
/// |w - Z(u,v) - Z(v,u)| < 1e-9, resolve to "not a dimer" and are counted.
inline Decision decide_config(const WeightedGraph& g, const MessageSet& z) {
  Decision out;
  std::vector<EdgeId> dimers;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    const ExtReal sum = z.at(g, edge.u, e) + z.at(g, edge.v, e);
    const ExtReal w = edge.w;
    if (sum.is_finite() && std::abs(edge.w - sum.value()) < kNearTieTolerance) {
      ++out.near_ties;
      continue;
    }
    if (w > sum) dimers.push_back(e);
  }
  out.config = MonomerDimerConfig(g, std::move(dimers));
  return out;
}

/// Optimum by a two-state dynamic program (vertex matched to its parent or
/// not), independent of the message route.
inline double opt_value_dp(const WeightedGraph& forest) {
  const auto fo = detail::forest_order(forest);
  const std::size_t n = forest.vertex_count();
  std::vector<double> free_best(n, 0.0);   // v not matched to its parent
  std::vector<double> taken_best(n, 0.0);  // v matched to its parent (x(v) not counted)
  double total = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const VertexId v = fo.order[i];
    double children_free = 0.0;
    for (const Incidence& inc : forest.incident(v))
      if (inc.edge != fo.parent_edge[v]) children_free += free_best[inc.neighbor];
    double best = forest.x(v) + children_free;
    for (const Incidence& inc : forest.incident(v)) {
      if (inc.edge == fo.parent_edge[v]) continue;
      const VertexId c = inc.neighbor;
      best = std::max(best, forest.edge(inc.edge).w + taken_best[c] + children_free - free_best[c]);
    }
    free_best[v] = best;
    taken_best[v] = children_free;
    if (fo.parent_edge[v] == detail::ForestOrder::kNoParent) total += best;
  }
  return total;
}

struct TreeSolution {
  MessageSet messages;
  MonomerDimerConfig config;
  double value = 0.0;
  std::size_t near_ties = 0;
};

inline TreeSolution solve_tree(const WeightedGraph& forest) {
  TreeSolution out;
  out.messages = all_messages(forest);
  auto decision = decide_config(forest, out.messages);
  out.config = std::move(decision.config);
  out.near_ties = decision.near_ties;
  out.value = md_total_weight(forest, out.config);
  return out;
}

}  // namespace mdgs
