#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdgs/error.hpp"
#include "mdgs/ext_real.hpp"
#include "mdgs/graph.hpp"
#include "mdgs/tree_solver.hpp"

namespace mdgs {

/// Extremal message families on the tree ball B_H(G, o): every boundary
/// vertex with neighbours outside the ball has its incoming message pinned to
/// the vertex-weight minimum m (zminus) or to +inf (zplus).
///
/// Each directed message is monotone in the boundary values, increasing or
/// decreasing according to the parity of its distance to the boundary, so
/// the two families are the pointwise extremes over all boundary conditions
/// in [m, +inf].
struct BracketPair {
  RootedBall ball;
  WeightedGraph ball_graph;  // ball-local ids, edge i = ball.edges[i]
  MessageSet zminus;
  MessageSet zplus;
  std::size_t depth = 0;
  double m = 0.0;

  /// [min, max] of Z(from, other end) over the two families.
  std::pair<ExtReal, ExtReal> range(VertexId from_local, EdgeId ball_edge) const {
    const ExtReal a = zminus.at(ball_graph, from_local, ball_edge);
    const ExtReal b = zplus.at(ball_graph, from_local, ball_edge);
    return {min(a, b), max(a, b)};
  }
};

inline BoundaryValues uniform_boundary(const RootedBall& ball, ExtReal value) {
  BoundaryValues out;
  if (ball.radius == 0) return out;
  for (VertexId u : ball.boundary)
    if (ball.exterior_degree[u] > 0) out.emplace(u, value);
  return out;
}

/// Boundary values induced by a configuration of the host graph: +inf for a
/// boundary vertex matched to a vertex outside the ball, x(u) otherwise.
/// Only boundary vertices with exterior neighbours are assigned.
inline BoundaryValues boundary_from_config(const RootedBall& ball, const WeightedGraph& host,
                                           const MonomerDimerConfig& config) {
  BoundaryValues out;
  if (ball.radius == 0) return out;
  for (VertexId u : ball.boundary) {
    if (ball.exterior_degree[u] == 0) continue;
    const VertexId hu = ball.host_vertex[u];
    bool outside = false;
    if (const auto e = config.dimer_at(hu)) {
      const VertexId partner = host.edge(*e).other(hu);
      outside = !ball.local(partner).has_value();
    }
    out.emplace(u, outside ? ExtReal::pos_inf() : ExtReal(host.x(hu)));
  }
  return out;
}

inline BracketPair bracket_messages(const WeightedGraph& g, VertexId o, std::size_t depth, double m) {
  BracketPair bp;
  bp.ball = bfs_ball(g, o, depth);
  if (!bp.ball.tree)
    throw Error(ErrorKind::ball_not_tree, "ball of radius " + std::to_string(depth) + " around " +
                                              std::to_string(o) + " contains a cycle");
  bp.ball_graph = bp.ball.as_graph(g);
  bp.depth = depth;
  bp.m = m;
  bp.zminus = messages_with_boundary(bp.ball, bp.ball_graph, uniform_boundary(bp.ball, ExtReal(m)));
  bp.zplus = messages_with_boundary(bp.ball, bp.ball_graph, uniform_boundary(bp.ball, ExtReal::pos_inf()));
  return bp;
}

enum class EdgeStatus { forced_dimer, forced_non_dimer, undecided };

inline std::string_view to_string(EdgeStatus s) {
  switch (s) {
    case EdgeStatus::forced_dimer: return "ForcedDimer";
    case EdgeStatus::forced_non_dimer: return "ForcedNonDimer";
    case EdgeStatus::undecided: return "Undecided";
  }
  return "?";
}

/// Interval of Z(u,v) + Z(v,u) over all boundary conditions, and the
/// decision it certifies.
struct EdgeCertificate {
  EdgeId edge = 0;  // host edge id
  double w = 0.0;
  ExtReal lo;
  ExtReal hi;
  EdgeStatus status = EdgeStatus::undecided;
};

inline EdgeStatus classify(double w, const ExtReal& lo, const ExtReal& hi) {
  if (ExtReal(w) > hi) return EdgeStatus::forced_dimer;
  if (ExtReal(w) < lo) return EdgeStatus::forced_non_dimer;
  return EdgeStatus::undecided;
}

/// Certificates for the edges of a bracket's ball. The two directions of an
/// edge sit at opposite parities, so the interval is built from the per
/// direction minima and maxima rather than from the two family sums.
inline std::vector<EdgeCertificate> certify_edges(const BracketPair& bp, const WeightedGraph& host) {
  std::vector<EdgeCertificate> out;
  if (bp.depth == 0) {
    // B_0 has no edges. Every message into o is at least x(o) and every
    // message into a neighbour at least m, which is all that is known.
    const VertexId o = bp.ball.root;
    for (const Incidence& inc : host.incident(o)) {
      EdgeCertificate c;
      c.edge = inc.edge;
      c.w = host.edge(inc.edge).w;
      c.lo = ExtReal(host.x(o) + bp.m);
      c.hi = ExtReal::pos_inf();
      c.status = classify(c.w, c.lo, c.hi);
      out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.edge < b.edge; });
    return out;
  }
  for (EdgeId e = 0; e < bp.ball_graph.edge_count(); ++e) {
    const Edge& be = bp.ball_graph.edge(e);
    const auto [lo_uv, hi_uv] = bp.range(be.u, e);
    const auto [lo_vu, hi_vu] = bp.range(be.v, e);
    EdgeCertificate c;
    c.edge = bp.ball.edges[e].host;
    c.w = be.w;
    c.lo = lo_uv + lo_vu;
    c.hi = hi_uv + hi_vu;
    c.status = classify(c.w, c.lo, c.hi);
    out.push_back(c);
  }
  return out;
}

inline std::vector<EdgeCertificate> certify_edges(const WeightedGraph& g, VertexId o, std::size_t depth,
                                                  double m) {
  return certify_edges(bracket_messages(g, o, depth, m), g);
}

enum class RootState { monomer, dimer, undecided };

inline std::string_view to_string(RootState s) {
  switch (s) {
    case RootState::monomer: return "Monomer";
    case RootState::dimer: return "Dimer";
    case RootState::undecided: return "Undecided";
  }
  return "?";
}

/// Certificates restricted to the edges incident to o.
inline std::vector<EdgeCertificate> root_certificates(const WeightedGraph& g, VertexId o, std::size_t depth,
                                                      double m) {
  const auto all = certify_edges(g, o, depth, m);
  std::vector<EdgeCertificate> out;
  for (const auto& c : all) {
    const Edge& e = g.edge(c.edge);
    if (e.u == o || e.v == o) out.push_back(c);
  }
  return out;
}

inline RootState root_state(const std::vector<EdgeCertificate>& incident) {
  bool all_non_dimer = true;
  for (const auto& c : incident) {
    if (c.status == EdgeStatus::forced_dimer) return RootState::dimer;
    if (c.status != EdgeStatus::forced_non_dimer) all_non_dimer = false;
  }
  return all_non_dimer ? RootState::monomer : RootState::undecided;
}

/// Monomer iff every incident edge is certified non-dimer, Dimer iff some
/// incident edge is certified dimer, Undecided otherwise.
inline RootState root_state(const WeightedGraph& g, VertexId o, std::size_t depth, double m) {
  return root_state(root_certificates(g, o, depth, m));
}

struct UndecidedProfile {
  std::vector<std::size_t> depths;
  std::vector<double> fraction;        // undecided root-incident edges / all of them
  std::vector<std::size_t> undecided;  // raw counts per depth
  std::size_t edges = 0;               // root-incident edges over the roots used
  std::size_t roots_used = 0;
  std::size_t roots_skipped = 0;       // ball at the largest depth is not a tree
};

/// Fraction of root-incident edges left undecided at each depth. Only roots
/// whose ball at the largest requested depth is a tree are used, so every
/// depth sees the same edges and the fractions are non-increasing in depth.
inline UndecidedProfile undecided_fraction(const WeightedGraph& g, std::vector<std::size_t> depths,
                                           const std::vector<VertexId>& roots, double m) {
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  UndecidedProfile out;
  out.depths = depths;
  out.undecided.assign(depths.size(), 0);
  out.fraction.assign(depths.size(), 0.0);
  if (depths.empty()) return out;
  for (VertexId o : roots) {
    if (!bfs_ball(g, o, depths.back()).tree) {
      ++out.roots_skipped;
      continue;
    }
    ++out.roots_used;
    out.edges += g.degree(o);
    for (std::size_t i = 0; i < depths.size(); ++i)
      for (const auto& c : root_certificates(g, o, depths[i], m))
        if (c.status == EdgeStatus::undecided) ++out.undecided[i];
  }
  for (std::size_t i = 0; i < depths.size(); ++i)
    out.fraction[i] = out.edges == 0 ? 0.0 : static_cast<double>(out.undecided[i]) / static_cast<double>(out.edges);
  return out;
}

struct PairRecord {
  VertexId first = 0;
  VertexId second = 0;
  RootState first_state = RootState::undecided;
  RootState second_state = RootState::undecided;
  std::optional<std::size_t> distance;
};

inline PairRecord pair_correlation(const WeightedGraph& g, VertexId o, VertexId o2, std::size_t depth,
                                   double m) {
  if (o == o2) throw Error(ErrorKind::domain, "pair_correlation needs two distinct roots");
  return {o, o2, root_state(g, o, depth, m), root_state(g, o2, depth, m), graph_distance(g, o, o2)};
}

}  // namespace mdgs
