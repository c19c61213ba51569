#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "mdgs/error.hpp"
#include "mdgs/graph.hpp"
#include "mdgs/tree_solver.hpp"

namespace mdgs {

struct EnumerationResult {
  double value = 0.0;
  std::vector<MonomerDimerConfig> optimal;  // every argmax, in discovery order
};

/// Brute force over all monomer-dimer configurations: branch on each edge
/// (exclude / include when both endpoints are free). Configurations within
/// `tie_tolerance` of the best value are all reported.
inline EnumerationResult enumerate_optimal(const WeightedGraph& g, std::size_t max_edges = 24,
                                           double tie_tolerance = 1e-12) {
  if (g.edge_count() > max_edges)
    throw Error(ErrorKind::too_large, "enumeration limited to " + std::to_string(max_edges) + " edges, got " +
                                          std::to_string(g.edge_count()));
  const std::size_t m = g.edge_count();
  double all_monomers = 0.0;
  for (double xv : g.vertex_weights()) all_monomers += xv;

  std::vector<std::uint8_t> covered(g.vertex_count(), 0);
  std::vector<EdgeId> chosen;
  std::vector<std::vector<EdgeId>> best_sets;
  double best = -std::numeric_limits<double>::infinity();

  // Value of a configuration = sum of x over all vertices + sum over dimers
  // of (w - x(u) - x(v)).
  auto recurse = [&](auto&& self, EdgeId next, double gain) -> void {
    if (next == m) {
      const double value = all_monomers + gain;
      const double scale = 1.0 + std::abs(value);
      if (value > best + tie_tolerance * scale) {
        best = value;
        best_sets.clear();
        best_sets.push_back(chosen);
      } else if (value >= best - tie_tolerance * scale) {
        best_sets.push_back(chosen);
      }
      return;
    }
    self(self, next + 1, gain);
    const Edge& e = g.edge(next);
    if (!covered[e.u] && !covered[e.v]) {
      covered[e.u] = covered[e.v] = 1;
      chosen.push_back(next);
      self(self, next + 1, gain + e.w - g.x(e.u) - g.x(e.v));
      chosen.pop_back();
      covered[e.u] = covered[e.v] = 0;
    }
  };
  recurse(recurse, 0, 0.0);

  EnumerationResult out;
  for (auto& s : best_sets) out.optimal.emplace_back(g, std::move(s));
  out.value = md_total_weight(g, out.optimal.front());
  return out;
}

struct Component {
  std::vector<VertexId> vertices;  // sorted host ids
  std::vector<EdgeId> edges;       // sorted host edge ids
  std::size_t cycle_rank = 0;      // |E| - |V| + 1
};

/// Connected components (disjoint-set union), ordered by smallest vertex id.
inline std::vector<Component> components(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> parent(n);
  std::iota(parent.begin(), parent.end(), VertexId{0});
  auto find = [&parent](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Edge& e : g.edges()) {
    const VertexId a = find(e.u);
    const VertexId b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> index(n, SIZE_MAX);
  std::vector<Component> out;
  for (VertexId v = 0; v < n; ++v) {
    const VertexId r = find(v);
    if (index[r] == SIZE_MAX) {
      index[r] = out.size();
      out.emplace_back();
    }
    out[index[r]].vertices.push_back(v);
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) out[index[find(g.edge(e).u)]].edges.push_back(e);
  for (auto& c : out) c.cycle_rank = c.edges.size() + 1 - c.vertices.size();
  return out;
}

/// Result of one forced/forbidden assignment of a component's cycle edges.
struct BranchResult {
  std::uint64_t mask = 0;  // bit i set: cycle edge i forced to be a dimer
  bool feasible = false;   // forced dimers pairwise disjoint
  double value = 0.0;
  std::vector<EdgeId> dimers;  // host edge ids
  std::size_t near_ties = 0;
};

struct SparseExactResult {
  double value = 0.0;
  MonomerDimerConfig config;
  std::size_t near_ties = 0;
  std::size_t max_cycle_rank = 0;
  std::vector<double> component_values;  // per component, in components(g) order
};

namespace detail {

/// Non-forest edges of a component (spanning forest in edge-id order).
inline std::vector<EdgeId> cycle_edges(const WeightedGraph& g, const Component& comp) {
  std::unordered_map<VertexId, VertexId> parent;
  for (VertexId v : comp.vertices) parent[v] = v;
  auto find = [&parent](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<EdgeId> out;
  for (EdgeId e : comp.edges) {
    const VertexId a = find(g.edge(e).u);
    const VertexId b = find(g.edge(e).v);
    if (a == b) out.push_back(e);
    else parent[a] = b;
  }
  return out;
}

inline BranchResult solve_branch(const WeightedGraph& g, const Component& comp,
                                 const std::vector<EdgeId>& cycle, std::uint64_t mask) {
  BranchResult br;
  br.mask = mask;
  std::unordered_map<VertexId, VertexId> local;
  std::vector<std::uint8_t> is_cycle_edge;
  std::vector<VertexId> removed;
  double forced_weight = 0.0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (!((mask >> i) & 1U)) continue;
    const Edge& e = g.edge(cycle[i]);
    for (VertexId v : {e.u, e.v}) {
      if (std::find(removed.begin(), removed.end(), v) != removed.end()) return br;
      removed.push_back(v);
    }
    forced_weight += e.w;
    br.dimers.push_back(cycle[i]);
  }
  br.feasible = true;

  std::vector<VertexId> host_of;
  std::vector<double> x;
  for (VertexId v : comp.vertices) {
    if (std::find(removed.begin(), removed.end(), v) != removed.end()) continue;
    local.emplace(v, static_cast<VertexId>(host_of.size()));
    host_of.push_back(v);
    x.push_back(g.x(v));
  }
  std::vector<Edge> edges;
  std::vector<EdgeId> host_edge;
  for (EdgeId e : comp.edges) {
    if (std::find(cycle.begin(), cycle.end(), e) != cycle.end()) continue;
    const Edge& he = g.edge(e);
    const auto a = local.find(he.u);
    const auto b = local.find(he.v);
    if (a == local.end() || b == local.end()) continue;
    edges.push_back({a->second, b->second, he.w});
    host_edge.push_back(e);
  }
  const WeightedGraph forest(std::move(x), std::move(edges));
  const TreeSolution sol = solve_tree(forest);
  br.value = forced_weight + sol.value;
  br.near_ties = sol.near_ties;
  for (EdgeId e : sol.config.dimers()) br.dimers.push_back(host_edge[e]);
  std::sort(br.dimers.begin(), br.dimers.end());
  return br;
}

}  // namespace detail

/// Every branch of the cycle-edge case split for one component.
inline std::vector<BranchResult> sparse_exact_branches(const WeightedGraph& g, const Component& comp,
                                                       std::size_t max_rank = 8) {
  if (comp.cycle_rank > max_rank)
    throw Error(ErrorKind::cycle_rank_exceeded, "component cycle rank " + std::to_string(comp.cycle_rank) +
                                                    " exceeds limit " + std::to_string(max_rank));
  const auto cycle = detail::cycle_edges(g, comp);
  std::vector<BranchResult> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cycle.size()); ++mask)
    out.push_back(detail::solve_branch(g, comp, cycle, mask));
  return out;
}

/// Exact optimum for graphs whose components all have small cycle rank:
/// each of the r non-forest edges is either forced to be a dimer (both
/// endpoints removed) or deleted, and the remaining forest is solved by
/// message passing. 2^r forest solves per component.
inline SparseExactResult solve_sparse_exact(const WeightedGraph& g, std::size_t max_rank = 8) {
  SparseExactResult out;
  const auto comps = components(g);
  for (const auto& c : comps) {
    out.max_cycle_rank = std::max(out.max_cycle_rank, c.cycle_rank);
    if (c.cycle_rank > max_rank)
      throw Error(ErrorKind::cycle_rank_exceeded, "component cycle rank " + std::to_string(c.cycle_rank) +
                                                      " exceeds limit " + std::to_string(max_rank));
  }
  std::vector<EdgeId> dimers;
  for (const auto& c : comps) {
    if (c.edges.empty()) {
      out.value += g.x(c.vertices.front());
      out.component_values.push_back(g.x(c.vertices.front()));
      continue;
    }
    const auto branches = sparse_exact_branches(g, c, max_rank);
    const BranchResult* best = nullptr;
    for (const auto& br : branches)
      if (br.feasible && (best == nullptr || br.value > best->value)) best = &br;
    out.value += best->value;
    out.component_values.push_back(best->value);
    out.near_ties += best->near_ties;
    dimers.insert(dimers.end(), best->dimers.begin(), best->dimers.end());
  }
  out.config = MonomerDimerConfig(g, std::move(dimers));
  return out;
}

}  // namespace mdgs
