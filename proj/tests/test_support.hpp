#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "mdgs/mdgs.hpp"

namespace mdgs::testing {

/// Random labelled tree on n vertices: vertex i > 0 attaches to a uniform
/// earlier vertex, then labels are shuffled.
inline WeightedGraph random_tree(std::size_t n, const EdgeWeightDist& edge, const VertexWeightDist& vertex, Rng& rng) {
  std::vector<VertexId> label(n);
  std::iota(label.begin(), label.end(), VertexId{0});
  for (std::size_t i = n; i > 1; --i) std::swap(label[i - 1], label[rng.below(i)]);
  std::vector<double> x(n);
  for (auto& v : x) v = vertex.sample(rng);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i)
    edges.push_back({label[rng.below(i)], label[i], edge.sample(rng)});
  return WeightedGraph(std::move(x), std::move(edges));
}

/// G(n, p) with weights drawn sequentially from rng.
inline WeightedGraph random_gnp(std::size_t n, double p, const EdgeWeightDist& edge, const VertexWeightDist& vertex,
                                Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = vertex.sample(rng);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (rng.uniform01() < p) edges.push_back({u, v, edge.sample(rng)});
  return WeightedGraph(std::move(x), std::move(edges));
}

inline WeightedGraph path3(double w_ab = 3.0, double w_bc = 2.0) {
  return WeightedGraph({0.0, 0.0, 0.0}, {{0, 1, w_ab}, {1, 2, w_bc}});
}

inline WeightedGraph triangle(double a = 5.0, double b = 1.0, double c = 1.0) {
  return WeightedGraph({0.0, 0.0, 0.0}, {{0, 1, a}, {1, 2, b}, {0, 2, c}});
}

/// Dimer edge ids of the optimum restricted to the given host edges.
inline std::vector<EdgeId> restrict_dimers(const MonomerDimerConfig& config, const std::vector<EdgeId>& host_edges) {
  std::vector<EdgeId> out;
  for (EdgeId e : host_edges)
    if (config.is_dimer(e)) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mdgs::testing
