#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mdgs/distributions.hpp"
#include "mdgs/error.hpp"
#include "mdgs/graph.hpp"
#include "mdgs/rng.hpp"

namespace mdgs {

/// i.i.d. weights keyed by (seed, "vertex"/"edge", id), independent of the
/// order in which the structure was generated.
struct WeightLaws {
  VertexWeightDist vertex;
  EdgeWeightDist edge;
};

namespace detail {

inline WeightedGraph attach_weights(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                    const WeightLaws& laws, std::uint64_t seed) {
  const std::uint64_t vertex_stream = seeding::derive(seed, "vertex-weights");
  const std::uint64_t edge_stream = seeding::derive(seed, "edge-weights");
  std::vector<double> x(n);
  for (std::size_t v = 0; v < n; ++v) x[v] = laws.vertex.quantile(seeding::keyed_uniform(vertex_stream, v));
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (std::size_t id = 0; id < pairs.size(); ++id)
    edges.push_back({pairs[id].first, pairs[id].second,
                     laws.edge.quantile(seeding::keyed_uniform(edge_stream, id))});
  return WeightedGraph(std::move(x), std::move(edges));
}

}  // namespace detail

/// Root offspring law plus the offspring law of every other vertex.
struct UbgwLaw {
  DegreeDistribution root;
  DegreeDistribution offspring;

  static UbgwLaw from_root_law(const DegreeDistribution& pi,
                               OffspringConvention convention = OffspringConvention::unimodular) {
    if (pi.mean() > 0.0) return {pi, offspring_law(pi, convention)};
    // A law concentrated at 0 never produces non-root vertices.
    return {pi, DegreeDistribution::point(0)};
  }
};

struct UbgwSample {
  WeightedGraph graph;  // vertices in BFS order; root is vertex 0
  VertexId root = 0;
  std::vector<std::size_t> depth;
};

/// Unimodular Galton-Watson tree truncated at depth H, generated breadth
/// first. Vertices at depth H get no children.
inline UbgwSample sample_ubgw_ball(const UbgwLaw& law, const WeightLaws& weights, std::size_t depth,
                                   std::uint64_t seed, std::size_t vertex_cap = 10'000'000) {
  Rng rng(seeding::derive(seed, "structure"));
  std::vector<std::size_t> level{0};
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::size_t head = 0; head < level.size(); ++head) {
    if (level[head] == depth) continue;
    const std::size_t children = head == 0 ? law.root.sample(rng) : law.offspring.sample(rng);
    if (level.size() + children > vertex_cap)
      throw Error(ErrorKind::size_cap_exceeded, "UBGW sample exceeds the vertex cap");
    for (std::size_t c = 0; c < children; ++c) {
      pairs.emplace_back(static_cast<VertexId>(head), static_cast<VertexId>(level.size()));
      level.push_back(level[head] + 1);
    }
  }
  UbgwSample out{detail::attach_weights(level.size(), pairs, weights, seed), 0, std::move(level)};
  return out;
}

/// G(n, c/n) with skip sampling over the pairs (u < v) in row-major order;
/// expected O(n + |E|) time. Edges come out sorted by (u, v).
inline WeightedGraph sample_er(std::size_t n, double c, const WeightLaws& weights, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::domain, "Erdos-Renyi graph needs n >= 1");
  if (!(c >= 0.0) || c > static_cast<double>(n))
    throw Error(ErrorKind::domain, "Erdos-Renyi mean degree must lie in [0, n]");
  const double p = c / static_cast<double>(n);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  if (p > 0.0 && n >= 2) {
    Rng rng(seeding::derive(seed, "structure"));
    if (p >= 1.0) {
      for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    } else {
      const double log_q = std::log1p(-p);
      std::int64_t v = 1;
      std::int64_t w = -1;
      const auto nn = static_cast<std::int64_t>(n);
      while (v < nn) {
        const double r = rng.uniform01();
        w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
        while (w >= v && v < nn) {
          w -= v;
          ++v;
        }
        if (v < nn) pairs.emplace_back(static_cast<VertexId>(w), static_cast<VertexId>(v));
      }
      std::sort(pairs.begin(), pairs.end());
    }
  }
  return detail::attach_weights(n, pairs, weights, seed);
}

struct ConfigurationModelSample {
  WeightedGraph graph;
  std::vector<std::size_t> degrees;  // after the odd-sum correction
  std::size_t self_loops_removed = 0;
};

/// Uniform pairing of half-edges. An odd degree sum is fixed by adding one
/// half-edge to the last vertex; self-loops are dropped and counted, parallel
/// edges kept.
inline ConfigurationModelSample sample_configuration_model(std::vector<std::size_t> degrees,
                                                           const WeightLaws& weights, std::uint64_t seed) {
  std::size_t total = 0;
  for (std::size_t d : degrees) total += d;
  if (total % 2 == 1) {
    ++degrees.back();
    ++total;
  }
  std::vector<VertexId> half_edges;
  half_edges.reserve(total);
  for (VertexId v = 0; v < degrees.size(); ++v)
    for (std::size_t k = 0; k < degrees[v]; ++k) half_edges.push_back(v);
  Rng rng(seeding::derive(seed, "structure"));
  for (std::size_t i = half_edges.size(); i > 1; --i) std::swap(half_edges[i - 1], half_edges[rng.below(i)]);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  std::size_t loops = 0;
  for (std::size_t i = 0; i + 1 < half_edges.size(); i += 2) {
    const VertexId a = half_edges[i];
    const VertexId b = half_edges[i + 1];
    if (a == b) ++loops;
    else pairs.emplace_back(std::min(a, b), std::max(a, b));
  }
  const std::size_t n = degrees.size();
  return {detail::attach_weights(n, pairs, weights, seed), std::move(degrees), loops};
}

/// Degrees drawn i.i.d. from pi, then paired as above.
inline ConfigurationModelSample sample_configuration_model(const DegreeDistribution& pi, std::size_t n,
                                                           const WeightLaws& weights, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::domain, "configuration model needs n >= 1");
  Rng rng(seeding::derive(seed, "degrees"));
  std::vector<std::size_t> degrees(n);
  for (auto& d : degrees) d = pi.sample(rng);
  return sample_configuration_model(std::move(degrees), weights, seed);
}

struct RootPair {
  VertexId first;
  VertexId second;
  std::optional<std::size_t> distance;
};

/// Two distinct uniform vertices and their distance.
inline RootPair sample_two_roots(const WeightedGraph& g, Rng& rng) {
  const std::size_t n = g.vertex_count();
  if (n < 2) throw Error(ErrorKind::domain, "need at least two vertices to pick two roots");
  const auto a = static_cast<VertexId>(rng.below(n));
  auto b = static_cast<VertexId>(rng.below(n - 1));
  if (b >= a) ++b;
  return {a, b, graph_distance(g, a, b)};
}

}  // namespace mdgs
