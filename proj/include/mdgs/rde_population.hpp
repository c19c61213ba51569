#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mdgs/distributions.hpp"
#include "mdgs/error.hpp"
#include "mdgs/parallel.hpp"
#include "mdgs/rng.hpp"

namespace mdgs {

enum class Parity { even, odd };

inline Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }

/// Empirical sample of a message law (entries finite or +inf), with a sorted
/// copy for O(log N) CDF queries.
class MessagePool {
 public:
  MessagePool() = default;

  MessagePool(std::vector<double> samples, std::size_t iteration = 0, Parity parity = Parity::even,
              std::string provenance = {})
      : samples_(std::move(samples)), sorted_(samples_), iteration_(iteration), parity_(parity),
        provenance_(std::move(provenance)) {
    for (double s : samples_)
      if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
        throw Error(ErrorKind::domain, "pool samples must be finite or +inf");
    std::sort(sorted_.begin(), sorted_.end());
  }

  static MessagePool filled(std::size_t n, double value, std::string provenance = {}) {
    return MessagePool(std::vector<double>(n, value), 0, Parity::even, std::move(provenance));
  }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::vector<double>& samples() const { return samples_; }
  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t iteration() const { return iteration_; }
  Parity parity() const { return parity_; }
  const std::string& provenance() const { return provenance_; }

  /// #{Z <= t} / N.
  double cdf(double t) const {
    return static_cast<double>(std::upper_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin()) /
           static_cast<double>(size());
  }
  /// #{Z < t} / N.
  double cdf_left(double t) const {
    return static_cast<double>(std::lower_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin()) /
           static_cast<double>(size());
  }
  /// Empirical quantile at level p in [0, 1).
  double quantile(double p) const {
    const auto i = static_cast<std::size_t>(std::floor(p * static_cast<double>(size())));
    return sorted_[std::min(i, size() - 1)];
  }

 private:
  std::vector<double> samples_;
  std::vector<double> sorted_;
  std::size_t iteration_ = 0;
  Parity parity_ = Parity::even;
  std::string provenance_;
};

/// Sup-norm distance between two empirical CDFs.
inline double ks_distance(const MessagePool& a, const MessagePool& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::empty_pool, "KS distance of an empty pool");
  const auto& x = a.sorted();
  const auto& y = b.sorted();
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double worst = 0.0;
  while (i < x.size() || j < y.size()) {
    double t;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) t = x[i];
    else t = y[j];
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return worst;
}

/// Everything a pool update needs besides the pool itself.
struct RdeLaws {
  DegreeDistribution offspring;  // law of the number of terms in the max
  VertexWeightDist vertex;
  EdgeWeightDist edge;
};

inline constexpr std::size_t kPoolBlock = 1024;

/// One population-dynamics update. Output i is
///   max(X, max_{l <= K} (W_l - Z_l))
/// with X ~ vertex law, K ~ offspring law, W_l ~ edge law and Z_l drawn
/// uniformly with replacement from `in`. Indices are grouped in blocks of
/// kPoolBlock, each with its own stream derived from (seed, block), so the
/// result does not depend on `workers`.
inline MessagePool rde_step(const MessagePool& in, const RdeLaws& laws, std::uint64_t seed,
                            std::size_t workers = 1, std::optional<std::size_t> out_size = std::nullopt) {
  if (in.empty()) throw Error(ErrorKind::empty_pool, "rde_step on an empty pool");
  const std::size_t n = out_size.value_or(in.size());
  std::vector<double> out(n);
  const auto& src = in.samples();
  const std::size_t blocks = (n + kPoolBlock - 1) / kPoolBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    Rng rng(seeding::derive(seed, "pool-block", b));
    const std::size_t end = std::min(n, (b + 1) * kPoolBlock);
    for (std::size_t i = b * kPoolBlock; i < end; ++i) {
      double best = laws.vertex.sample(rng);
      const std::size_t k = laws.offspring.sample(rng);
      for (std::size_t l = 0; l < k; ++l) {
        const double w = laws.edge.sample(rng);
        const double z = src[rng.below(src.size())];
        best = std::max(best, w - z);  // w - (+inf) = -inf
      }
      out[i] = best;
    }
  });
  return MessagePool(std::move(out), in.iteration() + 1, flip(in.parity()), in.provenance());
}

struct IterationDiagnostics {
  std::size_t iteration = 0;
  double ks_plus_minus = 0.0;
  double ks_plus_same_parity = std::numeric_limits<double>::quiet_NaN();   // vs iteration - 2
  double ks_minus_same_parity = std::numeric_limits<double>::quiet_NaN();
};

struct AlternatingOptions {
  bool common_random_numbers = false;
  bool diagnostics = true;
  std::size_t workers = 1;
};

struct AlternatingResult {
  MessagePool plus;   // started from +inf
  MessagePool minus;  // started from m
  std::vector<IterationDiagnostics> diagnostics;
};

/// Advances the two extremal lineages T steps each. With common random
/// numbers both lineages share every draw, which makes minus <= plus hold
/// sample by sample at even iterations (reversed at odd ones).
inline AlternatingResult run_alternating(const RdeLaws& laws, std::size_t pool_size, std::size_t iterations,
                                         std::uint64_t seed, const AlternatingOptions& options = {}) {
  if (pool_size == 0) throw Error(ErrorKind::empty_pool, "pool size must be positive");
  const std::string provenance =
      laws.offspring.label() + "|" + laws.vertex.label() + "|" + laws.edge.label();
  AlternatingResult r;
  r.plus = MessagePool::filled(pool_size, std::numeric_limits<double>::infinity(), provenance + "|plus");
  r.minus = MessagePool::filled(pool_size, laws.vertex.minimum(), provenance + "|minus");
  MessagePool prev_plus;
  MessagePool prev_minus;
  for (std::size_t t = 1; t <= iterations; ++t) {
    const std::uint64_t plus_seed =
        seeding::derive(seed, options.common_random_numbers ? "lineage" : "lineage-plus", t);
    const std::uint64_t minus_seed =
        seeding::derive(seed, options.common_random_numbers ? "lineage" : "lineage-minus", t);
    MessagePool next_plus = rde_step(r.plus, laws, plus_seed, options.workers);
    MessagePool next_minus = rde_step(r.minus, laws, minus_seed, options.workers);
    if (options.diagnostics) {
      IterationDiagnostics d;
      d.iteration = t;
      d.ks_plus_minus = ks_distance(next_plus, next_minus);
      if (!prev_plus.empty()) {
        d.ks_plus_same_parity = ks_distance(next_plus, prev_plus);
        d.ks_minus_same_parity = ks_distance(next_minus, prev_minus);
      }
      r.diagnostics.push_back(d);
      prev_plus = std::move(r.plus);
      prev_minus = std::move(r.minus);
    }
    r.plus = std::move(next_plus);
    r.minus = std::move(next_minus);
  }
  return r;
}

/// k levels (i + 1/2) / k of the pool's empirical quantile function.
inline std::vector<double> quantile_grid(const MessagePool& pool, std::size_t k) {
  std::vector<double> grid;
  for (std::size_t i = 0; i < k; ++i) grid.push_back(pool.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(k)));
  return grid;
}

namespace detail {

/// For each t in `grid`: mean over the sorted edge samples of #{Z < W - t}/N.
inline std::vector<double> mean_left_cdf_shifted(const MessagePool& pool, const std::vector<double>& w_sorted,
                                                 const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  const auto& z = pool.sorted();
  for (double t : grid) {
    std::size_t below = 0;
    double acc = 0.0;
    for (double w : w_sorted) {
      const double s = w - t;
      while (below < z.size() && z[below] < s) ++below;
      acc += static_cast<double>(below);
    }
    out.push_back(acc / (static_cast<double>(w_sorted.size()) * static_cast<double>(z.size())));
  }
  return out;
}

}  // namespace detail

/// Largest violation over `grid` of the CDF form of the fixed point,
///   h_plus(t)  = h_X(t) * pgf(1 - E_W[h_minus(W - t)])
///   h_minus(t) = h_X(t) * pgf(1 - E_W[h_plus(W - t)]),
/// with E_W replaced by an average over M edge-weight samples and h(W - t)
/// read as P(Z < W - t).
inline double cdf_residual(const MessagePool& plus, const MessagePool& minus, const RdeLaws& laws,
                           const std::vector<double>& grid, std::size_t monte_carlo, std::uint64_t seed) {
  if (plus.empty() || minus.empty()) throw Error(ErrorKind::empty_pool, "cdf_residual on an empty pool");
  Rng rng(seeding::derive(seed, "cdf-residual"));
  std::vector<double> w(monte_carlo);
  for (auto& v : w) v = laws.edge.sample(rng);
  std::sort(w.begin(), w.end());
  const auto e_minus = detail::mean_left_cdf_shifted(minus, w, grid);
  const auto e_plus = detail::mean_left_cdf_shifted(plus, w, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const double hx = laws.vertex.cdf(t);
    worst = std::max(worst, std::abs(plus.cdf(t) - hx * laws.offspring.pgf(1.0 - e_minus[i])));
    worst = std::max(worst, std::abs(minus.cdf(t) - hx * laws.offspring.pgf(1.0 - e_plus[i])));
  }
  return worst;
}

/// u -> 1 - pgf^{-1}(u), decreasing on [pgf(0), 1].
inline double invariant_map(const DegreeDistribution& offspring, double u) {
  return 1.0 - offspring.pgf_inverse(u);
}

struct InvariantEstimate {
  double lhs = 0.0;  // from the plus pool
  double rhs = 0.0;  // from the minus pool
  double gap = 0.0;
};

/// Estimate of  integral_{[m, inf)} F(h(t) / h_X(t)) dh(t)  from one pool.
///
/// The atom of the pool at m contributes beta * F(beta / alpha) exactly; the
/// rest is the pool average of F at the left-limit CDF ratio. Ratios are
/// clamped into [pgf(0), 1], where the exact ratio always lies.
inline double invariant_side(const MessagePool& pool, const DegreeDistribution& offspring,
                             const VertexWeightDist& vertex) {
  if (pool.empty()) throw Error(ErrorKind::empty_pool, "invariant estimate on an empty pool");
  if (offspring.pmf(0) >= 1.0)
    throw Error(ErrorKind::degenerate_generating_function, "offspring law is a point mass at 0");
  const auto& s = pool.sorted();
  const double n = static_cast<double>(s.size());
  const double m = vertex.minimum();
  const double alpha = vertex.atom_mass();
  const double floor_u = offspring.pmf(0);
  const auto atom_end = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), m) - s.begin());
  const double beta = static_cast<double>(atom_end) / n;
  double total = 0.0;
  if (atom_end > 0) {
    if (alpha > 0.0) {
      total += beta * invariant_map(offspring, std::clamp(beta / alpha, floor_u, 1.0));
    } else if (beta > 2.0 / std::sqrt(n)) {
      throw Error(ErrorKind::atom_mismatch, "pool has an atom at the minimum but the vertex law has none");
    }
  }
  const std::size_t start = alpha > 0.0 ? atom_end : 0;
  double acc = 0.0;
  for (std::size_t i = start; i < s.size(); ++i) {
    const double left = static_cast<double>(std::lower_bound(s.begin(), s.end(), s[i]) - s.begin()) / n;
    const double hx = vertex.cdf(s[i]);
    const double ratio = hx > 0.0 ? left / hx : 1.0;
    acc += invariant_map(offspring, std::clamp(ratio, floor_u, 1.0));
  }
  return total + acc / n;
}

inline InvariantEstimate invariant_gap(const MessagePool& plus, const MessagePool& minus,
                                       const DegreeDistribution& offspring, const VertexWeightDist& vertex) {
  InvariantEstimate e;
  e.lhs = invariant_side(plus, offspring, vertex);
  e.rhs = invariant_side(minus, offspring, vertex);
  e.gap = std::abs(e.lhs - e.rhs);
  return e;
}

struct EnergyEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double dimer_fraction = 0.0;  // share of sampled roots covered by a dimer
};

/// Mean of x(o) 1{o monomer} + (1/2) sum_v w(o,v) 1{(o,v) dimer} at the root
/// of the limiting tree, estimated from S root samples: K ~ root law,
/// X ~ vertex law, Z(o, v_l) drawn from the pool, and edge l a dimer iff
/// W_l > Z(o, v_l) + Z(v_l, o) with Z(v_l, o) = max(X, max_{k != l} (W_k - Z_k)).
inline EnergyEstimate energy_density(const MessagePool& pool, const DegreeDistribution& root_law,
                                     const VertexWeightDist& vertex, const EdgeWeightDist& edge,
                                     std::size_t samples, std::uint64_t seed, std::size_t workers = 1) {
  if (pool.empty()) throw Error(ErrorKind::empty_pool, "energy estimate on an empty pool");
  if (samples < 2) throw Error(ErrorKind::domain, "energy estimate needs at least two samples");
  const auto& src = pool.samples();
  const std::size_t blocks = (samples + kPoolBlock - 1) / kPoolBlock;
  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t dimers = 0;
  };
  std::vector<Partial> partial(blocks);
  parallel_for(blocks, workers, [&](std::size_t b) {
    Rng rng(seeding::derive(seed, "energy-block", b));
    std::vector<double> w;
    std::vector<double> z;
    Partial& p = partial[b];
    const std::size_t end = std::min(samples, (b + 1) * kPoolBlock);
    for (std::size_t i = b * kPoolBlock; i < end; ++i) {
      const std::size_t k = root_law.sample(rng);
      const double x = vertex.sample(rng);
      w.resize(k);
      z.resize(k);
      double first = -std::numeric_limits<double>::infinity();
      double second = first;
      std::size_t first_at = k;
      for (std::size_t l = 0; l < k; ++l) {
        w[l] = edge.sample(rng);
        z[l] = src[rng.below(src.size())];
        const double term = w[l] - z[l];
        if (first_at == k || term > first) {
          second = first;
          first = term;
          first_at = l;
        } else if (term > second) {
          second = term;
        }
      }
      double value = x;
      std::size_t dimers = 0;
      for (std::size_t l = 0; l < k; ++l) {
        const double back = std::max(x, l == first_at ? second : first);
        if (w[l] > z[l] + back) {
          ++dimers;
          value = 0.5 * w[l];
        }
      }
      if (dimers > 1) throw Error(ErrorKind::invalid_config, "local rule produced two dimers at one root");
      p.dimers += dimers;
      p.sum += value;
      p.sum_sq += value * value;
    }
  });
  Partial total;
  for (const auto& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.dimers += p.dimers;
  }
  const double s = static_cast<double>(samples);
  EnergyEstimate e;
  e.estimate = total.sum / s;
  const double var = std::max(0.0, (total.sum_sq - s * e.estimate * e.estimate) / (s - 1.0));
  e.standard_error = std::sqrt(var / s);
  e.dimer_fraction = static_cast<double>(total.dimers) / s;
  return e;
}

}  // namespace mdgs
