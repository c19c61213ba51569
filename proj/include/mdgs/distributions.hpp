#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mdgs/error.hpp"
#include "mdgs/rng.hpp"

namespace mdgs {

// ---------------------------------------------------------------------------
// Degree laws
// ---------------------------------------------------------------------------

/// Probability law on {0, 1, 2, ...} with finite support.
///
/// Poisson laws are truncated at the smallest k whose tail mass drops below
/// 1e-12 and then renormalized, so every law here has an exact finite pmf.
class DegreeDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;
  static constexpr double kPoissonTail = 1e-12;

  /// From (k, p) entries; repeated k accumulate. Probabilities must sum to 1
  /// within 1e-12 and are then renormalized.
  static DegreeDistribution from_pmf(const std::vector<std::pair<std::size_t, double>>& entries,
                                     std::string label = "pmf") {
    if (entries.empty()) throw Error(ErrorKind::domain, "degree pmf has no entries");
    std::size_t kmax = 0;
    for (const auto& [k, p] : entries) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw Error(ErrorKind::domain, "degree pmf entry has invalid probability");
      kmax = std::max(kmax, k);
    }
    std::vector<double> pmf(kmax + 1, 0.0);
    for (const auto& [k, p] : entries) pmf[k] += p;
    return DegreeDistribution(std::move(pmf), std::move(label), std::nullopt, kSumTolerance);
  }

  static DegreeDistribution point(std::size_t k) {
    std::vector<double> pmf(k + 1, 0.0);
    pmf[k] = 1.0;
    return DegreeDistribution(std::move(pmf), "point(" + std::to_string(k) + ")", std::nullopt);
  }

  static DegreeDistribution poisson(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::domain, "Poisson rate must be > 0");
    std::vector<double> pmf;
    double term = std::exp(-c);
    double cumulative = 0.0;
    for (std::size_t k = 0;; ++k) {
      if (k > 0) term *= c / static_cast<double>(k);
      pmf.push_back(term);
      cumulative += term;
      // Past the mode the terms decay geometrically, so the remaining tail is
      // bounded by term * ratio / (1 - ratio) with ratio = c / (k + 1).
      const double ratio = c / static_cast<double>(k + 1);
      if (ratio < 0.5 && term * ratio / (1.0 - ratio) < kPoissonTail) break;
      if (k > 100000) throw Error(ErrorKind::domain, "Poisson rate too large to truncate");
    }
    std::ostringstream label;
    label << "poisson(" << c << ")";
    return DegreeDistribution(std::move(pmf), label.str(), c);
  }

  /// p(k); zero outside the support.
  double pmf(std::size_t k) const { return k < pmf_.size() ? pmf_[k] : 0.0; }
  const std::vector<double>& pmf() const { return pmf_; }
  std::size_t max_k() const { return pmf_.size() - 1; }
  double mean() const { return mean_; }
  double second_moment() const { return second_moment_; }
  const std::string& label() const { return label_; }
  std::optional<double> poisson_rate() const { return poisson_rate_; }

  /// Generating function s -> sum_k p(k) s^k on [0, 1].
  double pgf(double s) const {
    if (s < -1e-12 || s > 1.0 + 1e-12)
      throw Error(ErrorKind::domain, "generating function argument outside [0,1]");
    s = std::clamp(s, 0.0, 1.0);
    double acc = 0.0;
    for (std::size_t k = pmf_.size(); k-- > 0;) acc = acc * s + pmf_[k];
    return std::clamp(acc, 0.0, 1.0);
  }

  /// Inverse of the generating function on [pgf(0), 1], by bisection.
  ///
  /// Arguments within 1e-12 outside the range are clamped; anything further
  /// out is a DomainError.
  double pgf_inverse(double u) const {
    if (pmf_[0] >= 1.0)
      throw Error(ErrorKind::degenerate_generating_function,
                  "generating function of a point mass at 0 is constant");
    constexpr double kSlack = 1e-12;
    const double lo_u = pmf_[0];
    if (u < lo_u - kSlack || u > 1.0 + kSlack)
      throw Error(ErrorKind::domain, "generating function inverse argument outside [pgf(0), 1]");
    u = std::clamp(u, lo_u, 1.0);
    if (u >= 1.0) return 1.0;
    if (u <= lo_u) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    // Bisect on s to full width: where pgf is flat, a residual test in u
    // would stop far from the preimage.
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (pgf(mid) < u) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  /// Inverse-CDF sample.
  std::size_t sample(Rng& rng) const { return quantile(rng.uniform01()); }

  std::size_t quantile(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto k = static_cast<std::size_t>(it - cdf_.begin());
    return std::min(k, pmf_.size() - 1);
  }

 private:
  DegreeDistribution(std::vector<double> pmf, std::string label, std::optional<double> poisson_rate,
                     double sum_tolerance = 1e-9)
      : pmf_(std::move(pmf)), label_(std::move(label)), poisson_rate_(poisson_rate) {
    double total = 0.0;
    for (double p : pmf_) total += p;
    if (std::abs(total - 1.0) > sum_tolerance)
      throw Error(ErrorKind::domain, "degree probabilities do not sum to 1");
    for (double& p : pmf_) p /= total;
    while (pmf_.size() > 1 && pmf_.back() == 0.0) pmf_.pop_back();
    cdf_.resize(pmf_.size());
    double run = 0.0;
    mean_ = 0.0;
    second_moment_ = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
      run += pmf_[k];
      cdf_[k] = run;
      mean_ += static_cast<double>(k) * pmf_[k];
      second_moment_ += static_cast<double>(k * k) * pmf_[k];
    }
    cdf_.back() = 1.0;
  }

  std::vector<double> pmf_;
  std::vector<double> cdf_;
  std::string label_;
  std::optional<double> poisson_rate_;
  double mean_ = 0.0;
  double second_moment_ = 0.0;
};

/// k -> k p(k) / E.
inline DegreeDistribution size_biased(const DegreeDistribution& law) {
  if (!(law.mean() > 0.0)) throw Error(ErrorKind::zero_mean, "cannot size-bias a law with mean 0");
  std::vector<std::pair<std::size_t, double>> entries;
  for (std::size_t k = 1; k <= law.max_k(); ++k)
    if (law.pmf(k) > 0.0) entries.emplace_back(k, static_cast<double>(k) * law.pmf(k) / law.mean());
  return DegreeDistribution::from_pmf(entries, "size_biased(" + law.label() + ")");
}

/// Law of K - 1 for K size-biased: the number of children of a non-root
/// vertex in a unimodular Galton-Watson tree (Poisson(c) maps to Poisson(c)).
inline DegreeDistribution excess_degree(const DegreeDistribution& law) {
  const DegreeDistribution biased = size_biased(law);
  std::vector<std::pair<std::size_t, double>> entries;
  for (std::size_t k = 1; k <= biased.max_k(); ++k)
    if (biased.pmf(k) > 0.0) entries.emplace_back(k - 1, biased.pmf(k));
  return DegreeDistribution::from_pmf(entries, "excess(" + law.label() + ")");
}

/// How non-root offspring counts relate to the root law.
///
/// `unimodular`: children ~ size-biased law minus one, the local limit of
/// Erdos-Renyi and configuration-model graphs. `literal`: children ~ the
/// size-biased law itself.
enum class OffspringConvention { unimodular, literal };

inline DegreeDistribution offspring_law(const DegreeDistribution& root_law,
                                        OffspringConvention convention) {
  return convention == OffspringConvention::unimodular ? excess_degree(root_law)
                                                       : size_biased(root_law);
}

// ---------------------------------------------------------------------------
// Weight laws
// ---------------------------------------------------------------------------

struct Exponential {
  double rate = 1.0;
};
struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};
struct ShiftedExponential {
  double rate = 1.0;
  double shift = 0.0;
};

/// Atomless edge-weight law.
class EdgeWeightDist {
 public:
  using Family = std::variant<Exponential, Uniform, ShiftedExponential>;

  explicit EdgeWeightDist(Family family) : family_(family) { validate(); }

  static EdgeWeightDist exponential(double rate) { return EdgeWeightDist(Exponential{rate}); }
  static EdgeWeightDist uniform(double lo, double hi) { return EdgeWeightDist(Uniform{lo, hi}); }
  static EdgeWeightDist shifted_exponential(double rate, double shift) {
    return EdgeWeightDist(ShiftedExponential{rate, shift});
  }

  const Family& family() const { return family_; }

  double cdf(double t) const {
    return std::visit(
        [t](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Exponential>) {
            return t <= 0.0 ? 0.0 : -std::expm1(-f.rate * t);
          } else if constexpr (std::is_same_v<F, Uniform>) {
            if (t <= f.lo) return 0.0;
            if (t >= f.hi) return 1.0;
            return (t - f.lo) / (f.hi - f.lo);
          } else {
            return t <= f.shift ? 0.0 : -std::expm1(-f.rate * (t - f.shift));
          }
        },
        family_);
  }

  double quantile(double u) const {
    return std::visit(
        [u](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Exponential>) {
            return -std::log1p(-u) / f.rate;
          } else if constexpr (std::is_same_v<F, Uniform>) {
            return f.lo + u * (f.hi - f.lo);
          } else {
            return f.shift - std::log1p(-u) / f.rate;
          }
        },
        family_);
  }

  double sample(Rng& rng) const { return quantile(rng.uniform01()); }

  double mean() const {
    return std::visit(
        [](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Exponential>) return 1.0 / f.rate;
          else if constexpr (std::is_same_v<F, Uniform>) return 0.5 * (f.lo + f.hi);
          else return f.shift + 1.0 / f.rate;
        },
        family_);
  }

  /// Left end of the support.
  double support_min() const {
    return std::visit(
        [](const auto& f) -> double {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Exponential>) return 0.0;
          else if constexpr (std::is_same_v<F, Uniform>) return f.lo;
          else return f.shift;
        },
        family_);
  }

  std::string label() const {
    std::ostringstream os;
    std::visit(
        [&os](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Exponential>) os << "exp(" << f.rate << ")";
          else if constexpr (std::is_same_v<F, Uniform>) os << "uniform(" << f.lo << "," << f.hi << ")";
          else os << "shifted_exp(" << f.rate << "," << f.shift << ")";
        },
        family_);
    return os.str();
  }

 private:
  void validate() const {
    std::visit(
        [](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, Uniform>) {
            if (!(f.hi > f.lo) || !std::isfinite(f.lo) || !std::isfinite(f.hi))
              throw Error(ErrorKind::domain, "uniform law needs finite lo < hi");
          } else {
            if (!(f.rate > 0.0) || !std::isfinite(f.rate))
              throw Error(ErrorKind::domain, "exponential rate must be > 0");
          }
        },
        family_);
  }

  Family family_;
};

/// Vertex-weight law: an atom of mass `alpha` at the minimum `m`, plus with
/// probability 1 - alpha the value m + Y for Y drawn from a continuous tail
/// law supported on [0, inf).
class VertexWeightDist {
 public:
  VertexWeightDist(double m, double alpha, std::optional<EdgeWeightDist> tail)
      : m_(m), alpha_(alpha), tail_(std::move(tail)) {
    if (!std::isfinite(m_)) throw Error(ErrorKind::domain, "vertex-weight minimum must be finite");
    if (!(alpha_ >= 0.0 && alpha_ <= 1.0))
      throw Error(ErrorKind::domain, "vertex-weight atom mass must lie in [0,1]");
    if (alpha_ < 1.0 && !tail_)
      throw Error(ErrorKind::domain, "vertex-weight law with alpha < 1 needs a tail");
    if (tail_ && tail_->support_min() < 0.0)
      throw Error(ErrorKind::domain, "vertex-weight tail must be supported on [0, inf)");
    if (alpha_ >= 1.0) tail_.reset();
  }

  static VertexWeightDist constant(double value) { return VertexWeightDist(value, 1.0, std::nullopt); }
  static VertexWeightDist atom_plus_exp(double m, double alpha, double rate) {
    return VertexWeightDist(m, alpha, EdgeWeightDist::exponential(rate));
  }
  static VertexWeightDist continuous(double m, EdgeWeightDist tail) {
    return VertexWeightDist(m, 0.0, std::move(tail));
  }

  double minimum() const { return m_; }
  double atom_mass() const { return alpha_; }
  const std::optional<EdgeWeightDist>& tail() const { return tail_; }

  /// h_X(t) = P(X <= t).
  double cdf(double t) const {
    if (t < m_) return 0.0;
    if (!tail_) return 1.0;
    return alpha_ + (1.0 - alpha_) * tail_->cdf(t - m_);
  }

  double quantile(double u) const {
    if (u < alpha_ || !tail_) return m_;
    const double v = (u - alpha_) / (1.0 - alpha_);
    return m_ + tail_->quantile(std::min(v, std::nextafter(1.0, 0.0)));
  }

  double sample(Rng& rng) const { return quantile(rng.uniform01()); }

  double mean() const { return tail_ ? m_ + (1.0 - alpha_) * tail_->mean() : m_; }

  std::string label() const {
    std::ostringstream os;
    os << "vertex(m=" << m_ << ",alpha=" << alpha_;
    if (tail_) os << ",tail=" << tail_->label();
    os << ")";
    return os.str();
  }

 private:
  double m_;
  double alpha_;
  std::optional<EdgeWeightDist> tail_;
};

}  // namespace mdgs
