#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "mdgs/json_io.hpp"
#include "mdgs/rde_population.hpp"

using namespace mdgs;

namespace {

constexpr std::size_t kN = 20000;

// sup_t |pool CDF - law CDF|, checked at every sample and just below it.
template <typename Cdf>
double ks_to_law(const MessagePool& pool, Cdf cdf) {
  double worst = 0.0;
  const auto& s = pool.sorted();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    worst = std::max(worst, std::abs(pool.cdf(s[i]) - f));
    worst = std::max(worst, std::abs(pool.cdf_left(s[i]) - cdf(std::nextafter(s[i], -HUGE_VAL))));
  }
  return worst;
}

RdeLaws laws(DegreeDistribution k, VertexWeightDist x, EdgeWeightDist w) { return {std::move(k), std::move(x), std::move(w)}; }

}  // namespace

TEST(Pool, RejectsBadSamples) {
  EXPECT_THROW(MessagePool({0.0, std::nan("")}), Error);
  EXPECT_THROW(MessagePool({-std::numeric_limits<double>::infinity()}), Error);
  EXPECT_NO_THROW(MessagePool({std::numeric_limits<double>::infinity()}));
}

TEST(Pool, KsExamples) {
  EXPECT_DOUBLE_EQ(ks_distance(MessagePool({0.0, 1.0}), MessagePool({1.0, 0.0})), 0.0);
  EXPECT_DOUBLE_EQ(ks_distance(MessagePool({0.0}), MessagePool({1.0})), 1.0);
  EXPECT_DOUBLE_EQ(ks_distance(MessagePool({0.0, 1.0}), MessagePool({1.0, 2.0})), 0.5);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(ks_distance(MessagePool({inf, inf}), MessagePool({0.0, inf})), 0.5);
  EXPECT_THROW((void)ks_distance(MessagePool(), MessagePool({1.0})), Error);
}

TEST(Pool, KsIsSymmetric) {
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> a(1 + rng.below(50)), b(1 + rng.below(50));
    for (auto& v : a) v = std::floor(5.0 * rng.uniform01());
    for (auto& v : b) v = std::floor(5.0 * rng.uniform01());
    const MessagePool pa(a), pb(b);
    EXPECT_DOUBLE_EQ(ks_distance(pa, pb), ks_distance(pb, pa));
    EXPECT_DOUBLE_EQ(ks_distance(pa, pa), 0.0);
  }
}

TEST(RdeStep, NoChildrenGivesVertexLaw) {
  const auto x = VertexWeightDist::atom_plus_exp(0.5, 0.3, 2.0);
  const auto l = laws(DegreeDistribution::point(0), x, EdgeWeightDist::exponential(1.0));
  const auto out = rde_step(MessagePool::filled(kN, 0.0), l, 1);
  EXPECT_LE(ks_to_law(out, [&](double t) { return x.cdf(t); }), 1.63 / std::sqrt(double(kN)));
  EXPECT_EQ(out.iteration(), 1u);
  EXPECT_EQ(out.parity(), Parity::odd);
}

TEST(RdeStep, InfinitePoolGivesVertexLaw) {
  const auto x = VertexWeightDist::atom_plus_exp(0.0, 0.5, 1.0);
  const auto l = laws(DegreeDistribution::poisson(3.0), x, EdgeWeightDist::exponential(1.0));
  const auto out = rde_step(MessagePool::filled(kN, std::numeric_limits<double>::infinity()), l, 2);
  EXPECT_LE(ks_to_law(out, [&](double t) { return x.cdf(t); }), 1.63 / std::sqrt(double(kN)));
}

TEST(RdeStep, SingleChildAgainstZeroPoolGivesEdgeLaw) {
  const auto l = laws(DegreeDistribution::point(1), VertexWeightDist::constant(0.0), EdgeWeightDist::uniform(0.0, 1.0));
  const auto out = rde_step(MessagePool::filled(kN, 0.0), l, 3);
  EXPECT_LE(ks_to_law(out, [](double t) { return std::clamp(t, 0.0, 1.0); }), 1.63 / std::sqrt(double(kN)));
}

TEST(RdeStep, EmptyPool) {
  const auto l = laws(DegreeDistribution::point(1), VertexWeightDist::constant(0.0), EdgeWeightDist::exponential(1.0));
  try {
    (void)rde_step(MessagePool(), l, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::empty_pool);
  }
}

TEST(RdeStep, IndependentOfWorkerCount) {
  const auto l = laws(DegreeDistribution::poisson(2.0), VertexWeightDist::atom_plus_exp(0.0, 0.5, 1.0),
                      EdgeWeightDist::exponential(1.0));
  MessagePool in = MessagePool::filled(5000, 0.0);
  in = rde_step(in, l, 9, 1);
  const auto a = rde_step(in, l, 10, 1);
  const auto b = rde_step(in, l, 10, 4);
  const auto c = rde_step(in, l, 10, 7);
  EXPECT_EQ(a.samples(), b.samples());
  EXPECT_EQ(a.samples(), c.samples());
}

TEST(Alternating, StartingPoolsAreExtremal) {
  const auto l = laws(DegreeDistribution::poisson(2.0), VertexWeightDist::constant(0.0), EdgeWeightDist::exponential(1.0));
  const auto r = run_alternating(l, 1000, 0, 1);
  EXPECT_DOUBLE_EQ(ks_distance(r.plus, r.minus), 1.0);
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Alternating, NoChildrenLineagesAgree) {
  const auto l = laws(DegreeDistribution::point(0), VertexWeightDist::atom_plus_exp(0.0, 0.4, 1.0),
                      EdgeWeightDist::exponential(1.0));
  const auto r = run_alternating(l, kN, 3, 5);
  EXPECT_LE(ks_distance(r.plus, r.minus), 1.63 * std::sqrt(2.0 / double(kN)));
  ASSERT_EQ(r.diagnostics.size(), 3u);
  EXPECT_TRUE(std::isnan(r.diagnostics[0].ks_plus_same_parity));
}

TEST(Alternating, CommonRandomNumbersOrderLineages) {
  const auto l = laws(DegreeDistribution::poisson(2.5), VertexWeightDist::atom_plus_exp(0.0, 0.5, 1.0),
                      EdgeWeightDist::exponential(1.0));
  for (std::size_t t = 1; t <= 6; ++t) {
    AlternatingOptions opt;
    opt.common_random_numbers = true;
    opt.diagnostics = false;
    const auto r = run_alternating(l, 3000, t, 17, opt);
    for (std::size_t i = 0; i < r.plus.size(); ++i) {
      if (t % 2 == 0) ASSERT_LE(r.minus.samples()[i], r.plus.samples()[i]) << "t=" << t;
      else ASSERT_LE(r.plus.samples()[i], r.minus.samples()[i]) << "t=" << t;
    }
  }
}

TEST(Alternating, DeterministicAcrossWorkers) {
  const auto l = laws(DegreeDistribution::poisson(1.5), VertexWeightDist::atom_plus_exp(0.0, 0.5, 1.0),
                      EdgeWeightDist::exponential(1.0));
  AlternatingOptions one, many;
  many.workers = 5;
  const auto a = run_alternating(l, 4000, 8, 23, one);
  const auto b = run_alternating(l, 4000, 8, 23, many);
  EXPECT_EQ(a.plus.samples(), b.plus.samples());
  EXPECT_EQ(a.minus.samples(), b.minus.samples());
}

TEST(Invariant, SamePoolHasNoGap) {
  const auto l = laws(DegreeDistribution::poisson(2.0), VertexWeightDist::atom_plus_exp(0.0, 0.5, 1.0),
                      EdgeWeightDist::exponential(1.0));
  const auto r = run_alternating(l, kN, 10, 3);
  EXPECT_LE(invariant_gap(r.plus, r.plus, l.offspring, l.vertex).gap, 2.0 / std::sqrt(double(kN)));
}

TEST(Invariant, SingleChildLineagesMeet) {
  const auto l = laws(DegreeDistribution::point(1), VertexWeightDist::atom_plus_exp(0.0, 0.5, 1.0),
                      EdgeWeightDist::exponential(1.0));
  const auto r = run_alternating(l, 100000, 60, 4);
  EXPECT_LE(invariant_gap(r.plus, r.minus, l.offspring, l.vertex).gap, 0.02);
}

TEST(Invariant, Errors) {
  const auto cont = VertexWeightDist::continuous(0.0, EdgeWeightDist::exponential(1.0));
  try {
    (void)invariant_side(MessagePool::filled(1000, 0.0), DegreeDistribution::poisson(2.0), cont);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::atom_mismatch);
  }
  try {
    (void)invariant_side(MessagePool::filled(10, 1.0), DegreeDistribution::point(0), cont);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_generating_function);
  }
  EXPECT_THROW((void)invariant_side(MessagePool(), DegreeDistribution::poisson(2.0), cont), Error);
}

TEST(Invariant, MapEndpoints) {
  const auto k = DegreeDistribution::poisson(2.0);
  EXPECT_NEAR(invariant_map(k, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(invariant_map(k, k.pgf(0.0)), 1.0, 1e-9);
  EXPECT_GT(invariant_map(k, 0.5), invariant_map(k, 0.8));
}

TEST(Energy, IsolatedRootsScoreTheirWeight) {
  const auto e = energy_density(MessagePool::filled(100, 0.0), DegreeDistribution::point(0), VertexWeightDist::constant(0.0),
                                EdgeWeightDist::exponential(1.0), 5000, 1);
  EXPECT_DOUBLE_EQ(e.estimate, 0.0);
  EXPECT_DOUBLE_EQ(e.dimer_fraction, 0.0);
}

TEST(Energy, SingleEdgeIsHalfItsWeight) {
  const auto e = energy_density(MessagePool::filled(100, 0.0), DegreeDistribution::point(1), VertexWeightDist::constant(0.0),
                                EdgeWeightDist::uniform(0.0, 1.0), 200000, 2, 3);
  EXPECT_NEAR(e.estimate, 0.25, 3.0 * e.standard_error);
  EXPECT_GT(e.standard_error, 0.0);
  EXPECT_DOUBLE_EQ(e.dimer_fraction, 1.0);
}

TEST(Energy, IndependentOfWorkerCount) {
  const auto pool = rde_step(MessagePool::filled(5000, 0.0),
                             laws(DegreeDistribution::poisson(2.0), VertexWeightDist::constant(0.0), EdgeWeightDist::exponential(1.0)), 1);
  const auto a = energy_density(pool, DegreeDistribution::poisson(2.0), VertexWeightDist::constant(0.0),
                                EdgeWeightDist::exponential(1.0), 20000, 8, 1);
  const auto b = energy_density(pool, DegreeDistribution::poisson(2.0), VertexWeightDist::constant(0.0),
                                EdgeWeightDist::exponential(1.0), 20000, 8, 6);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(CdfResidual, VanishesBelowTheMinimum) {
  const auto l = laws(DegreeDistribution::poisson(2.0), VertexWeightDist::atom_plus_exp(1.0, 0.5, 1.0),
                      EdgeWeightDist::exponential(1.0));
  const auto r = run_alternating(l, 5000, 6, 2);
  EXPECT_DOUBLE_EQ(cdf_residual(r.plus, r.minus, l, {-1.0, 0.0, 0.99}, 2000, 3), 0.0);
  const auto grid = quantile_grid(r.plus, 10);
  EXPECT_EQ(grid.size(), 10u);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
}

TEST(PoolIo, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "mdgs_pool_io_test";
  std::filesystem::create_directories(dir);
  const MessagePool pool({1.5, -0.25, std::numeric_limits<double>::infinity(), 1e-300}, 7, Parity::odd, "prov");
  const std::string stem = (dir / "pool").string();
  io::write_pool(stem, pool);
  const auto back = io::read_pool(stem);
  EXPECT_EQ(back.samples(), pool.samples());
  EXPECT_EQ(back.iteration(), 7u);
  EXPECT_EQ(back.parity(), Parity::odd);
  EXPECT_EQ(back.provenance(), "prov");
  std::filesystem::remove_all(dir);
}
