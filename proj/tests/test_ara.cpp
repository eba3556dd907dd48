#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "levyrare/ara.hpp"
#include "levyrare/estimators.hpp"
#include "support.hpp"

using namespace levyrare;

namespace {

// Large window of a one-sided ladder at scale n * gamma.
JumpWindow one_sided_large(double cutoff) { return {{1.0, cutoff}, {1.0, kInf}}; }

}  // namespace

TEST(Ara, KappaThreshold) {
  EXPECT_EQ(kappa_threshold(100, -1, 0.5, 1.5), 1.0);
  EXPECT_NEAR(kappa_threshold(100, 0, 0.5, 1.5), 1e-3, 1e-15);
  EXPECT_NEAR(kappa_threshold(100, 3, 0.5, 1.5), 1.25e-4, 1e-15);
  EXPECT_EQ(kappa_threshold(100, 1, 0.0, 1.5), 0.0);
  EXPECT_EQ(kappa_threshold(100, 4, 0.0, 1.5), 0.0);
  EXPECT_THROW(kappa_threshold(100, -2, 0.5, 1.5), std::domain_error);
}

TEST(Ara, LadderIsDecreasingAndVariancesMonotone) {
  const auto m = make_experiment_model(1.6);
  const auto lad = make_truncation_ladder(m, 100, 6, 0.5, 1.5, one_sided_large(25.0));
  ASSERT_EQ(lad.thresholds.size(), 8u);
  for (std::size_t i = 1; i < lad.thresholds.size(); ++i) EXPECT_LT(lad.thresholds[i], lad.thresholds[i - 1]);
  for (int q = 0; q <= 6; ++q) {
    const double step = m.small_jump_variance(lad.kappa_at(q - 1)) - m.small_jump_variance(lad.kappa_at(q));
    EXPECT_GE(step, 0.0);
    EXPECT_NEAR(lad.band_var[q], step, 1e-12 * std::max(step, 1e-300));
    EXPECT_NEAR(lad.band_drift[q], 0.0, 1e-15);
  }
  EXPECT_NEAR(lad.tail_var, m.small_jump_variance(lad.kappa_at(6)), 1e-25);
}

TEST(Ara, BandOfClassifiesJumps) {
  const auto m = make_experiment_model(1.6);
  const auto lad = make_truncation_ladder(m, 100, 3, 0.5, 1.5, one_sided_large(25.0));
  EXPECT_EQ(lad.band_of(0.5), 0u);
  EXPECT_EQ(lad.band_of(1e-3), 0u);
  EXPECT_EQ(lad.band_of(0.9e-3), 1u);
  EXPECT_EQ(lad.band_of(0.5e-3), 1u);
  EXPECT_EQ(lad.band_of(0.3e-3), 2u);
  EXPECT_EQ(lad.band_of(1.25e-4), 3u);
}

TEST(Ara, ZeroStickIsAllZero) {
  const auto m = make_experiment_model(1.6);
  const auto lad = make_truncation_ladder(m, 100, 3, 0.5, 1.5, one_sided_large(25.0));
  Rng r(1, 0);
  const auto l = sample_ara_ladder(0.0, lad, m, r);
  for (std::size_t q = 0; q <= 3; ++q) EXPECT_EQ(assemble_level(l, q), 0.0);
}

TEST(Ara, AssemblyIdentities) {
  AraLadder l;
  l.stick_length = 1.0;
  l.drift_part = 0.25;
  l.gaussian = -0.5;
  l.large_jumps = 0.0;
  l.band = {0.0, 0.0, 0.0};
  l.substitute = {0.0, 0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(assemble_level(l, 1), -0.25);
  l.band = {0.3, -0.1, 0.7};
  l.substitute = {9.0, 0.2, -0.4, 0.05};
  for (std::size_t m = 0; m < 2; ++m)
    EXPECT_NEAR(assemble_level(l, m) - assemble_level(l, m + 1), l.substitute[m + 1] - l.band[m + 1], 1e-15);
  const auto all = assemble_all_levels(l);
  for (std::size_t m = 0; m <= 2; ++m) EXPECT_NEAR(all[m], assemble_level(l, m), 1e-15);
  EXPECT_THROW(assemble_level(l, 3), std::out_of_range);
}

TEST(Ara, CrossLevelVarianceAgrees) {
  // n gamma = 2 keeps the heavy large-jump window narrow.
  const auto m = make_experiment_model(1.6);
  const std::size_t tau = 3;
  const auto lad = make_truncation_ladder(m, 8, tau, 0.5, 1.5, one_sided_large(2.0));
  Rng r(2, 0);
  std::vector<MomentAccumulator> acc(tau + 1);
  for (int i = 0; i < 100000; ++i) {
    const auto levels = assemble_all_levels(sample_ara_ladder(1.0, lad, m, r));
    for (std::size_t q = 0; q <= tau; ++q) acc[q].add(levels[q]);
  }
  const double var0 = acc[0].variance();
  for (std::size_t q = 0; q <= tau; ++q) {
    EXPECT_NEAR(acc[q].variance() / var0, 1.0, 0.02);
  }
}

TEST(Ara, LevelVarianceMatchesOracleWithFiniteWindows) {
  // Heavier index so the unrestricted downward second moment is finite.
  const auto m = make_experiment_model(2.5);
  const std::size_t tau = 3;
  const auto lad = make_truncation_ladder(m, 8, tau, 0.5, 1.5, one_sided_large(2.0));
  Rng r(3, 0);
  std::vector<MomentAccumulator> acc(tau + 1), sq(tau + 1);
  for (int i = 0; i < 100000; ++i) {
    const auto levels = assemble_all_levels(sample_ara_ladder(1.0, lad, m, r));
    for (std::size_t q = 0; q <= tau; ++q) {
      acc[q].add(levels[q]);
      sq[q].add(levels[q] * levels[q]);
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  const double up_large_mean = testsupport::side_moment(0.25, 2.5, 1.0, 2.0, 1);
  const double down_large_mean = testsupport::side_moment(0.25, 2.5, 1.0, inf, 1);
  const double mean = up_large_mean - down_large_mean;
  const double var = 1.0 + 2.0 * testsupport::side_moment(0.25, 2.5, 0.0, 1.0, 2) +
                     testsupport::side_moment(0.25, 2.5, 1.0, 2.0, 2) +
                     testsupport::side_moment(0.25, 2.5, 1.0, inf, 2);
  for (std::size_t q = 0; q <= tau; ++q) {
    EXPECT_TRUE(testsupport::within_se(acc[q].mean, mean, acc[q].standard_error())) << q;
    const double second = var + mean * mean;
    EXPECT_TRUE(testsupport::within_se(sq[q].mean, second, sq[q].standard_error())) << q;
  }
}

TEST(Ara, CompensatedBandsAreCentered) {
  const auto m = make_experiment_model(1.6);
  const auto lad = make_truncation_ladder(m, 100, 2, 0.5, 1.5, JumpWindow{{1.0, 1.0}, {1.0, 1.0}});
  Rng r(4, 0);
  const auto acc = testsupport::moments(100000, [&] { return assemble_level(sample_ara_ladder(1.0, lad, m, r), 1); });
  EXPECT_TRUE(testsupport::within_se(acc.mean, 0.0, acc.standard_error()));
}

TEST(Ara, KappaZeroReducesToExactIncrement) {
  const auto m = make_experiment_model(1.6);
  const double cutoff = 25.0;
  const auto lad = make_truncation_ladder(m, 100, 2, 0.0, 1.5, one_sided_large(cutoff));
  Rng r(5, 0), e(5, 1);
  std::vector<double> ara, exact;
  for (int i = 0; i < 20000; ++i) {
    ara.push_back(assemble_level(sample_ara_ladder(2.0, lad, m, r), 1));
    exact.push_back(m.sample_truncated_increment(2.0, cutoff, e));
  }
  EXPECT_GT(testsupport::ks2_pvalue(ara, exact), 0.01);
}

TEST(Ara, IntervalsShareStickStructure) {
  const auto m = make_experiment_model(1.6);
  BigJumpSkeleton s;
  s.horizon = 100.0;
  s.times = {40.0};
  s.sizes = {60.0};
  const std::uint64_t tau = 4;
  const auto lad = make_truncation_ladder(m, 100, tau, 0.5, 1.5, one_sided_large(25.0));
  Rng r(6, 0);
  const auto iv = build_ara_intervals(s, tau, 10, lad, m, r);
  ASSERT_EQ(iv.size(), 2u);
  for (const auto& x : iv) {
    EXPECT_EQ(x.stick_lengths.size(), 10u + tau + 1);
    EXPECT_EQ(x.levels.front().size(), tau + 1);
    EXPECT_THROW(x.supremum(tau + 1), std::out_of_range);
  }
}
