#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "levyrare/kernels.hpp"
#include "levyrare/numerics.hpp"
#include "support.hpp"

using namespace levyrare;

TEST(Rng, SameStreamSameDraws) {
  Rng a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    differs |= x != c.uniform();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformIsOpen) {
  Rng r(1, 1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Numerics, LogPoissonTail) {
  const double lambda = 0.3342;
  EXPECT_NEAR(std::exp(log_poisson_tail(lambda, 2)), 1.0 - std::exp(-lambda) * (1.0 + lambda), 1e-15);
  EXPECT_NEAR(std::exp(log_poisson_tail(lambda, 2)), 0.0448, 5e-5);
  EXPECT_EQ(log_poisson_tail(lambda, 0), 0.0);
  // Deep tail stays finite in log space.
  const double deep = log_poisson_tail(1e-200, 3);
  EXPECT_TRUE(std::isfinite(deep));
  EXPECT_NEAR(deep, 3.0 * std::log(1e-200) - std::log(6.0), 1e-6 * std::abs(deep));
}

TEST(Numerics, NormalInverse) {
  for (double q : {0.5, 0.1, 1e-5, 1e-12}) EXPECT_NEAR(normal_sf(normal_sf_inverse(q)), q, 1e-12 * q + 1e-15);
}

TEST(Numerics, RobustCeil) {
  EXPECT_EQ(robust_ceil(4.0 * std::log2(256.0)), 32);
  EXPECT_EQ(robust_ceil(30.000000000001), 30);
  EXPECT_EQ(robust_ceil(30.01), 31);
}

TEST(Numerics, PairwiseSum) {
  std::vector<double> v(1001, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 100.1, 1e-12);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(ConditionedPoisson, NoConditioningIsPlainPoisson) {
  Rng r(3, 0);
  std::vector<double> obs(20, 0.0);
  const int reps = 200000;
  for (int i = 0; i < reps; ++i) ++obs[std::min<std::uint64_t>(sample_conditioned_poisson(2.5, 0, r), 19)];
  std::vector<double> exp(20);
  for (int k = 0; k < 19; ++k) exp[k] = reps * poisson_pmf(2.5, k);
  exp[19] = reps - std::accumulate(exp.begin(), exp.end() - 1, 0.0);
  EXPECT_GT(testsupport::chi2_pvalue(obs, exp), 0.01);
}

TEST(ConditionedPoisson, TruncatedPmfChiSquare) {
  const double lambda = 0.3342;
  const double p = 1.0 - std::exp(-lambda) * (1.0 + lambda);
  Rng r(4, 0);
  const int reps = 1000000;
  std::vector<double> obs(8, 0.0), exp(8, 0.0);
  for (int i = 0; i < reps; ++i) {
    const auto k = sample_conditioned_poisson(lambda, 2, r);
    ASSERT_GE(k, 2u);
    ++obs[std::min<std::uint64_t>(k, 7)];
  }
  double acc = 0.0;
  for (int k = 2; k < 7; ++k) acc += exp[k] = reps * poisson_pmf(lambda, k) / p;
  exp[7] = reps - acc;
  EXPECT_GT(testsupport::chi2_pvalue(obs, exp), 0.01);
}

TEST(ConditionedPoisson, InverseBranchForTinyLambda) {
  // P(K >= 3) ~ 1.7e-10 forces the inverse-cdf branch.
  const double lambda = 1e-3;
  Rng r(5, 0);
  const int reps = 100000;
  std::vector<double> obs(3, 0.0);
  for (int i = 0; i < reps; ++i) {
    const auto k = sample_conditioned_poisson(lambda, 3, r);
    ASSERT_GE(k, 3u);
    ++obs[std::min<std::uint64_t>(k - 3, 2)];
  }
  // pmf(4)/pmf(3) = lambda / 4.
  EXPECT_GT(obs[0], reps * 0.999);
  EXPECT_NEAR(obs[1] / reps, lambda / 4.0, 5.0 * std::sqrt(lambda / 4.0 / reps));
  EXPECT_THROW(sample_conditioned_poisson(0.0, 1, r), std::domain_error);
}

TEST(OrderStatistics, Basics) {
  Rng r(6, 0);
  EXPECT_TRUE(sample_order_statistics(0, 1.0, r).empty());
  for (int i = 0; i < 1000; ++i) {
    const auto u = sample_order_statistics(7, 3.0, r);
    ASSERT_TRUE(std::is_sorted(u.begin(), u.end()));
    ASSERT_GE(u.front(), 0.0);
    ASSERT_LE(u.back(), 3.0);
  }
}

TEST(OrderStatistics, MinimumOfTwoHasMeanOneThird) {
  Rng r(7, 0);
  const auto acc = testsupport::moments(100000, [&] { return sample_order_statistics(2, 1.0, r).front(); });
  EXPECT_TRUE(testsupport::within_se(acc.mean, 1.0 / 3.0, acc.standard_error()));
}

TEST(Tau, TailProbabilityAndMean) {
  Rng r(8, 0);
  const int reps = 1000000;
  levyrare::MomentAccumulator tail, mean;
  for (int i = 0; i < reps; ++i) {
    const auto t = sample_tau(0.97, r);
    ASSERT_GE(t, 1u);
    tail.add(t >= 3 ? 1.0 : 0.0);
    mean.add(static_cast<double>(t));
  }
  EXPECT_TRUE(testsupport::within_se(tail.mean, 0.9409, tail.standard_error()));
  EXPECT_TRUE(testsupport::within_se(mean.mean, 1.0 / 0.03, mean.standard_error()));
}

TEST(Tau, SmallRhoGivesOne) {
  Rng r(9, 0);
  int ones = 0;
  for (int i = 0; i < 10000; ++i) ones += sample_tau(1e-9, r) == 1;
  EXPECT_GE(ones, 9999);
  EXPECT_THROW(sample_tau(1.0, r), std::domain_error);
}

TEST(Sticks, ForcedBreaks) {
  const std::array<double, 3> v{0.5, 0.5, 0.5};
  const auto s = stick_lengths_from(1.0, v);
  ASSERT_EQ(s.lengths.size(), 3u);
  EXPECT_DOUBLE_EQ(s.lengths[0], 0.5);
  EXPECT_DOUBLE_EQ(s.lengths[1], 0.25);
  EXPECT_DOUBLE_EQ(s.lengths[2], 0.125);
  EXPECT_DOUBLE_EQ(s.residual, 0.125);
}

TEST(Sticks, ZeroCountAndConservation) {
  Rng r(10, 0);
  const auto empty = stick_lengths(2.5, 0, r);
  EXPECT_TRUE(empty.lengths.empty());
  EXPECT_EQ(empty.residual, 2.5);
  for (int i = 0; i < 1000; ++i) {
    const double total = 10.0 * r.uniform();
    const auto s = stick_lengths(total, 40, r);
    const double sum = std::accumulate(s.lengths.begin(), s.lengths.end(), s.residual);
    ASSERT_NEAR(sum, total, 1e-12 * total);
    for (double l : s.lengths) ASSERT_GE(l, 0.0);
    ASSERT_GE(s.residual, 0.0);
  }
}

TEST(Sticks, ThirdStickHasMeanOneEighth) {
  Rng r(11, 0);
  const auto acc = testsupport::moments(1000000, [&] { return stick_lengths(1.0, 3, r).lengths[2]; });
  EXPECT_TRUE(testsupport::within_se(acc.mean, 0.125, acc.standard_error()));
}

TEST(Sticks, Reproducible) {
  Rng a(12, 3), b(12, 3);
  const auto x = stick_lengths(1.0, 10, a);
  const auto y = stick_lengths(1.0, 10, b);
  EXPECT_EQ(x.lengths, y.lengths);
  EXPECT_EQ(x.residual, y.residual);
}
