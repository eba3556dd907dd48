#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "levyrare/crude_mc.hpp"
#include "levyrare/stick_breaking.hpp"
#include "support.hpp"

using namespace levyrare;

namespace {

ExperimentModel brownian() { return make_experiment_model(1.6, 0.0, 1.0); }

BigJumpSkeleton empty_skeleton(double n) {
  BigJumpSkeleton s;
  s.horizon = n;
  return s;
}

}  // namespace

TEST(StickBreaking, NoBigJumpsGivesOneInterval) {
  const auto m = make_experiment_model(1.6);
  AlgoParams p;
  p.n = 200;
  Rng r(1, 0);
  const auto recs = build_interval_records(empty_skeleton(200.0), 5, p, m, r);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].increments.size(), p.log_sticks() + 5 + 1);
  EXPECT_EQ(p.log_sticks(), 31u);
  const double total = std::accumulate(recs[0].stick_lengths.begin(), recs[0].stick_lengths.end(), 0.0);
  EXPECT_NEAR(total, 200.0, 1e-10);
}

TEST(StickBreaking, IntervalLengthsMatchSkeleton) {
  const auto m = make_experiment_model(1.6);
  AlgoParams p;
  p.n = 100;
  BigJumpSkeleton s = empty_skeleton(100.0);
  s.times = {10.0, 55.0};
  s.sizes = {30.0, 40.0};
  Rng r(2, 0);
  const auto recs = build_interval_records(s, 3, p, m, r);
  ASSERT_EQ(recs.size(), 3u);
  const double expect[] = {10.0, 45.0, 45.0};
  for (int i = 0; i < 3; ++i) {
    const double sum = std::accumulate(recs[i].stick_lengths.begin(), recs[i].stick_lengths.end(), 0.0);
    EXPECT_NEAR(sum, expect[i], 1e-10);
  }
}

TEST(StickBreaking, SupremumEstimateBookkeeping) {
  IntervalRecord rec;
  rec.log_sticks = 2;
  rec.increments = {-1.0, -2.0, -0.5, -3.0, -1.0};
  EXPECT_EQ(sba_supremum_estimate(rec, 1), 0.0);
  rec.increments = {1.0, -2.0, 0.5, 3.0, 7.0};
  EXPECT_EQ(sba_supremum_estimate(rec, 1), 1.5);
  EXPECT_EQ(sba_supremum_estimate(rec, 2), 4.5);  // all but the residual
  EXPECT_THROW(sba_supremum_estimate(rec, 3), std::out_of_range);
}

TEST(StickBreaking, SupremumEstimateIsMonotone) {
  const auto m = make_experiment_model(1.6);
  AlgoParams p;
  p.n = 50;
  Rng r(3, 0);
  for (int i = 0; i < 200; ++i) {
    const auto recs = build_interval_records(empty_skeleton(50.0), 10, p, m, r);
    for (std::size_t mm = 1; mm < 10; ++mm)
      ASSERT_LE(sba_supremum_estimate(recs[0], mm), sba_supremum_estimate(recs[0], mm + 1));
  }
}

TEST(StickBreaking, EndpointPlusJumpsMatchesDirectPath) {
  const auto m = make_experiment_model(1.6);
  AlgoParams p;
  p.n = 10;
  p.gamma = 0.25;
  Rng r(4, 0), d(4, 1);
  std::vector<double> sba, direct;
  for (int i = 0; i < 10000; ++i) {
    const auto s = sample_skeleton_nominal(p, m, r);
    const auto recs = build_interval_records(s, 2, p, m, r);
    double x = std::accumulate(s.sizes.begin(), s.sizes.end(), 0.0);
    for (const auto& rec : recs) x += rec.endpoint();
    sba.push_back(x);
    direct.push_back(sample_full_path(m, 10, d).terminal);
  }
  EXPECT_GT(testsupport::ks2_pvalue(sba, direct), 0.01);
}

TEST(StickBreaking, JointEndpointIsExact) {
  const auto m = brownian();
  Rng r(5, 0);
  std::vector<double> xs;
  for (int i = 0; i < 20000; ++i) {
    const auto es = joint_endpoint_supremum(1.0, m, 5, r);
    ASSERT_GE(es.supremum, 0.0);
    xs.push_back(es.endpoint);
  }
  EXPECT_GT(testsupport::ks_pvalue(xs, [](double x) { return normal_cdf(x); }), 0.01);
}

TEST(StickBreaking, BrownianSupremumReflection) {
  const auto m = brownian();
  Rng r(6, 0);
  std::vector<double> sups;
  levyrare::MomentAccumulator hit;
  for (int i = 0; i < 100000; ++i) {
    const auto es = joint_endpoint_supremum(1.0, m, 30, r);
    sups.push_back(es.supremum);
    hit.add(es.supremum > 1.0 ? 1.0 : 0.0);
  }
  EXPECT_TRUE(testsupport::within_se(hit.mean, 2.0 * normal_sf(1.0), hit.standard_error()));
  EXPECT_GT(testsupport::ks_pvalue(sups, [](double x) { return x <= 0.0 ? 0.0 : 1.0 - 2.0 * normal_sf(x); }), 0.01);
}

TEST(StickBreaking, NeedsAtLeastOneStick) {
  const auto m = make_experiment_model(1.6);
  Rng r(7, 0);
  EXPECT_THROW(joint_endpoint_supremum(1.0, m, 0, r), std::invalid_argument);
}
