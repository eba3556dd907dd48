#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "levyrare/ara.hpp"
#include "levyrare/big_jumps.hpp"
#include "levyrare/estimators.hpp"
#include "levyrare/kernels.hpp"
#include "levyrare/levy_model.hpp"
#include "levyrare/params.hpp"
#include "levyrare/stick_breaking.hpp"

namespace levyrare {

/// Down-and-in setting: B = {at least one up jump >= n gamma and at least
/// one down jump <= -n gamma}. The two counts are independent under P,
/// so p_n = (1 - e^{-lambda+})(1 - e^{-lambda-}).
struct TwoSidedWeights {
  double w = 0.05;
  double lambda_up = 0.0;
  double lambda_down = 0.0;
  double log_p_n = 0.0;

  MixtureWeights mixture() const { return {w, lambda_up + lambda_down, log_p_n}; }
};

template <class Model>
TwoSidedWeights two_sided_weights(const Model& model, std::uint64_t n, double gamma, double w) {
  TwoSidedWeights tw;
  tw.w = w;
  const double nd = static_cast<double>(n);
  tw.lambda_up = nd * model.upper_tail(nd * gamma);
  tw.lambda_down = nd * model.lower_tail(nd * gamma);
  if (!(tw.lambda_up > 0.0) || !(tw.lambda_down > 0.0))
    throw CapabilityError("down-and-in sampling needs both jump tails to be nonzero");
  tw.log_p_n = std::log(-std::expm1(-tw.lambda_up)) + std::log(-std::expm1(-tw.lambda_down));
  return tw;
}

inline bool in_two_sided_set(const BigJumpSkeleton& s) { return s.count_up() >= 1 && s.count_down() >= 1; }

namespace detail {

template <class Model>
BigJumpSkeleton two_sided_skeleton(const Model& model, double horizon, double floor, std::uint64_t k_up,
                                   std::uint64_t k_down, Rng& rng) {
  const MagnitudeRange big{floor, kInf};
  std::vector<std::pair<double, double>> jumps;
  jumps.reserve(k_up + k_down);
  for (std::uint64_t i = 0; i < k_up; ++i)
    jumps.emplace_back(rng.uniform() * horizon, model.measure().sample_magnitude(Side::up, big, rng));
  for (std::uint64_t i = 0; i < k_down; ++i)
    jumps.emplace_back(rng.uniform() * horizon, -model.measure().sample_magnitude(Side::down, big, rng));
  std::sort(jumps.begin(), jumps.end());
  BigJumpSkeleton s;
  s.horizon = horizon;
  s.times.reserve(jumps.size());
  s.sizes.reserve(jumps.size());
  for (const auto& [t, z] : jumps) {
    s.times.push_back(t);
    s.sizes.push_back(z);
  }
  return s;
}

}  // namespace detail

/// Big jumps |z| >= n gamma under the mixture w P + (1 - w) P(. | B).
/// The conditioned branch draws each sign's count from its Poisson law
/// conditioned on >= 1, independently.
template <class Model>
BigJumpSkeleton sample_two_sided_skeleton_defensive(const AlgoParams& params, const Model& model, Rng& rng) {
  const TwoSidedWeights tw = two_sided_weights(model, params.n, params.gamma, params.w);
  const double nd = static_cast<double>(params.n);
  const bool nominal = rng.uniform() < params.w;
  std::uint64_t ku, kd;
  if (nominal) {
    ku = rng.poisson(tw.lambda_up);
    kd = rng.poisson(tw.lambda_down);
  } else {
    ku = sample_conditioned_poisson(tw.lambda_up, 1, rng);
    kd = sample_conditioned_poisson(tw.lambda_down, 1, rng);
  }
  auto s = detail::two_sided_skeleton(model, nd, nd * params.gamma, ku, kd, rng);
  s.conditioned = !nominal;
  return s;
}

/// Terminal indicator times the running-max indicator, given per-interval
/// endpoints and suprema of the drifted small-jump process.
inline bool barrier_indicator(std::span<const double> sizes, std::span<const double> endpoints,
                              std::span<const double> suprema, const BarrierEventSpec& spec, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  const double total = std::accumulate(endpoints.begin(), endpoints.end(), 0.0) +
                       std::accumulate(sizes.begin(), sizes.end(), 0.0);
  if (!(total - spec.c * nd <= -nd * spec.b)) return false;
  return running_max_indicator(sizes, endpoints, suprema, nd * spec.a);
}

inline bool barrier_hat_Y(const BigJumpSkeleton& skeleton, std::span<const IntervalRecord> records, std::size_t m,
                          const BarrierEventSpec& spec, std::uint64_t n) {
  if (records.size() != skeleton.k() + 1) throw StructureError("barrier_hat_Y: records do not match the skeleton");
  std::vector<double> ends(records.size()), sups(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ends[i] = records[i].endpoint();
    sups[i] = sba_supremum_estimate(records[i], m);
  }
  return barrier_indicator(skeleton.sizes, ends, sups, spec, n);
}

inline bool barrier_hat_Y(const BigJumpSkeleton& skeleton, std::span<const AraInterval> intervals, std::size_t m,
                          const BarrierEventSpec& spec, std::uint64_t n) {
  if (intervals.size() != skeleton.k() + 1)
    throw StructureError("barrier_hat_Y: intervals do not match the skeleton");
  std::vector<double> ends(intervals.size()), sups(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    ends[i] = intervals[i].endpoint(m);
    sups[i] = intervals[i].supremum(m);
  }
  return barrier_indicator(skeleton.sizes, ends, sups, spec, n);
}

/// Estimator of P(X_n(1) <= -b, sup_t X_n(t) + c t >= a).
template <class Model>
class BarrierEstimator {
 public:
  BarrierEstimator(AlgoParams params, const Model& model, BarrierEventSpec spec)
      : params_(params), model_(model), spec_(spec) {
    spec_.validate();
    params_.validate(kInf);
    weights_ = two_sided_weights(model_, params_.n, params_.gamma, params_.w);
    if (params_.mode == Mode::exact_sba && !model_.has_exact_increments())
      throw CapabilityError("exact_sba mode requires exact truncated increments; use ara");
    if (params_.mode == Mode::ara && !(static_cast<double>(params_.n) * params_.gamma > 1.0))
      throw ConfigError("ara mode requires n * gamma > 1");
  }

  const TwoSidedWeights& weights() const { return weights_; }

  EstimatorDraw draw(Rng& rng) const {
    const BigJumpSkeleton skeleton = sample_two_sided_skeleton_defensive(params_, model_, rng);
    return draw_given(skeleton, sample_tau(params_.rho, rng), rng);
  }

  EstimatorDraw draw_given(const BigJumpSkeleton& skeleton, std::uint64_t tau, Rng& rng) const {
    EstimatorDraw out;
    out.tau = tau;
    out.k = skeleton.k();
    out.conditioned = skeleton.conditioned;
    const double nd = static_cast<double>(params_.n);
    const double cutoff = nd * params_.gamma;
    out.hat_y.resize(tau);
    if (params_.mode == Mode::exact_sba) {
      const auto records = build_interval_records(skeleton, tau, params_.log_sticks(), model_,
                                                  JumpWindow::symmetric_below(cutoff), spec_.c, rng);
      for (std::size_t m = 1; m <= tau; ++m)
        out.hat_y[m - 1] = barrier_hat_Y(skeleton, records, m, spec_, params_.n);
    } else {
      const TruncationLadder ladder = make_truncation_ladder(model_, params_.n, tau, params_.kappa, params_.r,
                                                             JumpWindow::band(1.0, cutoff), spec_.c);
      const auto intervals = build_ara_intervals(skeleton, tau, params_.log_sticks(), ladder, model_, rng);
      for (std::size_t m = 1; m <= tau; ++m)
        out.hat_y[m - 1] = barrier_hat_Y(skeleton, intervals, m, spec_, params_.n);
    }
    out.z = debiased_Z(out.hat_y, params_.rho);
    out.value = out.z / likelihood_denominator(in_two_sided_set(skeleton), weights_.mixture());
    return out;
  }

 private:
  AlgoParams params_;
  const Model& model_;
  BarrierEventSpec spec_;
  TwoSidedWeights weights_;
};

template <class Model>
EstimatorDraw barrier_estimator_draw(const AlgoParams& params, const Model& model, const BarrierEventSpec& spec,
                                     Rng& rng) {
  return BarrierEstimator<Model>(params, model, spec).draw(rng);
}

}  // namespace levyrare
