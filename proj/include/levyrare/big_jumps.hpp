#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "levyrare/kernels.hpp"
#include "levyrare/levy_model.hpp"
#include "levyrare/params.hpp"

namespace levyrare {

/// Big-jump path J_n = sum_i z_i 1[u_i, n] on the unscaled horizon [0, n].
struct BigJumpSkeleton {
  std::vector<double> times;  ///< ascending, inside (0, n)
  std::vector<double> sizes;  ///< z_i, aligned with `times`
  bool conditioned = false;   ///< drawn from P(. | B) rather than P
  double horizon = 0.0;

  std::size_t k() const { return times.size(); }

  std::size_t count_up() const {
    return static_cast<std::size_t>(std::count_if(sizes.begin(), sizes.end(), [](double z) { return z > 0.0; }));
  }
  std::size_t count_down() const {
    return static_cast<std::size_t>(std::count_if(sizes.begin(), sizes.end(), [](double z) { return z < 0.0; }));
  }
  double max_size() const {
    return sizes.empty() ? -kInf : *std::max_element(sizes.begin(), sizes.end());
  }
};

/// Defensive-mixture constants: Q = w P + (1 - w) P(. | B).
struct MixtureWeights {
  double w = 0.05;
  double lambda_n = 0.0;  ///< expected number of big jumps under P
  double log_p_n = 0.0;   ///< log P(B)

  double p_n() const { return std::exp(log_p_n); }
};

/// One-sided case: B = {at least l* upward jumps >= n gamma}, so
/// p_n = P(Poisson(lambda_n) >= l*) with lambda_n = n nu[n gamma, inf).
template <class Model>
MixtureWeights one_sided_weights(const Model& model, std::uint64_t n, double gamma, std::uint64_t l_star,
                                 double w) {
  MixtureWeights mw;
  mw.w = w;
  const double nd = static_cast<double>(n);
  mw.lambda_n = nd * model.upper_tail(nd * gamma);
  mw.log_p_n = log_poisson_tail(mw.lambda_n, l_star);
  return mw;
}

/// I_B for the one-sided skeleton.
inline bool in_big_jump_set(const BigJumpSkeleton& s, std::uint64_t l_star) { return s.k() >= l_star; }

/// w + ((1 - w) / p_n) I_B, i.e. dQ/dP on the skeleton.
inline double likelihood_denominator(bool in_b, const MixtureWeights& mw) {
  if (!in_b) return mw.w;
  return mw.w + (1.0 - mw.w) * std::exp(-mw.log_p_n);
}

namespace detail {

template <class Model>
double draw_upward_big_jump(const Model& model, double floor, Rng& rng) {
  if constexpr (requires { model.inverse_upper_tail_restricted(1.0, 1.0); }) {
    const double top = model.upper_tail(floor);
    return model.inverse_upper_tail_restricted(rng.uniform() * top, floor);
  } else {
    throw CapabilityError("model lacks upper-tail inversion");
  }
}

template <class Model>
BigJumpSkeleton one_sided_skeleton(const Model& model, std::uint64_t n, double gamma, std::uint64_t k, Rng& rng) {
  BigJumpSkeleton s;
  s.horizon = static_cast<double>(n);
  s.times = sample_order_statistics(k, s.horizon, rng);
  const double floor = s.horizon * gamma;
  s.sizes.resize(k);
  for (auto& z : s.sizes) z = draw_upward_big_jump(model, floor, rng);
  return s;
}

}  // namespace detail

/// J_n under P: compound Poisson of upward jumps >= n gamma.
template <class Model>
BigJumpSkeleton sample_skeleton_nominal(const AlgoParams& params, const Model& model, Rng& rng) {
  const double nd = static_cast<double>(params.n);
  const auto k = rng.poisson(nd * model.upper_tail(nd * params.gamma));
  auto s = detail::one_sided_skeleton(model, params.n, params.gamma, k, rng);
  s.conditioned = false;
  return s;
}

/// J_n under P(. | B): count conditioned on >= l*, uniform order-statistic
/// times, sizes by inversion of the restricted tail.
template <class Model>
BigJumpSkeleton sample_skeleton_conditioned(const AlgoParams& params, const Model& model, std::uint64_t l_star,
                                            Rng& rng) {
  if constexpr (!requires { model.inverse_upper_tail_restricted(1.0, 1.0); }) {
    throw CapabilityError("model lacks upper-tail inversion");
  } else {
    const double nd = static_cast<double>(params.n);
    const double lambda = nd * model.upper_tail(nd * params.gamma);
    const auto k = sample_conditioned_poisson(lambda, l_star, rng);
    auto s = detail::one_sided_skeleton(model, params.n, params.gamma, k, rng);
    s.conditioned = true;
    return s;
  }
}

/// J_n under the defensive mixture Q_n.
template <class Model>
BigJumpSkeleton sample_skeleton_defensive(const AlgoParams& params, const Model& model, std::uint64_t l_star,
                                          Rng& rng) {
  if (rng.uniform() < params.w) return sample_skeleton_nominal(params, model, rng);
  return sample_skeleton_conditioned(params, model, l_star, rng);
}

}  // namespace levyrare
