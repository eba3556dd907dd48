#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levyrare/ara.hpp"
#include "levyrare/big_jumps.hpp"
#include "levyrare/kernels.hpp"
#include "levyrare/levy_model.hpp"
#include "levyrare/params.hpp"
#include "levyrare/stick_breaking.hpp"

namespace levyrare {

/// One importance-sampled value L_n with the bookkeeping behind it.
struct EstimatorDraw {
  double value = 0.0;              ///< L_n
  double z = 0.0;                  ///< debiased Z_n before the likelihood ratio
  std::uint64_t tau = 0;
  std::size_t k = 0;
  bool conditioned = false;        ///< mixture branch P(. | B)
  bool capped = false;             ///< a big jump reached n b
  std::vector<std::uint8_t> hat_y; ///< Y^1 .. Y^tau
};

/// max_i 1{ start_i + sup_i >= threshold }, where start_i accumulates the
/// full endpoint sums of earlier intervals and earlier big-jump sizes.
inline bool running_max_indicator(std::span<const double> sizes, std::span<const double> endpoints,
                                  std::span<const double> suprema, double threshold) {
  if (endpoints.size() != sizes.size() + 1 || suprema.size() != endpoints.size())
    throw StructureError("running_max_indicator: records do not match the skeleton");
  double start = 0.0;
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    if (start + suprema[i] >= threshold) return true;
    start += endpoints[i];
    if (i < sizes.size()) start += sizes[i];
  }
  return false;
}

/// Y^m for exact stick-breaking records.
inline bool hat_Y(const BigJumpSkeleton& skeleton, std::span<const IntervalRecord> records, std::size_t m,
                  double threshold) {
  if (records.size() != skeleton.k() + 1) throw StructureError("hat_Y: records do not match the skeleton");
  std::vector<double> ends(records.size()), sups(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ends[i] = records[i].endpoint();
    sups[i] = sba_supremum_estimate(records[i], m);
  }
  return running_max_indicator(skeleton.sizes, ends, sups, threshold);
}

/// Y^m under ARA: level-m values drive both endpoints and suprema.
inline bool hat_Y(const BigJumpSkeleton& skeleton, std::span<const AraInterval> intervals, std::size_t m,
                  double threshold) {
  if (intervals.size() != skeleton.k() + 1) throw StructureError("hat_Y: intervals do not match the skeleton");
  std::vector<double> ends(intervals.size()), sups(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    ends[i] = intervals[i].endpoint(m);
    sups[i] = intervals[i].supremum(m);
  }
  return running_max_indicator(skeleton.sizes, ends, sups, threshold);
}

/// Z = Y^1 + sum_{m=2}^{tau} (Y^m - Y^{m-1}) / rho^{m-1}, with tau the
/// length of the sequence.
inline double debiased_Z(std::span<const std::uint8_t> hat_y, double rho) {
  if (hat_y.empty()) return 0.0;
  double z = hat_y[0];
  double inv = 1.0;
  for (std::size_t m = 1; m < hat_y.size(); ++m) {
    inv /= rho;
    const int diff = static_cast<int>(hat_y[m]) - static_cast<int>(hat_y[m - 1]);
    if (diff != 0) z += diff * inv;
  }
  return z;
}

/// Importance-sampling estimator of P(sup X_n >= a, upward jumps < b)
/// under the defensive mixture, with either exact stick increments
/// or the coupled ARA ladder.
template <class Model>
class RareEventEstimator {
 public:
  RareEventEstimator(AlgoParams params, const Model& model, EventSpec event)
      : params_(params), model_(model), event_(event) {
    event_.validate();
    params_.validate(event_.b);
    l_star_ = event_.l_star();
    weights_ = one_sided_weights(model_, params_.n, params_.gamma, l_star_, params_.w);
    if (params_.mode == Mode::exact_sba && !model_.has_exact_increments())
      throw CapabilityError("exact_sba mode requires exact truncated increments; use ara");
    if (params_.mode == Mode::ara && !(static_cast<double>(params_.n) * params_.gamma > 1.0))
      throw ConfigError("ara mode requires n * gamma > 1");
  }

  const MixtureWeights& weights() const { return weights_; }
  std::uint64_t l_star() const { return l_star_; }

  EstimatorDraw draw(Rng& rng) const {
    const BigJumpSkeleton skeleton = sample_skeleton_defensive(params_, model_, l_star_, rng);
    return draw_given(skeleton, sample_tau(params_.rho, rng), rng);
  }

  /// Completes a draw for a fixed skeleton and truncation index.
  EstimatorDraw draw_given(const BigJumpSkeleton& skeleton, std::uint64_t tau, Rng& rng) const {
    EstimatorDraw out;
    out.tau = tau;
    out.k = skeleton.k();
    out.conditioned = skeleton.conditioned;
    const double nd = static_cast<double>(params_.n);
    if (skeleton.k() > 0 && skeleton.max_size() >= nd * event_.b) {
      out.capped = true;
      return out;
    }
    const double threshold = nd * event_.a;
    out.hat_y.resize(tau);
    if (params_.mode == Mode::exact_sba) {
      const auto records = build_interval_records(skeleton, tau, params_, model_, rng);
      for (std::size_t m = 1; m <= tau; ++m) out.hat_y[m - 1] = hat_Y(skeleton, records, m, threshold);
    } else {
      const TruncationLadder ladder = make_truncation_ladder(
          model_, params_.n, tau, params_.kappa, params_.r,
          JumpWindow{{1.0, nd * params_.gamma}, {1.0, kInf}});
      const auto intervals = build_ara_intervals(skeleton, tau, params_.log_sticks(), ladder, model_, rng);
      for (std::size_t m = 1; m <= tau; ++m) out.hat_y[m - 1] = hat_Y(skeleton, intervals, m, threshold);
    }
    out.z = debiased_Z(out.hat_y, params_.rho);
    out.value = out.z / likelihood_denominator(in_big_jump_set(skeleton, l_star_), weights_);
    return out;
  }

 private:
  AlgoParams params_;
  const Model& model_;
  EventSpec event_;
  std::uint64_t l_star_ = 1;
  MixtureWeights weights_;
};

template <class Model>
EstimatorDraw estimator_draw(const AlgoParams& params, const Model& model, const EventSpec& event, Rng& rng) {
  return RareEventEstimator<Model>(params, model, event).draw(rng);
}

/// One named constraint from the unbiasedness / strong-efficiency theory.
struct ParamCheck {
  std::string name;
  std::string detail;
  bool holds = true;
  bool vacuous = false;
};

struct ParamReport {
  std::vector<ParamCheck> checks;
  double mu = 0.0;          ///< moment exponent used for the ARA constraints
  double beta_plus = 0.01;

  bool all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const ParamCheck& c) { return c.holds || c.vacuous; });
  }
  const ParamCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Evaluates the parameter constraints for tail index `alpha`. Never
/// throws: violations come back as failed checks.
///
/// When `mu` is not given, it is placed mid-way in the feasible range
/// (2 l*(alpha-1), min(r(2-beta+)+1, (d+1)/2)) if that range is non-empty,
/// and at 2 l*(alpha-1) + 0.5 otherwise.
inline ParamReport validate_params(const AlgoParams& p, const EventSpec& e, double alpha, double beta_plus = 0.01,
                                   std::optional<double> mu = std::nullopt) {
  ParamReport rep;
  rep.beta_plus = beta_plus;
  auto add = [&](std::string name, std::string detail, bool holds, bool vacuous = false) {
    rep.checks.push_back({std::move(name), std::move(detail), holds, vacuous});
  };
  const double ls = std::max(1.0, std::ceil(e.a / e.b - 1e-12));
  const double ratio = e.a / e.b;
  add("a_over_b_non_integer", "a/b not an integer", std::abs(ratio - std::round(ratio)) > 1e-12);
  add("gamma_below_b", "0 < gamma < b", p.gamma > 0.0 && p.gamma < e.b);
  add("w_in_unit_interval", "0 < w < 1", p.w > 0.0 && p.w < 1.0);
  add("rho_in_unit_interval", "0 < rho < 1", p.rho > 0.0 && p.rho < 1.0);
  const double d_floor = std::max(2.0, 2.0 * ls * (alpha - 1.0));
  add("d_exact", "d > max{2, 2 l*(alpha-1)} = " + std::to_string(d_floor), p.d > d_floor);
  // Limit Delta -> 0, p -> 1 of the gamma-bar recipe.
  const double recipe = (e.a - (ls - 1.0) * e.b) / p.gamma + ls - 1.0;
  add("gamma_recipe", "(a-(l*-1)b)/gamma + l* - 1 > 2 l*: lhs = " + std::to_string(recipe), recipe > 2.0 * ls);

  const double mu_floor = 2.0 * ls * (alpha - 1.0);
  if (mu) {
    rep.mu = *mu;
  } else {
    const double upper = std::min(p.r * (2.0 - beta_plus) + 1.0, (p.d + 1.0) / 2.0);
    rep.mu = upper > mu_floor ? 0.5 * (mu_floor + upper) : mu_floor + 0.5;
  }
  const bool ara_off = p.kappa == 0.0;
  const double kpow = std::pow(p.kappa, 2.0 - beta_plus);
  add("mu_above_floor", "mu > 2 l*(alpha-1) = " + std::to_string(mu_floor), rep.mu > mu_floor, ara_off);
  add("ara_kappa", "kappa^(2-beta+) < 1/2", kpow < 0.5, ara_off);
  const double r_floor = std::max(2.0, rep.mu - 1.0);
  add("ara_r", "r(2-beta+) > max{2, mu-1} = " + std::to_string(r_floor), p.r * (2.0 - beta_plus) > r_floor,
      ara_off);
  const double d_ara = std::max(2.0, 2.0 * rep.mu - 1.0);
  add("ara_d", "d > max{2, 2mu-1} = " + std::to_string(d_ara), p.d > d_ara, ara_off);
  add("ara_scale", "n gamma > 1", static_cast<double>(p.n) * p.gamma > 1.0, ara_off);
  return rep;
}

}  // namespace levyrare
