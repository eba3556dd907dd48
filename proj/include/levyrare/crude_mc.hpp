#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "levyrare/levy_model.hpp"
#include "levyrare/numerics.hpp"
#include "levyrare/params.hpp"
#include "levyrare/parallel.hpp"
#include "levyrare/rng.hpp"
#include "levyrare/summary.hpp"

namespace levyrare {

/// Maximum of a Brownian bridge from y0 to y1 over time dt with scale
/// sigma, by inverting P(max > m) = exp(-2 (m - y0)(m - y1) / (sigma^2 dt)).
inline double bridge_max_from_uniform(double y0, double y1, double dt, double sigma, double u) {
  if (!(dt > 0.0) || sigma == 0.0) return std::max(y0, y1);
  const double d = y1 - y0;
  return 0.5 * (y0 + y1 + std::sqrt(d * d - 2.0 * sigma * sigma * dt * std::log(u)));
}

inline double sample_bridge_max(double y0, double y1, double dt, double sigma, Rng& rng) {
  return bridge_max_from_uniform(y0, y1, dt, sigma, rng.uniform());
}

/// Jump epochs and sizes on [0, n]; the path between epochs is Brownian
/// with linear drift.
struct PathSample {
  std::vector<double> times;
  std::vector<double> sizes;
  double terminal = 0.0;   ///< X(n)
  double supremum = 0.0;   ///< sup_{s <= n} X(s) + drift_bonus * s
  double max_up_jump = 0.0;
};

namespace detail {

/// Continues a path from level x0 at time t0 to time n, through the given
/// sorted jumps (times beyond t0), tracking the running supremum exactly.
/// `slope` is the drift of the continuous part, `bonus` the extra drift
/// added only to the level that is compared with the barrier.
inline std::pair<double, double> walk_segments(double t0, double x0, double horizon, double sigma, double slope,
                                               double bonus, const std::vector<std::pair<double, double>>& jumps,
                                               Rng& rng, double stop_at = std::numeric_limits<double>::infinity()) {
  double t = t0;
  double x = x0;
  double sup = x0 + bonus * t0;
  auto segment = [&](double t_next) {
    const double dt = t_next - t;
    if (dt <= 0.0) return;
    const double mu = slope + bonus;
    const double y1 = x + bonus * t + mu * dt + sigma * std::sqrt(dt) * rng.normal();
    const double y0 = x + bonus * t;
    sup = std::max(sup, bridge_max_from_uniform(y0, y1, dt, sigma, rng.uniform()));
    x = y1 - bonus * t_next;
    t = t_next;
  };
  for (const auto& [tj, zj] : jumps) {
    if (tj <= t0) continue;
    segment(tj);
    x += zj;
    sup = std::max(sup, x + bonus * t);
    if (sup >= stop_at) return {x, sup};
  }
  segment(horizon);
  return {x, sup};
}

}  // namespace detail

/// Full exact path of X on [0, n]: every jump, Brownian values at the
/// epochs and exact bridge maxima in between. `bonus` is the extra drift
/// c of the down-and-in event.
template <class Model>
PathSample sample_full_path(const Model& model, std::uint64_t n, Rng& rng, double bonus = 0.0) {
  const double nd = static_cast<double>(n);
  const auto& nu = model.measure();
  const MagnitudeRange all{0.0, kInf};
  std::vector<std::pair<double, double>> jumps;
  PathSample p;
  for (Side side : {Side::up, Side::down}) {
    const double mass = nu.mass(side, all);
    if (!std::isfinite(mass)) throw CapabilityError("crude sampling needs a finite jump measure");
    const auto k = rng.poisson(nd * mass);
    for (std::uint64_t i = 0; i < k; ++i) {
      const double z = nu.sample_magnitude(side, all, rng);
      if (side == Side::up) p.max_up_jump = std::max(p.max_up_jump, z);
      jumps.emplace_back(rng.uniform() * nd, side == Side::up ? z : -z);
    }
  }
  std::sort(jumps.begin(), jumps.end());
  const auto [x, sup] =
      detail::walk_segments(0.0, 0.0, nd, model.brownian_scale(), model.drift(), bonus, jumps, rng);
  p.terminal = x;
  p.supremum = sup;
  p.times.reserve(jumps.size());
  p.sizes.reserve(jumps.size());
  for (const auto& [t, z] : jumps) {
    p.times.push_back(t);
    p.sizes.push_back(z);
  }
  return p;
}

/// I{sup X_n >= a, upward jumps < b} from one full path.
template <class Model>
bool crude_indicator_full(const Model& model, const EventSpec& event, std::uint64_t n, Rng& rng) {
  const double nd = static_cast<double>(n);
  const PathSample p = sample_full_path(model, n, rng);
  return p.max_up_jump < nd * event.b && p.supremum >= nd * event.a;
}

/// I{X_n(1) <= -b, sup_t X_n(t) + c t >= a} from one full path.
template <class Model>
bool crude_barrier_indicator(const Model& model, const BarrierEventSpec& spec, std::uint64_t n, Rng& rng) {
  const double nd = static_cast<double>(n);
  const PathSample p = sample_full_path(model, n, rng, spec.c);
  return p.terminal <= -nd * spec.b && p.supremum >= nd * spec.a;
}

/// Exact sampler of the one-sided indicator that avoids building most
/// paths. Upward jumps below n b are counted per dyadic size tier, which
/// bounds their total S; the path can only reach n a once sigma B reaches
/// x' = n a - S, so the Brownian first-passage time T to x' is drawn
/// first and the rest of the path is generated only when T <= n. Needs
/// zero drift and sigma > 0; otherwise every draw is a full path.
template <class Model>
class CrudeSampler {
 public:
  CrudeSampler(const Model& model, EventSpec event, std::uint64_t n) : model_(model), event_(event), n_(n) {
    event_.validate();
    const double nd = static_cast<double>(n_);
    const double cap = nd * event_.b;
    fast_ = model_.drift() == 0.0 && model_.brownian_scale() > 0.0;
    const auto& nu = model_.measure();
    cap_rate_ = nd * nu.mass(Side::up, {cap, kInf});
    down_rate_ = nd * nu.mass(Side::down, {0.0, kInf});
    if (!std::isfinite(cap_rate_) || !std::isfinite(down_rate_))
      throw CapabilityError("crude sampling needs a finite jump measure");
    double lo = 0.0;
    double hi = std::min(2.0, cap);
    for (;;) {
      const double rate = nd * nu.mass(Side::up, {lo, hi});
      if (!std::isfinite(rate)) throw CapabilityError("crude sampling needs a finite jump measure");
      tiers_.push_back({lo, hi, rate, std::poisson_distribution<std::uint64_t>(rate > 0.0 ? rate : 1.0)});
      if (hi >= cap) break;
      lo = hi;
      hi = std::min(2.0 * hi, cap);
    }
  }

  bool fast() const { return fast_; }

  bool operator()(Rng& rng) const {
    if (!fast_) return crude_indicator_full(model_, event_, n_, rng);
    const double nd = static_cast<double>(n_);
    if (rng.poisson(cap_rate_) > 0) return false;
    std::vector<std::uint64_t> counts(tiers_.size());
    double bound = 0.0;
    for (std::size_t i = 0; i < tiers_.size(); ++i) {
      if (tiers_[i].rate > 0.0) {
        auto dist = tiers_[i].dist;
        counts[i] = dist(rng.engine());
      }
      bound += static_cast<double>(counts[i]) * tiers_[i].hi;
    }
    const double sigma = model_.brownian_scale();
    const double level = nd * event_.a - bound;
    double t0 = 0.0;
    double w0 = 0.0;
    if (level > 0.0) {
      const double u = rng.uniform();
      if (!(u < 2.0 * normal_sf(level / (sigma * std::sqrt(nd))))) return false;
      const double q = normal_sf_inverse(0.5 * u);
      t0 = std::min(std::pow(level / (sigma * q), 2.0), nd);
      w0 = level;
    }
    const auto& nu = model_.measure();
    std::vector<std::pair<double, double>> jumps;
    double before = 0.0;
    auto add_jump = [&](double z) {
      const double t = rng.uniform() * nd;
      if (t <= t0)
        before += z;
      else
        jumps.emplace_back(t, z);
    };
    for (std::size_t i = 0; i < tiers_.size(); ++i)
      for (std::uint64_t j = 0; j < counts[i]; ++j)
        add_jump(nu.sample_magnitude(Side::up, {tiers_[i].lo, tiers_[i].hi}, rng));
    const auto kd = rng.poisson(down_rate_);
    for (std::uint64_t j = 0; j < kd; ++j) add_jump(-nu.sample_magnitude(Side::down, {0.0, kInf}, rng));
    std::sort(jumps.begin(), jumps.end());
    const double target = nd * event_.a;
    if (w0 + before >= target) return true;
    const auto [x, sup] = detail::walk_segments(t0, w0 + before, nd, sigma, 0.0, 0.0, jumps, rng, target);
    (void)x;
    return sup >= target;
  }

 private:
  struct Tier {
    double lo, hi, rate;
    std::poisson_distribution<std::uint64_t> dist;
  };
  const Model& model_;
  EventSpec event_;
  std::uint64_t n_;
  bool fast_ = false;
  double cap_rate_ = 0.0;
  double down_rate_ = 0.0;
  std::vector<Tier> tiers_;
};

/// Exact draw of I{X_n in A} for the one-sided event.
template <class Model>
bool crude_indicator(const Model& model, const EventSpec& event, std::uint64_t n, Rng& rng) {
  return CrudeSampler<Model>(model, event, n)(rng);
}

/// Sample count from the 64 / p-hat rule, clamped to [floor, cap].
/// `capped` reports whether the cap was binding.
inline std::uint64_t crude_sample_count(double p_hat, std::uint64_t floor, std::uint64_t cap, bool* capped = nullptr) {
  double want = p_hat > 0.0 ? std::ceil(64.0 / p_hat) : std::numeric_limits<double>::infinity();
  want = std::max(want, static_cast<double>(floor));
  const bool hit = want > static_cast<double>(cap);
  if (capped) *capped = hit;
  return hit ? cap : static_cast<std::uint64_t>(want);
}

/// Crude Monte Carlo estimate of P(X_n in A) from `sample_count` paths.
template <class Model>
RunSummary crude_estimate(const Model& model, const EventSpec& event, std::uint64_t n, std::uint64_t sample_count,
                          std::uint64_t seed, unsigned workers = worker_count()) {
  if (sample_count < 1) throw std::invalid_argument("crude_estimate: sample_count must be >= 1");
  const CrudeSampler<Model> sampler(model, event, n);
  const MomentAccumulator acc =
      replicate(sample_count, seed, [&](Rng& rng) { return sampler(rng) ? 1.0 : 0.0; }, workers);
  return summarize("crude", model.measure().alpha(), n, acc);
}

template <class Model>
RunSummary crude_barrier_estimate(const Model& model, const BarrierEventSpec& spec, std::uint64_t n,
                                  std::uint64_t sample_count, std::uint64_t seed, unsigned workers = worker_count()) {
  if (sample_count < 1) throw std::invalid_argument("crude_barrier_estimate: sample_count must be >= 1");
  spec.validate();
  const MomentAccumulator acc = replicate(
      sample_count, seed, [&](Rng& rng) { return crude_barrier_indicator(model, spec, n, rng) ? 1.0 : 0.0; },
      workers);
  return summarize("crude_barrier", model.measure().alpha(), n, acc);
}

}  // namespace levyrare
