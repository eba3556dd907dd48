#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>
#include <string>

#include "levyrare/numerics.hpp"
#include "levyrare/rng.hpp"

namespace levyrare {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Side { up, down };

/// Half-open window [lo, hi) of jump magnitudes on one side.
struct MagnitudeRange {
  double lo = 0.0;
  double hi = kInf;

  bool empty() const { return !(hi > lo); }
};

/// Which jumps a compound-Poisson draw admits: positive sizes in `up`,
/// negative sizes whose magnitude lies in `down`.
struct JumpWindow {
  MagnitudeRange up;
  MagnitudeRange down;

  /// nu restricted to (-inf, cutoff): upward jumps capped, downward free.
  static JumpWindow below(double cutoff) { return {{0.0, cutoff}, {0.0, kInf}}; }
  /// nu restricted to (-cutoff, cutoff).
  static JumpWindow symmetric_below(double cutoff) { return {{0.0, cutoff}, {0.0, cutoff}}; }
  /// Jumps with |x| in [lo, hi).
  static JumpWindow band(double lo, double hi) { return {{lo, hi}, {lo, hi}}; }
  static JumpWindow everything() { return {{0.0, kInf}, {0.0, kInf}}; }
};

template <class M>
concept JumpMeasure = requires(const M& m, double x, Side s, MagnitudeRange r) {
  { m.upper_tail(x) } -> std::convertible_to<double>;
  { m.lower_tail(x) } -> std::convertible_to<double>;
  { m.mass(s, r) } -> std::convertible_to<double>;
  { m.moment(s, r, 2) } -> std::convertible_to<double>;
};

template <class M>
concept TailInvertible = JumpMeasure<M> && requires(const M& m, double y, double z) {
  { m.inverse_upper_tail_restricted(y, z) } -> std::convertible_to<double>;
};

/// Measures that can draw a jump magnitude from nu restricted to a
/// finite-mass window and normalized.
template <class M>
concept RestrictedSampler = JumpMeasure<M> && requires(const M& m, Side s, MagnitudeRange r, Rng& g) {
  { m.sample_magnitude(s, r, g) } -> std::convertible_to<double>;
};

/// Two-sided Pareto-type jump law: jumps arrive at `rate`, each is positive
/// or negative with probability 1/2, and P(|W| > x | sign) = (1+x)^-alpha.
/// Hence nu[x, inf) = (rate/2) (1+x)^-alpha for x >= 0, and likewise on the
/// negative side with `alpha_down`.
class TwoSidedParetoMeasure {
 public:
  TwoSidedParetoMeasure(double alpha, double rate, double alpha_down)
      : alpha_up_(alpha), alpha_down_(alpha_down), side_mass_(0.5 * rate) {
    if (!(alpha > 0.0) || !(alpha_down > 0.0))
      throw std::domain_error("TwoSidedParetoMeasure: tail index must be positive");
    if (!(rate >= 0.0)) throw std::domain_error("TwoSidedParetoMeasure: rate must be >= 0");
  }
  TwoSidedParetoMeasure(double alpha, double rate) : TwoSidedParetoMeasure(alpha, rate, alpha) {}

  double alpha() const { return alpha_up_; }
  double alpha_down() const { return alpha_down_; }
  double rate() const { return 2.0 * side_mass_; }
  double total_mass() const { return 2.0 * side_mass_; }

  double upper_tail(double x) const { return tail(Side::up, x); }
  double lower_tail(double x) const { return tail(Side::down, x); }

  /// nu[x, inf) on the upward side (or nu(-inf, -x] downward), x >= 0.
  double tail(Side side, double x) const {
    if (x <= 0.0) return side_mass_;
    if (std::isinf(x)) return 0.0;
    return side_mass_ * std::exp(-index(side) * std::log1p(x));
  }

  double mass(Side side, MagnitudeRange r) const {
    if (r.empty() || side_mass_ == 0.0) return 0.0;
    const double a = index(side);
    const double llo = std::log1p(std::max(r.lo, 0.0));
    if (std::isinf(r.hi)) return side_mass_ * std::exp(-a * llo);
    const double lhi = std::log1p(r.hi);
    return side_mass_ * std::exp(-a * llo) * -std::expm1(-a * (lhi - llo));
  }

  /// Generalized inverse of s -> nu([s, inf) ∩ [z_floor, inf)).
  double inverse_upper_tail_restricted(double y, double z_floor) const {
    const double top = upper_tail(z_floor);
    if (!(y > 0.0) || y > top * (1.0 + 1e-12))
      throw std::domain_error("inverse_upper_tail_restricted: y outside (0, nu[z_floor, inf)]");
    if (y >= top) return std::max(z_floor, 0.0);
    const double s = std::expm1(std::log(side_mass_ / y) / alpha_up_);
    return std::max(s, z_floor);
  }

  /// Draws |x| from nu restricted to `r` on `side`, normalized.
  double sample_magnitude(Side side, MagnitudeRange r, Rng& rng) const {
    const double a = index(side);
    const double llo = std::log1p(std::max(r.lo, 0.0));
    const double u = rng.uniform();
    if (std::isinf(r.hi)) return std::expm1(llo - std::log(u) / a);
    const double span = -std::expm1(-a * (std::log1p(r.hi) - llo));
    const double x = std::expm1(llo - std::log1p(-u * span) / a);
    return std::min(std::max(x, r.lo), std::nextafter(r.hi, r.lo));
  }

  /// Integral of |x|^p over the window on `side`, p in {1, 2}.
  double moment(Side side, MagnitudeRange r, int p) const {
    if (r.empty() || side_mass_ == 0.0) return 0.0;
    const double a = index(side);
    const double hi = raw_moment(a, p, r.hi);
    const double lo = raw_moment(a, p, std::max(r.lo, 0.0));
    return side_mass_ * (hi - lo);
  }

 private:
  double index(Side side) const { return side == Side::up ? alpha_up_ : alpha_down_; }

  /// F_p(x) = ∫_0^x t^p a (1+t)^{-a-1} dt for the unit-mass Pareto law.
  static double raw_moment(double a, int p, double x) {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) {
      if (a <= p) return kInf;
      return p == 1 ? 1.0 / (a - 1.0) : 2.0 / ((a - 1.0) * (a - 2.0));
    }
    if (x <= 0.5) {
      // Binomial series of (1+t)^{-a-1}; avoids cancellation near zero.
      double coef = 1.0;
      double xp = std::pow(x, p + 1);
      double sum = 0.0;
      for (int k = 0; k < 200; ++k) {
        const double term = coef * xp / (k + p + 1);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        coef *= (-a - 1.0 - k) / (k + 1);
        xp *= x;
      }
      return a * sum;
    }
    return antiderivative(a, p, 1.0 + x) - antiderivative(a, p, 1.0);
  }

  /// Antiderivative in y = 1 + t of a (y-1)^p y^{-a-1}.
  static double antiderivative(double a, int p, double y) {
    auto power_term = [](double e, double y) {  // ∫ y^{e-1} dy
      return std::abs(e) < 1e-12 ? std::log(y) : std::pow(y, e) / e;
    };
    if (p == 1) return a * (power_term(1.0 - a, y) - power_term(-a, y));
    return a * (power_term(2.0 - a, y) - 2.0 * power_term(1.0 - a, y) + power_term(-a, y));
  }

  double alpha_up_;
  double alpha_down_;
  double side_mass_;
};

/// Generating triplet (drift, Brownian scale, jump measure).
template <JumpMeasure Measure>
class LevyModel {
 public:
  LevyModel(double drift, double brownian_scale, Measure measure)
      : drift_(drift), sigma_(brownian_scale), measure_(std::move(measure)) {
    if (!(brownian_scale >= 0.0)) throw std::domain_error("LevyModel: brownian_scale must be >= 0");
  }

  double drift() const { return drift_; }
  double brownian_scale() const { return sigma_; }
  const Measure& measure() const { return measure_; }

  double upper_tail(double x) const { return measure_.upper_tail(x); }
  double lower_tail(double x) const { return measure_.lower_tail(x); }

  double inverse_upper_tail_restricted(double y, double z_floor) const
    requires TailInvertible<Measure>
  {
    return measure_.inverse_upper_tail_restricted(y, z_floor);
  }

  /// sigma-bar^2(c): integral of x^2 over (-c, c).
  double small_jump_variance(double c) const {
    if (!(c > 0.0)) throw std::domain_error("small_jump_variance: c must be positive");
    return measure_.moment(Side::up, {0.0, c}, 2) + measure_.moment(Side::down, {0.0, c}, 2);
  }

  double window_mass(const JumpWindow& w) const {
    return measure_.mass(Side::up, w.up) + measure_.mass(Side::down, w.down);
  }

  /// Signed first moment of nu over the window.
  double window_mean(const JumpWindow& w) const {
    return measure_.moment(Side::up, w.up, 1) - measure_.moment(Side::down, w.down, 1);
  }

  double window_second_moment(const JumpWindow& w) const {
    return measure_.moment(Side::up, w.up, 2) + measure_.moment(Side::down, w.down, 2);
  }

  bool infinite_activity() const {
    return sigma_ > 0.0 || std::isinf(window_mass(JumpWindow::everything()));
  }

  /// True when increments of any upward-truncated version can be drawn exactly.
  bool has_exact_increments() const {
    if constexpr (RestrictedSampler<Measure>) {
      return std::isfinite(window_mass(JumpWindow::everything()));
    } else {
      return false;
    }
  }

  /// Sum of all jumps over a span of length t whose sizes fall in `w`.
  double sample_window_jumps(double t, const JumpWindow& w, Rng& rng) const {
    if (!(t > 0.0)) return 0.0;
    if constexpr (RestrictedSampler<Measure>) {
      double total = 0.0;
      total += side_sum(Side::up, w.up, t, rng);
      total -= side_sum(Side::down, w.down, t, rng);
      return total;
    } else {
      throw CapabilityError("jump measure cannot sample restricted jumps");
    }
  }

  /// Exact draw of X^{<cutoff}(t): drift, Brownian part, all jumps except
  /// upward ones of size >= cutoff.
  double sample_truncated_increment(double t, double cutoff, Rng& rng) const {
    return sample_increment(t, JumpWindow::below(cutoff), rng);
  }

  /// drift*t + sigma*B(t) + jumps in `w` (uncompensated), plus extra drift.
  double sample_increment(double t, const JumpWindow& w, Rng& rng, double extra_drift = 0.0) const {
    if (!(t > 0.0)) return 0.0;
    if (!has_exact_increments())
      throw CapabilityError("model does not support exact truncated increments");
    double x = (drift_ + extra_drift) * t;
    if (sigma_ > 0.0) x += sigma_ * std::sqrt(t) * rng.normal();
    return x + sample_window_jumps(t, w, rng);
  }

  /// Compensated band martingale J(t) over jumps with |x| in [lo, hi).
  double sample_band_increment(double t, MagnitudeRange band, Rng& rng) const {
    if (!(t > 0.0) || band.empty()) return 0.0;
    const JumpWindow w = JumpWindow::band(band.lo, band.hi);
    return sample_window_jumps(t, w, rng) - t * window_mean(w);
  }

 private:
  double side_sum(Side side, MagnitudeRange r, double t, Rng& rng) const {
    if (r.empty()) return 0.0;
    const double m = measure_.mass(side, r);
    if (m == 0.0) return 0.0;
    if (!std::isfinite(m)) throw CapabilityError("jump window has infinite mass");
    const auto count = rng.poisson(t * m);
    double s = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) s += measure_.sample_magnitude(side, r, rng);
    return s;
  }

  double drift_;
  double sigma_;
  Measure measure_;
};

using ExperimentModel = LevyModel<TwoSidedParetoMeasure>;

/// Brownian motion plus two-sided Pareto compound Poisson jumps.
inline ExperimentModel make_experiment_model(double alpha, double rate = 0.5, double sigma = 1.0,
                                             double alpha_down = 0.0) {
  if (!(alpha > 1.0)) throw std::domain_error("experiment model requires alpha > 1");
  return ExperimentModel(0.0, sigma, TwoSidedParetoMeasure(alpha, rate, alpha_down > 0.0 ? alpha_down : alpha));
}

}  // namespace levyrare
