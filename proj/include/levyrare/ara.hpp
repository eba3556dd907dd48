#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "levyrare/big_jumps.hpp"
#include "levyrare/kernels.hpp"
#include "levyrare/levy_model.hpp"
#include "levyrare/stick_breaking.hpp"

namespace levyrare {

/// kappa_{n,m} = kappa^m / n^r for m >= 0, and 1 for m = -1.
inline double kappa_threshold(std::uint64_t n, int m, double kappa, double r) {
  if (m < -1) throw std::domain_error("kappa_threshold: level must be >= -1");
  if (m == -1) return 1.0;
  const double km = (m == 0) ? 1.0 : std::pow(kappa, m);
  return km / std::pow(static_cast<double>(n), r);
}

/// Thresholds kappa_{n,-1} = 1 > kappa_{n,0} > ... > kappa_{n,tau} together
/// with the per-band compensators and Gaussian substitute variances.
struct TruncationLadder {
  std::vector<double> thresholds;   ///< thresholds[q + 1] = kappa_{n,q}, q = -1..tau
  std::vector<double> band_drift;   ///< per unit time, q = 0..tau: ∫_band x nu(dx)
  std::vector<double> band_var;     ///< per unit time, q = 0..tau
  double tail_var = 0.0;            ///< sigma-bar^2(kappa_{n,tau}) per unit time
  JumpWindow large;                 ///< window of J_{n,-1}
  double extra_drift = 0.0;

  std::size_t tau() const { return band_var.size() - 1; }
  double kappa_at(int q) const { return thresholds[static_cast<std::size_t>(q + 1)]; }

  /// Band index q with kappa_{n,q} <= x < kappa_{n,q-1}; x in [kappa_{n,tau}, 1).
  std::size_t band_of(double x) const {
    const auto it = std::partition_point(thresholds.begin() + 1, thresholds.end(),
                                         [x](double t) { return t > x; });
    const auto idx = static_cast<std::size_t>(it - thresholds.begin());
    return std::min(idx, thresholds.size() - 1) - 1;
  }
};

template <class Model>
TruncationLadder make_truncation_ladder(const Model& model, std::uint64_t n, std::uint64_t tau, double kappa,
                                        double r, const JumpWindow& large, double extra_drift = 0.0) {
  TruncationLadder lad;
  lad.large = large;
  lad.extra_drift = extra_drift;
  lad.thresholds.reserve(tau + 2);
  for (int q = -1; q <= static_cast<int>(tau); ++q) lad.thresholds.push_back(kappa_threshold(n, q, kappa, r));
  lad.band_drift.resize(tau + 1);
  lad.band_var.resize(tau + 1);
  for (std::size_t q = 0; q <= tau; ++q) {
    const JumpWindow band = JumpWindow::band(lad.thresholds[q + 1], lad.thresholds[q]);
    lad.band_drift[q] = model.window_mean(band);
    lad.band_var[q] = model.window_second_moment(band);
  }
  lad.tail_var = model.window_second_moment(JumpWindow::band(0.0, lad.thresholds.back()));
  return lad;
}

/// Components of one stick under the coupled ARA ladder.
struct AraLadder {
  double stick_length = 0.0;
  double drift_part = 0.0;                ///< (c_X + extra drift) * l
  double gaussian = 0.0;                  ///< sigma B(l)
  double large_jumps = 0.0;               ///< y^{-1}
  std::vector<double> band;               ///< y^q, q = 0..tau (compensated)
  std::vector<double> substitute;         ///< w^q, q = 0..tau+1

  std::size_t tau() const { return band.size() - 1; }
};

/// c l + x + sum_{q=-1}^{m} y^q + sum_{q=m+1}^{tau+1} w^q.
inline double assemble_level(const AraLadder& lad, std::size_t m) {
  if (lad.band.empty() || m > lad.tau()) throw std::out_of_range("assemble_level: level out of range");
  double v = lad.drift_part + lad.gaussian + lad.large_jumps;
  for (std::size_t q = 0; q <= m; ++q) v += lad.band[q];
  for (std::size_t q = m + 1; q < lad.substitute.size(); ++q) v += lad.substitute[q];
  return v;
}

/// All levels 0..tau in O(tau): level m+1 swaps w^{m+1} for y^{m+1}.
inline std::vector<double> assemble_all_levels(const AraLadder& lad) {
  std::vector<double> out(lad.tau() + 1);
  out[0] = assemble_level(lad, 0);
  for (std::size_t m = 1; m < out.size(); ++m) out[m] = out[m - 1] - lad.substitute[m] + lad.band[m];
  return out;
}

template <class Model>
AraLadder sample_ara_ladder(double stick_length, const TruncationLadder& ladder, const Model& model, Rng& rng) {
  const std::size_t tau = ladder.tau();
  AraLadder out;
  out.stick_length = stick_length;
  out.band.assign(tau + 1, 0.0);
  out.substitute.assign(tau + 2, 0.0);
  if (!(stick_length > 0.0)) return out;
  const double l = stick_length;
  out.drift_part = (model.drift() + ladder.extra_drift) * l;
  if (model.brownian_scale() > 0.0) out.gaussian = model.brownian_scale() * std::sqrt(l) * rng.normal();
  out.large_jumps = model.sample_window_jumps(l, ladder.large, rng);

  // One compound-Poisson draw over all bands, each jump filed into its band.
  const MagnitudeRange all_bands{ladder.thresholds.back(), 1.0};
  for (Side side : {Side::up, Side::down}) {
    const double mass = model.measure().mass(side, all_bands);
    if (mass == 0.0) continue;
    if (!std::isfinite(mass)) throw CapabilityError("ARA band ladder has infinite jump mass");
    const auto count = rng.poisson(l * mass);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x = model.measure().sample_magnitude(side, all_bands, rng);
      out.band[ladder.band_of(x)] += (side == Side::up ? x : -x);
    }
  }
  for (std::size_t q = 0; q <= tau; ++q) out.band[q] -= l * ladder.band_drift[q];

  for (std::size_t q = 0; q <= tau; ++q) {
    const double v = ladder.band_var[q] * l;
    if (v > 0.0) out.substitute[q] = std::sqrt(v) * rng.normal();
  }
  const double tv = ladder.tail_var * l;
  if (tv > 0.0) out.substitute[tau + 1] = std::sqrt(tv) * rng.normal();
  return out;
}

/// Sticks of one inter-jump interval under ARA: lengths plus one ladder per
/// stick, and the level values for every m (levels[j][m]).
struct AraInterval {
  double length = 0.0;
  std::size_t log_sticks = 0;
  std::vector<double> stick_lengths;
  std::vector<AraLadder> ladders;
  std::vector<std::vector<double>> levels;

  double endpoint(std::size_t m) const {
    double s = 0.0;
    for (const auto& lv : levels) s += lv.at(m);
    return s;
  }
  double supremum(std::size_t m) const {
    const std::size_t upto = log_sticks + m;
    if (levels.empty() || upto > levels.size() - 1)
      throw std::out_of_range("AraInterval::supremum: level exceeds stored sticks");
    double s = 0.0;
    for (std::size_t j = 0; j < upto; ++j) s += std::max(levels[j].at(m), 0.0);
    return s;
  }
};

template <class Model>
std::vector<AraInterval> build_ara_intervals(const BigJumpSkeleton& skeleton, std::uint64_t tau,
                                             std::size_t log_sticks, const TruncationLadder& ladder,
                                             const Model& model, Rng& rng) {
  const auto u = interval_boundaries(skeleton);
  const std::size_t sticks = log_sticks + static_cast<std::size_t>(tau);
  std::vector<AraInterval> out(skeleton.k() + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& iv = out[i];
    iv.length = std::max(u[i + 1] - u[i], 0.0);
    iv.log_sticks = log_sticks;
    StickSet st = stick_lengths(iv.length, sticks, rng);
    iv.stick_lengths = std::move(st.lengths);
    iv.stick_lengths.push_back(st.residual);
    iv.ladders.reserve(iv.stick_lengths.size());
    iv.levels.reserve(iv.stick_lengths.size());
    for (double l : iv.stick_lengths) {
      iv.ladders.push_back(sample_ara_ladder(l, ladder, model, rng));
      iv.levels.push_back(assemble_all_levels(iv.ladders.back()));
    }
  }
  return out;
}

}  // namespace levyrare
