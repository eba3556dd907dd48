#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "levyrare/big_jumps.hpp"
#include "levyrare/kernels.hpp"
#include "levyrare/levy_model.hpp"

namespace levyrare {

/// Stick-breaking increments of the small-jump process over one inter-jump
/// interval. The last stick is the residual piece: it enters endpoint sums
/// but never supremum partial sums.
struct IntervalRecord {
  std::size_t index = 0;
  double length = 0.0;
  std::size_t log_sticks = 0;          ///< t_n
  std::vector<double> stick_lengths;   ///< t_n + tau sticks, then the residual
  std::vector<double> increments;      ///< aligned with stick_lengths

  double endpoint() const {
    double s = 0.0;
    for (double x : increments) s += x;
    return s;
  }
};

/// Partial sum of positive parts over the first t_n + m sticks.
inline double sba_supremum_estimate(const IntervalRecord& rec, std::size_t m) {
  const std::size_t upto = rec.log_sticks + m;
  if (rec.increments.empty() || upto > rec.increments.size() - 1)
    throw std::out_of_range("sba_supremum_estimate: level exceeds stored sticks");
  double s = 0.0;
  for (std::size_t j = 0; j < upto; ++j) s += std::max(rec.increments[j], 0.0);
  return s;
}

/// Interval boundaries u_0 = 0 < u_1 < ... < u_k < u_{k+1} = n.
inline std::vector<double> interval_boundaries(const BigJumpSkeleton& s) {
  std::vector<double> u;
  u.reserve(s.k() + 2);
  u.push_back(0.0);
  u.insert(u.end(), s.times.begin(), s.times.end());
  u.push_back(s.horizon);
  return u;
}

/// Sticks for every interval of the skeleton with one exact increment per
/// stick drawn from the model restricted to `window` (plus `extra_drift`).
template <class Model>
std::vector<IntervalRecord> build_interval_records(const BigJumpSkeleton& skeleton, std::uint64_t tau,
                                                   std::size_t log_sticks, const Model& model,
                                                   const JumpWindow& window, double extra_drift, Rng& rng) {
  if (!model.has_exact_increments())
    throw CapabilityError("stick-breaking with exact increments needs an exactly simulable model");
  const auto u = interval_boundaries(skeleton);
  const std::size_t sticks = log_sticks + static_cast<std::size_t>(tau);
  std::vector<IntervalRecord> records(skeleton.k() + 1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    rec.index = i;
    rec.length = std::max(u[i + 1] - u[i], 0.0);
    rec.log_sticks = log_sticks;
    StickSet st = stick_lengths(rec.length, sticks, rng);
    rec.stick_lengths = std::move(st.lengths);
    rec.stick_lengths.push_back(st.residual);
    rec.increments.resize(rec.stick_lengths.size());
    for (std::size_t j = 0; j < rec.stick_lengths.size(); ++j)
      rec.increments[j] = model.sample_increment(rec.stick_lengths[j], window, rng, extra_drift);
  }
  return records;
}

/// One-sided setting: increments of X^{<n gamma}.
template <class Model>
std::vector<IntervalRecord> build_interval_records(const BigJumpSkeleton& skeleton, std::uint64_t tau,
                                                   const AlgoParams& params, const Model& model, Rng& rng) {
  const double cutoff = static_cast<double>(params.n) * params.gamma;
  return build_interval_records(skeleton, tau, params.log_sticks(), model, JumpWindow::below(cutoff), 0.0, rng);
}

struct EndpointSupremum {
  double endpoint = 0.0;   ///< exact draw of X(T)
  double supremum = 0.0;   ///< sum of positive parts over the kept sticks
};

/// (X(T), M(T)) via stick-breaking truncated after `stick_count` sticks; the
/// residual stick completes the endpoint but not the supremum.
template <class Model>
EndpointSupremum joint_endpoint_supremum(double T, const Model& model, std::size_t stick_count, Rng& rng) {
  if (stick_count < 1) throw std::invalid_argument("joint_endpoint_supremum: need at least one stick");
  const StickSet st = stick_lengths(T, stick_count, rng);
  EndpointSupremum out;
  const JumpWindow all = JumpWindow::everything();
  for (double l : st.lengths) {
    const double xi = model.sample_increment(l, all, rng);
    out.endpoint += xi;
    out.supremum += std::max(xi, 0.0);
  }
  out.endpoint += model.sample_increment(st.residual, all, rng);
  return out;
}

}  // namespace levyrare
