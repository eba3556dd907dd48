#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace levyrare {

/// Running count / mean / sum of squared deviations.
struct MomentAccumulator {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  /// Chan et al. pairwise update.
  void merge(const MomentAccumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(o.count);
    const double n = na + nb;
    const double delta = o.mean - mean;
    mean += delta * nb / n;
    m2 += o.m2 + delta * delta * na * nb / n;
    count += o.count;
  }

  /// Unbiased sample variance; 0 for fewer than two values.
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double standard_error() const { return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

/// Relative error sqrt(variance) / mean; NaN when the mean is not positive.
inline double relative_error(double mean, double variance) {
  if (!(mean > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(variance) / mean;
}

/// One (estimator, alpha, n) cell.
struct RunSummary {
  std::string estimator;
  double alpha = 0.0;
  std::uint64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t samples = 0;
  double wall_time_s = 0.0;

  double standard_error() const { return samples > 0 ? std::sqrt(variance / static_cast<double>(samples)) : 0.0; }
};

inline RunSummary summarize(std::string estimator, double alpha, std::uint64_t n, const MomentAccumulator& acc,
                            double wall_time_s = 0.0) {
  RunSummary s;
  s.estimator = std::move(estimator);
  s.alpha = alpha;
  s.n = n;
  s.mean = acc.mean;
  s.variance = acc.variance();
  s.rel_error = relative_error(s.mean, s.variance);
  s.samples = acc.count;
  s.wall_time_s = wall_time_s;
  return s;
}

/// |m1 - m2| / sqrt(se1^2 + se2^2), the combined-SE distance of two means.
inline double combined_z(double m1, double se1, double m2, double se2) {
  const double se = std::sqrt(se1 * se1 + se2 * se2);
  if (se == 0.0) return m1 == m2 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(m1 - m2) / se;
}

}  // namespace levyrare
