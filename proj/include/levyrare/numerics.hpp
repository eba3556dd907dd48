#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace levyrare {

/// Raised when a model lacks a sampling capability an algorithm needs.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or out-of-contract configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when per-replication records do not line up with the skeleton.
class StructureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Upper tail 1 - Phi(x), accurate far into the tail.
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Inverse of the upper tail: returns x with normal_sf(x) = q, q in (0, 1).
inline double normal_sf_inverse(double q) {
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

/// log P(K >= k) for K ~ Poisson(lambda). Stays finite when the
/// probability itself underflows double precision.
inline double log_poisson_tail(double lambda, std::uint64_t k) {
  if (k == 0) return 0.0;
  if (!(lambda > 0.0)) return -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  // P(K >= k) is the regularized lower incomplete gamma P(k, lambda).
  const double direct = boost::math::gamma_p(kd, lambda);
  if (direct > 1e-280) return std::log(direct);
  // Far tail: pmf(k) * sum_{j>=0} lambda^j k!/(k+j)!, summed in log space.
  const double log_pmf = -lambda + kd * std::log(lambda) - std::lgamma(kd + 1.0);
  double term = 1.0;
  double series = 1.0;
  for (std::uint64_t j = 1; j < 100000; ++j) {
    term *= lambda / (kd + static_cast<double>(j));
    series += term;
    if (term < 1e-17 * series) break;
  }
  return log_pmf + std::log(series);
}

inline double poisson_pmf(double lambda, std::uint64_t k) {
  const double kd = static_cast<double>(k);
  if (!(lambda > 0.0)) return k == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + kd * std::log(lambda) - std::lgamma(kd + 1.0));
}

/// Pairwise summation; error grows as O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kBlock = 32;
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Smallest integer >= x, snapping values within 1e-9 of an integer.
inline std::int64_t robust_ceil(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace levyrare
