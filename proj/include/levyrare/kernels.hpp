#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "levyrare/numerics.hpp"
#include "levyrare/rng.hpp"

namespace levyrare {

/// Stick lengths l_1..l_J from uniform stick-breaking plus the leftover piece.
struct StickSet {
  std::vector<double> lengths;
  double residual = 0.0;
};

namespace detail {

inline constexpr double kRejectionFloor = 1e-6;
inline constexpr std::uint64_t kMaxRejections = 1'000'000'000ULL;

/// Inverse-cdf draw from the Poisson(lambda) pmf restricted to k >= k_min.
inline std::uint64_t conditioned_poisson_inverse(double lambda, std::uint64_t k_min, Rng& rng) {
  // Weights relative to pmf(k_min); the tail is geometric-like once k > lambda.
  std::vector<double> weights{1.0};
  double total = 1.0;
  double w = 1.0;
  for (std::uint64_t k = k_min + 1;; ++k) {
    w *= lambda / static_cast<double>(k);
    weights.push_back(w);
    total += w;
    if (static_cast<double>(k) > lambda && w < 1e-17 * total) break;
  }
  double target = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    target -= weights[i];
    if (target <= 0.0) return k_min + i;
  }
  return k_min + weights.size() - 1;
}

}  // namespace detail

/// K ~ Poisson(lambda) conditioned on K >= k_min.
inline std::uint64_t sample_conditioned_poisson(double lambda, std::uint64_t k_min, Rng& rng) {
  if (!(lambda > 0.0)) throw std::domain_error("sample_conditioned_poisson: lambda must be positive");
  if (k_min == 0) return rng.poisson(lambda);
  const double log_tail = log_poisson_tail(lambda, k_min);
  if (log_tail >= std::log(detail::kRejectionFloor)) {
    for (std::uint64_t attempt = 0; attempt < detail::kMaxRejections; ++attempt) {
      const auto k = rng.poisson(lambda);
      if (k >= k_min) return k;
    }
  }
  return detail::conditioned_poisson_inverse(lambda, k_min, rng);
}

/// k iid Unif(0, horizon) draws, sorted ascending.
inline std::vector<double> sample_order_statistics(std::size_t k, double horizon, Rng& rng) {
  std::vector<double> u(k);
  for (auto& x : u) x = rng.uniform() * horizon;
  std::sort(u.begin(), u.end());
  return u;
}

/// tau with P(tau >= m) = rho^(m-1), m = 1, 2, ...
inline std::uint64_t sample_tau(double rho, Rng& rng) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("sample_tau: rho must lie in (0, 1)");
  const double m = std::floor(std::log(rng.uniform()) / std::log(rho));
  if (m >= 1e15) return static_cast<std::uint64_t>(1e15);
  return 1 + static_cast<std::uint64_t>(m);
}

/// Stick-breaking with the given uniforms: l_j = V_j (total - l_1 - ... - l_{j-1}).
inline StickSet stick_lengths_from(double total, std::span<const double> breaks) {
  StickSet s;
  s.lengths.reserve(breaks.size());
  double remaining = total;
  for (double v : breaks) {
    const double l = v * remaining;
    s.lengths.push_back(l);
    remaining -= l;
  }
  s.residual = std::max(remaining, 0.0);
  return s;
}

inline StickSet stick_lengths(double total, std::size_t count, Rng& rng) {
  StickSet s;
  s.lengths.reserve(count);
  double remaining = total;
  for (std::size_t j = 0; j < count; ++j) {
    const double l = rng.uniform() * remaining;
    s.lengths.push_back(l);
    remaining -= l;
  }
  s.residual = std::max(remaining, 0.0);
  return s;
}

}  // namespace levyrare
