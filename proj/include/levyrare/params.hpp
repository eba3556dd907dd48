#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "levyrare/numerics.hpp"

namespace levyrare {

enum class Mode { exact_sba, ara };

inline const char* to_string(Mode m) { return m == Mode::exact_sba ? "exact_sba" : "ara"; }

/// Target event {sup X_n >= a, every upward jump of X_n < b} on the
/// scaled path X_n(t) = X(nt)/n, t in [0, 1].
struct EventSpec {
  double a = 2.0;
  double b = 1.15;

  /// Minimal number of capped jumps needed to reach a.
  std::uint64_t l_star() const { return static_cast<std::uint64_t>(robust_ceil(a / b)); }

  void validate() const {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("event: a and b must be positive");
    const double ratio = a / b;
    if (std::abs(ratio - std::round(ratio)) < 1e-12)
      throw ConfigError("event: a/b must not be an integer");
  }
};

/// Down-and-in event {X_n(1) <= -b, sup_t X_n(t) + c t >= a}.
struct BarrierEventSpec {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;

  void validate() const {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("barrier event: a and b must be positive");
    if (!(c < a)) throw ConfigError("barrier event: drift c must be below a");
  }
};

struct AlgoParams {
  std::uint64_t n = 200;
  double gamma = 0.25;
  double w = 0.05;
  double rho = 0.97;
  double d = 4.0;
  double kappa = 0.5;
  double r = 1.5;
  Mode mode = Mode::exact_sba;

  /// Number of sticks always kept for the supremum: ceil(d log2 n).
  std::uint64_t log_sticks() const {
    const double v = d * std::log2(static_cast<double>(n));
    return v <= 0.0 ? 0 : static_cast<std::uint64_t>(robust_ceil(v));
  }

  /// Checks the structural invariants; `jump_cap` is the event's b (or
  /// +inf when the event has no cap).
  void validate(double jump_cap) const {
    if (n < 1) throw ConfigError("algorithm: n must be >= 1");
    if (!(gamma > 0.0)) throw ConfigError("algorithm: gamma must be positive");
    if (!(gamma < jump_cap)) throw ConfigError("algorithm: gamma must be below b");
    if (!(w > 0.0 && w <= 1.0)) throw ConfigError("algorithm: w must lie in (0, 1]");
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("algorithm: rho must lie in (0, 1)");
    if (!(d > 0.0)) throw ConfigError("algorithm: d must be positive");
    if (!(kappa >= 0.0 && kappa < 1.0)) throw ConfigError("algorithm: kappa must lie in [0, 1)");
    if (!(r > 0.0)) throw ConfigError("algorithm: r must be positive");
  }
};

}  // namespace levyrare
