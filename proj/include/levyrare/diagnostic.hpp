#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "levyrare/rng.hpp"

namespace levyrare {

/// One (z, t, delta) cell of the small-jump Lipschitz check:
/// constant = sup_x P(X^{<z}(t) in [x, x + delta]) (t^lambda ∧ 1) / delta.
struct LipschitzCell {
  double z = 0.0;
  double t = 0.0;
  double delta = 0.0;
  double probability = 0.0;  ///< empirical sup_x of the window probability
  double constant = 0.0;
  double spread = 0.0;       ///< sample standard deviation of X^{<z}(t)
  bool in_regime = true;     ///< false when delta is large against the spread
  bool flagged = false;
};

struct LipschitzReport {
  std::vector<LipschitzCell> cells;
  double lambda = 0.5;
  double bound = 0.6;
  double theoretical = 0.0;  ///< 1 / (sigma sqrt(2 pi)) when sigma > 0

  double max_constant() const {
    double m = 0.0;
    for (const auto& c : cells)
      if (c.in_regime) m = std::max(m, c.constant);
    return m;
  }
  bool any_flagged() const {
    return std::any_of(cells.begin(), cells.end(), [](const LipschitzCell& c) { return c.flagged; });
  }
};

struct LipschitzOptions {
  std::vector<double> z_list{10.0, 100.0};
  std::vector<double> t_list{0.01, 0.1, 1.0, 10.0};
  std::vector<double> delta_list{0.05, 0.2};
  std::uint64_t samples = 100000;
  double lambda = 0.5;
  double bound = 0.6;
  double regime_ratio = 4.0;  ///< delta >= ratio * spread is out of regime
  std::uint64_t seed = 1;
};

/// Largest fraction of sorted values inside any window [x, x + delta].
inline double max_window_fraction(const std::vector<double>& sorted, double delta) {
  if (sorted.empty()) return 0.0;
  std::size_t best = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < sorted.size(); ++hi) {
    while (sorted[hi] - sorted[lo] > delta) ++lo;
    best = std::max(best, hi - lo + 1);
  }
  return static_cast<double>(best) / static_cast<double>(sorted.size());
}

template <class Model>
LipschitzReport lipschitz_diagnostic(const Model& model, const LipschitzOptions& opt) {
  LipschitzReport rep;
  rep.lambda = opt.lambda;
  rep.bound = opt.bound;
  if (model.brownian_scale() > 0.0)
    rep.theoretical = 1.0 / (model.brownian_scale() * std::sqrt(2.0 * std::numbers::pi));
  std::uint64_t stream = 0;
  for (double z : opt.z_list) {
    for (double t : opt.t_list) {
      Rng rng(opt.seed, stream++);
      std::vector<double> xs(opt.samples);
      double s1 = 0.0, s2 = 0.0;
      for (auto& x : xs) {
        x = model.sample_truncated_increment(t, z, rng);
        s1 += x;
        s2 += x * x;
      }
      std::sort(xs.begin(), xs.end());
      const double nn = static_cast<double>(xs.size());
      const double mean = s1 / nn;
      const double spread = std::sqrt(std::max(s2 / nn - mean * mean, 0.0));
      for (double delta : opt.delta_list) {
        LipschitzCell c;
        c.z = z;
        c.t = t;
        c.delta = delta;
        c.spread = spread;
        c.probability = max_window_fraction(xs, delta);
        c.constant = c.probability * std::min(std::pow(t, opt.lambda), 1.0) / delta;
        c.in_regime = delta < opt.regime_ratio * spread;
        c.flagged = c.in_regime && c.constant > opt.bound;
        rep.cells.push_back(c);
      }
    }
  }
  return rep;
}

}  // namespace levyrare
