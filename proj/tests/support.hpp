#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levyrare/levy_model.hpp"
#include "levyrare/summary.hpp"

namespace testsupport {

/// Asymptotic Kolmogorov survival function with the usual small-sample
/// correction of the argument.
inline double kolmogorov_sf(double d, double n_eff) {
  const double sq = std::sqrt(n_eff);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// One-sample KS p-value against a continuous cdf.
inline double ks_pvalue(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return kolmogorov_sf(d, n);
}

/// Two-sample KS p-value.
inline double ks2_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return kolmogorov_sf(d, na * nb / (na + nb));
}

/// Pearson chi-square p-value; cells with expected count below 5 are
/// pooled into the last cell.
inline double chi2_pvalue(const std::vector<double>& observed, const std::vector<double>& expected) {
  std::vector<double> o, e;
  double po = 0.0, pe = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    po += observed[i];
    pe += expected[i];
    if (pe >= 5.0) {
      o.push_back(po);
      e.push_back(pe);
      po = pe = 0.0;
    }
  }
  if (pe > 0.0 || po > 0.0) {
    if (e.empty()) return 1.0;
    o.back() += po;
    e.back() += pe;
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) stat += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
  const double df = static_cast<double>(o.size()) - 1.0;
  if (df < 1.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, stat / 2.0);
}

/// Adaptive Gauss-Kronrod integral to relative tolerance 1e-10.
template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-10);
}

/// Jump density of the two-sided Pareto measure on one side.
inline std::function<double(double)> pareto_density(double side_mass, double alpha) {
  return [=](double x) { return side_mass * alpha * std::pow(1.0 + x, -alpha - 1.0); };
}

/// int_lo^hi x^p nu_side(dx) by quadrature.
inline double side_moment(double side_mass, double alpha, double lo, double hi, int p) {
  auto dens = pareto_density(side_mass, alpha);
  return integrate([&](double x) { return std::pow(x, p) * dens(x); }, lo, hi);
}

/// |m - target| <= k * se.
inline bool within_se(double m, double target, double se, double k = 3.0) { return std::abs(m - target) <= k * se; }

template <class F>
levyrare::MomentAccumulator moments(std::size_t n, F f) {
  levyrare::MomentAccumulator acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(f());
  return acc;
}

}  // namespace testsupport
