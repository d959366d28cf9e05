#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "grgsimple/errors.hpp"
#include "grgsimple/geometry.hpp"
#include "grgsimple/graph.hpp"

// Closed-form reference quantities for geometric random graphs on [0, sqrt n]^2.
// All logarithms are natural.
namespace grgsimple::bounds {

// Exponent at which the two dense-regime complexity branches meet.
inline constexpr double kDenseThreshold = 3.0 / 20.0;

struct BoundParams {
  double n = 1.0;
  double r = 1.0;
  double c = 1.0;  // absolute constant of the distance sandwich; unknown, so configurable
  double k = 0.0;  // r ~ n^k; 0 when unspecified

  void validate() const {
    if (!(n >= 1.0)) throw ParameterError("n must be at least 1");
    if (!(r > 0.0)) throw ParameterError("r must be positive");
    if (!(c > 0.0)) throw ParameterError("c must be positive");
  }
};

// Additive slack of the graph-distance upper bound: c (dE / r^{4/3} + ln n / r^{1/3}).
inline double kappa(const BoundParams& p, double dE) {
  return p.c * (dE / std::pow(p.r, 4.0 / 3.0) + std::log(p.n) / std::cbrt(p.r));
}

// Largest Euclidean distance guaranteed to give graph distance <= t, clamped at 0.
inline double ell_n(const BoundParams& p, double t) {
  if (t <= 0.0) return 0.0;
  const double r43 = std::pow(p.r, 4.0 / 3.0);
  const double v = p.r * (t * r43 - p.c * std::log(p.n)) / (p.c + r43);
  return std::max(0.0, v);
}

// Euclidean distance above which graph distance exceeds t: r (t + 1).
inline double u_n(const BoundParams& p, double t) { return p.r * (t + 1.0); }

// Graph distance bound for Euclidean distance d.
inline double t_max(const BoundParams& p, double d) {
  const double r43 = std::pow(p.r, 4.0 / 3.0);
  return d * (p.c + r43) / std::pow(p.r, 7.0 / 3.0) + p.c * std::log(p.n) / r43;
}

inline double w_n_tmax(const BoundParams& p, double d) {
  return p.c * d / std::pow(p.r, 4.0 / 3.0) + p.r + p.c * std::log(p.n) / std::cbrt(p.r);
}

// Euclidean radius beyond which every pair is distinguished by some seed.
inline double second_phase_radius(const BoundParams& p, double d) {
  return 2.0 * w_n_tmax(p, d) * std::log(p.n) + p.r;
}

// Theoretical query count up to constants, for r ~ n^k with 0 < k < 1/2.
inline double complexity_curve(double n, double k) {
  if (!(k > 0.0 && k < 0.5)) throw ParameterError("k must lie in (0, 1/2)");
  const double exponent = k > kDenseThreshold ? 2.0 * k + 1.0 : 1.5 - 4.0 * k / 3.0;
  return std::pow(n, exponent);
}

// Sparse-regime reference n^{3/2}.
inline double sparse_complexity_curve(double n) { return std::pow(n, 1.5); }

struct SeedExponents {
  double a = 0.25;
  double epsilon = 0.5;
};

// (a, epsilon) balancing the complexity terms; k = 0 selects the sparse regime (1/4, 1/2).
inline SeedExponents seed_exponents(double k) {
  if (!(k >= 0.0 && k < 0.5)) throw ParameterError("k must lie in [0, 1/2)");
  if (k == 0.0) return {0.25, 0.5};
  if (k < kDenseThreshold) return {0.25 + 2.0 * k / 3.0, 0.5 - 4.0 * k / 3.0};
  return {5.0 / 12.0 - 4.0 * k / 9.0, 1.0 / 12.0 + 13.0 * k / 9.0};
}

// Minimum pairwise distance of the optimal four-point torus packing on [0, sqrt n]^2.
inline double x_n(double n) { return (std::sqrt(6.0) - std::sqrt(2.0)) / 2.0 * std::sqrt(n); }

// Asymptotic share of node pairs four optimally placed seeds distinguish (~0.753).
inline double nonedge_constant() {
  constexpr double pi = std::numbers::pi;
  constexpr double s3 = std::numbers::sqrt3;
  return pi * (16.0 - 8.0 * s3 - 7.0 * pi + 4.0 * s3 * pi) / 8.0;
}

// Lower set: nodes with dE(v, s) < ell_n(t); upper set: dE(v, s) > u_n(t + 1).
// Any (lower, upper) pair is distinguished by s whenever the distance sandwich holds.
struct BoundSets {
  std::vector<NodeId> lower;
  std::vector<NodeId> upper;
};

inline BoundSets lower_bound_sets(const GeometricGraph& g, const BoundParams& p, NodeId s, double t) {
  detail::check_node(g.topology, s);
  const double lo = ell_n(p, t);
  const double hi = u_n(p, t + 1.0);
  BoundSets out;
  const auto& pts = g.points.points;
  for (std::size_t v = 0; v < pts.size(); ++v) {
    const double d = distance(g.points.domain, pts[v], pts[s]);
    if (d < lo) out.lower.push_back(static_cast<NodeId>(v));
    if (d > hi) out.upper.push_back(static_cast<NodeId>(v));
  }
  return out;
}

// Dense-regime check r >= C1 sqrt(ln n); C1 defaults to 2.
inline bool dense_regime(double n, double r, double c1 = 2.0) { return r >= c1 * std::sqrt(std::log(n)); }

// Infimum of the c for which dG <= ceil((dE + kappa) / r) holds on every
// (dE, dG) sample: max over samples of ((dG - 1) r - dE) / (dE / r^{4/3} + ln n / r^{1/3}).
// The bound holds for every c strictly above the returned value.
inline double sufficient_c(double n, double r, const std::vector<std::pair<double, std::uint32_t>>& samples) {
  const double r43 = std::pow(r, 4.0 / 3.0);
  const double tail = std::log(n) / std::cbrt(r);
  double c = 0.0;
  for (const auto& [dE, dG] : samples) {
    const double need = (static_cast<double>(dG) - 1.0) * r - dE;
    if (need < 0.0) continue;
    const double per_c = dE / r43 + tail;
    c = std::max(c, per_c > 0.0 ? need / per_c : std::numeric_limits<double>::infinity());
  }
  return c;
}

}  // namespace grgsimple::bounds
