#pragma once

// UC regime with a hard quality cap: f(q) = q on [1, q_m], 0 above.
//
// With s = 2/3 and h(p) = 1/(1+p^3) the rhs decreases in b up to the cap, so
// the single class offered has quality q_m and its price solves
//
//     p / (1+p^3)^(1/3) = 2^(1/3) c q_m^(2/3) (q_m^2 - 1)^(-1/3).
//
// The lhs climbs to 1 without reaching it, hence service exists iff c < c*.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <variant>

#include "qosm/demand.hpp"
#include "qosm/equilibrium.hpp"
#include "qosm/errors.hpp"
#include "qosm/numeric.hpp"

namespace qosm {

struct BoundedUcConfig {
  double q_m = 2.0;
  double c = 1.0;

  void validate() const {
    if (!(q_m > 1.0) || !std::isfinite(q_m)) throw DomainError("bounded UC: q_m must be a finite value > 1");
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("bounded UC: c must be a finite value > 0");
  }
};

struct UcOutcome {
  double quality = 0.0;
  double price = 0.0;
  double demand = 0.0;
  double weighted_traffic = 0.0;
  double revenue = 0.0;
  double residual = 0.0;
};

using UcResult = std::variant<UcOutcome, NoProfit>;

/// c* = 2^(-1/3) q_m^(-2/3) (q_m^2 - 1)^(1/3).
inline double uc_threshold(double q_m) {
  if (!(q_m > 1.0) || !std::isfinite(q_m)) throw DomainError("uc_threshold: q_m must be a finite value > 1");
  return std::cbrt(0.5) * std::pow(q_m, -2.0 / 3.0) * std::cbrt(q_m * q_m - 1.0);
}

/// Left side of the capped equation, p (1+p^3)^(-1/3).
inline double uc_lhs(double p) { return p / std::cbrt(1.0 + p * p * p); }

inline double uc_target(const BoundedUcConfig& cfg) {
  return std::cbrt(2.0) * cfg.c * std::pow(cfg.q_m, 2.0 / 3.0) / std::cbrt(cfg.q_m * cfg.q_m - 1.0);
}

/// Equilibrium of the capped model with s = 2/3, h(p) = 1/(1+p^3).
inline UcResult uc_equilibrium(const BoundedUcConfig& cfg) {
  cfg.validate();
  if (cfg.c >= uc_threshold(cfg.q_m)) return NoProfit{};
  const double target = uc_target(cfg);
  if (!(target < 1.0)) return NoProfit{};
  auto g = [target](double p) { return uc_lhs(p) - target; };
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e100) throw ConvergenceError("uc_equilibrium: could not bracket the price");
  }
  const auto root = numeric::find_root(g, lo, hi, g(lo), g(hi));
  UcOutcome out;
  out.quality = cfg.q_m;
  out.price = root.x;
  out.residual = root.fx;
  out.demand = (cfg.q_m * cfg.q_m - 1.0) / 2.0 / (1.0 + root.x * root.x * root.x);
  out.weighted_traffic = cfg.q_m * out.demand;
  out.revenue = out.price * out.demand;
  return out;
}

/// Quality in (1, q_m] minimizing b^s A(1, b)^-(1-s) under the cap.
inline double capped_best_quality(double q_m, double s) {
  const QualityDistribution f = TruncatedLinear{q_m};
  auto log_shape = [&](double b) { return s * std::log(b) - (1.0 - s) * std::log(cumulative_demand(f, 1.0, b)); };
  const std::size_t n = 513;
  const auto grid = numeric::spaced_grid(1.0 + (q_m - 1.0) * 1e-6, q_m, n, true);
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (log_shape(grid[i]) <= log_shape(grid[best])) best = i;
  }
  if (best == n - 1 || best == 0) return grid[best];
  return numeric::golden_section_minimize(log_shape, grid[best - 1], grid[best + 1], 1e-14);
}

/// Capped model for any (s, h): quality chosen by minimizing the rhs over (1, q_m].
inline UcResult uc_equilibrium_general(const PriceResponse& h, double s, const BoundedUcConfig& cfg) {
  cfg.validate();
  check_scale_exponent(s);
  const QualityDistribution f = TruncatedLinear{cfg.q_m};
  const double b = capped_best_quality(cfg.q_m, s);
  const auto profile = classify_lhs(h, s);
  // threshold from the unit-c rhs so c at or above it is decided without rounding
  const double threshold = profile.supremum() / rhs(f, s, 1.0, 1.0, b);
  if (profile.kind == LhsKind::Borderline ? cfg.c >= threshold : cfg.c > threshold) return NoProfit{};
  double target = rhs(f, s, cfg.c, 1.0, b);
  if (profile.kind == LhsKind::Sensitive) target = std::min(target, *profile.peak_value);
  const auto outcome = solve_price(h, s, target, profile);
  const auto* sol = std::get_if<EquilibriumSolution>(&outcome);
  if (sol == nullptr) return NoProfit{};
  UcOutcome out;
  out.quality = b;
  out.price = sol->price;
  out.residual = sol->residual;
  out.demand = eval_h(h, sol->price) * cumulative_demand(f, 1.0, b);
  out.weighted_traffic = b * out.demand;
  out.revenue = out.price * out.demand;
  return out;
}

}  // namespace qosm
