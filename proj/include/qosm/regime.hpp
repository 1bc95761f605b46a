#pragma once

// Market regime for f(q) = q^alpha.
//
// The rhs of the equilibrium equation, as a function of the class quality b,
// is c * w(b) with w(b) = b^s A(1, b)^-(1-s). If w keeps decreasing (UC) one
// class of unbounded quality serves everyone; if w has an interior minimum q0
// (DC) the lowest class has finite quality q0. DC splits by the lhs shape into
// BDC (sensitive: finitely many classes at any c) and UDC (insensitive).

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qosm/demand.hpp"
#include "qosm/equilibrium.hpp"
#include "qosm/errors.hpp"
#include "qosm/numeric.hpp"

namespace qosm {

enum class Regime { UC, BDC, UDC };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::UC: return "UC";
    case Regime::BDC: return "BDC";
    case Regime::UDC: return "UDC";
  }
  return "?";
}

struct RegimeVerdict {
  Regime regime = Regime::UC;
  std::optional<double> q0;       // present iff DC
  double boundary_margin = 0.0;   // s - (alpha+1)/(alpha+2) for alpha > -1, else +inf
  LhsKind sensitivity = LhsKind::Insensitive;

  bool is_dc() const { return regime != Regime::UC; }
};

/// DC iff alpha <= -1 or s > (alpha+1)/(alpha+2). Points on the boundary are UC.
inline bool is_dc(const PowerLaw& f, double s) {
  const double e = f.alpha + 1.0;
  if (e <= 0.0) return true;
  return s > e / (e + 1.0);
}

inline double boundary_margin(const PowerLaw& f, double s) {
  const double e = f.alpha + 1.0;
  return e > 0.0 ? s - e / (e + 1.0) : kInfinity;
}

/// w(b) = b^s A(1, b)^-(1-s).
inline double w_shape(const QualityDistribution& f, double s, double b) {
  require_power_law(f, "w_shape");
  check_scale_exponent(s);
  if (!(b > 1.0)) throw DomainError("w_shape: b must be > 1");
  return std::pow(b, s) * std::pow(cumulative_demand(f, 1.0, b), -(1.0 - s));
}

/// ln w(b); +inf at b = 1.
inline double log_w_shape(const QualityDistribution& f, double s, double b) {
  if (b == 1.0) return kInfinity;
  if (std::isinf(b)) return kInfinity;
  return s * std::log(b) - (1.0 - s) * std::log(cumulative_demand(f, 1.0, b));
}

/// Argmin q0 of w in the DC regime:
///   alpha != -1:  (s / ((2+alpha) s - alpha - 1))^(1/(alpha+1))
///   alpha == -1:  e^((1-s)/s)
inline double optimal_quality(const QualityDistribution& f, double s) {
  const auto& pl = require_power_law(f, "optimal_quality");
  check_scale_exponent(s);
  if (!is_dc(pl, s)) throw RegimeError("optimal_quality: UC regime has no finite minimizer");
  const double e = pl.alpha + 1.0;
  if (e == 0.0) return std::exp((1.0 - s) / s);
  if (std::abs(e) < 1e-3) {
    // s / ((2+alpha)s - alpha - 1) = 1 / (1 + e (s-1)/s); log1p keeps the e -> 0 limit exact
    return std::exp(-std::log1p(e * (s - 1.0) / s) / e);
  }
  return std::pow(s / ((pl.alpha + 2.0) * s - e), 1.0 / e);
}

inline RegimeVerdict classify_regime(const QualityDistribution& f, const PriceResponse& h, double s) {
  const auto& pl = require_power_law(f, "classify_regime");
  check_scale_exponent(s);
  RegimeVerdict v;
  v.boundary_margin = boundary_margin(pl, s);
  v.sensitivity = classify_lhs(h, s).kind;
  if (!is_dc(pl, s)) {
    v.regime = Regime::UC;
    return v;
  }
  v.q0 = optimal_quality(f, s);
  // a borderline lhs is bounded like a sensitive one, so the class set is bounded too
  v.regime = v.sensitivity == LhsKind::Insensitive ? Regime::UDC : Regime::BDC;
  return v;
}

/// Qualities b at which the first-class equation has a solution, as [lo, hi]
/// (hi may be +inf, lo may be 1 meaning every b > 1). Empty when no b is profitable.
inline std::optional<std::pair<double, double>> profitable_interval(const MarketConfig& cfg) {
  cfg.validate();
  const auto& pl = require_power_law(cfg.f, "profitable_interval");
  const double sup = classify_lhs(cfg.h, cfg.s).supremum();
  if (std::isinf(sup)) return std::pair{1.0, kInfinity};
  const bool dc = is_dc(pl, cfg.s);
  // excess(b) <= 0 <=> c w(b) <= sup
  auto excess = [&](double b) { return std::log(cfg.c) + log_w_shape(cfg.f, cfg.s, b) - std::log(sup); };
  double pivot = 0.0;
  if (dc) {
    pivot = optimal_quality(cfg.f, cfg.s);
    if (excess(pivot) > 0.0) return std::nullopt;
  } else {
    // w decreasing: walk out until the line is crossed
    pivot = 2.0;
    while (excess(pivot) > 0.0) {
      pivot *= 2.0;
      if (std::isinf(pivot) || pivot > 1e300) return std::nullopt;
    }
  }
  // root of excess between a profitable and an unprofitable quality
  auto boundary = [&](double inside, double outside) {
    const double lo = std::min(inside, outside);
    const double hi = std::max(inside, outside);
    return numeric::find_root(excess, lo, hi, excess(lo), excess(hi)).x;
  };
  const double lo = excess(1.0 + 1e-15) > 0.0 ? boundary(pivot, 1.0 + 1e-15) : 1.0;
  if (!dc) return std::pair{lo, kInfinity};
  double far = 2.0 * pivot;
  while (excess(far) <= 0.0) {
    far *= 2.0;
    if (far > 1e300) return std::pair{lo, kInfinity};
  }
  return std::pair{lo, boundary(pivot, far)};
}

struct QualityPoint {
  double quality = 0.0;
  double price = 0.0;
  double demand = 0.0;
  double weighted_traffic = 0.0;
  double revenue = 0.0;
};

/// Price, traffic and revenue of a single provider choosing quality b, over a grid.
struct QualityScan {
  std::vector<QualityPoint> rows;            // grid order, unprofitable b skipped
  std::optional<std::size_t> argmin_price;   // index into rows: competitive choice
  std::optional<std::size_t> argmax_revenue; // index into rows: monopolist choice
  double grid_resolution = 0.0;              // largest gap between consecutive grid points
};

inline QualityScan competitive_vs_monopoly(const MarketConfig& cfg, std::span<const double> quality_grid) {
  cfg.validate();
  require_power_law(cfg.f, "competitive_vs_monopoly");
  const LhsProfile profile = classify_lhs(cfg.h, cfg.s);
  QualityScan scan;
  for (std::size_t i = 0; i < quality_grid.size(); ++i) {
    const double b = quality_grid[i];
    if (i > 0) scan.grid_resolution = std::max(scan.grid_resolution, std::abs(b - quality_grid[i - 1]));
    if (!(b > 1.0)) throw DomainError("competitive_vs_monopoly: grid qualities must be > 1");
    const auto outcome = solve_price(cfg.h, cfg.s, rhs(cfg.f, cfg.s, cfg.c, 1.0, b), profile);
    const auto* sol = std::get_if<EquilibriumSolution>(&outcome);
    if (sol == nullptr) continue;
    QualityPoint row;
    row.quality = b;
    row.price = sol->price;
    row.demand = eval_h(cfg.h, sol->price) * cumulative_demand(cfg.f, 1.0, b);
    row.weighted_traffic = b * row.demand;
    row.revenue = sol->price * row.demand;
    scan.rows.push_back(row);
  }
  for (std::size_t i = 0; i < scan.rows.size(); ++i) {
    if (!scan.argmin_price || scan.rows[i].price < scan.rows[*scan.argmin_price].price) scan.argmin_price = i;
    if (!scan.argmax_revenue || scan.rows[i].revenue > scan.rows[*scan.argmax_revenue].revenue) {
      scan.argmax_revenue = i;
    }
  }
  return scan;
}

}  // namespace qosm
