#pragma once

// Classes of service in the DC regime as the technological constant c falls.
//
// Class k (k >= 0) serves requests in (q0^k, q0^(k+1)] at quality q0^(k+1).
// Substituting q = q0^k q' maps the class-k equation onto the class-0 equation
// with c replaced by c q0^(k delta), delta = (alpha+2)s - (alpha+1) > 0, so
//
//     p_k(c) = p_0(c q0^(k delta)),      c_k = c_0 q0^(-k delta).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qosm/demand.hpp"
#include "qosm/equilibrium.hpp"
#include "qosm/errors.hpp"
#include "qosm/regime.hpp"

namespace qosm {

inline constexpr int kDefaultMaxClasses = 32;

struct ClassOutcome {
  int index = 0;
  double quality = 0.0;               // q0^(k+1)
  double lower_boundary = 1.0;        // q0^k
  double appearance_threshold = 0.0; // c_k, +inf in UDC
  double price = 0.0;
  double demand = 0.0;
  double weighted_traffic = 0.0;
  double revenue = 0.0;
};

struct CascadeSnapshot {
  double c = 0.0;
  RegimeVerdict regime;
  std::vector<ClassOutcome> classes;  // ascending index
  bool truncated = false;             // UDC list cut at max_classes
};

/// Precomputed q0, delta, c0 and lhs profile for one (f, h, s) in the DC regime.
class Cascade {
 public:
  Cascade(const QualityDistribution& f, const PriceResponse& h, double s)
      : f_(f), h_(h), s_(s) {
    require_power_law(f_, "cascade");
    check_scale_exponent(s_);
    verdict_ = classify_regime(f_, h_, s_);
    if (!verdict_.is_dc()) throw RegimeError("cascade: classes are defined only in the DC regime");
    profile_ = classify_lhs(h_, s_);
    q0_ = *verdict_.q0;
    delta_ = scaling_exponent(f_, s_);
    w_q0_ = w_shape(f_, s_, q0_);
    c0_ = profile_.supremum() / w_q0_;
  }

  const RegimeVerdict& verdict() const { return verdict_; }
  const LhsProfile& profile() const { return profile_; }
  double q0() const { return q0_; }
  double delta() const { return delta_; }
  double first_threshold() const { return c0_; }

  /// c_k; +inf when every class exists at every c (UDC).
  double threshold(int k) const { return c0_ * std::pow(q0_, -k * delta_); }

  /// Whether class k is offered at c. Closed at c_k when the lhs maximum is
  /// attained (sensitive), open when it is only a supremum (borderline).
  bool offered(int k, double c) const {
    const double ck = threshold(k);
    return profile_.kind == LhsKind::Borderline ? c < ck : c <= ck;
  }

  /// p_k(c) through the self-similar reduction onto the class-0 equation.
  PriceOutcome class_price(int k, double c) const {
    check_c(c);
    if (!offered(k, c)) return NoProfit{};
    double target = c * std::pow(q0_, k * delta_) * w_q0_;
    // c == c_k may round the target an ulp past the tangency
    if (profile_.kind == LhsKind::Sensitive) target = std::min(target, *profile_.peak_value);
    return solve_price(h_, s_, target, profile_);
  }

  /// p_k(c) by solving the class-k equation on (q0^k, q0^(k+1)] directly.
  PriceOutcome direct_class_price(int k, double c) const {
    check_c(c);
    const double low = std::pow(q0_, k);
    return solve_price(h_, s_, rhs(f_, s_, c, low, low * q0_), profile_);
  }

  std::optional<ClassOutcome> class_outcome(int k, double c) const {
    const auto outcome = class_price(k, c);
    const auto* sol = std::get_if<EquilibriumSolution>(&outcome);
    if (sol == nullptr) return std::nullopt;
    ClassOutcome out;
    out.index = k;
    out.lower_boundary = std::pow(q0_, k);
    out.quality = out.lower_boundary * q0_;
    if (!std::isfinite(out.quality)) throw DomainError("cascade: class quality overflows");
    out.appearance_threshold = threshold(k);
    out.price = sol->price;
    out.demand = eval_h(h_, sol->price) * cumulative_demand(f_, out.lower_boundary, out.quality);
    out.weighted_traffic = out.quality * out.demand;
    out.revenue = out.price * out.demand;
    return out;
  }

  /// Number of classes offered at c (BDC); finite for every c > 0.
  int class_count(double c) const {
    check_c(c);
    if (verdict_.regime == Regime::UDC) throw RegimeError("cascade: UDC offers infinitely many classes");
    if (!offered(0, c)) return 0;
    const double estimate = std::floor(std::log(c0_ / c) / (delta_ * std::log(q0_)));
    if (estimate > 1e5) throw DomainError("cascade: class count exceeds 100000");
    int n = static_cast<int>(estimate) + 1;
    while (n > 0 && !offered(n - 1, c)) --n;
    while (offered(n, c)) ++n;
    return n;
  }

  CascadeSnapshot snapshot(double c, int max_classes = kDefaultMaxClasses) const {
    if (max_classes < 1) throw DomainError("snapshot: max_classes must be >= 1");
    CascadeSnapshot snap;
    snap.c = c;
    snap.regime = verdict_;
    int count = 0;
    if (verdict_.regime == Regime::UDC) {
      count = max_classes;
      snap.truncated = true;
    } else {
      count = class_count(c);
    }
    snap.classes.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      auto out = class_outcome(k, c);
      if (!out) throw ConvergenceError("snapshot: class " + std::to_string(k) + " below its threshold has no price");
      snap.classes.push_back(*out);
    }
    return snap;
  }

  std::vector<CascadeSnapshot> sweep(std::span<const double> c_grid, int max_classes = kDefaultMaxClasses) const {
    for (std::size_t i = 1; i < c_grid.size(); ++i) {
      if (!(c_grid[i] < c_grid[i - 1])) throw DomainError("sweep_c: c grid must be strictly decreasing");
    }
    std::vector<CascadeSnapshot> out;
    out.reserve(c_grid.size());
    for (double c : c_grid) out.push_back(snapshot(c, max_classes));
    return out;
  }

 private:
  static void check_c(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("cascade: c must be a finite value > 0");
  }

  QualityDistribution f_;
  PriceResponse h_;
  double s_ = 0.5;
  RegimeVerdict verdict_;
  LhsProfile profile_;
  double q0_ = 1.0;
  double delta_ = 0.0;
  double w_q0_ = 0.0;
  double c0_ = 0.0;
};

/// c0 = sup(lhs) / w(q0): largest c at which the first class is profitable.
/// Returns +inf (unbounded) in UDC, where a class exists for every c.
inline double first_threshold(const QualityDistribution& f, const PriceResponse& h, double s) {
  return Cascade(f, h, s).first_threshold();
}

inline CascadeSnapshot snapshot(const MarketConfig& cfg, int max_classes = kDefaultMaxClasses) {
  cfg.validate();
  return Cascade(cfg.f, cfg.h, cfg.s).snapshot(cfg.c, max_classes);
}

inline std::vector<CascadeSnapshot> sweep_c(const QualityDistribution& f, const PriceResponse& h, double s,
                                            std::span<const double> c_grid,
                                            int max_classes = kDefaultMaxClasses) {
  return Cascade(f, h, s).sweep(c_grid, max_classes);
}

/// lim_{c->0} p_{k+1}(c) / p_k(c) = (s / ((2+alpha)s - alpha - 1))^(((2+alpha)s - alpha - 1)/(alpha+1)),
/// which is q0^delta; at alpha = -1 only the q0^delta form is defined.
inline double price_ratio_limit(const QualityDistribution& f, double s) {
  const auto& pl = require_power_law(f, "price_ratio_limit");
  const double q0 = optimal_quality(f, s);  // throws in UC
  const double delta = scaling_exponent(f, s);
  const double e = pl.alpha + 1.0;
  if (std::abs(e) < 1e-3) return std::pow(q0, delta);
  return std::pow(s / delta, delta / e);
}

/// lim_{c->0} of the weighted-traffic ratio of neighboring classes: q0^(alpha+2).
inline double traffic_ratio_limit(const QualityDistribution& f, double s) {
  const auto& pl = require_power_law(f, "traffic_ratio_limit");
  return std::pow(optimal_quality(f, s), pl.alpha + 2.0);
}

}  // namespace qosm
