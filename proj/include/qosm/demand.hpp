#pragma once

// Demand side of the market: d(q, p) = f(q) h(p).
//
//   f  distribution of demand over requested quality q >= 1
//   h  price response, h(0) = 1, strictly decreasing to 0
//   A  cumulative demand at zero price, A(a, b) = integral of f over [a, b]

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "qosm/errors.hpp"
#include "qosm/numeric.hpp"

namespace qosm {

/// f(q) = q^alpha. Any finite alpha.
struct PowerLaw {
  double alpha = 0.0;

  PowerLaw() = default;
  explicit PowerLaw(double alpha_) : alpha(alpha_) {
    if (!std::isfinite(alpha)) throw DomainError("PowerLaw: alpha must be finite");
  }
};

/// f(q) = q on [1, q_m], 0 above the cap.
struct TruncatedLinear {
  double q_m = 2.0;

  TruncatedLinear() = default;
  explicit TruncatedLinear(double q_m_) : q_m(q_m_) {
    if (!(q_m > 1.0) || !std::isfinite(q_m)) {
      throw DomainError("TruncatedLinear: q_m must be a finite value > 1");
    }
  }
};

using QualityDistribution = std::variant<PowerLaw, TruncatedLinear>;

/// h(p) = 1 / (1 + (a p)^beta).
struct Rational {
  double beta = 1.0;
  double a = 1.0;

  Rational() = default;
  Rational(double beta_, double a_) : beta(beta_), a(a_) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("Rational: beta must be > 0");
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("Rational: a must be > 0");
  }
};

/// h(p) = exp(-p).
struct Exponential {};

/// h(p) = exp(-p^2).
struct Gaussian {};

using PriceResponse = std::variant<Rational, Exponential, Gaussian>;

inline void check_scale_exponent(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("economies-of-scale exponent s must lie in (0, 1)");
}

/// One market instance: cost of w unit-quality services is c * w^s.
struct MarketConfig {
  QualityDistribution f = PowerLaw{0.0};
  PriceResponse h = Rational{2.0, 1.0};
  double s = 0.5;
  double c = 1.0;

  void validate() const {
    check_scale_exponent(s);
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("technological constant c must be > 0");
  }
};

inline const PowerLaw& require_power_law(const QualityDistribution& f, const char* op) {
  if (const auto* pl = std::get_if<PowerLaw>(&f)) return *pl;
  throw UnsupportedDistribution(std::string(op) + ": defined only for the power-law distribution");
}

inline double eval_f(const QualityDistribution& f, double q) {
  if (!(q >= 1.0)) throw DomainError("eval_f: quality must be >= 1");
  if (const auto* pl = std::get_if<PowerLaw>(&f)) return std::pow(q, pl->alpha);
  const auto& tl = std::get<TruncatedLinear>(f);
  return q <= tl.q_m ? q : 0.0;
}

/// ln h(p); finite for every p >= 0 at which h does not underflow.
inline double log_h(const PriceResponse& h, double p) {
  if (!(p >= 0.0)) throw DomainError("price must be >= 0");
  return std::visit(
      [p](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Rational>) {
          if (p == 0.0) return 0.0;
          // ln(1 + e^y) without overflow for large y
          const double y = r.beta * std::log(r.a * p);
          return y > 0.0 ? -(y + std::log1p(std::exp(-y))) : -std::log1p(std::exp(y));
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return -p;
        } else {
          return -p * p;
        }
      },
      h);
}

inline double eval_h(const PriceResponse& h, double p) {
  if (!(p >= 0.0)) throw DomainError("eval_h: price must be >= 0");
  if (p == 0.0) return 1.0;
  if (const auto* r = std::get_if<Rational>(&h)) return 1.0 / (1.0 + std::pow(r->a * p, r->beta));
  return std::exp(log_h(h, p));
}

namespace detail {

// Below this |alpha + 1| the power-law primitive is evaluated through expm1.
inline constexpr double kLogBranchWidth = 1e-9;

// integral_a^b q^alpha dq for finite 1 <= a <= b, written as
// a^e * expm1(e ln(b/a)) / e with e = alpha + 1 (no cancellation near e = 0).
inline double power_law_integral(double alpha, double a, double b) {
  const double e = alpha + 1.0;
  const double log_ratio = std::log(b / a);
  if (e == 0.0) return log_ratio;
  if (std::abs(e) < kLogBranchWidth) {
    // series of expm1(x)/x to second order, x = e ln(b/a)
    const double x = e * log_ratio;
    return std::pow(a, e) * log_ratio * (1.0 + x / 2.0 + x * x / 6.0);
  }
  return std::pow(a, e) * std::expm1(e * log_ratio) / e;
}

}  // namespace detail

/// A(a, b). `b` may be kInfinity; a divergent improper integral throws DivergenceError.
inline double cumulative_demand(const QualityDistribution& f, double a, double b) {
  if (!(a >= 1.0)) throw DomainError("cumulative_demand: lower bound must be >= 1");
  if (!(b >= a)) throw DomainError("cumulative_demand: upper bound must be >= lower bound");
  if (std::isinf(a)) throw DomainError("cumulative_demand: lower bound must be finite");
  if (a == b) return 0.0;
  if (const auto* tl = std::get_if<TruncatedLinear>(&f)) {
    const double lo = std::min(a, tl->q_m);
    const double hi = std::min(b, tl->q_m);
    return (hi * hi - lo * lo) / 2.0;
  }
  const double alpha = std::get<PowerLaw>(f).alpha;
  if (std::isinf(b)) {
    const double e = alpha + 1.0;
    if (e >= 0.0) throw DivergenceError("cumulative_demand: integral of q^alpha diverges for alpha >= -1");
    return -std::pow(a, e) / e;
  }
  return detail::power_law_integral(alpha, a, b);
}

/// delta = (alpha + 2) s - (alpha + 1): class k+1 solves the class-k equation
/// with c rescaled by q0^delta.
inline double scaling_exponent(const QualityDistribution& f, double s) {
  const auto& pl = require_power_law(f, "scaling_exponent");
  return (pl.alpha + 2.0) * s - (pl.alpha + 1.0);
}

}  // namespace qosm
