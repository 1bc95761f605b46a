#pragma once

// Competitive price of a single class of quality b serving requests in (low, b]:
//
//     p h(p)^(1-s)  =  c b^s A(low, b)^-(1-s)
//     \__ lhs __/      \______ rhs ______/
//
// Revenue covers cost exactly. Competitors undercut any larger root, so the
// price is the smallest positive solution, if one exists.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "qosm/demand.hpp"
#include "qosm/errors.hpp"
#include "qosm/numeric.hpp"

namespace qosm {

enum class LhsKind {
  Sensitive,    // rises to a maximum, then decays to 0
  Insensitive,  // strictly increasing, unbounded
  Borderline,   // strictly increasing to a finite limit that is never attained
};

inline const char* to_string(LhsKind k) {
  switch (k) {
    case LhsKind::Sensitive: return "sensitive";
    case LhsKind::Insensitive: return "insensitive";
    case LhsKind::Borderline: return "borderline";
  }
  return "?";
}

struct LhsProfile {
  LhsKind kind = LhsKind::Insensitive;
  std::optional<double> peak_price;   // Sensitive only
  std::optional<double> peak_value;   // Sensitive only
  std::optional<double> limit_value;  // Borderline only

  /// Least upper bound of the lhs over p >= 0.
  double supremum() const {
    if (kind == LhsKind::Sensitive) return *peak_value;
    if (kind == LhsKind::Borderline) return *limit_value;
    return kInfinity;
  }
};

enum class RootMultiplicity { UniqueRoot, SmallestOfSeveral };

inline const char* to_string(RootMultiplicity m) {
  return m == RootMultiplicity::UniqueRoot ? "unique_root" : "smallest_of_several";
}

struct EquilibriumSolution {
  double price = 0.0;
  double residual = 0.0;  // lhs(price) - target
  RootMultiplicity multiplicity = RootMultiplicity::UniqueRoot;
};

/// No price covers cost: the horizontal rhs line misses the lhs curve.
struct NoProfit {};

using PriceOutcome = std::variant<EquilibriumSolution, NoProfit>;

inline bool is_profitable(const PriceOutcome& o) {
  return std::holds_alternative<EquilibriumSolution>(o);
}

inline constexpr double kRootRelTolerance = 1e-12;

/// p * h(p)^(1-s), evaluated in log space so it stays finite for huge p.
inline double lhs(const PriceResponse& h, double s, double p) {
  check_scale_exponent(s);
  if (!(p >= 0.0)) throw DomainError("lhs: price must be >= 0");
  if (p == 0.0) return 0.0;
  if (std::isinf(p)) throw DomainError("lhs: price must be finite");
  return p * std::exp((1.0 - s) * log_h(h, p));
}

/// Shape of the lhs in p. Rational responses split on beta(1-s) against 1;
/// exponential and Gaussian responses are sensitive for every s.
inline LhsProfile classify_lhs(const PriceResponse& h, double s) {
  check_scale_exponent(s);
  LhsProfile profile;
  double peak = 0.0;
  if (const auto* r = std::get_if<Rational>(&h)) {
    const double product = r->beta * (1.0 - s);
    // beta = 1/(1-s) rarely survives rounding exactly (s = 2/3, beta = 3)
    if (std::abs(product - 1.0) <= 16.0 * std::numeric_limits<double>::epsilon()) {
      profile.kind = LhsKind::Borderline;
      profile.limit_value = 1.0 / r->a;
      return profile;
    }
    if (product < 1.0) {
      profile.kind = LhsKind::Insensitive;
      return profile;
    }
    // d/dp ln(lhs) = 0  <=>  (a p)^beta = 1 / ((1-s) beta - 1)
    peak = std::pow(1.0 / (product - 1.0), 1.0 / r->beta) / r->a;
  } else if (std::holds_alternative<Exponential>(h)) {
    peak = 1.0 / (1.0 - s);
  } else {
    peak = 1.0 / std::sqrt(2.0 * (1.0 - s));
  }
  profile.kind = LhsKind::Sensitive;
  profile.peak_price = peak;
  profile.peak_value = lhs(h, s, peak);
  return profile;
}

/// c b^s A(low, b)^-(1-s).
inline double rhs(const QualityDistribution& f, double s, double c, double low, double b) {
  check_scale_exponent(s);
  if (!(c > 0.0)) throw DomainError("rhs: c must be > 0");
  if (!(b > low)) throw DomainError("rhs: class quality must exceed its lower boundary");
  const double demand = cumulative_demand(f, low, b);
  if (!(demand > 0.0)) throw EmptyDemandError("rhs: no demand in the class interval");
  return c * std::pow(b, s) * std::pow(demand, -(1.0 - s));
}

namespace detail {

inline EquilibriumSolution bracketed_price(const PriceResponse& h, double s, double target,
                                           double lo, double hi, RootMultiplicity multiplicity) {
  auto g = [&](double p) { return lhs(h, s, p) - target; };
  const auto root = numeric::find_root(g, lo, hi, g(lo), g(hi));
  if (!(std::abs(root.fx) <= kRootRelTolerance * std::max(1.0, target))) {
    throw ConvergenceError("solve_price: residual " + std::to_string(root.fx) + " above tolerance");
  }
  return {root.x, root.fx, multiplicity};
}

// Doubling search for p with lhs(p) >= target on an increasing lhs.
inline std::pair<double, double> expand_bracket(const PriceResponse& h, double s, double target) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 2100; ++i) {
    if (lhs(h, s, hi) >= target) return {lo, hi};
    lo = hi;
    hi *= 2.0;
    if (std::isinf(hi)) break;
  }
  throw ConvergenceError("solve_price: could not bracket the root");
}

}  // namespace detail

/// Smallest positive p with lhs(p) = target, or NoProfit.
inline PriceOutcome solve_price(const PriceResponse& h, double s, double target,
                                const LhsProfile& profile) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw DomainError("solve_price: target must be a finite value > 0");
  }
  switch (profile.kind) {
    case LhsKind::Sensitive: {
      const double peak_value = *profile.peak_value;
      if (target > peak_value) return NoProfit{};
      if (target == peak_value) {
        return EquilibriumSolution{*profile.peak_price, 0.0, RootMultiplicity::UniqueRoot};
      }
      return detail::bracketed_price(h, s, target, 0.0, *profile.peak_price,
                                     RootMultiplicity::SmallestOfSeveral);
    }
    case LhsKind::Borderline:
      if (target >= *profile.limit_value) return NoProfit{};
      [[fallthrough]];
    case LhsKind::Insensitive: {
      const auto [lo, hi] = detail::expand_bracket(h, s, target);
      return detail::bracketed_price(h, s, target, lo, hi, RootMultiplicity::UniqueRoot);
    }
  }
  return NoProfit{};
}

inline PriceOutcome solve_price(const PriceResponse& h, double s, double target) {
  return solve_price(h, s, target, classify_lhs(h, s));
}

}  // namespace qosm
