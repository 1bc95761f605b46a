#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qosm/errors.hpp"

namespace qosm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace numeric {

inline constexpr int kMaxRootIterations = 200;

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Root of a continuous f on [lo, hi] given a sign change f(lo) <= 0 <= f(hi)
/// (or the reverse). Bisection with a secant step whenever the secant point
/// lies strictly inside the bracket; a step that fails to halve the bracket
/// forces bisection on the next iteration, so the width at least halves every
/// two iterations. Terminates at a zero or when the bracket is a few ulps wide.
template <class F>
RootResult find_root(F&& f, double lo, double hi, double f_lo, double f_hi,
                     int max_iterations = kMaxRootIterations) {
  if (f_lo == 0.0) return {lo, f_lo, 0};
  if (f_hi == 0.0) return {hi, f_hi, 0};
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw DomainError("find_root: interval does not bracket a root");
  }
  bool force_bisect = false;
  for (int it = 1; it <= max_iterations; ++it) {
    const double width = hi - lo;
    double x = 0.5 * (lo + hi);
    if (!force_bisect) {
      const double secant = hi - f_hi * width / (f_hi - f_lo);
      if (secant > lo && secant < hi) x = secant;
    }
    const double fx = f(x);
    if (fx == 0.0) return {x, fx, it};
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
    force_bisect = (hi - lo) > 0.5 * width;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale ||
        hi - lo <= std::numeric_limits<double>::min()) {
      return std::abs(f_lo) <= std::abs(f_hi) ? RootResult{lo, f_lo, it}
                                              : RootResult{hi, f_hi, it};
    }
  }
  throw ConvergenceError("find_root: no convergence after " +
                         std::to_string(max_iterations) + " iterations");
}

/// Golden-section minimization of a unimodal f on [lo, hi].
template <class F>
double golden_section_minimize(F&& f, double lo, double hi, double rel_tol = 1e-12,
                               int max_iterations = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iterations; ++it) {
    if (hi - lo <= rel_tol * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

/// `count` points from start to stop inclusive, geometrically spaced if `log_spacing`.
inline std::vector<double> spaced_grid(double start, double stop, std::size_t count,
                                       bool log_spacing) {
  std::vector<double> grid;
  if (count == 0) return grid;
  grid.reserve(count);
  if (count == 1) {
    grid.push_back(start);
    return grid;
  }
  if (log_spacing && (start <= 0.0 || stop <= 0.0)) {
    throw DomainError("log-spaced grid needs positive end points");
  }
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / n;
    if (i == 0) {
      grid.push_back(start);
    } else if (i + 1 == count) {
      grid.push_back(stop);
    } else if (log_spacing) {
      grid.push_back(std::exp(std::log(start) + t * (std::log(stop) - std::log(start))));
    } else {
      grid.push_back(start + t * (stop - start));
    }
  }
  return grid;
}

}  // namespace numeric
}  // namespace qosm
