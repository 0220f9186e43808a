#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lowsnr/errors.hpp"

namespace lowsnr::detail {

struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
};

inline bool opposite_signs(double x, double y) { return (x < 0.0) != (y < 0.0); }

// Bisection interleaved with Illinois-modified secant steps on an ordered
// bracket. A bisection is forced whenever two steps failed to halve the
// width. Runs until the bracket is a few ulps wide and returns the endpoint
// with the smaller residual.
template <class F>
double bracketed_root(F&& f, Bracket br, int max_iter = 400) {
  if (br.lo > br.hi) {
    std::swap(br.lo, br.hi);
    std::swap(br.f_lo, br.f_hi);
  }
  if (br.f_lo == 0.0) return br.lo;
  if (br.f_hi == 0.0) return br.hi;
  if (!opposite_signs(br.f_lo, br.f_hi)) {
    throw ConvergenceError("bracketed_root: no sign change on [" + std::to_string(br.lo) + ", " +
                           std::to_string(br.hi) + "]");
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  // Secant weights; only their signs must match the true residuals.
  double g_lo = br.f_lo;
  double g_hi = br.f_hi;
  int last_moved = 0;  // -1 lo, +1 hi
  double checkpoint = br.hi - br.lo;
  for (int iter = 0; iter < max_iter; ++iter) {
    const double width = br.hi - br.lo;
    if (width <= 4.0 * kEps * std::max(std::abs(br.lo), std::abs(br.hi))) {
      return std::abs(br.f_lo) <= std::abs(br.f_hi) ? br.lo : br.hi;
    }
    double x = br.lo - g_lo * width / (g_hi - g_lo);
    if (iter % 2 == 0) {
      if (iter > 0 && width > 0.5 * checkpoint) x = 0.5 * (br.lo + br.hi);
      checkpoint = width;
    }
    if (!(x > br.lo && x < br.hi)) x = 0.5 * (br.lo + br.hi);
    if (!(x > br.lo && x < br.hi)) {
      return std::abs(br.f_lo) <= std::abs(br.f_hi) ? br.lo : br.hi;
    }
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (opposite_signs(fx, br.f_hi)) {
      br.lo = x;
      br.f_lo = g_lo = fx;
      if (last_moved == -1) g_hi *= 0.5;
      last_moved = -1;
    } else {
      br.hi = x;
      br.f_hi = g_hi = fx;
      if (last_moved == 1) g_lo *= 0.5;
      last_moved = 1;
    }
  }
  throw ConvergenceError("bracketed_root: iteration budget exhausted");
}

}  // namespace lowsnr::detail
