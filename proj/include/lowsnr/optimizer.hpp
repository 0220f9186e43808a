#pragma once

// Optimal on-off mass point at low SNR: the stationarity condition of the
// capacity expansion, its Lambert-W form, the branch-switch edge point, and
// the bounds on the mass point and on capacity built from them.
//
// Internally the mass point is carried as u = x1^2.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lowsnr/channel_model.hpp"
#include "lowsnr/closed_form.hpp"
#include "lowsnr/detail/root_bracket.hpp"
#include "lowsnr/errors.hpp"
#include "lowsnr/specfun.hpp"

namespace lowsnr::optimizer {

using specfun::LambertBranch;

// Largest SNR the low-SNR expansion is evaluated at.
inline constexpr double kSnrCeiling = 0.1;

namespace detail {

inline void require_above_one(double u, const char* who) {
  if (!(u > 1.0) || !std::isfinite(u)) {
    throw DomainError(std::string(who) + ": needs x^2 > 1, got x^2 = " + std::to_string(u));
  }
}

inline double phi_sq(double u) {
  require_above_one(u, "phi");
  const double t = std::numbers::pi / u;
  const double info = -u + (1.0 + u) * std::log1p(u);
  const double exponent = -std::numbers::pi / std::tan(t) / u + 1.0 + 1.0 / u;
  return -std::sin(t) * info / (std::numbers::pi * u) * std::exp(exponent);
}

inline double stationarity_residual_sq(double u, double a) {
  require_above_one(u, "stationarity_residual");
  const double t = std::numbers::pi / u;
  const double log_ratio = std::log(a) - std::log(u) - std::log1p(u);  // ln(a / (u + u^2))
  const double bracket = 1.0 + u - std::numbers::pi / std::tan(t) + log_ratio;
  return u - (1.0 + u) * std::log1p(u) -
         std::numbers::pi * std::exp(log_ratio / u) / std::sin(t) * bracket;
}

inline double snr_from_sq(double u, LambertBranch branch) {
  const double z = phi_sq(u);
  double w;
  try {
    w = specfun::lambert_w(branch, z);
  } catch (const DomainError&) {
    throw DomainError("snr_from_x1: phi(x1) = " + std::to_string(z) +
                      " is outside the Lambert branch domain (x1 below the edge point?)");
  }
  const double cot = 1.0 / std::tan(std::numbers::pi / u);
  return std::exp(u * w - u + std::numbers::pi * cot + std::log(u) + std::log1p(u) - 1.0);
}

}  // namespace detail

inline double phi(double x) { return detail::phi_sq(x * x); }

// Left-hand side of the stationarity condition
//   x^2 - (1+x^2) ln(1+x^2)
//     - pi (a/(x^2+x^4))^(1/x^2) csc(pi/x^2) [1 + x^2 - pi cot(pi/x^2) + ln(a/(x^2+x^4))].
inline double stationarity_residual(double x1, Snr a) {
  return detail::stationarity_residual_sq(x1 * x1, a.value());
}

// SNR at which x1 is the optimal mass point on the given Lambert branch.
inline double snr_from_x1(double x1, LambertBranch branch) {
  return detail::snr_from_sq(x1 * x1, branch);
}

struct EdgeConstants {
  double x0_sq;  // branch-switch mass point, squared
  double a0;     // branch-switch SNR
  double xi0;    // ln(a0) + x0_sq

  double x0() const { return std::sqrt(x0_sq); }
};

namespace detail {

inline EdgeConstants compute_edge_constants() {
  auto gap = [](double u) { return phi_sq(u) + specfun::kInvE; };
  const double lo = 1.5 * 1.5;
  const double hi = 10.0 * 10.0;
  const double u0 = lowsnr::detail::bracketed_root(gap, {lo, hi, gap(lo), gap(hi)});
  const double a0 = snr_from_sq(u0, LambertBranch::Lower);
  return {u0, a0, std::log(a0) + u0};
}

}  // namespace detail

// Computed on first use, immutable afterwards.
inline const EdgeConstants& edge_constants() {
  static const EdgeConstants kEdge = detail::compute_edge_constants();
  return kEdge;
}

// x1^2 <= -ln(a) + xi0, valid for a <= a0.
inline double x1_upper_bound(Snr a, const EdgeConstants& edge = edge_constants()) {
  if (a.value() > edge.a0) {
    throw RangeError("x1_upper_bound: only valid for a <= a0 = " + std::to_string(edge.a0));
  }
  return std::sqrt(-std::log(a.value()) + edge.xi0);
}

// Groupings of the nested lower-bound formula. NestedSquareRoot is the one in
// use; the other two are kept for comparison and fail either the ordering
// below the optimum or the Lambert domain on the validated range.
enum class LowerBoundForm {
  NestedSquareRoot,  // y / sqrt(-W_-1(phi(y / sqrt(-ln(-phi(y))))))
  NestedLinear,      // y / sqrt(-W_-1(phi(y / (-ln(-phi(y))))))
  OuterQuotient,     // y / sqrt(-W_-1(phi(y) / (-ln(-phi(y)))))
};

// Lower bound on the optimal mass point, y = sqrt(1 + ln(1/a)). May fall below
// the edge floor x0; see effective_x1_lower_bound.
inline double x1_lower_bound(Snr a, LowerBoundForm form = LowerBoundForm::NestedSquareRoot,
                             const EdgeConstants& edge = edge_constants()) {
  if (a.value() > edge.a0) {
    throw RangeError("x1_lower_bound: only valid for a <= a0 = " + std::to_string(edge.a0));
  }
  const double y_sq = 1.0 - std::log(a.value());
  const double y = std::sqrt(y_sq);
  const double phi_y = detail::phi_sq(y_sq);
  const double log_term = -std::log(-phi_y);
  if (!(log_term > 0.0)) throw DomainError("x1_lower_bound: -ln(-phi(y)) is not positive");

  double arg = 0.0;
  switch (form) {
    case LowerBoundForm::NestedSquareRoot:
      arg = detail::phi_sq(y_sq / log_term);
      break;
    case LowerBoundForm::NestedLinear:
      arg = detail::phi_sq(y_sq / (log_term * log_term));
      break;
    case LowerBoundForm::OuterQuotient:
      arg = phi_y / log_term;
      break;
  }
  double w;
  try {
    w = specfun::lambert_w(LambertBranch::Lower, arg);
  } catch (const DomainError&) {
    throw DomainError("x1_lower_bound: Lambert argument " + std::to_string(arg) +
                      " leaves [-1/e, 0) at a = " + std::to_string(a.value()));
  }
  return y / std::sqrt(-w);
}

// max(x0, x1_lower_bound(a)); where the nested argument has already crossed
// the edge point only the floor x0 remains.
inline double effective_x1_lower_bound(Snr a, const EdgeConstants& edge = edge_constants()) {
  try {
    return std::max(edge.x0(), x1_lower_bound(a, LowerBoundForm::NestedSquareRoot, edge));
  } catch (const DomainError&) {
    return edge.x0();
  }
}

struct OptimumResult {
  double x1;
  double p1;
  LambertBranch branch_used;
  double residual;
};

inline double residual_tolerance(double u) { return 1e-10 * (1.0 + u * std::log1p(u)); }

// Root of the stationarity condition on the branch selected by a.
inline OptimumResult solve_x1(Snr snr) {
  const double a = snr.value();
  if (a > kSnrCeiling) {
    throw RangeError("solve_x1: a = " + std::to_string(a) +
                     " exceeds the validated low-SNR ceiling 0.1");
  }
  const EdgeConstants& edge = edge_constants();
  auto f = [a](double u) { return detail::stationarity_residual_sq(u, a); };

  const bool lower = a <= edge.a0;
  double lo = edge.x0_sq;
  double hi;
  if (lower) {
    hi = -std::log(a) + edge.xi0;
    const double lb = effective_x1_lower_bound(snr, edge);
    lo = std::max(lo, std::min(lb * lb, hi));
  } else {
    hi = edge.x0_sq + 20.0;
  }

  double u;
  const double f_lo = f(lo);
  if (hi - lo <= 1e-12 * lo) {
    u = lo;  // a == a0: the bracket is the edge point itself
  } else {
    double f_hi = f(hi);
    for (int grow = 0; !lowsnr::detail::opposite_signs(f_lo, f_hi) && f_lo != 0.0 && f_hi != 0.0;
         ++grow) {
      if (grow >= 40) {
        throw ConvergenceError("solve_x1: failed to bracket the optimum at a = " +
                               std::to_string(a));
      }
      hi = lo + 2.0 * (hi - lo);
      f_hi = f(hi);
    }
    u = lowsnr::detail::bracketed_root(f, {lo, hi, f_lo, f_hi});
  }

  const double residual = f(u);
  if (!(std::abs(residual) <= residual_tolerance(u))) {
    throw ConvergenceError("solve_x1: residual " + std::to_string(residual) +
                           " above tolerance at a = " + std::to_string(a));
  }
  return {std::sqrt(u), a / u, lower ? LambertBranch::Lower : LambertBranch::Principal,
          residual};
}

struct CapacityBounds {
  double c_lb;
  double c_ub;
};

// c_lb from the mass-point upper bound, c_ub from the (floored) lower bound.
inline CapacityBounds capacity_bounds(Snr a, const EdgeConstants& edge = edge_constants()) {
  if (a.value() > edge.a0) {
    throw RangeError("capacity_bounds: only valid for a <= a0 = " + std::to_string(edge.a0));
  }
  const double floor = edge.x0() * (1.0 + 1e-12);
  double x_low = floor;
  try {
    x_low = std::max(floor, x1_lower_bound(a, LowerBoundForm::NestedSquareRoot, edge));
  } catch (const DomainError&) {
  }
  return {closed_form::capacity_at(a, x1_upper_bound(a, edge)),
          closed_form::capacity_at(a, x_low)};
}

}  // namespace lowsnr::optimizer
