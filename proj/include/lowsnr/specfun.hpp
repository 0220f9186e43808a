#pragma once

// Real Lambert W (branches 0 and -1) and the hypergeometric family
// 2F1(1, b; 1+b; -w), w >= 0.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lowsnr/detail/gauss_kronrod.hpp"
#include "lowsnr/errors.hpp"

namespace lowsnr::specfun {

enum class LambertBranch {
  Principal,  // k = 0, w >= -1
  Lower,      // k = -1, w <= -1
};

inline constexpr double kInvE = 0.36787944117144232159552377016146;  // 1/e

// Arguments this close to -1/e are the branch point itself: w = -1 leaves a
// residual below 1e-15, and no double can resolve W any further there.
inline constexpr double kBranchSnap = 1e-15;

inline double lambert_w(LambertBranch branch, double z) {
  if (std::isnan(z)) throw DomainError("lambert_w: NaN argument");
  const double gap = z + kInvE;
  if (gap < -kBranchSnap) {
    throw DomainError("lambert_w: argument " + std::to_string(z) + " is below -1/e");
  }
  if (std::abs(gap) <= kBranchSnap) return -1.0;

  const bool lower = branch == LambertBranch::Lower;
  if (lower && z >= 0.0) {
    throw DomainError("lambert_w: lower branch needs -1/e <= z < 0, got " + std::to_string(z));
  }
  if (!lower) {
    if (z == 0.0) return 0.0;
    if (std::isinf(z)) return z;
  }

  // Initial guesses: branch-point series in p = sqrt(2(ez + 1)), asymptotic
  // log expansions elsewhere.
  double w;
  if (gap < 0.25) {
    const double p = std::sqrt(2.0 * std::numbers::e * gap);
    const double s = lower ? -p : p;
    w = -1.0 + s - s * s / 3.0 + 11.0 / 72.0 * s * s * s;
  } else if (lower) {
    const double l1 = std::log(-z);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  } else if (z < 3.0) {
    w = std::log1p(z);
  } else {
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  // Halley iteration on f(w) = w e^w - z.
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (f == 0.0 || wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    double next = w - step;
    next = lower ? std::min(next, -1.0) : std::max(next, -1.0);
    const bool done = std::abs(next - w) <= 4.0 * kEps * std::max(1.0, std::abs(next));
    w = next;
    if (done) break;
  }
  const double residual = std::abs(w * std::exp(w) - z);
  if (!(residual <= 1e-12 * std::max(1.0, std::abs(z)))) {
    throw ConvergenceError("lambert_w: Halley iteration did not converge for z = " +
                           std::to_string(z));
  }
  return w;
}

namespace detail {

inline void check_hyp_domain(double b, double w) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw DomainError("hyp2f1_1b: b must be a finite positive number, got " + std::to_string(b));
  }
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw DomainError("hyp2f1_1b: w must be finite and >= 0, got " + std::to_string(w));
  }
}

// Pfaff: 2F1(1,b;1+b;-w) = (1+w)^-1 2F1(1,1;1+b;w/(1+w)); the right-hand series
// has positive terms with ratio (n+1)/(n+1+b) * zeta.
inline double pfaff_series(double b, double w) {
  constexpr int kMaxTerms = 100000;
  const double zeta = w / (1.0 + w);
  const double tail_factor = zeta / (1.0 - zeta);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= (n + 1.0) / (n + 1.0 + b) * zeta;
    sum += term;
    if (term * tail_factor <= 1e-17 * sum) return sum / (1.0 + w);
  }
  throw ConvergenceError("hyp2f1_1b: Pfaff series did not converge in 1e5 terms (b = " +
                         std::to_string(b) + ", w = " + std::to_string(w) + ")");
}

// Analytic continuation for w > 1, 0 < b <= 1:
//   F = pi b / sin(pi b) w^-b - (b/w) sum_{k>=0} (-1/w)^k / (k + 1 - b).
// The k = 0 term is folded into the leading part so the 1/(1-b) poles cancel
// analytically near b = 1.
inline double large_argument_expansion(double b, double w) {
  const double eps = 1.0 - b;
  const double log_w = std::log(w);
  const double scale = b / w;
  double leading;
  if (eps >= 0.01) {
    leading = std::numbers::pi * b / std::sin(std::numbers::pi * b) * std::exp(-b * log_w) -
              scale / eps;
  } else {
    // g(eps) = pi eps / sin(pi eps) = 1 + (pi eps)^2/6 + 7 (pi eps)^4/360 + ...
    const double pe2 = std::numbers::pi * std::numbers::pi * eps * eps;
    const double g_minus_one_over_eps =
        eps * std::numbers::pi * std::numbers::pi *
        (1.0 / 6.0 + pe2 * (7.0 / 360.0 + pe2 * (31.0 / 15120.0 + pe2 * 127.0 / 604800.0)));
    const double g = 1.0 + eps * g_minus_one_over_eps;
    const double expm1_over_eps = eps == 0.0 ? log_w : std::expm1(eps * log_w) / eps;
    leading = scale * (g * expm1_over_eps + g_minus_one_over_eps);
  }
  double tail = 0.0;
  double power = 1.0;
  for (int k = 1; k < 10000; ++k) {
    power *= -1.0 / w;
    const double term = power / (k + eps);
    tail += term;
    if (std::abs(term) <= 1e-18 * std::abs(leading / scale)) break;
  }
  return leading - scale * tail;
}

}  // namespace detail

// Series-based evaluation. Valid for b > 0 when w <= 9 and for 0 < b <= 1
// otherwise; throws ConvergenceError outside that regime or when the series
// budget is exhausted.
inline double hyp2f1_1b_series(double b, double w) {
  detail::check_hyp_domain(b, w);
  if (w == 0.0) return 1.0;
  if (w <= 9.0) return detail::pfaff_series(b, w);
  if (b > 1.0) {
    throw ConvergenceError("hyp2f1_1b_series: no series route for b > 1 with w > 9");
  }
  return detail::large_argument_expansion(b, w);
}

// Euler integral b * int_0^1 t^(b-1) / (1 + w t) dt. For b <= 1 the
// substitution s = t^b removes the endpoint singularity.
inline double hyp2f1_1b_integral(double b, double w) {
  detail::check_hyp_domain(b, w);
  if (w == 0.0) return 1.0;
  if (b <= 1.0) {
    const double inv_b = 1.0 / b;
    auto integrand = [w, inv_b](double s) {
      return s <= 0.0 ? 1.0 : 1.0 / (1.0 + w * std::exp(std::log(s) * inv_b));
    };
    // w s^(1/b) crosses 1 at s = w^-b.
    const double knee = std::exp(-b * std::log(w));
    const double mid = (knee > 0.0 && knee < 1.0) ? knee : 0.5;
    const std::array<double, 3> breaks = {0.0, mid, 1.0};
    return lowsnr::detail::integrate_adaptive(integrand, breaks, 0.0, 1e-13, 2000).value;
  }
  auto integrand = [w, b](double t) {
    return t <= 0.0 ? 0.0 : b * std::exp((b - 1.0) * std::log(t)) / (1.0 + w * t);
  };
  const std::array<double, 2> whole = {0.0, 1.0};
  return lowsnr::detail::integrate_adaptive(integrand, whole, 0.0, 1e-13, 2000).value;
}

// 2F1(1, b; 1+b; -w) for b > 0, w >= 0. Result lies in (0, 1].
inline double hyp2f1_1b(double b, double w) {
  detail::check_hyp_domain(b, w);
  if (w == 0.0) return 1.0;
  if (w <= 9.0 || b <= 1.0) {
    try {
      return hyp2f1_1b_series(b, w);
    } catch (const ConvergenceError&) {
      // fall through to the integral representation
    }
  }
  return hyp2f1_1b_integral(b, w);
}

}  // namespace lowsnr::specfun
