#pragma once

// Closed-form on-off mutual information and the low-SNR capacity expansion
// with its derived quantities (sub-linear term, non-coherence penalty, energy
// per nat). Everything is in nats.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lowsnr/channel_model.hpp"
#include "lowsnr/errors.hpp"
#include "lowsnr/specfun.hpp"

namespace lowsnr::closed_form {

// Exact mutual information of on-off signaling at amplitude x1 with the power
// constraint active:
//   a - a [ln(1+u)/u + 1/(1+u) + u/(1+u) 2F1(1, 1/u; 1+1/u; -(1+u)(u-a)/a)]
//     - ln(1 - a/u) - ln(1 + a/((1+u)(u-a))),   u = x1^2.
inline double mi_closed_form(double x1, Snr snr) {
  const double a = snr.value();
  if (!(x1 >= std::sqrt(a))) {
    throw DomainError("mi_closed_form: x1 = " + std::to_string(x1) + " is below sqrt(a)");
  }
  const double u = x1 * x1;
  if (u <= a || x1 == std::sqrt(a)) return 0.0;
  const double excess = u - a;
  const double w = (1.0 + u) * excess / a;
  const double hyp = specfun::hyp2f1_1b(1.0 / u, w);
  const double bracket = std::log1p(u) / u + 1.0 / (1.0 + u) + u / (1.0 + u) * hyp;
  const double mi = a - a * bracket - std::log1p(-a / u) - std::log1p(a / ((1.0 + u) * excess));
  return std::max(0.0, mi);
}

namespace detail {

inline double checked_square(Snr snr, double x1, const char* who) {
  const double u = x1 * x1;
  if (!(u > 1.0) || !std::isfinite(u)) {
    throw DomainError(std::string(who) + ": needs x1^2 > 1 (csc(pi/x1^2) pole), got x1 = " +
                      std::to_string(x1));
  }
  if (!(x1 > std::sqrt(snr.value()))) {
    throw DomainError(std::string(who) + ": needs x1 > sqrt(a)");
  }
  return u;
}

// a^(1/u) (u + u^2)^(-1/u) pi csc(pi/u) / (1 + u), formed in log space.
inline double fractional_term(double a, double u) {
  const double scaled = std::exp((std::log(a) - std::log(u) - std::log1p(u)) / u);
  return scaled * std::numbers::pi / std::sin(std::numbers::pi / u) / (1.0 + u);
}

}  // namespace detail

// Non-coherence penalty per SNR, (C_coherent - C) / a with C_coherent ~ a:
//   ln(1+u)/u + a^(1/u) pi csc(pi/u) (u+u^2)^(-1/u) / (1+u).
inline double penalty_per_snr(Snr snr, double x1) {
  const double u = detail::checked_square(snr, x1, "penalty_per_snr");
  return std::log1p(u) / u + detail::fractional_term(snr.value(), u);
}

// Delta(a) = a - C(a, x1).
inline double sublinear_delta(Snr snr, double x1) {
  return snr.value() * penalty_per_snr(snr, x1);
}

// Low-SNR capacity expansion evaluated at mass point x1.
inline double capacity_at(Snr snr, double x1) { return snr.value() - sublinear_delta(snr, x1); }

// Leading terms of the AWGN and coherent-Rayleigh sub-linear gaps.
inline double delta_awgn(double a) {
  if (!(a >= 0.0)) throw DomainError("delta_awgn: a must be >= 0");
  return 0.5 * a * a;
}

inline double delta_coherent(double a, double fourth_moment) {
  if (!(a >= 0.0)) throw DomainError("delta_coherent: a must be >= 0");
  if (!(fourth_moment >= 1.0)) throw DomainError("delta_coherent: E|h|^4 must be >= 1");
  return 0.5 * fourth_moment * a * a;
}

struct PenaltyBreakdown {
  double delta;           // nats
  double delta_awgn;      // nats, leading term
  double delta_coherent;  // nats, leading term
  double penalty_per_snr;
};

// Unit-variance Rayleigh fading has E|h|^4 = 2.
inline PenaltyBreakdown penalty_breakdown(Snr snr, double x1, double fourth_moment = 2.0) {
  const double penalty = penalty_per_snr(snr, x1);
  return {snr.value() * penalty, delta_awgn(snr.value()),
          delta_coherent(snr.value(), fourth_moment), penalty};
}

struct EnergyPerNat {
  double exact;       // E_n / sigma_w^2 = 1 / (1 - Delta/a)
  double approx;      // 1 + Delta/a
  double per_bit_db;  // 10 log10(exact ln 2)
};

inline EnergyPerNat energy_per_nat(Snr snr, double x1) {
  const double ratio = penalty_per_snr(snr, x1);
  if (!(ratio < 1.0)) {
    throw DegenerateError("energy_per_nat: Delta(a)/a = " + std::to_string(ratio) +
                          " >= 1, capacity is not positive");
  }
  const double exact = 1.0 / (1.0 - ratio);
  return {exact, 1.0 + ratio, 10.0 * std::log10(exact * std::numbers::ln2)};
}

}  // namespace lowsnr::closed_form
