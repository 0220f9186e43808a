#pragma once

// Brute-force mutual information of a finite input over the channel law, by
// direct adaptive integration over the output energy y. Shares no code with
// the closed forms it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lowsnr/channel_model.hpp"
#include "lowsnr/detail/gauss_kronrod.hpp"
#include "lowsnr/errors.hpp"

namespace lowsnr::oracle {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 10) {
      throw ConstraintError("QuadratureSpec needs abs_tol > 0, rel_tol > 0, max_subdivisions >= 10");
    }
  }
};

namespace detail {

struct Component {
  double log_p;
  double p;
  double mean;  // 1 + x^2
  double log_mean;
};

// sum_i p_i f_i(y) ln(f_i(y) / sum_j p_j f_j(y)), with the mixture formed by a
// max-shifted log-sum-exp.
class MiIntegrand {
 public:
  explicit MiIntegrand(const DiscreteInput& input) {
    for (const auto& pt : input.points()) {
      const double mean = 1.0 + pt.location * pt.location;
      comps_.push_back({std::log(pt.probability), pt.probability, mean, std::log(mean)});
    }
    log_f_.resize(comps_.size());
  }

  double operator()(double y) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      log_f_[i] = -y / comps_[i].mean - comps_[i].log_mean;
      peak = std::max(peak, comps_[i].log_p + log_f_[i]);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      acc += std::exp(comps_[i].log_p + log_f_[i] - peak);
    }
    const double log_mix = peak + std::log(acc);
    double sum = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const double f = std::exp(log_f_[i]);
      if (f == 0.0) continue;  // t ln t -> 0
      sum += comps_[i].p * f * (log_f_[i] - log_mix);
    }
    return sum;
  }

  const std::vector<Component>& components() const { return comps_; }

 private:
  std::vector<Component> comps_;
  std::vector<double> log_f_;
};

// Upper bound on int_Y^inf |integrand| dy, using |ln(f_i/m)| <= -ln p_min + y + ln s_max.
inline double tail_bound(const std::vector<Component>& comps, double y) {
  double log_p_min = 0.0;
  double log_s_max = 0.0;
  for (const auto& c : comps) {
    log_p_min = std::min(log_p_min, c.log_p);
    log_s_max = std::max(log_s_max, c.log_mean);
  }
  double bound = 0.0;
  for (const auto& c : comps) {
    const double decay = std::exp(-y / c.mean);
    bound += c.p * ((-log_p_min + log_s_max) * decay + (y + c.mean) * decay);
  }
  return bound;
}

}  // namespace detail

// I(X;Y) in nats for a finite input law.
inline double mutual_information(const DiscreteInput& input, const QuadratureSpec& quad = {}) {
  quad.validate();
  if (input.size() == 1) return 0.0;

  detail::MiIntegrand integrand(input);
  const double x_max = input.max_location();
  const double cutoff = 50.0 * (1.0 + x_max * x_max);

  std::vector<double> breaks = {0.0, cutoff};
  for (const auto& c : integrand.components()) {
    for (double knot : {c.mean, 10.0 * c.mean}) {
      if (knot < cutoff) breaks.push_back(knot);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double total = lowsnr::detail::integrate_adaptive(integrand, breaks, quad.abs_tol,
                                                    quad.rel_tol, quad.max_subdivisions)
                     .value;

  double edge = cutoff;
  for (int doubling = 0; detail::tail_bound(integrand.components(), edge) > quad.abs_tol;
       ++doubling) {
    if (doubling >= 64) throw ConvergenceError("mutual_information: tail did not decay");
    const std::array<double, 2> span = {edge, 2.0 * edge};
    total += lowsnr::detail::integrate_adaptive(integrand, span, quad.abs_tol, quad.rel_tol,
                                                quad.max_subdivisions)
                 .value;
    edge *= 2.0;
  }
  return total;
}

// On-off input with the power constraint active (p1 = a / x1^2).
inline double on_off_mutual_information(Snr a, double x1, const QuadratureSpec& quad = {}) {
  return mutual_information(channel::on_off_from_snr(a, x1).to_discrete(), quad);
}

// Central difference of the on-off mutual information in x1.
inline double mi_gradient_x1(Snr a, double x1, const QuadratureSpec& quad, double h) {
  if (!(h > 0.0)) throw DomainError("mi_gradient_x1: step must be positive");
  if (!(x1 - h > std::sqrt(a.value()))) {
    throw DomainError("mi_gradient_x1: x1 - h must exceed sqrt(a)");
  }
  const double up = on_off_mutual_information(a, x1 + h, quad);
  const double down = on_off_mutual_information(a, x1 - h, quad);
  return (up - down) / (2.0 * h);
}

}  // namespace lowsnr::oracle
