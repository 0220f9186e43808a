#pragma once

// Normalized non-coherent Rayleigh channel: given the input amplitude x, the
// output energy y = |r|^2 / sigma_w^2 is exponential with mean 1 + x^2.

#include <algorithm>
#include <cmath>
#include <compare>
#include <span>
#include <string>
#include <vector>

#include "lowsnr/errors.hpp"

namespace lowsnr {

// Average SNR per symbol, a = P sigma_h^2 / sigma_w^2.
class Snr {
 public:
  explicit Snr(double a) : a_(a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw DomainError("SNR must be a finite positive number, got " + std::to_string(a));
    }
  }

  double value() const { return a_; }

  friend auto operator<=>(const Snr&, const Snr&) = default;

 private:
  double a_;
};

struct MassPoint {
  double location;     // normalized amplitude x_i >= 0
  double probability;  // p_i in (0, 1]
};

// Finite input law with strictly increasing locations and unit total mass.
class DiscreteInput {
 public:
  static constexpr double kMassTolerance = 1e-12;

  // Accepts points in any order; they are sorted by location.
  explicit DiscreteInput(std::vector<MassPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw ConstraintError("discrete input needs at least one mass point");
    std::sort(points_.begin(), points_.end(),
              [](const MassPoint& l, const MassPoint& r) { return l.location < r.location; });
    double total = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& pt = points_[i];
      if (!(pt.location >= 0.0) || !std::isfinite(pt.location)) {
        throw ConstraintError("mass point location must be finite and >= 0");
      }
      if (!(pt.probability > 0.0 && pt.probability <= 1.0)) {
        throw ConstraintError("mass point probability must lie in (0, 1], got " +
                              std::to_string(pt.probability));
      }
      if (i > 0 && !(points_[i - 1].location < pt.location)) {
        throw ConstraintError("mass point locations must be distinct");
      }
      total += pt.probability;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      throw ConstraintError("mass point probabilities sum to " + std::to_string(total));
    }
  }

  std::span<const MassPoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  double max_location() const { return points_.back().location; }

 private:
  std::vector<MassPoint> points_;
};

// On-off signaling: amplitude x1 with probability p1, silence otherwise.
struct OnOffInput {
  double x1 = 0.0;
  double p1 = 0.0;

  double p0() const { return 1.0 - p1; }

  // Zero-mass points are dropped, so p1 = 1 collapses to a single point.
  DiscreteInput to_discrete() const {
    std::vector<MassPoint> pts;
    if (p1 < 1.0) pts.push_back({0.0, 1.0 - p1});
    if (p1 > 0.0) pts.push_back({x1, p1});
    return DiscreteInput(std::move(pts));
  }
};

namespace channel {

inline double conditional_density(double y, double x) {
  const double mean = 1.0 + x * x;
  return std::exp(-y / mean) / mean;
}

inline double log_conditional_density(double y, double x) {
  const double mean = 1.0 + x * x;
  return -y / mean - std::log(mean);
}

// Active power constraint p1 x1^2 = a.
inline OnOffInput on_off_from_snr(Snr a, double x1) {
  if (!(x1 >= std::sqrt(a.value()))) {
    throw ConstraintError("on_off_from_snr: x1 = " + std::to_string(x1) +
                          " is below sqrt(a); p1 would exceed 1");
  }
  // x1 = sqrt(a) is the boundary even when x1 * x1 rounds above a.
  if (x1 == std::sqrt(a.value())) return OnOffInput{x1, 1.0};
  return OnOffInput{x1, std::min(1.0, a.value() / (x1 * x1))};
}

}  // namespace channel
}  // namespace lowsnr
