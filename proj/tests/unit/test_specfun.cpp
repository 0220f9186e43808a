#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lowsnr/errors.hpp"
#include "lowsnr/specfun.hpp"

using lowsnr::specfun::LambertBranch;
using lowsnr::specfun::hyp2f1_1b;
using lowsnr::specfun::kInvE;
using lowsnr::specfun::lambert_w;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Plain bisection on w e^w - z over a bracket where it is monotone.
double bisect_w(double z, double lo, double hi) {
  auto f = [z](double w) { return w * std::exp(w) - z; };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < 0.0) == (f(lo) < 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Composite Simpson of b * int_0^1 t^(b-1) / (1 + w t) dt after t = s^(1/b).
double euler_integral_simpson(double b, double w, int intervals) {
  auto g = [b, w](double s) { return 1.0 / (1.0 + w * std::pow(s, 1.0 / b)); };
  const double h = 1.0 / intervals;
  double sum = g(0.0) + g(1.0);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(i * h);
  return sum * h / 3.0;
}

double residual(double w, double z) { return std::abs(w * std::exp(w) - z); }

}  // namespace

TEST_CASE("lambert_w reference values", "[specfun]") {
  CHECK(lambert_w(LambertBranch::Principal, 0.0) == 0.0);
  CHECK_THAT(lambert_w(LambertBranch::Lower, -kInvE), WithinAbs(-1.0, 1e-12));
  CHECK_THAT(lambert_w(LambertBranch::Principal, std::numbers::e), WithinAbs(1.0, 1e-15));

  const double w = lambert_w(LambertBranch::Lower, -0.1);
  CHECK(w <= -1.0);
  CHECK_THAT(w, WithinRel(bisect_w(-0.1, -50.0, -1.0), 1e-13));
  CHECK_THAT(w, WithinRel(-3.57715206395729714, 1e-14));  // 30-digit reference
  CHECK_THAT(lambert_w(LambertBranch::Principal, -0.1), WithinRel(bisect_w(-0.1, -1.0, 0.0), 1e-13));
}

TEST_CASE("lambert_w defining identity on random arguments", "[specfun]") {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> decade(-12.0, 12.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const bool lower = i % 2 == 1;
    double z;
    if (lower) {
      // half uniform on [-1/e, 0), half log-spaced towards 0
      z = i % 4 == 1 ? -kInvE * (1.0 - unit(rng)) : -kInvE * std::pow(10.0, -std::abs(decade(rng)));
    } else {
      z = i % 4 == 0 ? -kInvE + (kInvE + 1.0) * unit(rng) : std::pow(10.0, decade(rng));
    }
    const double w = lambert_w(lower ? LambertBranch::Lower : LambertBranch::Principal, z);
    if (lower) {
      REQUIRE(w <= -1.0);
    } else {
      REQUIRE(w >= -1.0);
    }
    worst = std::max(worst, residual(w, z) / std::max(1.0, std::abs(z)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("lambert_w branches meet at -1/e", "[specfun]") {
  CHECK_THAT(lambert_w(LambertBranch::Principal, -kInvE), WithinAbs(-1.0, 1e-9));
  CHECK_THAT(lambert_w(LambertBranch::Lower, -kInvE), WithinAbs(-1.0, 1e-9));
  // Just inside the domain the branches separate symmetrically, ~ -1 -/+ sqrt(2 e d).
  const double d = 1e-10;
  const double p = lambert_w(LambertBranch::Principal, -kInvE + d);
  const double l = lambert_w(LambertBranch::Lower, -kInvE + d);
  CHECK(p > -1.0);
  CHECK(l < -1.0);
  CHECK_THAT(p + 1.0, WithinRel(-(l + 1.0), 1e-4));
  CHECK_THAT(p + 1.0, WithinRel(std::sqrt(2.0 * std::numbers::e * d), 1e-4));
}

TEST_CASE("lambert_w rejects arguments outside the real domain", "[specfun]") {
  CHECK_THROWS_AS(lambert_w(LambertBranch::Principal, -0.4), lowsnr::DomainError);
  CHECK_THROWS_AS(lambert_w(LambertBranch::Lower, -0.4), lowsnr::DomainError);
  CHECK_THROWS_AS(lambert_w(LambertBranch::Lower, 0.0), lowsnr::DomainError);
  CHECK_THROWS_AS(lambert_w(LambertBranch::Lower, 0.5), lowsnr::DomainError);
  CHECK_THROWS_AS(lambert_w(LambertBranch::Principal, std::nan("")), lowsnr::DomainError);
}

TEST_CASE("hyp2f1_1b reference values", "[specfun]") {
  CHECK(hyp2f1_1b(0.3, 0.0) == 1.0);
  CHECK_THAT(hyp2f1_1b(1.0, 3.0), WithinRel(std::log(4.0) / 3.0, 1e-12));
  CHECK_THAT(hyp2f1_1b(0.5, 1.0), WithinRel(std::numbers::pi / 4.0, 1e-12));

  const double v = hyp2f1_1b(0.25, 100.0);
  CHECK_THAT(v, WithinRel(euler_integral_simpson(0.25, 100.0, 200000), 1e-10));
  CHECK_THAT(v, WithinRel(0.347921598685344411, 1e-12));  // 30-digit reference
}

TEST_CASE("hyp2f1_1b series and integral routes agree", "[specfun]") {
  using lowsnr::specfun::hyp2f1_1b_integral;
  using lowsnr::specfun::hyp2f1_1b_series;
  double worst = 0.0;
  for (double b : {0.02, 0.05, 0.1, 0.2, 0.25, 0.3, 0.5, 0.7, 0.9, 0.999, 1.0}) {
    for (int k = 0; k <= 56; ++k) {
      const double w = std::pow(10.0, -6.0 + 14.0 * k / 56.0);
      const double s = hyp2f1_1b_series(b, w);
      const double q = hyp2f1_1b_integral(b, w);
      worst = std::max(worst, std::abs(s - q) / std::abs(q));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("hyp2f1_1b is decreasing in w and stays in (0, 1]", "[specfun]") {
  for (double b : {0.05, 0.25, 0.5, 1.0}) {
    double prev = hyp2f1_1b(b, 0.0);
    CHECK(prev == 1.0);
    for (int k = 0; k <= 80; ++k) {
      const double w = std::pow(10.0, -6.0 + 14.0 * k / 80.0);
      const double v = hyp2f1_1b(b, w);
      INFO("b = " << b << ", w = " << w);
      REQUIRE(v < prev);
      REQUIRE(v > 0.0);
      prev = v;
    }
  }
}

TEST_CASE("hyp2f1_1b rejects invalid parameters", "[specfun]") {
  CHECK_THROWS_AS(hyp2f1_1b(0.0, 1.0), lowsnr::DomainError);
  CHECK_THROWS_AS(hyp2f1_1b(-0.5, 1.0), lowsnr::DomainError);
  CHECK_THROWS_AS(hyp2f1_1b(0.5, -1e-3), lowsnr::DomainError);
  CHECK_THROWS_AS(hyp2f1_1b(0.5, INFINITY), lowsnr::DomainError);
}

TEST_CASE("hyp2f1_1b covers b above 1 for sub-unit amplitudes", "[specfun]") {
  // 2F1(1, 2; 3; -w) = 2 (w - ln(1+w)) / w^2
  for (double w : {0.5, 3.0, 50.0, 1e4}) {
    CHECK_THAT(hyp2f1_1b(2.0, w), WithinRel(2.0 * (w - std::log1p(w)) / (w * w), 1e-10));
  }
}
