#include <catch_amalgamated.hpp>

#include <cmath>

#include "lowsnr/closed_form.hpp"
#include "lowsnr/mi_oracle.hpp"
#include "lowsnr/optimizer.hpp"
#include "lowsnr/verification.hpp"

using namespace lowsnr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("deterministic inputs carry no information", "[mi_oracle]") {
  CHECK(oracle::mutual_information(DiscreteInput({{3.0, 1.0}})) == 0.0);
  const double a = 0.01;
  CHECK(oracle::on_off_mutual_information(Snr{a}, std::sqrt(a)) == 0.0);
}

TEST_CASE("oracle matches frozen high-precision values", "[mi_oracle]") {
  const double v = oracle::mutual_information(DiscreteInput({{0.0, 0.999}, {5.0, 0.001}}));
  CHECK_THAT(v, WithinAbs(0.005692637469519385, 1e-9));
  CHECK_THAT(v, WithinAbs(closed_form::mi_closed_form(5.0, Snr{0.025}), 1e-7));
  CHECK_THAT(oracle::on_off_mutual_information(Snr{1e-4}, 10.0),
             WithinAbs(1.30266777962444870e-5, 1e-10));
}

TEST_CASE("oracle agrees with the closed form on the full grid", "[mi_oracle]") {
  const auto r = verify::oracle_closed_form_agreement(verify::Level::Full);
  INFO(r.detail);
  CHECK(r.passed);
  CHECK(r.worst <= 1e-6);
}

TEST_CASE("oracle is non-negative and order independent", "[mi_oracle]") {
  const auto nn = verify::oracle_non_negativity(verify::Level::Full);
  CHECK(nn.passed);
  const auto perm = verify::oracle_permutation_invariance(verify::Level::Full);
  CHECK(perm.passed);
  CHECK(perm.worst == 0.0);
}

TEST_CASE("oracle is deterministic", "[mi_oracle]") {
  const DiscreteInput in({{0.0, 0.97}, {2.0, 0.02}, {6.0, 0.009}, {15.0, 0.001}});
  CHECK(oracle::mutual_information(in) == oracle::mutual_information(in));
}

TEST_CASE("gradient vanishes at the optimum and rises at the boundary", "[mi_oracle]") {
  const oracle::QuadratureSpec quad{1e-14, 1e-12, 2000};
  for (double a : {1e-5, 1e-3, 1e-2}) {
    const double x1 = optimizer::solve_x1(Snr{a}).x1;
    INFO("a = " << a);
    CHECK(std::abs(oracle::mi_gradient_x1(Snr{a}, x1, quad, 1e-4 * x1)) <= 1e-5);
  }
  const double a = 1e-3;
  const double x_edge = 1.5 * std::sqrt(a);
  CHECK(oracle::mi_gradient_x1(Snr{a}, x_edge, quad, 0.1 * std::sqrt(a)) > 0.0);
}

TEST_CASE("gradient error shrinks quadratically with the step", "[mi_oracle]") {
  const oracle::QuadratureSpec quad{1e-15, 1e-13, 4000};
  const Snr a{1e-2};
  const double x1 = 3.0;
  const double g1 = oracle::mi_gradient_x1(a, x1, quad, 0.2);
  const double g2 = oracle::mi_gradient_x1(a, x1, quad, 0.1);
  const double g4 = oracle::mi_gradient_x1(a, x1, quad, 0.05);
  const double ratio = (g1 - g2) / (g2 - g4);
  CHECK_THAT(ratio, WithinAbs(4.0, 0.2));
}

TEST_CASE("oracle argument checks", "[mi_oracle]") {
  CHECK_THROWS_AS((oracle::QuadratureSpec{0.0, 1e-9, 2000}.validate()), ConstraintError);
  CHECK_THROWS_AS((oracle::QuadratureSpec{1e-10, 1e-9, 5}.validate()), ConstraintError);
  CHECK_THROWS_AS(oracle::mi_gradient_x1(Snr{1e-2}, 2.0, {}, 0.0), DomainError);
  CHECK_THROWS_AS(oracle::mi_gradient_x1(Snr{1e-2}, 0.12, {}, 0.05), DomainError);
  CHECK_THROWS_AS((oracle::mutual_information(DiscreteInput({{0.0, 0.5}, {40.0, 0.5}}),
                                              oracle::QuadratureSpec{1e-15, 1e-15, 10})),
                  ConvergenceError);
}
