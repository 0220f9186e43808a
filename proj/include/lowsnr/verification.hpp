#pragma once

// Property grids cross-checking the closed forms and the optimizer against the
// quadrature oracle. Shared by the `verify` subcommand and the test suites.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "lowsnr/channel_model.hpp"
#include "lowsnr/closed_form.hpp"
#include "lowsnr/mi_oracle.hpp"
#include "lowsnr/optimizer.hpp"

namespace lowsnr::verify {

enum class Level { Quick, Full };

using CapacityFn = std::function<double(Snr, double)>;

struct Options {
  Level level = Level::Quick;
  // Capacity expansion under test; swapped out by mutation fixtures.
  CapacityFn capacity = [](Snr a, double x1) { return closed_form::capacity_at(a, x1); };
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // worst observed value of the checked quantity
  double limit = 0.0;
  std::string detail;
};

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

inline std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Runs a check and turns any library exception into a failed property.
template <class Body>
PropertyResult guarded(std::string name, double limit, Body&& body) {
  PropertyResult r;
  r.name = std::move(name);
  r.limit = limit;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace detail

// |Eq. closed form - quadrature| over the (a, x1) agreement grid.
inline PropertyResult oracle_closed_form_agreement(Level level) {
  return detail::guarded("oracle.closed_form_agreement", 1e-6, [&](PropertyResult& r) {
    std::vector<double> snrs = {1e-5, 1e-4, 1e-3, 1e-2, 0.05};
    std::vector<double> points = {-1.0, 2.0, 3.0, 5.0, 10.0, 20.0};  // -1: 1.05 sqrt(a)
    if (level == Level::Quick) {
      snrs = {1e-4, 1e-2};
      points = {-1.0, 2.0, 5.0, 20.0};
    }
    double worst = 0.0;
    int count = 0;
    for (double a : snrs) {
      for (double x : points) {
        const double x1 = x < 0.0 ? 1.05 * std::sqrt(a) : x;
        const double quad = oracle::on_off_mutual_information(Snr{a}, x1);
        const double closed = closed_form::mi_closed_form(x1, Snr{a});
        const double diff = std::abs(quad - closed);
        if (diff > worst) {
          worst = diff;
          r.detail = detail::fmt("worst at a=%g", a) + detail::fmt(", x1=%g", x1);
        }
        ++count;
      }
    }
    r.worst = worst;
    r.passed = worst <= r.limit;
    r.detail += ", " + std::to_string(count) + " points";
  });
}

inline PropertyResult oracle_non_negativity(Level level) {
  return detail::guarded("oracle.non_negativity", oracle::QuadratureSpec{}.abs_tol,
                         [&](PropertyResult& r) {
    std::vector<DiscreteInput> inputs;
    for (double a : {1e-6, 1e-3, 0.1}) {
      for (double x1 : {0.5, 2.0, 8.0}) {
        if (x1 > std::sqrt(a)) inputs.push_back(channel::on_off_from_snr(Snr{a}, x1).to_discrete());
      }
    }
    inputs.push_back(DiscreteInput({{0.0, 0.5}, {1.0, 0.3}, {4.0, 0.2}}));
    if (level == Level::Full) {
      inputs.push_back(DiscreteInput({{0.0, 0.97}, {2.0, 0.02}, {6.0, 0.009}, {15.0, 0.001}}));
      inputs.push_back(DiscreteInput({{0.3, 0.25}, {0.6, 0.25}, {0.9, 0.25}, {1.2, 0.25}}));
    }
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& in : inputs) lowest = std::min(lowest, oracle::mutual_information(in));
    r.worst = lowest;
    r.passed = lowest >= -r.limit;
    r.detail = std::to_string(inputs.size()) + " inputs, smallest value reported";
  });
}

inline PropertyResult oracle_permutation_invariance(Level) {
  return detail::guarded("oracle.permutation_invariance", 0.0, [&](PropertyResult& r) {
    std::vector<MassPoint> pts = {{0.0, 0.6}, {1.5, 0.3}, {5.0, 0.1}};
    std::sort(pts.begin(), pts.end(),
              [](const MassPoint& l, const MassPoint& x) { return l.location < x.location; });
    const double ref = oracle::mutual_information(DiscreteInput(pts));
    double worst = 0.0;
    int perms = 0;
    do {
      worst = std::max(worst, std::abs(oracle::mutual_information(DiscreteInput(pts)) - ref));
      ++perms;
    } while (std::next_permutation(pts.begin(), pts.end(), [](const MassPoint& l, const MassPoint& x) {
      return l.location < x.location;
    }));
    r.worst = worst;
    r.passed = worst <= r.limit;
    r.detail = std::to_string(perms) + " orderings";
  });
}

// Capacity expansion vs exact on-off MI at the optimum, relative to a.
inline PropertyResult expansion_vs_exact(Level level, const CapacityFn& capacity) {
  return detail::guarded("closed_form.expansion_vs_exact", 1e-4, [&](PropertyResult& r) {
    const auto grid = detail::log_grid(1e-6, 0.02, level == Level::Full ? 25 : 6);
    double worst = 0.0;
    for (double a : grid) {
      const Snr snr{a};
      const double x1 = optimizer::solve_x1(snr).x1;
      const double gap = std::abs(capacity(snr, x1) - closed_form::mi_closed_form(x1, snr)) / a;
      if (gap > worst) {
        worst = gap;
        r.detail = detail::fmt("worst |C - I|/a at a=%g", a);
      }
    }
    r.worst = worst;
    r.passed = worst <= r.limit;
  });
}

// a = C + Delta and Delta = a * penalty, to a few ulps of a.
inline PropertyResult identity_chain(Level level, const CapacityFn& capacity) {
  return detail::guarded("closed_form.identity_chain", 8.0 * std::numeric_limits<double>::epsilon(),
                         [&](PropertyResult& r) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> log_a(std::log(1e-8), std::log(0.1));
    std::uniform_real_distribution<double> x_dist(1.05, 12.0);
    const int n = level == Level::Full ? 500 : 50;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const Snr a{std::exp(log_a(rng))};
      const double x1 = x_dist(rng);
      const double c = capacity(a, x1);
      const double d = closed_form::sublinear_delta(a, x1);
      const double pen = closed_form::penalty_per_snr(a, x1);
      worst = std::max({worst, std::abs(a.value() - c - d) / a.value(),
                        std::abs(pen * a.value() - d) / a.value()});
    }
    r.worst = worst;
    r.passed = worst <= r.limit;
    r.detail = std::to_string(n) + " random (a, x1), relative to a";
  });
}

inline PropertyResult positivity(Level level) {
  return detail::guarded("closed_form.positivity", 0.0, [&](PropertyResult& r) {
    const auto snrs = detail::log_grid(1e-8, 0.1, level == Level::Full ? 30 : 8);
    double lowest = std::numeric_limits<double>::infinity();
    for (double a : snrs) {
      for (double x1 : {1.05 * std::sqrt(a), 1.2, 2.0, 3.5, 7.0, 25.0}) {
        if (!(x1 > std::sqrt(a))) continue;
        lowest = std::min(lowest, closed_form::mi_closed_form(x1, Snr{a}));
        if (x1 * x1 > 1.0) lowest = std::min(lowest, closed_form::sublinear_delta(Snr{a}, x1));
      }
    }
    r.worst = lowest;
    r.passed = lowest >= r.limit;
    r.detail = "smallest closed-form MI or Delta";
  });
}

inline PropertyResult stationarity(Level level) {
  return detail::guarded("optimizer.stationarity", 1e-5, [&](PropertyResult& r) {
    std::vector<double> snrs = {1e-5, 1e-3, 1e-2};
    if (level == Level::Quick) snrs = {1e-3};
    const oracle::QuadratureSpec quad{1e-14, 1e-12, 2000};
    double worst = 0.0;
    for (double a : snrs) {
      const double x1 = optimizer::solve_x1(Snr{a}).x1;
      const double g = oracle::mi_gradient_x1(Snr{a}, x1, quad, 1e-4 * x1);
      if (std::abs(g) >= worst) {
        worst = std::abs(g);
        r.detail = detail::fmt("worst |dI/dx1| at a=%g", a);
      }
    }
    r.worst = worst;
    r.passed = worst <= r.limit;
  });
}

inline PropertyResult branch_monotonicity(Level level) {
  return detail::guarded("optimizer.branch_monotonicity", 1e-2, [&](PropertyResult& r) {
    const auto& edge = optimizer::edge_constants();
    const int n = level == Level::Full ? 200 : 40;
    const double lo = edge.x0_sq + 1e-6;
    const double hi = 60.0;
    bool ok = true;
    double prev_lower = 0.0;
    double prev_principal = 0.0;
    double edge_gap = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x1 = std::sqrt(lo + (hi - lo) * i / (n - 1));
      const double al = optimizer::snr_from_x1(x1, optimizer::LambertBranch::Lower);
      const double ap = optimizer::snr_from_x1(x1, optimizer::LambertBranch::Principal);
      if (i == 0) {
        edge_gap = std::max(std::abs(al - edge.a0), std::abs(ap - edge.a0)) / edge.a0;
      } else if (!(al < prev_lower) || !(ap > prev_principal)) {
        ok = false;
        r.detail = detail::fmt("monotonicity broken at x1=%g; ", x1);
      }
      prev_lower = al;
      prev_principal = ap;
    }
    r.worst = edge_gap;
    r.passed = ok && edge_gap <= r.limit;
    r.detail += std::to_string(n) + "-point grids; worst = relative distance to a0 next to the edge";
  });
}

inline PropertyResult floor_property(Level level) {
  return detail::guarded("optimizer.floor", 1e-9, [&](PropertyResult& r) {
    const auto& edge = optimizer::edge_constants();
    const auto grid = detail::log_grid(1e-10, 0.1, level == Level::Full ? 80 : 15);
    double worst = -std::numeric_limits<double>::infinity();
    for (double a : grid) {
      const double u = std::pow(optimizer::solve_x1(Snr{a}).x1, 2);
      worst = std::max(worst, edge.x0_sq - u);
    }
    r.worst = worst;
    r.passed = worst <= r.limit;
    r.detail = "largest x0^2 - x1^2";
  });
}

inline PropertyResult divergence(Level) {
  return detail::guarded("optimizer.divergence", 0.0, [&](PropertyResult& r) {
    double prev_u = 0.0;
    double prev_scaled = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (int k = 2; k <= 8; ++k) {
      const double a = std::pow(10.0, -k);
      const double u = std::pow(optimizer::solve_x1(Snr{a}).x1, 2);
      const double scaled = std::sqrt(a) * u;
      if (!(u > prev_u) || !(scaled < prev_scaled)) {
        ok = false;
        r.detail = detail::fmt("broken at a=%g", a);
      }
      prev_u = u;
      prev_scaled = scaled;
    }
    r.worst = prev_scaled;
    r.passed = ok;
    if (ok) r.detail = "x1^2 increasing and sqrt(a) x1^2 decreasing over a = 1e-2..1e-8";
  });
}

inline PropertyResult u_shape(Level level) {
  return detail::guarded("optimizer.u_shape", 1e-2, [&](PropertyResult& r) {
    const auto& edge = optimizer::edge_constants();
    const auto grid = detail::log_grid(1e-4, 0.1, level == Level::Full ? 60 : 30);
    std::size_t arg_min = 0;
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x1 = optimizer::solve_x1(Snr{grid[i]}).x1;
      if (x1 < best) {
        best = x1;
        arg_min = i;
      }
      if (std::abs(std::log(grid[i] / edge.a0)) < std::abs(std::log(grid[nearest] / edge.a0))) {
        nearest = i;
      }
    }
    r.worst = std::abs(best - edge.x0());
    r.passed = arg_min == nearest && r.worst <= r.limit;
    r.detail = detail::fmt("minimum at a=%g", grid[arg_min]) +
               detail::fmt(", grid point nearest a0 is %g", grid[nearest]);
  });
}

inline PropertyResult residual_lambert_equivalence(Level level) {
  return detail::guarded("optimizer.residual_lambert_equivalence", 1e-8, [&](PropertyResult& r) {
    const auto& edge = optimizer::edge_constants();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u_dist(std::nextafter(edge.x0_sq, 100.0), 40.0);
    const int n = level == Level::Full ? 50 : 10;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x1 = std::sqrt(u_dist(rng));
      for (auto branch : {optimizer::LambertBranch::Lower, optimizer::LambertBranch::Principal}) {
        const double a = optimizer::snr_from_x1(x1, branch);
        worst = std::max(worst, std::abs(optimizer::stationarity_residual(x1, Snr{a})));
      }
    }
    r.worst = worst;
    r.passed = worst <= r.limit;
    r.detail = std::to_string(n) + " random x1^2 in (x0^2, 40], both branches";
  });
}

inline std::vector<PropertyResult> run(const Options& opts) {
  const Level lv = opts.level;
  return {oracle_closed_form_agreement(lv),
          oracle_non_negativity(lv),
          oracle_permutation_invariance(lv),
          expansion_vs_exact(lv, opts.capacity),
          identity_chain(lv, opts.capacity),
          positivity(lv),
          stationarity(lv),
          branch_monotonicity(lv),
          floor_property(lv),
          divergence(lv),
          u_shape(lv),
          residual_lambert_equivalence(lv)};
}

inline bool all_passed(const std::vector<PropertyResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const PropertyResult& r) { return r.passed; });
}

inline void print_table(std::ostream& out, const std::vector<PropertyResult>& results) {
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s  %-40s worst=%-12.4g limit=%-10.3g ",
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.worst, r.limit);
    out << line << r.detail << '\n';
  }
}

}  // namespace lowsnr::verify
