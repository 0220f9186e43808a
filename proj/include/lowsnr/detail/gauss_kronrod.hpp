#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "lowsnr/errors.hpp"

namespace lowsnr::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
// Returns the Kronrod value and the QUADPACK error estimate.
template <class F>
Segment gauss_kronrod_15(F& f, double lo, double hi) {
  static constexpr std::array<double, 8> kXgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> kWgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> kWg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_center = f(center);
  double result_gauss = f_center * kWg[3];
  double result_kronrod = f_center * kWgk[7];
  double result_abs = std::abs(result_kronrod);
  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fl = f(center - dx);
    const double fr = f(center + dx);
    f_left[j] = fl;
    f_right[j] = fr;
    result_kronrod += kWgk[j] * (fl + fr);
    result_abs += kWgk[j] * (std::abs(fl) + std::abs(fr));
    if (j % 2 == 1) result_gauss += kWg[j / 2] * (fl + fr);
  }
  const double mean = 0.5 * result_kronrod;
  double result_asc = kWgk[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j) {
    result_asc += kWgk[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }
  const double scale = std::abs(half);
  result_asc *= scale;
  result_abs *= scale;
  double err = std::abs((result_kronrod - result_gauss) * half);
  if (result_asc != 0.0 && err != 0.0) {
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kTiny = std::numeric_limits<double>::min();
  if (result_abs > kTiny / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * result_abs, err);
  }
  return {lo, hi, result_kronrod * half, err};
}

// Globally adaptive Gauss-Kronrod integration over [breaks.front(), breaks.back()].
// The interval with the largest error estimate is bisected first; ties are
// broken by position so the subdivision order is fully deterministic.
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breaks, double abs_tol,
                                    double rel_tol, int max_subdivisions) {
  auto by_error = [](const Segment& x, const Segment& y) {
    if (x.error != y.error) return x.error < y.error;
    return x.lo > y.lo;
  };
  std::priority_queue<Segment, std::vector<Segment>, decltype(by_error)> heap(by_error);
  double total = 0.0;
  double total_err = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) continue;
    Segment s = gauss_kronrod_15(f, breaks[i], breaks[i + 1]);
    total += s.value;
    total_err += s.error;
    heap.push(s);
    ++count;
  }
  auto converged = [&] { return total_err <= std::max(abs_tol, rel_tol * std::abs(total)); };
  while (!converged()) {
    if (count >= max_subdivisions) {
      throw ConvergenceError("adaptive quadrature exhausted " + std::to_string(max_subdivisions) +
                             " subdivisions (error estimate " + std::to_string(total_err) + ")");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) {
      throw ConvergenceError("adaptive quadrature cannot bisect further near " +
                             std::to_string(worst.lo));
    }
    const Segment left = gauss_kronrod_15(f, worst.lo, mid);
    const Segment right = gauss_kronrod_15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  // Re-sum in position order so the result does not depend on accumulated
  // cancellation in the running totals.
  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  QuadratureResult out;
  for (const auto& s : segments) {
    out.value += s.value;
    out.error += s.error;
  }
  out.subdivisions = count;
  return out;
}

}  // namespace lowsnr::detail
