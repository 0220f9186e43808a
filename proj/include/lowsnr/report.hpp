#pragma once

// One SNR grid point with every derived quantity, plus its CSV and key=value
// serializations.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lowsnr/closed_form.hpp"
#include "lowsnr/errors.hpp"
#include "lowsnr/optimizer.hpp"

namespace lowsnr::report {

enum class Units { Nats, Bits };
enum class Spacing { Log, Linear };

struct CapacityRecord {
  double a;
  double x1_opt;
  double p1;
  double capacity_nats;
  double c_linear;
  double delta;
  double penalty_per_snr;
  double x1_lb;
  std::optional<double> x1_ub;  // only for a <= a0
  std::optional<double> c_lb;
  std::optional<double> c_ub;
  double energy_per_nat;
  double per_bit_db;
};

inline CapacityRecord make_record(Snr snr) {
  const auto& edge = optimizer::edge_constants();
  const auto opt = optimizer::solve_x1(snr);
  const double a = snr.value();
  CapacityRecord rec{};
  rec.a = a;
  rec.x1_opt = opt.x1;
  rec.p1 = opt.p1;
  rec.capacity_nats = closed_form::capacity_at(snr, opt.x1);
  rec.c_linear = a;
  rec.delta = closed_form::sublinear_delta(snr, opt.x1);
  rec.penalty_per_snr = closed_form::penalty_per_snr(snr, opt.x1);
  if (a <= edge.a0) {
    rec.x1_lb = optimizer::effective_x1_lower_bound(snr, edge);
    rec.x1_ub = optimizer::x1_upper_bound(snr, edge);
    const auto bounds = optimizer::capacity_bounds(snr, edge);
    rec.c_lb = bounds.c_lb;
    rec.c_ub = bounds.c_ub;
  } else {
    rec.x1_lb = edge.x0();  // the edge floor holds for every a
  }
  const auto energy = closed_form::energy_per_nat(snr, opt.x1);
  rec.energy_per_nat = energy.exact;
  rec.per_bit_db = energy.per_bit_db;
  return rec;
}

// Ascending grid with exact endpoints.
inline std::vector<double> snr_grid(double a_min, double a_max, int points, Spacing spacing) {
  if (!(a_min > 0.0) || !(a_min < a_max) || !(a_max <= optimizer::kSnrCeiling)) {
    throw ConstraintError("SNR grid needs 0 < a_min < a_max <= 0.1");
  }
  if (points < 2) throw ConstraintError("SNR grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double last = points - 1;
  for (int i = 0; i < points; ++i) {
    const double t = i / last;
    grid[i] = spacing == Spacing::Log
                  ? std::exp(std::log(a_min) + t * (std::log(a_max) - std::log(a_min)))
                  : a_min + t * (a_max - a_min);
  }
  grid.front() = a_min;
  grid.back() = a_max;
  return grid;
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

inline std::string csv_header(Units units) {
  return std::string("a,x1_opt,p1,") + (units == Units::Bits ? "capacity_bits" : "capacity_nats") +
         ",c_linear,delta,penalty_per_snr,x1_lb,x1_ub,c_lb,c_ub,energy_per_nat,per_bit_db";
}

// Information-valued columns change unit; everything else is unit-free.
inline CapacityRecord in_units(CapacityRecord rec, Units units) {
  if (units == Units::Nats) return rec;
  constexpr double kLn2 = std::numbers::ln2;
  rec.capacity_nats /= kLn2;
  rec.c_linear /= kLn2;
  rec.delta /= kLn2;
  if (rec.c_lb) *rec.c_lb /= kLn2;
  if (rec.c_ub) *rec.c_ub /= kLn2;
  return rec;
}

inline std::string csv_row(const CapacityRecord& raw, Units units) {
  const CapacityRecord r = in_units(raw, units);
  const std::string fields[] = {
      format_number(r.a),               format_number(r.x1_opt),   format_number(r.p1),
      format_number(r.capacity_nats),   format_number(r.c_linear), format_number(r.delta),
      format_number(r.penalty_per_snr), format_number(r.x1_lb),    format_optional(r.x1_ub),
      format_optional(r.c_lb),          format_optional(r.c_ub),   format_number(r.energy_per_nat),
      format_number(r.per_bit_db)};
  std::string line = fields[0];
  for (std::size_t i = 1; i < std::size(fields); ++i) line += ',' + fields[i];
  return line;
}

inline void write_csv(std::ostream& out, std::span<const CapacityRecord> rows, Units units) {
  out << csv_header(units) << '\n';
  for (const auto& r : rows) out << csv_row(r, units) << '\n';
}

// key=value lines, one per field, in CSV column order.
inline void write_key_values(std::ostream& out, const CapacityRecord& raw, Units units) {
  const CapacityRecord r = in_units(raw, units);
  out << "a=" << format_number(r.a) << '\n'
      << "x1_opt=" << format_number(r.x1_opt) << '\n'
      << "p1=" << format_number(r.p1) << '\n'
      << (units == Units::Bits ? "capacity_bits=" : "capacity_nats=")
      << format_number(r.capacity_nats) << '\n'
      << "c_linear=" << format_number(r.c_linear) << '\n'
      << "delta=" << format_number(r.delta) << '\n'
      << "penalty_per_snr=" << format_number(r.penalty_per_snr) << '\n'
      << "x1_lb=" << format_number(r.x1_lb) << '\n'
      << "x1_ub=" << format_optional(r.x1_ub) << '\n'
      << "c_lb=" << format_optional(r.c_lb) << '\n'
      << "c_ub=" << format_optional(r.c_ub) << '\n'
      << "energy_per_nat=" << format_number(r.energy_per_nat) << '\n'
      << "per_bit_db=" << format_number(r.per_bit_db) << '\n';
}

}  // namespace lowsnr::report
