#pragma once

// lowsnr-cap command-line front end. Exit codes: 0 success, 1 verification
// failure, 2 argument error, 3 I/O error, 4 numerical non-convergence.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lowsnr/optimizer.hpp"
#include "lowsnr/report.hpp"
#include "lowsnr/verification.hpp"

namespace lowsnr::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kBadArgs = 2,
  kIoError = 3,
  kNoConvergence = 4,
};

struct Hooks {
  verify::CapacityFn capacity = verify::Options{}.capacity;
};

inline report::Units parse_units(const std::string& s) {
  return s == "bits" ? report::Units::Bits : report::Units::Nats;
}

inline int cmd_sweep(double a_min, double a_max, int points, const std::string& spacing,
                     const std::string& units, const std::string& out_path) {
  std::vector<double> grid;
  try {
    grid = report::snr_grid(a_min, a_max, points,
                            spacing == "linear" ? report::Spacing::Linear : report::Spacing::Log);
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << '\n';
    return kBadArgs;
  }

  std::vector<report::CapacityRecord> rows;
  rows.reserve(grid.size());
  try {
    for (double a : grid) rows.push_back(report::make_record(Snr{a}));
  } catch (const std::exception& e) {
    std::cerr << "sweep: grid point failed: " << e.what() << '\n';
    return kNoConvergence;
  }

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "sweep: cannot open " << out_path << " for writing\n";
    return kIoError;
  }
  report::write_csv(out, rows, parse_units(units));
  out.close();
  if (!out) {
    std::error_code ec;
    std::filesystem::remove(out_path, ec);
    std::cerr << "sweep: write to " << out_path << " failed\n";
    return kIoError;
  }
  return kOk;
}

inline int cmd_point(double a, const std::string& units) {
  if (!(a > 0.0) || !(a <= optimizer::kSnrCeiling)) {
    std::cerr << "point: a = " << a
              << " is outside (0, 0.1]; 0.1 is the validated low-SNR ceiling\n";
    return kBadArgs;
  }
  try {
    report::write_key_values(std::cout, report::make_record(Snr{a}), parse_units(units));
  } catch (const std::exception& e) {
    std::cerr << "point: " << e.what() << '\n';
    return kNoConvergence;
  }
  return kOk;
}

inline int cmd_constants() {
  try {
    const auto& edge = optimizer::edge_constants();
    std::cout << "x0_sq=" << report::format_number(edge.x0_sq) << '\n'
              << "a0=" << report::format_number(edge.a0) << '\n'
              << "xi0=" << report::format_number(edge.xi0) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "constants: " << e.what() << '\n';
    return kNoConvergence;
  }
  return kOk;
}

inline int cmd_verify(const std::string& level, const Hooks& hooks) {
  verify::Options opts;
  opts.level = level == "full" ? verify::Level::Full : verify::Level::Quick;
  opts.capacity = hooks.capacity;
  const auto results = verify::run(opts);
  verify::print_table(std::cout, results);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  std::cout << "verify (" << level << "): " << passed << "/" << results.size()
            << " properties passed\n";
  return passed == results.size() ? kOk : kVerifyFailed;
}

inline int run(int argc, char** argv, const Hooks& hooks = {}) {
  CLI::App app{"Low-SNR capacity of the non-coherent memoryless Rayleigh fading channel",
               "lowsnr-cap"};
  app.require_subcommand(1);

  double a_min = 0.0;
  double a_max = 0.0;
  int points = 0;
  std::string spacing = "log";
  std::string units = "nats";
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "Write one CSV row per SNR grid point");
  sweep->add_option("--a-min", a_min, "Smallest SNR")->required();
  sweep->add_option("--a-max", a_max, "Largest SNR (<= 0.1)")->required();
  sweep->add_option("--points", points, "Number of grid points (>= 2)")->required();
  sweep->add_option("--spacing", spacing, "Grid spacing")
      ->check(CLI::IsMember({"log", "linear"}));
  sweep->add_option("--units", units, "Information units")->check(CLI::IsMember({"nats", "bits"}));
  sweep->add_option("--out", out_path, "Output CSV path")->required();

  double a_point = 0.0;
  std::string point_units = "nats";
  auto* point = app.add_subcommand("point", "Print every quantity at one SNR");
  point->add_option("--a", a_point, "SNR")->required();
  point->add_option("--units", point_units, "Information units")
      ->check(CLI::IsMember({"nats", "bits"}));

  auto* constants = app.add_subcommand("constants", "Print the branch-switch edge constants");

  std::string level = "quick";
  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle cross-check grids");
  verify_cmd->add_option("--level", level, "Grid density")->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArgs;
  }

  if (*sweep) return cmd_sweep(a_min, a_max, points, spacing, units, out_path);
  if (*point) return cmd_point(a_point, point_units);
  if (*constants) return cmd_constants();
  if (*verify_cmd) return cmd_verify(level, hooks);
  return kBadArgs;
}

}  // namespace lowsnr::cli
