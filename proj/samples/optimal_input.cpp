// Prints the optimal on-off input and capacity for a few SNR values and checks
// the closed-form mutual information against direct integration.

#include <cstdio>

#include "lowsnr/closed_form.hpp"
#include "lowsnr/mi_oracle.hpp"
#include "lowsnr/optimizer.hpp"

int main() {
  using namespace lowsnr;
  const auto& edge = optimizer::edge_constants();
  std::printf("edge point: x0^2 = %.6f, a0 = %.6f\n\n", edge.x0_sq, edge.a0);
  std::printf("%10s %10s %12s %14s %14s %10s\n", "a", "x1", "p1", "C (nats)", "I quad", "penalty");
  for (double a : {1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.1}) {
    const Snr snr{a};
    const auto opt = optimizer::solve_x1(snr);
    std::printf("%10.3g %10.6f %12.6g %14.8g %14.8g %10.4f\n", a, opt.x1, opt.p1,
                closed_form::capacity_at(snr, opt.x1),
                oracle::on_off_mutual_information(snr, opt.x1),
                closed_form::penalty_per_snr(snr, opt.x1));
  }
  return 0;
}
