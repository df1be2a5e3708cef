// SPDX-License-Identifier: Apache-2.0
// Small-data amplitude calibration: halve the initial hybrid-norm amplitude
// until E(t) <= 2 kappa2 E(0) holds for every seed.
#include <CLI11.hpp>
#include <iostream>

#include "oldroyd/stability.hpp"

int main(int argc, char** argv) {
  oldroyd::SolverConfig cfg;
  cfg.d = 2;
  cfg.n = 128;
  cfg.dt = 0.02;
  cfg.t_end = 50;
  cfg.s = -0.25;
  cfg.output.stride = 10;
  double start = 1e-3;
  int seeds = 5;

  CLI::App app{"small-data amplitude calibration"};
  app.add_option("--d", cfg.d);
  app.add_option("--n", cfg.n);
  app.add_option("--dt", cfg.dt);
  app.add_option("--t-end", cfg.t_end);
  app.add_option("--start", start);
  app.add_option("--seeds", seeds);
  CLI11_PARSE(app, argc, argv);

  std::vector<std::uint64_t> list;
  for (int i = 0; i < seeds; ++i) list.push_back(static_cast<std::uint64_t>(i));
  try {
    const auto res = oldroyd::calibrate_amplitude(cfg, list, start);
    nlohmann::json j = {{"found", res.found},
                        {"amplitude", res.amplitude},
                        {"tried", res.tried},
                        {"worst_ratio", res.worst_ratio},
                        {"config", oldroyd::config_to_json(cfg)}};
    std::cout << j.dump() << '\n';
    return res.found ? 0 : 1;
  } catch (const oldroyd::Error& e) {
    std::cerr << nlohmann::json({{"error", e.what()}}).dump() << '\n';
    return 2;
  }
}
