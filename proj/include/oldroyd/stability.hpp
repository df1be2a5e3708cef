// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "oldroyd/solver.hpp"

namespace oldroyd {

// Difference energy d(t) = omega Re ||w||^2_{H^s} + We ||sigma||^2_{H^s} of the
// pair (w, sigma) = (u1 - u2, tau1 - tau2), and the weight
// m(t) = ||grad u1||_{B^{d/2}_{2,1}} + omega Re ||u2||^2_{B^{d/2}_{2,1}} + We ||tau2||^2_{B^{d/2}_{2,1}}
// with its running trapezoid integral.
struct TwinSeries {
  std::vector<Scalar> times;
  std::vector<Scalar> difference;
  std::vector<Scalar> weight;
  std::vector<Scalar> weight_integral;
};

// max over t > 0 of ln(d(t)/d(0)) / int_0^t m. Zero when d(0) = 0.
Scalar fit_gronwall(const TwinSeries& series);

// Whether d(t) <= d(0) exp(C int_0^t m) at every sample, with relative slack `rtol`.
bool envelope_holds(const TwinSeries& series, Scalar c, Scalar rtol = 1e-12);

struct StabilityReport {
  Scalar delta = 0;
  Scalar d0 = 0;
  Scalar c_hat = 0;          // perturbation delta
  Scalar c_hat_refined = 0;  // perturbation delta/10
  Scalar relative_change = 0;
  bool identical = false;  // delta = 0: both trajectories agree bitwise
  bool envelope = false;
  TwinSeries series;  // sampled at the output stride
};

// Unit-hybrid-norm random perturbation directions for (u0, tau0).
std::pair<VelocityField, StressField> perturbation_direction(const SolverConfig& config, const GridPtr& grid);

StabilityReport stability_experiment(const SolverConfig& config, Scalar delta);

nlohmann::json to_json(const StabilityReport& r);

struct CalibrationResult {
  Scalar amplitude = 0;
  bool found = false;
  std::vector<Scalar> tried;
  std::vector<Scalar> worst_ratio;  // max over seeds of max_t E/E0, per amplitude
};

// Halves the amplitude from `start` until the global bound holds for every seed.
CalibrationResult calibrate_amplitude(SolverConfig config, const std::vector<std::uint64_t>& seeds, Scalar start,
                                      int max_halvings = 10);

}  // namespace oldroyd
