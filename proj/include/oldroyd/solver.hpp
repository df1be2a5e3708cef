// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oldroyd/monitor.hpp"
#include "oldroyd/propagator.hpp"
#include "oldroyd/random_fields.hpp"
#include "oldroyd/state.hpp"

namespace oldroyd {

struct InitSpec {
  // "random": band-limited random (u, tau) with hybrid norm amplitude/2 each.
  // "mode":   u = amplitude * (-sin y, sin x)-type single shell, tau = 0; mode picks the wavevector.
  // "zero":   u = 0, tau = 0.
  std::string kind = "random";
  Scalar amplitude = 1e-3;
  BandSpec band;
  std::uint64_t seed = 0;
  std::array<int, 3> mode{1, 0, 0};
};

struct OutputSpec {
  int stride = 10;    // ledger row every `stride` steps, plus the final state
  std::string dir;    // empty: no files written
  bool snapshots = true;
};

struct SolverConfig {
  int d = 2;
  int n = 128;
  Scalar dt = 0.01;
  Scalar t_end = 1.0;
  FluidParams params;
  std::optional<Scalar> friedrichs_n;
  std::optional<Scalar> s;  // ledger regularity; default depends on d
  bool linear_only = false;
  InitSpec init;
  OutputSpec output;

  Scalar regularity() const;
  std::int64_t steps() const;
  void validate() const;
};

SolverConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SolverConfig& c);
SolverConfig load_config(const std::string& path);

template <FieldKind K>
Field<K> friedrichs_truncate(Field<K> f, Scalar radius);

struct Tendency {
  VectorField du;
  StressField dtau;
};

// N_u = -P[(u.grad)u], N_tau = -(u.grad)tau - g_alpha(tau, grad u); dealiased,
// mean-free, truncated to |k| <= friedrichs_n when given.
Tendency rhs_nonlinear(const SolverState& state, std::optional<Scalar> friedrichs_n = std::nullopt);

struct StepOptions {
  std::optional<Scalar> friedrichs_n;
  bool linear_only = false;
};

// Integrating-factor AB2 stepper; the first step is integrating-factor Euler.
class Stepper {
 public:
  Stepper(const TorusGrid& grid, Scalar dt, const FluidParams& p, StepOptions opts = {});

  Scalar dt() const noexcept { return prop_.dt(); }
  const LinearPropagator& propagator() const noexcept { return prop_; }
  void advance(SolverState& state);
  void reset() { previous_.reset(); }

 private:
  LinearPropagator prop_;
  StepOptions opts_;
  std::optional<Tendency> previous_;  // propagated by one step when stored
  Scalar t0_ = 0;
  std::int64_t s0_ = 0;
  bool anchored_ = false;
};

// One step from a state with no history (integrating-factor Euler).
SolverState step(const SolverState& state, Scalar dt, StepOptions opts = {});

SolverState initial_state(const SolverConfig& config);

struct SimulationResult {
  EnergyLedger ledger;
  SolverState final_state;
  std::vector<std::string> snapshots;  // written files
  std::string ledger_path;
};

// Runs to t_end. Per-block time norms are accumulated every step; ledger rows
// every output stride and at the end.
SimulationResult simulate(const SolverConfig& config);
SimulationResult simulate(const SolverConfig& config, SolverState initial);

}  // namespace oldroyd
