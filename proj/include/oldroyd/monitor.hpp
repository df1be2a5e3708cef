// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oldroyd/littlewood_paley.hpp"
#include "oldroyd/state.hpp"

namespace oldroyd {

struct KappaConstants {
  Scalar kappa1 = 0;
  Scalar kappa2 = 0;
  Scalar kappa3 = 0;
};

KappaConstants compute_kappas(const FluidParams& p);

// Running per-block time norms of one quantity: sup, trapezoid integral of the
// block norm, and trapezoid integral of its square.
class BlockHistory {
 public:
  void push(Scalar t, const BlockNorms& b);

  int q_min() const noexcept { return q_min_; }
  int samples() const noexcept { return samples_; }
  Scalar last_time() const noexcept { return last_t_; }
  std::vector<Scalar>& sup() noexcept { return sup_; }
  std::vector<Scalar>& l1() noexcept { return l1_; }
  std::vector<Scalar>& l2sq() noexcept { return l2sq_; }
  const std::vector<Scalar>& sup() const noexcept { return sup_; }
  const std::vector<Scalar>& l1() const noexcept { return l1_; }
  const std::vector<Scalar>& l2sq() const noexcept { return l2sq_; }

 private:
  int q_min_ = 0;
  int samples_ = 0;
  Scalar last_t_ = 0;
  std::vector<Scalar> last_, sup_, l1_, l2sq_;
};

// Everything the ledger functionals need from the trajectory so far.
struct LedgerHistory {
  BlockHistory u;       // blocks of u
  BlockHistory tau;     // blocks of tau
  BlockHistory grad_u;  // blocks of grad u

  Scalar time() const noexcept { return u.last_time(); }
  int samples() const noexcept { return u.samples(); }
  void observe(Scalar t, const VelocityField& vel, const StressField& stress, const DyadicPartition& part);
};

struct LedgerRow {
  Scalar t = 0;
  Scalar E1 = 0, E2 = 0, E = 0;
  Scalar Hs_u_sup = 0, Hs_tau_sup = 0, grad_u_L2Hs = 0, tau_L2Hs = 0;
  Scalar high_B_u_sup = 0, high_B_tau_sup = 0, high_B_u_L1 = 0, high_B_tau_L1 = 0;
  Scalar div_residual = 0, cancel_residual = 0;
};

const std::vector<std::string>& ledger_columns();
std::vector<Scalar> row_values(const LedgerRow& row);
LedgerRow row_from_values(const std::vector<Scalar>& values);

struct LedgerHeader {
  Scalar s = 0;
  int d = 2;
  int n = 0;
  Scalar dt = 0;
  FluidParams params;
  KappaConstants kappas;
};

struct EnergyLedger {
  LedgerHeader header;
  std::vector<LedgerRow> rows;
};

// Ledger norms from the accumulated history (no residual columns).
LedgerRow functionals(const LedgerHistory& history, const FluidParams& p, Scalar s, int dim);

// |(div tau | u) + (D(u) | tau)| / (||tau|| ||grad u||); zero when either factor vanishes.
Scalar cancellation_residual(const VelocityField& u, const StressField& tau);

// Appends the row for `state`; the history must already contain the state's time.
void update_ledger(EnergyLedger& ledger, const SolverState& state, const LedgerHistory& history);

struct BoundReport {
  Scalar E0 = 0;
  Scalar max_ratio = 0;
  Scalar threshold = 0;
  bool pass = true;
  std::optional<Scalar> first_violation;
};

// max_t E(t)/E0 against 2 kappa2. With E0 = 0 the ratio is 0 while E stays 0.
BoundReport check_global_bound(const EnergyLedger& ledger, const FluidParams& p, Scalar E0);

}  // namespace oldroyd
