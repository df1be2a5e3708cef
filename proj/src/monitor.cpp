// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/monitor.hpp"

#include <algorithm>
#include <cmath>

#include "oldroyd/spectral.hpp"

namespace oldroyd {

KappaConstants compute_kappas(const FluidParams& p) {
  p.validate();
  const Scalar w = p.omega;
  const Scalar ww = w * (1 - w);
  KappaConstants k;
  k.kappa1 = std::max({std::pow(p.we / ww, 0.25), 1.0 / std::pow(ww, 0.25), std::pow(w * p.re, 0.25) / std::sqrt(ww),
                       std::pow(w * p.re, 0.125) / std::pow(ww, 0.375)});
  k.kappa2 = std::max({1.0, std::sqrt(p.re / (1 - w)), std::sqrt(p.we)});
  k.kappa3 = std::max({1.0 / std::sqrt(ww), std::sqrt(p.re) / (std::sqrt(w) * (1 - w)),
                       std::pow(p.re, 0.25) / (std::sqrt(w) * std::pow(1 - w, 0.75)), std::pow(p.we, 0.25) / std::sqrt(ww)});
  return k;
}

void BlockHistory::push(Scalar t, const BlockNorms& b) {
  const size_t nb = b.values.size();
  if (samples_ == 0) {
    q_min_ = b.q_min;
    last_ = b.values;
    sup_ = b.values;
    l1_.assign(nb, 0.0);
    l2sq_.assign(nb, 0.0);
  } else {
    if (b.q_min != q_min_ || nb != last_.size()) throw StructuralError("block history: block range changed");
    if (!(t >= last_t_)) throw PreconditionError("block history: time must be nondecreasing");
    const Scalar h = t - last_t_;
    for (size_t q = 0; q < nb; ++q) {
      const Scalar a = last_[q];
      const Scalar c = b.values[q];
      sup_[q] = std::max(sup_[q], c);
      l1_[q] += 0.5 * h * (a + c);
      l2sq_[q] += 0.5 * h * (a * a + c * c);
    }
    last_ = b.values;
  }
  last_t_ = t;
  ++samples_;
}

void LedgerHistory::observe(Scalar t, const VelocityField& vel, const StressField& stress,
                            const DyadicPartition& part) {
  u.push(t, block_norms(vel, part));
  tau.push(t, block_norms(stress, part));
  grad_u.push(t, block_norms(vel, part, 1));
}

const std::vector<std::string>& ledger_columns() {
  static const std::vector<std::string> cols = {
      "t",          "E1",          "E2",           "E",              "Hs_u_sup",       "Hs_tau_sup",  "grad_u_L2Hs",
      "tau_L2Hs",   "high_B_u_sup", "high_B_tau_sup", "high_B_u_L1", "high_B_tau_L1", "div_residual", "cancel_residual"};
  return cols;
}

std::vector<Scalar> row_values(const LedgerRow& r) {
  return {r.t,          r.E1,           r.E2,          r.E,           r.Hs_u_sup,    r.Hs_tau_sup,  r.grad_u_L2Hs,
          r.tau_L2Hs,   r.high_B_u_sup, r.high_B_tau_sup, r.high_B_u_L1, r.high_B_tau_L1, r.div_residual, r.cancel_residual};
}

LedgerRow row_from_values(const std::vector<Scalar>& v) {
  if (v.size() != ledger_columns().size()) throw IoError("ledger row has the wrong number of columns");
  LedgerRow r;
  Scalar* dst[] = {&r.t,          &r.E1,           &r.E2,          &r.E,           &r.Hs_u_sup,
                   &r.Hs_tau_sup, &r.grad_u_L2Hs,  &r.tau_L2Hs,    &r.high_B_u_sup, &r.high_B_tau_sup,
                   &r.high_B_u_L1, &r.high_B_tau_L1, &r.div_residual, &r.cancel_residual};
  for (size_t i = 0; i < v.size(); ++i) *dst[i] = v[i];
  return r;
}

namespace {

// (sum_q 2^{2qs} x_q)^{1/2} for per-block squared quantities x_q.
Scalar sobolev_sq(const std::vector<Scalar>& x, int q_min, Scalar s) {
  Scalar acc = 0;
  for (size_t i = 0; i < x.size(); ++i) acc += std::exp2(2.0 * (q_min + static_cast<int>(i)) * s) * x[i];
  return std::sqrt(acc);
}

Scalar sobolev_sup(const std::vector<Scalar>& x, int q_min, Scalar s) {
  Scalar acc = 0;
  for (size_t i = 0; i < x.size(); ++i) acc += std::exp2(2.0 * (q_min + static_cast<int>(i)) * s) * x[i] * x[i];
  return std::sqrt(acc);
}

// sum_{q >= 0} 2^{q d/2} x_q
Scalar high_besov(const std::vector<Scalar>& x, int q_min, int dim) {
  Scalar acc = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const int q = q_min + static_cast<int>(i);
    if (q >= 0) acc += std::exp2(0.5 * q * dim) * x[i];
  }
  return acc;
}

}  // namespace

LedgerRow functionals(const LedgerHistory& h, const FluidParams& p, Scalar s, int dim) {
  if (h.samples() == 0) throw PreconditionError("ledger: empty history");
  LedgerRow r;
  r.t = h.time();
  r.Hs_u_sup = sobolev_sup(h.u.sup(), h.u.q_min(), s);
  r.Hs_tau_sup = sobolev_sup(h.tau.sup(), h.tau.q_min(), s);
  r.grad_u_L2Hs = sobolev_sq(h.grad_u.l2sq(), h.grad_u.q_min(), s);
  r.tau_L2Hs = sobolev_sq(h.tau.l2sq(), h.tau.q_min(), s);
  r.high_B_u_sup = high_besov(h.u.sup(), h.u.q_min(), dim);
  r.high_B_tau_sup = high_besov(h.tau.sup(), h.tau.q_min(), dim);
  r.high_B_u_L1 = high_besov(h.grad_u.l1(), h.grad_u.q_min(), dim);
  r.high_B_tau_L1 = high_besov(h.tau.l1(), h.tau.q_min(), dim);
  const Scalar a = std::sqrt(p.omega * p.re);
  const Scalar b = std::sqrt(p.we);
  const Scalar c = std::sqrt(p.omega * (1 - p.omega));
  r.E1 = a * r.Hs_u_sup + b * r.Hs_tau_sup + c * r.grad_u_L2Hs + r.tau_L2Hs;
  r.E2 = a * r.high_B_u_sup + b * r.high_B_tau_sup + c * r.high_B_u_L1 + r.high_B_tau_L1;
  r.E = r.E1 + r.E2;
  return r;
}

Scalar cancellation_residual(const VelocityField& u, const StressField& tau) {
  const Scalar scale = l2_norm(tau) * gradient_l2_norm(u);
  if (scale == 0) return 0.0;
  const Scalar sum = inner_product_L2(div_tensor(tau), u) + inner_product_L2(deformation(u), tau);
  return std::abs(sum) / scale;
}

void update_ledger(EnergyLedger& ledger, const SolverState& state, const LedgerHistory& history) {
  if (history.samples() == 0 || history.time() != state.t)
    throw PreconditionError("update_ledger: history and state times differ");
  LedgerRow r = functionals(history, state.params, ledger.header.s, state.u.dim());
  r.div_residual = divergence_residual(state.u);
  r.cancel_residual = cancellation_residual(state.u, state.tau);
  ledger.rows.push_back(r);
}

BoundReport check_global_bound(const EnergyLedger& ledger, const FluidParams& p, Scalar E0) {
  BoundReport rep;
  rep.E0 = E0;
  rep.threshold = 2.0 * compute_kappas(p).kappa2;
  for (const LedgerRow& r : ledger.rows) {
    Scalar ratio;
    if (E0 > 0) ratio = r.E / E0;
    else ratio = r.E == 0 ? 0.0 : kInfinity;
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > rep.threshold && !rep.first_violation) rep.first_violation = r.t;
  }
  rep.pass = !rep.first_violation.has_value();
  return rep;
}

}  // namespace oldroyd
