// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/stability.hpp"

#include <algorithm>
#include <cmath>

#include "oldroyd/io.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd {

Scalar fit_gronwall(const TwinSeries& s) {
  if (s.difference.empty() || s.difference.front() == 0) return 0.0;
  const Scalar d0 = s.difference.front();
  Scalar c = -kInfinity;
  for (size_t i = 1; i < s.times.size(); ++i) {
    if (s.weight_integral[i] <= 0 || s.difference[i] <= 0) continue;
    c = std::max(c, std::log(s.difference[i] / d0) / s.weight_integral[i]);
  }
  return std::isfinite(c) ? c : 0.0;
}

bool envelope_holds(const TwinSeries& s, Scalar c, Scalar rtol) {
  if (s.difference.empty()) return true;
  const Scalar d0 = s.difference.front();
  for (size_t i = 0; i < s.times.size(); ++i)
    if (s.difference[i] > d0 * std::exp(c * s.weight_integral[i]) * (1 + rtol)) return false;
  return true;
}

std::pair<VelocityField, StressField> perturbation_direction(const SolverConfig& config, const GridPtr& grid) {
  const DyadicPartition part(*grid);
  const Scalar s = config.regularity();
  const std::uint64_t base = 0x5bd1e995ULL + 7ULL * config.init.seed;
  VelocityField pu = random_velocity(grid, config.init.band, base);
  StressField pt = random_field<FieldKind::SymTensor>(grid, config.init.band, base + 1);
  const Scalar hu = hybrid_norm(pu, s, part).value;
  const Scalar ht = hybrid_norm(pt, s, part).value;
  if (hu == 0 || ht == 0) throw ConfigError("perturbation band contains no resolved modes");
  pu *= 1.0 / hu;
  pt *= 1.0 / ht;
  return {std::move(pu), std::move(pt)};
}

namespace {

struct Twin {
  SolverState state;
  Stepper stepper;
  TwinSeries series;
  Scalar last_m = 0;
};

Scalar difference_energy(const SolverState& a, const SolverState& b, Scalar s, const DyadicPartition& part) {
  const FluidParams& p = a.params;
  const Scalar hw = besov_from_blocks(block_norms(a.u - b.u, part), s, 2);
  const Scalar hs = besov_from_blocks(block_norms(a.tau - b.tau, part), s, 2);
  return p.omega * p.re * hw * hw + p.we * hs * hs;
}

Scalar gronwall_weight(Scalar grad_u1, const SolverState& b, const DyadicPartition& part) {
  const FluidParams& p = b.params;
  const Scalar h = 0.5 * b.u.dim();
  const Scalar bu = besov_from_blocks(block_norms(b.u, part), h, 1);
  const Scalar bt = besov_from_blocks(block_norms(b.tau, part), h, 1);
  return grad_u1 + p.omega * p.re * bu * bu + p.we * bt * bt;
}

void sample(Twin& tw, const SolverState& base, Scalar grad_u1, Scalar s, const DyadicPartition& part) {
  const Scalar d = difference_energy(base, tw.state, s, part);
  const Scalar m = gronwall_weight(grad_u1, tw.state, part);
  TwinSeries& ser = tw.series;
  Scalar integral = 0;
  if (!ser.times.empty()) integral = ser.weight_integral.back() + 0.5 * (base.t - ser.times.back()) * (tw.last_m + m);
  ser.times.push_back(base.t);
  ser.difference.push_back(d);
  ser.weight.push_back(m);
  ser.weight_integral.push_back(integral);
  tw.last_m = m;
}

TwinSeries thin(const TwinSeries& s, int stride) {
  TwinSeries out;
  for (size_t i = 0; i < s.times.size(); ++i) {
    if (i % static_cast<size_t>(stride) != 0 && i + 1 != s.times.size()) continue;
    out.times.push_back(s.times[i]);
    out.difference.push_back(s.difference[i]);
    out.weight.push_back(s.weight[i]);
    out.weight_integral.push_back(s.weight_integral[i]);
  }
  return out;
}

bool bitwise_equal(const SolverState& a, const SolverState& b) {
  for (int c = 0; c < a.u.components(); ++c)
    if (!(a.u[c] == b.u[c]).all()) return false;
  for (int c = 0; c < a.tau.components(); ++c)
    if (!(a.tau[c] == b.tau[c]).all()) return false;
  return true;
}

}  // namespace

StabilityReport stability_experiment(const SolverConfig& config, Scalar delta) {
  if (!(delta >= 0)) throw PreconditionError("stability_experiment: delta must be nonnegative");
  config.validate();
  const SolverState base0 = initial_state(config);
  const GridPtr grid = base0.u.grid_ptr();
  const DyadicPartition part(*grid);
  const Scalar s = config.regularity();
  const StepOptions opts{config.friedrichs_n, config.linear_only};
  auto [pu, pt] = perturbation_direction(config, grid);

  auto perturbed = [&](Scalar eps) {
    SolverState st = base0;
    st.u.axpy(eps, pu);
    st.tau.axpy(eps, pt);
    if (config.friedrichs_n) {
      st.u = friedrichs_truncate(std::move(st.u), *config.friedrichs_n);
      st.tau = friedrichs_truncate(std::move(st.tau), *config.friedrichs_n);
    }
    return st;
  };

  SolverState base = base0;
  Stepper base_stepper(*grid, config.dt, config.params, opts);
  std::vector<Twin> twins;
  twins.push_back({perturbed(delta), Stepper(*grid, config.dt, config.params, opts), {}, 0});
  twins.push_back({perturbed(0.1 * delta), Stepper(*grid, config.dt, config.params, opts), {}, 0});

  auto observe = [&]() {
    const Scalar g1 = besov_from_blocks(block_norms(base.u, part, 1), 0.5 * grid->dim(), 1);
    for (Twin& tw : twins) sample(tw, base, g1, s, part);
  };
  observe();
  bool identical = bitwise_equal(base, twins[0].state);
  const std::int64_t nsteps = config.steps();
  for (std::int64_t i = 1; i <= nsteps; ++i) {
    base_stepper.advance(base);
    for (Twin& tw : twins) tw.stepper.advance(tw.state);
    observe();
    identical = identical && bitwise_equal(base, twins[0].state);
  }

  StabilityReport rep;
  rep.delta = delta;
  rep.d0 = twins[0].series.difference.front();
  rep.c_hat = fit_gronwall(twins[0].series);
  rep.c_hat_refined = fit_gronwall(twins[1].series);
  const Scalar scale = std::max(std::abs(rep.c_hat), std::abs(rep.c_hat_refined));
  rep.relative_change = scale > 0 ? std::abs(rep.c_hat - rep.c_hat_refined) / scale : 0.0;
  rep.identical = identical;
  rep.envelope = envelope_holds(twins[0].series, rep.c_hat);
  rep.series = thin(twins[0].series, config.output.stride);
  return rep;
}

nlohmann::json to_json(const StabilityReport& r) {
  return {{"delta", r.delta},
          {"d0", r.d0},
          {"c_hat", r.c_hat},
          {"c_hat_refined", r.c_hat_refined},
          {"relative_change", r.relative_change},
          {"identical", r.identical},
          {"envelope", r.envelope},
          {"t", r.series.times},
          {"d", r.series.difference},
          {"m", r.series.weight},
          {"m_integral", r.series.weight_integral}};
}

CalibrationResult calibrate_amplitude(SolverConfig config, const std::vector<std::uint64_t>& seeds, Scalar start,
                                      int max_halvings) {
  CalibrationResult res;
  config.output.dir.clear();
  Scalar amp = start;
  for (int k = 0; k <= max_halvings; ++k, amp *= 0.5) {
    config.init.amplitude = amp;
    Scalar worst = 0;
    bool ok = true;
    for (std::uint64_t seed : seeds) {
      config.init.seed = seed;
      const SimulationResult sim = simulate(config);
      const BoundReport b = check_global_bound(sim.ledger, config.params, sim.ledger.rows.front().E);
      worst = std::max(worst, b.max_ratio);
      ok = ok && b.pass;
    }
    res.tried.push_back(amp);
    res.worst_ratio.push_back(worst);
    if (ok) {
      res.amplitude = amp;
      res.found = true;
      return res;
    }
  }
  return res;
}

}  // namespace oldroyd
