// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/solver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "oldroyd/io.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd {

Scalar SolverConfig::regularity() const {
  if (s) return *s;
  return d >= 3 ? 0.0 : -0.25;
}

std::int64_t SolverConfig::steps() const { return std::llround(t_end / dt); }

void SolverConfig::validate() const {
  if (d != 2 && d != 3) throw ConfigError("d must be 2 or 3");
  if (n < 8 || (n & (n - 1)) != 0) throw ConfigError("n must be a power of two >= 8");
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  if (!(t_end >= 0)) throw ConfigError("t_end must be nonnegative");
  const Scalar span = static_cast<Scalar>(steps()) * dt;
  if (std::abs(span - t_end) > 1e-9 * std::max(1.0, t_end)) throw ConfigError("t_end must be a multiple of dt");
  params.validate();
  if (friedrichs_n) {
    if (!(*friedrichs_n >= 0)) throw ConfigError("friedrichs_n must be nonnegative");
    if (*friedrichs_n > n / 2) throw ConfigError("friedrichs_n exceeds the Nyquist wavenumber");
  }
  const Scalar sv = regularity();
  if (!(sv > -0.5 * d && sv < 0.5 * d)) throw ConfigError("s must lie in (-d/2, d/2)");
  if (output.stride < 1) throw ConfigError("output.stride must be >= 1");
  if (init.kind != "random" && init.kind != "mode" && init.kind != "zero")
    throw ConfigError("init.kind must be random, mode or zero");
  if (!(init.amplitude >= 0)) throw ConfigError("init.amplitude must be nonnegative");
  if (!(init.band.k_min >= 0 && init.band.k_max >= init.band.k_min)) throw ConfigError("init.band is empty");
}

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

SolverConfig config_from_json(const nlohmann::json& j) {
  SolverConfig c;
  try {
    check_keys(j, {"d", "n", "dt", "t_end", "re", "we", "omega", "alpha", "friedrichs_n", "s", "linear_only", "init",
                   "output"},
               "config");
    c.d = j.value("d", c.d);
    c.n = j.value("n", c.n);
    c.dt = j.value("dt", c.dt);
    c.t_end = j.value("t_end", c.t_end);
    c.params.re = j.value("re", c.params.re);
    c.params.we = j.value("we", c.params.we);
    c.params.omega = j.value("omega", c.params.omega);
    c.params.alpha = j.value("alpha", c.params.alpha);
    if (j.contains("friedrichs_n") && !j["friedrichs_n"].is_null()) c.friedrichs_n = j["friedrichs_n"].get<Scalar>();
    if (j.contains("s") && !j["s"].is_null()) c.s = j["s"].get<Scalar>();
    c.linear_only = j.value("linear_only", false);
    if (j.contains("init")) {
      const auto& in = j["init"];
      check_keys(in, {"kind", "amplitude", "band", "seed", "mode"}, "init");
      c.init.kind = in.value("kind", c.init.kind);
      c.init.amplitude = in.value("amplitude", c.init.amplitude);
      c.init.seed = in.value("seed", c.init.seed);
      if (in.contains("band")) {
        const auto& b = in["band"];
        if (b.is_array()) {
          if (b.size() != 2) throw ConfigError("init.band must be [k_min, k_max]");
          c.init.band.k_min = b[0].get<Scalar>();
          c.init.band.k_max = b[1].get<Scalar>();
        } else {
          check_keys(b, {"k_min", "k_max", "slope"}, "init.band");
          c.init.band.k_min = b.value("k_min", c.init.band.k_min);
          c.init.band.k_max = b.value("k_max", c.init.band.k_max);
          c.init.band.slope = b.value("slope", c.init.band.slope);
        }
      }
      if (in.contains("mode")) {
        const auto& m = in["mode"];
        if (!m.is_array() || m.size() < 2 || m.size() > 3) throw ConfigError("init.mode must list 2 or 3 integers");
        c.init.mode = {0, 0, 0};
        for (size_t i = 0; i < m.size(); ++i) c.init.mode[i] = m[i].get<int>();
      }
    }
    if (j.contains("output")) {
      const auto& o = j["output"];
      check_keys(o, {"stride", "dir", "snapshots"}, "output");
      c.output.stride = o.value("stride", c.output.stride);
      c.output.dir = o.value("dir", c.output.dir);
      c.output.snapshots = o.value("snapshots", c.output.snapshots);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json config_to_json(const SolverConfig& c) {
  nlohmann::json j = {{"d", c.d},
                      {"n", c.n},
                      {"dt", c.dt},
                      {"t_end", c.t_end},
                      {"re", c.params.re},
                      {"we", c.params.we},
                      {"omega", c.params.omega},
                      {"alpha", c.params.alpha},
                      {"s", c.regularity()},
                      {"linear_only", c.linear_only}};
  j["friedrichs_n"] = c.friedrichs_n ? nlohmann::json(*c.friedrichs_n) : nlohmann::json(nullptr);
  j["init"] = {{"kind", c.init.kind},
               {"amplitude", c.init.amplitude},
               {"band", {{"k_min", c.init.band.k_min}, {"k_max", c.init.band.k_max}, {"slope", c.init.band.slope}}},
               {"seed", c.init.seed},
               {"mode", std::vector<int>(c.init.mode.begin(), c.init.mode.begin() + c.d)}};
  j["output"] = {{"stride", c.output.stride}, {"dir", c.output.dir}, {"snapshots", c.output.snapshots}};
  return j;
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

template <FieldKind K>
Field<K> friedrichs_truncate(Field<K> f, Scalar radius) {
  if (!(radius >= 0)) throw PreconditionError("friedrichs radius must be nonnegative");
  const ArrayXs m = (f.grid().k_squared() <= radius * radius).template cast<Scalar>();
  f.apply_multiplier(m);
  return f;
}

template ScalarField friedrichs_truncate(ScalarField, Scalar);
template VectorField friedrichs_truncate(VectorField, Scalar);
template StressField friedrichs_truncate(StressField, Scalar);

Tendency rhs_nonlinear(const SolverState& state, std::optional<Scalar> friedrichs_n) {
  const VectorField& u = state.u;
  const StressField& tau = state.tau;
  require_same_grid(u.grid(), tau.grid());
  const TorusGrid& grid = u.grid();
  const int d = grid.dim();
  const int nt = tau.components();
  const Scalar alpha = state.params.alpha;

  // Spectral inputs: u_i, d_j u_i, tau_c, d_l tau_c.
  std::vector<ArrayXc> spec;
  spec.reserve(static_cast<size_t>(d + d * d + nt + nt * d));
  for (int i = 0; i < d; ++i) spec.push_back(u[i]);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) spec.push_back(derivative(u[i], grid, j));
  for (int c = 0; c < nt; ++c) spec.push_back(tau[c]);
  for (int c = 0; c < nt; ++c)
    for (int l = 0; l < d; ++l) spec.push_back(derivative(tau[c], grid, l));
  std::vector<const ArrayXc*> ptr;
  for (const auto& a : spec) ptr.push_back(&a);
  const std::vector<PhysicalArray> phys = physical_all(ptr, grid);
  for (const auto& a : phys)
    if (!a.allFinite()) throw DivergenceError("non-finite values in the solution", state.step_index, state.t);

  auto U = [&](int i) -> const PhysicalArray& { return phys[static_cast<size_t>(i)]; };
  auto G = [&](int i, int j) -> const PhysicalArray& { return phys[static_cast<size_t>(d + i * d + j)]; };
  auto T = [&](int i, int j) -> const PhysicalArray& { return phys[static_cast<size_t>(d + d * d + sym_index(i, j, d))]; };
  auto dT = [&](int c, int l) -> const PhysicalArray& {
    return phys[static_cast<size_t>(d + d * d + nt + c * d + l)];
  };

  std::vector<PhysicalArray> out;
  out.reserve(static_cast<size_t>(d + nt));
  for (int i = 0; i < d; ++i) {
    PhysicalArray acc = PhysicalArray::Zero(grid.size());
    for (int j = 0; j < d; ++j) acc -= U(j) * G(i, j);
    out.push_back(std::move(acc));
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const int c = sym_index(i, j, d);
      PhysicalArray acc = PhysicalArray::Zero(grid.size());
      for (int l = 0; l < d; ++l) acc -= U(l) * dT(c, l);
      for (int k = 0; k < d; ++k) {
        const PhysicalArray Wkj = 0.5 * (G(k, j) - G(j, k));
        const PhysicalArray Wik = 0.5 * (G(i, k) - G(k, i));
        const PhysicalArray Dkj = 0.5 * (G(k, j) + G(j, k));
        const PhysicalArray Dik = 0.5 * (G(i, k) + G(k, i));
        acc -= T(i, k) * Wkj - Wik * T(k, j) - alpha * (Dik * T(k, j) + T(i, k) * Dkj);
      }
      out.push_back(std::move(acc));
    }
  }
  // out holds the stress rows in sym_index order because j runs over i..d-1 row by row.
  std::vector<ArrayXc> back = spectral_all(out, grid);
  std::vector<ArrayXc> du(back.begin(), back.begin() + d);
  std::vector<ArrayXc> dtau(back.begin() + d, back.end());

  Tendency t{VectorField(u.grid_ptr(), std::move(du)), StressField(u.grid_ptr(), std::move(dtau))};
  t.du = leray_project(dealias(std::move(t.du)));
  t.dtau = dealias(std::move(t.dtau));
  pin_mean(t.du);
  pin_mean(t.dtau);
  if (friedrichs_n) {
    t.du = friedrichs_truncate(std::move(t.du), *friedrichs_n);
    t.dtau = friedrichs_truncate(std::move(t.dtau), *friedrichs_n);
  }
  return t;
}

Stepper::Stepper(const TorusGrid& grid, Scalar dt, const FluidParams& p, StepOptions opts)
    : prop_(grid, dt, p), opts_(opts) {
  if (!(dt > 0)) throw PreconditionError("time step must be positive");
}

void Stepper::advance(SolverState& state) {
  if (!anchored_) {
    t0_ = state.t;
    s0_ = state.step_index;
    anchored_ = true;
  }
  const Scalar dt = prop_.dt();
  VelocityField u = state.u;
  StressField tau = state.tau;
  if (!opts_.linear_only) {
    Tendency n = rhs_nonlinear(state, opts_.friedrichs_n);
    if (!previous_) {
      u.axpy(dt, n.du);
      tau.axpy(dt, n.dtau);
    } else {
      u.axpy(1.5 * dt, n.du).axpy(-0.5 * dt, previous_->du);
      tau.axpy(1.5 * dt, n.dtau).axpy(-0.5 * dt, previous_->dtau);
    }
    prop_.apply(n.du, n.dtau);
    previous_ = std::move(n);
  }
  prop_.apply(u, tau);
  for (int c = 0; c < u.components(); ++c)
    if (!u[c].allFinite()) throw DivergenceError("non-finite velocity after step", state.step_index + 1, state.t + dt);
  for (int c = 0; c < tau.components(); ++c)
    if (!tau[c].allFinite()) throw DivergenceError("non-finite stress after step", state.step_index + 1, state.t + dt);
  u = leray_project(u);
  pin_mean(u);
  pin_mean(tau);
  state.u = std::move(u);
  state.tau = std::move(tau);
  ++state.step_index;
  state.t = t0_ + static_cast<Scalar>(state.step_index - s0_) * dt;
}

SolverState step(const SolverState& state, Scalar dt, StepOptions opts) {
  Stepper s(state.u.grid(), dt, state.params, opts);
  SolverState next = state;
  s.advance(next);
  return next;
}

namespace {

VelocityField plane_wave(const GridPtr& grid, const std::array<int, 3>& m) {
  const int d = grid->dim();
  Vector<> k = Vector<>::Zero(d);
  for (int i = 0; i < d; ++i) k(i) = m[static_cast<size_t>(i)];
  if (k.norm() == 0) throw ConfigError("init.mode must be nonzero");
  for (int i = 0; i < d; ++i)
    if (std::abs(m[static_cast<size_t>(i)]) > grid->dealias_cutoff()) throw ConfigError("init.mode is not resolved");
  Vector<> e = Vector<>::Zero(d);
  if (d == 2) {
    e << -k(1), k(0);
  } else {
    int axis = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(k(i)) < std::abs(k(axis))) axis = i;
    Eigen::Vector3d a = Eigen::Vector3d::Zero();
    a(axis) = 1;
    e = Eigen::Vector3d(k).cross(a);
  }
  e.normalize();
  VelocityField u(grid);
  const Index ip = grid->flat_index(m);
  const Index in = grid->negative(ip);
  for (int i = 0; i < d; ++i) {
    u[i](ip) = Complex(0.0, -0.5) * e(i);
    u[i](in) = std::conj(u[i](ip));
  }
  return u;
}

template <FieldKind K>
void normalize_hybrid(Field<K>& f, Scalar target, Scalar s, const DyadicPartition& part) {
  const Scalar h = hybrid_norm(f, s, part).value;
  if (h == 0) {
    if (target > 0) throw ConfigError("initial data band contains no resolved modes");
    return;
  }
  f *= target / h;
}

}  // namespace

SolverState initial_state(const SolverConfig& c) {
  c.validate();
  const GridPtr grid = make_grid(c.d, c.n);
  const DyadicPartition part(*grid);
  SolverState st;
  st.params = c.params;
  st.u = VelocityField(grid);
  st.tau = StressField(grid);
  const Scalar s = c.regularity();
  if (c.init.kind == "random") {
    st.u = random_velocity(grid, c.init.band, 2 * c.init.seed);
    st.tau = random_field<FieldKind::SymTensor>(grid, c.init.band, 2 * c.init.seed + 1);
    normalize_hybrid(st.u, 0.5 * c.init.amplitude, s, part);
    normalize_hybrid(st.tau, 0.5 * c.init.amplitude, s, part);
  } else if (c.init.kind == "mode") {
    st.u = plane_wave(grid, c.init.mode);
    normalize_hybrid(st.u, c.init.amplitude, s, part);
  }
  if (c.friedrichs_n) {
    st.u = friedrichs_truncate(std::move(st.u), *c.friedrichs_n);
    st.tau = friedrichs_truncate(std::move(st.tau), *c.friedrichs_n);
  }
  pin_mean(st.u);
  pin_mean(st.tau);
  return st;
}

SimulationResult simulate(const SolverConfig& config) { return simulate(config, initial_state(config)); }

SimulationResult simulate(const SolverConfig& config, SolverState state) {
  config.validate();
  const GridPtr grid = state.u.grid_ptr();
  if (grid->dim() != config.d || grid->n() != config.n) throw ConfigError("initial state does not match the config grid");
  const DyadicPartition part(*grid);
  Stepper stepper(*grid, config.dt, config.params, {config.friedrichs_n, config.linear_only});

  SimulationResult res;
  res.ledger.header = {config.regularity(), config.d, config.n, config.dt, config.params, compute_kappas(config.params)};
  const bool files = !config.output.dir.empty();
  auto snapshot = [&](const SolverState& st) {
    if (!files || !config.output.snapshots) return;
    char name[64];
    std::snprintf(name, sizeof name, "u_%08lld.field", static_cast<long long>(st.step_index));
    res.snapshots.push_back(output_path(config.output.dir, name));
    write_field(res.snapshots.back(), st.u);
    std::snprintf(name, sizeof name, "tau_%08lld.field", static_cast<long long>(st.step_index));
    res.snapshots.push_back(output_path(config.output.dir, name));
    write_field(res.snapshots.back(), st.tau);
  };
  auto flush_ledger = [&]() {
    if (!files) return;
    res.ledger_path = output_path(config.output.dir, "ledger.csv");
    write_ledger(res.ledger_path, res.ledger);
  };

  LedgerHistory history;
  history.observe(state.t, state.u, state.tau, part);
  update_ledger(res.ledger, state, history);
  snapshot(state);

  const std::int64_t nsteps = config.steps();
  try {
    for (std::int64_t i = 1; i <= nsteps; ++i) {
      stepper.advance(state);
      history.observe(state.t, state.u, state.tau, part);
      if (i % config.output.stride == 0 || i == nsteps) update_ledger(res.ledger, state, history);
    }
  } catch (const DivergenceError&) {
    flush_ledger();
    throw;
  }
  if (nsteps > 0) snapshot(state);
  flush_ledger();
  res.final_state = std::move(state);
  return res;
}

}  // namespace oldroyd
