// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "oldroyd/littlewood_paley.hpp"
#include "oldroyd/propagator.hpp"
#include "oldroyd/random_fields.hpp"
#include "oldroyd/solver.hpp"
#include "oracles.hpp"

using namespace oldroyd;

namespace {

const FluidParams kParamSets[] = {
    {1.0, 1.0, 0.5, 0.0},
    {10.0, 0.1, 0.9, 0.3},
    {0.1, 5.0, 0.1, -1.0},
    {2.0, 2.0, 1.0 / 3.0, 1.0},
};

// Maps the oracle's full (u, tau_ij) action onto the (u, tau upper triangle) layout.
MatrixC<> oracle_reduced(const Vector<>& k, Scalar dt, const FluidParams& p) {
  const int d = static_cast<int>(k.size());
  const int nt = d * (d + 1) / 2;
  const Eigen::MatrixXcd full = oracle::full_propagator(k, dt, p);
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(d, d) - k * k.transpose() / k.squaredNorm();
  MatrixC<> out = MatrixC<>::Zero(d + nt, d + nt);
  for (int col = 0; col < d + nt; ++col) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(d + d * d);
    if (col < d) {
      x.head(d) = P.col(col).cast<Complex>();
    } else {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (sym_index(i, j, d) == col - d) x(d + i * d + j) = 1.0;
    }
    const Eigen::VectorXcd y = full * x;
    out.block(0, col, d, 1) = y.head(d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) out(d + sym_index(i, j, d), col) = y(d + i * d + j);
  }
  return out;
}

SolverState random_state(const GridPtr& g, std::uint64_t seed, Scalar amp, const FluidParams& p = {},
                         BandSpec band = {1, 4, 0}) {
  SolverState st;
  st.params = p;
  st.u = random_velocity(g, band, 2 * seed);
  st.tau = random_field<FieldKind::SymTensor>(g, band, 2 * seed + 1);
  st.u *= amp / l2_norm(st.u);
  st.tau *= amp / l2_norm(st.tau);
  return st;
}

Scalar state_distance(const SolverState& a, const SolverState& b) {
  return std::sqrt(std::pow(l2_norm(a.u - b.u), 2) + std::pow(l2_norm(a.tau - b.tau), 2));
}

SolverState run(SolverState st, Scalar dt, int steps, StepOptions opts = {}) {
  Stepper s(st.u.grid(), dt, st.params, opts);
  for (int i = 0; i < steps; ++i) s.advance(st);
  return st;
}

}  // namespace

TEST_CASE("reduced exponential against an eigendecomposition") {
  for (const auto& p : kParamSets)
    for (Scalar kn : {1.0, 1.4142135623730951, 3.0, 17.0, 42.0})
      for (Scalar dt : {1e-3, 0.02, 0.5}) {
        const Matrix2c a = reduced_generator(kn, p);
        const Matrix2c m = expm2(dt * a);
        const Matrix2c ref = oracle::eig_exp(a, dt);
        CHECK((m - ref).norm() <= 1e-12 * std::max(1.0, ref.norm()));
      }
  CHECK((expm2(Matrix2c::Zero()) - Matrix2c::Identity()).norm() == 0.0);
  // Nearly defective generator: both branches of the closed form agree with the series oracle.
  Matrix2c a;
  a << Complex(-1.0, 0), Complex(0, 1e-3), Complex(0, 1e-3), Complex(-1.0 + 1e-9, 0);
  const Matrix2c ref = Eigen::MatrixXcd(a).exp();
  CHECK((expm2(a) - ref).norm() <= 1e-13);
}

TEST_CASE("per-mode propagator matches the full linear system") {
  for (const auto& p : kParamSets) {
    for (std::uint64_t i = 0; i < 10; ++i) {
      const int d = 2 + static_cast<int>(i % 2);
      Vector<> k(d);
      for (int a = 0; a < d; ++a) k(a) = std::round(-8 + 16 * hashed_uniform(i, static_cast<std::uint64_t>(a)));
      if (k.norm() == 0) k(0) = 1;
      for (Scalar dt : {0.0, 0.02, 0.3}) {
        const MatrixC<> got = linear_propagator(k, dt, p);
        const MatrixC<> ref = oracle_reduced(k, dt, p);
        CHECK((got - ref).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(linear_propagator(Vector<>::Zero(2), 0.01, FluidParams{}), PreconditionError);
}

TEST_CASE("propagator over zero time is the identity on solenoidal data") {
  Vector<> k(3);
  k << 1, -2, 3;
  const MatrixC<> m = linear_propagator(k, 0.0, FluidParams{});
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(3, 3) - k * k.transpose() / k.squaredNorm();
  CHECK((m.topLeftCorner(3, 3) - P.cast<Complex>()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((m.bottomRightCorner(6, 6) - MatrixC<>::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("stress with P tau khat = 0 relaxes at the Weissenberg rate") {
  const GridPtr g = make_grid(2, 16);
  const FluidParams p{1.0, 2.0, 0.5, 0.0};
  SolverState st;
  st.params = p;
  st.u = VelocityField(g);
  st.tau = StressField(g);
  st.tau[sym_index(0, 0, 2)] = testing::single_mode(*g, {1, 0, 0}, Complex(0.3, 0.1));
  st.tau[sym_index(1, 1, 2)] = testing::single_mode(*g, {1, 0, 0}, Complex(-0.2, 0.0));
  const StressField tau0 = st.tau;
  const Scalar dt = 0.05;
  const SolverState out = run(st, dt, 10, {std::nullopt, true});
  CHECK(l2_norm(out.u) == 0.0);
  CHECK(l2_norm(out.tau - std::exp(-0.5 / p.we) * tau0) <= 1e-14 * l2_norm(tau0));
}

TEST_CASE("grid propagator applies the per-mode map") {
  for (auto [d, n] : {std::pair{2, 16}, std::pair{3, 8}}) {
    const GridPtr g = make_grid(d, n);
    const FluidParams p = kParamSets[1];
    const Scalar dt = 0.07;
    const LinearPropagator prop(*g, dt, p);
    SolverState st = random_state(g, 3, 1.0, p, {1, 0.5 * n, 0});
    VectorField u = st.u;
    StressField tau = st.tau;
    prop.apply(u, tau);
    const int nt = tau.components();
    Scalar err = 0;
    std::set<Index> shells;
    for (Index idx = 1; idx < g->size(); ++idx) {
      Vector<> k(d);
      for (int a = 0; a < d; ++a) k(a) = g->wavenumber(a)(idx);
      shells.insert(static_cast<Index>(std::llround(k.squaredNorm())));
      Eigen::VectorXcd x(d + nt);
      for (int a = 0; a < d; ++a) x(a) = st.u[a](idx);
      for (int c = 0; c < nt; ++c) x(d + c) = st.tau[c](idx);
      const Eigen::VectorXcd y = linear_propagator(k, dt, p) * x;
      for (int a = 0; a < d; ++a) err = std::max(err, std::abs(y(a) - u[a](idx)));
      for (int c = 0; c < nt; ++c) err = std::max(err, std::abs(y(d + c) - tau[c](idx)));
    }
    CHECK(err <= 1e-14);
    CHECK(prop.distinct_shells() == shells.size());
    CHECK(mean_mode_magnitude(u) == 0.0);

    VectorField wrong_u(make_grid(d, 2 * n));
    StressField wrong_t(make_grid(d, 2 * n));
    CHECK_THROWS_AS(prop.apply(wrong_u, wrong_t), StructuralError);
  }
}

TEST_CASE("Friedrichs truncation") {
  const GridPtr g = make_grid(2, 32);
  const VelocityField u = random_velocity(g, {1, 16, 0}, 8);
  const Scalar r = 5.5;
  const VelocityField t = friedrichs_truncate(u, r);
  Scalar kept = 0;
  for (Index i = 0; i < g->size(); ++i) {
    const Scalar k2 = std::pow(g->wavenumber(0)(i), 2) + std::pow(g->wavenumber(1)(i), 2);
    for (int c = 0; c < 2; ++c) {
      if (k2 <= r * r)
        CHECK(t[c](i) == u[c](i));
      else
        CHECK(t[c](i) == Complex(0));
      kept += std::norm(t[c](i));
    }
  }
  CHECK(kept > 0);

  SUBCASE("commutes with the linear propagator") {
    const LinearPropagator prop(*g, 0.03, FluidParams{});
    SolverState st = random_state(g, 1, 1.0, {}, {1, 16, 1});
    VectorField a = friedrichs_truncate(st.u, r);
    StressField at = friedrichs_truncate(st.tau, r);
    prop.apply(a, at);
    VectorField b = st.u;
    StressField bt = st.tau;
    prop.apply(b, bt);
    b = friedrichs_truncate(std::move(b), r);
    bt = friedrichs_truncate(std::move(bt), r);
    CHECK(l2_norm(a - b) == 0.0);
    CHECK(l2_norm(at - bt) == 0.0);
  }
}

TEST_CASE("nonlinear tendency") {
  const GridPtr g = make_grid(2, 32);
  SUBCASE("zero state") {
    SolverState st;
    st.u = VelocityField(g);
    st.tau = StressField(g);
    const Tendency t = rhs_nonlinear(st);
    CHECK(l2_norm(t.du) == 0.0);
    CHECK(l2_norm(t.dtau) == 0.0);
  }
  SUBCASE("steady Euler flows carry no velocity tendency") {
    SolverState st;
    st.tau = StressField(g);
    // Shear flow (sin y, 0) and the Taylor-Green cell.
    st.u = testing::field_of<FieldKind::Vector>(
        g, {[](const auto& x) { return std::sin(x[1]); }, testing::zero()});
    Tendency t = rhs_nonlinear(st);
    CHECK(l2_norm(t.du) <= 1e-14);
    CHECK(l2_norm(t.dtau) == 0.0);
    st.u = testing::field_of<FieldKind::Vector>(g, {[](const auto& x) { return std::sin(x[0]) * std::cos(x[1]); },
                                                      [](const auto& x) { return -std::cos(x[0]) * std::sin(x[1]); }});
    t = rhs_nonlinear(st);
    CHECK(l2_norm(t.du) <= 1e-14);
  }
  SUBCASE("property: advection is energy neutral and the output is resolved") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const SolverState st = random_state(g, s, 1.0, kParamSets[s % 4], {1, 10, 1});
      const Tendency t = rhs_nonlinear(st);
      CHECK(std::abs(inner_product_L2(t.du, st.u)) <= 1e-12 * l2_norm(t.du) * l2_norm(st.u));
      CHECK(divergence_residual(t.du) <= 1e-12);
      CHECK(mean_mode_magnitude(t.du) == 0.0);
      CHECK(mean_mode_magnitude(t.dtau) == 0.0);
      CHECK(l2_norm(dealias(t.dtau) - t.dtau) == 0.0);
      CHECK(hermitian_residual(t.dtau) <= 1e-14);
    }
  }
  SUBCASE("stress tendency against pointwise series evaluation") {
    const SolverState st = random_state(g, 4, 1.0, kParamSets[3], {1, 5, 0});
    const Tendency t = rhs_nonlinear(st);
    const auto phys = to_physical(t.dtau);
    // Input band <= 5, so every product is below the 2/3 cutoff and dealiasing is exact.
    // The tendency is mean-free; the oracle is compared after removing its grid mean.
    std::vector<PhysicalArray> ref(3, PhysicalArray::Zero(g->size()));
    for (Index pt = 0; pt < g->size(); ++pt) {
      auto ev = [&](const ArrayXc& a) { return oracle::evaluate(ScalarField(g, {a}), 0, pt); };
      Matrix<> G(2, 2), T(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          G(i, j) = ev(derivative(st.u[i], *g, j));
          T(i, j) = oracle::evaluate(st.tau, sym_index(i, j, 2), pt);
        }
      Vector<> uv(2);
      for (int i = 0; i < 2; ++i) uv(i) = oracle::evaluate(st.u, i, pt);
      const Matrix<> D = 0.5 * (G + G.transpose()), W = 0.5 * (G - G.transpose());
      const Matrix<> ga = T * W - W * T - st.params.alpha * (D * T + T * D);
      for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
          Scalar adv = 0;
          for (int l = 0; l < 2; ++l) adv += uv(l) * ev(derivative(st.tau[sym_index(i, j, 2)], *g, l));
          ref[static_cast<size_t>(sym_index(i, j, 2))](pt) = -adv - ga(i, j);
        }
    }
    for (int c = 0; c < 3; ++c) {
      const PhysicalArray r = ref[static_cast<size_t>(c)] - ref[static_cast<size_t>(c)].mean();
      CHECK(testing::max_abs_diff(phys[static_cast<size_t>(c)], r) <= 1e-12 * r.abs().maxCoeff());
    }
  }
  SUBCASE("non-finite input raises a divergence error") {
    SolverState st = random_state(g, 1, 1.0);
    st.u[0](3) = Complex(std::nan(""), 0);
    CHECK_THROWS_AS(rhs_nonlinear(st), DivergenceError);
  }
}

TEST_CASE("linear stepping is exact") {
  const GridPtr g = make_grid(2, 16);
  const FluidParams p = kParamSets[2];
  SolverState st;
  st.params = p;
  st.u = VelocityField(g);
  st.tau = StressField(g);
  const std::array<int, 3> m{2, -1, 0};
  st.u[0] = testing::single_mode(*g, m, Complex(0.1, 0.2));
  st.u[1] = testing::single_mode(*g, m, Complex(0.2, 0.4));  // orthogonal to (2, -1)
  st.tau[0] = testing::single_mode(*g, m, Complex(0.05, 0));
  st.tau[1] = testing::single_mode(*g, m, Complex(0, -0.3));
  const Scalar dt = 0.01;
  const SolverState out = run(st, dt, 100, {std::nullopt, true});
  Vector<> k(2);
  k << 2, -1;
  const Eigen::MatrixXcd M = oracle_reduced(k, 100 * dt, p);
  const Index idx = g->flat_index(m);
  Eigen::VectorXcd x(5);
  x << st.u[0](idx), st.u[1](idx), st.tau[0](idx), st.tau[1](idx), st.tau[2](idx);
  const Eigen::VectorXcd y = M * x;
  Eigen::VectorXcd got(5);
  got << out.u[0](idx), out.u[1](idx), out.tau[0](idx), out.tau[1](idx), out.tau[2](idx);
  CHECK((got - y).cwiseAbs().maxCoeff() <= 1e-12 * y.cwiseAbs().maxCoeff());
  CHECK(out.t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out.step_index == 100);
}

TEST_CASE("property: linear energy is non-increasing") {
  // Re/2 |u|^2 + We/(4 omega) |tau|^2 dissipates under the linear flow.
  const GridPtr g = make_grid(2, 32);
  for (std::size_t ip = 0; ip < 4; ++ip) {
    const FluidParams p = kParamSets[ip];
    SolverState st = random_state(g, ip, 1.0, p, {1, 16, 0});
    Stepper s(*g, 0.02, p, {std::nullopt, true});
    auto energy = [&](const SolverState& x) {
      return 0.5 * p.re * std::pow(l2_norm(x.u), 2) + p.we / (4 * p.omega) * std::pow(l2_norm(x.tau), 2);
    };
    Scalar prev = energy(st);
    for (int i = 0; i < 50; ++i) {
      s.advance(st);
      const Scalar e = energy(st);
      CHECK(e <= prev * (1 + 1e-13));
      prev = e;
    }
  }
}

TEST_CASE("second-order convergence with a nonlinear term") {
  const GridPtr g = make_grid(2, 32);
  const SolverState st0 = random_state(g, 11, 0.3, kParamSets[3], {1, 4, 0});
  const Scalar t_end = 0.4;
  const SolverState ref = run(st0, t_end / 640, 640);
  const Scalar e1 = state_distance(run(st0, t_end / 20, 20), ref);
  const Scalar e2 = state_distance(run(st0, t_end / 40, 40), ref);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("stepping invariants") {
  const GridPtr g = make_grid(2, 32);
  SUBCASE("zero stays zero") {
    SolverState st;
    st.u = VelocityField(g);
    st.tau = StressField(g);
    const SolverState out = run(st, 0.05, 10);
    CHECK(l2_norm(out.u) == 0.0);
    CHECK(l2_norm(out.tau) == 0.0);
  }
  SUBCASE("deterministic and solenoidal") {
    const SolverState st = random_state(g, 2, 0.5);
    const SolverState a = run(st, 0.02, 25);
    const SolverState b = run(st, 0.02, 25);
    CHECK(state_distance(a, b) == 0.0);
    CHECK(divergence_residual(a.u) <= 1e-12);
    CHECK(mean_mode_magnitude(a.u) == 0.0);
    CHECK(mean_mode_magnitude(a.tau) == 0.0);
  }
  SUBCASE("time is an integer multiple of dt from the start") {
    SolverState st = random_state(g, 2, 0.5);
    st.t = 3.0;
    st.step_index = 7;
    const SolverState out = run(st, 0.1, 30);
    CHECK(out.t == 3.0 + 30 * 0.1);
    CHECK(out.step_index == 37);
  }
  SUBCASE("Friedrichs truncated run stays in the ball") {
    SolverState st = random_state(g, 2, 0.5, {}, {1, 10, 0});
    st.u = friedrichs_truncate(st.u, 4.0);
    st.tau = friedrichs_truncate(st.tau, 4.0);
    const SolverState out = run(st, 0.02, 10, {4.0, false});
    CHECK(l2_norm(friedrichs_truncate(out.u, 4.0) - out.u) == 0.0);
    CHECK(l2_norm(friedrichs_truncate(out.tau, 4.0) - out.tau) == 0.0);
  }
  SUBCASE("single Euler step") {
    const SolverState st = random_state(g, 5, 0.5);
    const SolverState a = step(st, 0.01);
    const SolverState b = run(st, 0.01, 1);
    CHECK(state_distance(a, b) == 0.0);
  }
  CHECK_THROWS_AS(Stepper(*g, 0.0, FluidParams{}), PreconditionError);
}

TEST_CASE("configuration") {
  SolverConfig c;
  CHECK(c.regularity() == -0.25);
  c.d = 3;
  CHECK(c.regularity() == 0.0);
  c.s = 0.3;
  CHECK(c.regularity() == 0.3);

  const nlohmann::json j = {{"d", 2}, {"n", 32}, {"dt", 0.01}, {"t_end", 0.1}, {"re", 2.0}, {"alpha", 0.5},
                            {"init", {{"kind", "random"}, {"band", {1, 6}}, {"seed", 3}}},
                            {"output", {{"stride", 2}}}};
  const SolverConfig a = config_from_json(j);
  CHECK(a.n == 32);
  CHECK(a.params.re == 2.0);
  CHECK(a.init.band.k_max == 6.0);
  CHECK(a.steps() == 10);
  const SolverConfig b = config_from_json(config_to_json(a));
  CHECK(config_to_json(b) == config_to_json(a));

  CHECK_THROWS_AS(config_from_json({{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"dt", 0.03}, {"t_end", 0.1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"omega", 1.0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"d", 4}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"init", {{"kind", "swirl"}}}}), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("initial data") {
  SolverConfig c;
  c.n = 32;
  c.init.amplitude = 0.02;
  c.init.seed = 4;
  const SolverState st = initial_state(c);
  const DyadicPartition part(st.u.grid());
  CHECK(hybrid_norm(st.u, c.regularity(), part).value == doctest::Approx(0.01).epsilon(1e-13));
  CHECK(hybrid_norm(st.tau, c.regularity(), part).value == doctest::Approx(0.01).epsilon(1e-13));
  CHECK(divergence_residual(st.u) <= 1e-14);
  CHECK(mean_mode_magnitude(st.u) == 0.0);

  c.init.kind = "mode";
  c.init.mode = {1, 0, 0};
  const SolverState m = initial_state(c);
  CHECK(hybrid_norm(m.u, c.regularity(), part).value == doctest::Approx(0.02).epsilon(1e-13));
  CHECK(l2_norm(m.tau) == 0.0);
  // (1, 0) mode gives u parallel to (0, sin x).
  const auto phys = to_physical(m.u);
  CHECK(phys[0].abs().maxCoeff() == 0.0);

  c.init.kind = "zero";
  const SolverState z = initial_state(c);
  CHECK(l2_norm(z.u) == 0.0);
}
