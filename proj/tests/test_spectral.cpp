// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oldroyd/random_fields.hpp"
#include "oracles.hpp"

using namespace oldroyd;
using testing::field_of;
using testing::sample;
using testing::single_mode;
using X = std::array<Scalar, 3>;

namespace {

BandSpec full_band(const TorusGrid& g) { return {1.0, g.nyquist(), 0.0}; }

}  // namespace

TEST_CASE("grid rejects bad dimensions and sizes") {
  CHECK_THROWS_AS(TorusGrid(1, 16), Error);
  CHECK_THROWS_AS(TorusGrid(4, 16), Error);
  CHECK_THROWS_AS(TorusGrid(2, 4), Error);
  CHECK_THROWS_AS(TorusGrid(2, 48), Error);
  CHECK_NOTHROW(TorusGrid(3, 8));
}

TEST_CASE("negative index map is an involution consistent with wavevectors") {
  for (auto [d, n] : {std::pair{2, 16}, std::pair{3, 8}}) {
    const TorusGrid g(d, n);
    for (Index i = 0; i < g.size(); ++i) {
      const Index j = g.negative(i);
      CHECK(g.negative(j) == i);
      if (g.is_nyquist(i)) continue;
      for (int a = 0; a < d; ++a) CHECK(g.mode(j, a) == -g.mode(i, a));
    }
  }
}

TEST_CASE("dealias mask keeps the cube |m_a| <= n/3") {
  const TorusGrid g(2, 64);
  Index kept = 0;
  for (Index i = 0; i < g.size(); ++i) {
    bool in = true;
    for (int a = 0; a < 2; ++a) in = in && std::abs(g.mode(i, a)) <= 21;
    CHECK((g.dealias_mask()(i) == 1.0) == in);
    kept += in;
  }
  CHECK(kept == 43 * 43);
}

TEST_CASE("forward then inverse transform round-trips a real grid function") {
  const GridPtr g = make_grid(2, 32);
  const PhysicalArray v = sample(*g, [](const X& x) { return std::sin(3 * x[0]) * std::cos(x[1]) + 0.25 * std::cos(5 * x[1]); });
  const ArrayXc c = from_physical(v, *g);
  CHECK(hermitian_residual(c, *g) < 1e-14);
  Scalar imag = 1;
  CHECK(testing::max_abs_diff(to_physical(c, *g, &imag), v) < 1e-14);
  CHECK(imag < 1e-14);
}

TEST_CASE("paired transforms agree with single transforms") {
  const GridPtr g = make_grid(3, 16);
  const ScalarField a = random_field<FieldKind::Scalar>(g, full_band(*g), 1);
  const ScalarField b = random_field<FieldKind::Scalar>(g, full_band(*g), 2);
  PhysicalArray pa, pb;
  to_physical_pair(a[0], b[0], *g, pa, pb);
  CHECK(testing::max_abs_diff(pa, to_physical(a[0], *g)) < 1e-14 * pa.abs().maxCoeff());
  CHECK(testing::max_abs_diff(pb, to_physical(b[0], *g)) < 1e-14 * pb.abs().maxCoeff());
  ArrayXc ca, cb;
  from_physical_pair(pa, pb, *g, ca, cb);
  CHECK((ca - a[0]).abs().maxCoeff() < 1e-15 * a[0].abs().maxCoeff());
  CHECK((cb - b[0]).abs().maxCoeff() < 1e-15 * b[0].abs().maxCoeff());
}

TEST_CASE("coefficients follow f(x) = sum fhat(k) exp(i k.x)") {
  const GridPtr g = make_grid(2, 16);
  ScalarField f(g);
  f[0] = single_mode(*g, {2, -1, 0}, Complex(0.3, -0.7));
  const PhysicalArray v = to_physical(f[0], *g);
  for (Index p : {Index{0}, Index{17}, Index{200}}) CHECK(v(p) == doctest::Approx(oracle::evaluate(f, 0, p)).epsilon(1e-13));
}

TEST_CASE("random fields are Hermitian, mean-free and resolution independent") {
  const GridPtr g1 = make_grid(2, 32);
  const GridPtr g2 = make_grid(2, 64);
  const BandSpec band{1.0, 9.0, 1.0};
  const StressField a = random_field<FieldKind::SymTensor>(g1, band, 11);
  const StressField b = random_field<FieldKind::SymTensor>(g2, band, 11);
  CHECK(hermitian_residual(a) == 0.0);
  CHECK(mean_mode_magnitude(a) == 0.0);
  for (Index i = 0; i < g1->size(); ++i) {
    const Index j = g2->flat_index({g1->mode(i, 0), g1->mode(i, 1), 0});
    for (int c = 0; c < 3; ++c) CHECK(a[c](i) == b[c](j));
  }
  const VelocityField u = random_velocity(g1, band, 3);
  CHECK(divergence_residual(u) < 1e-14);
}

TEST_CASE("leray projection") {
  const GridPtr g = make_grid(2, 16);
  SUBCASE("annihilates gradients") {
    VectorField f(g);
    const ScalarField phi = random_field<FieldKind::Scalar>(g, full_band(*g), 5);
    for (int a = 0; a < 2; ++a) f[a] = g->wavenumber(a) * phi[0];
    CHECK(l2_norm(leray_project(f)) < 1e-14 * l2_norm(f));
  }
  SUBCASE("is the identity on divergence-free fields") {
    const VelocityField u = random_velocity(g, full_band(*g), 6);
    CHECK(l2_norm(leray_project(u) - u) <= 1e-14 * l2_norm(u));
  }
  SUBCASE("explicit 2x2 projector at k = (1, 0)") {
    VectorField f(g);
    const Index i = g->flat_index({1, 0, 0});
    f[0](i) = 1.0;
    f[1](i) = 1.0;
    const VelocityField p = leray_project(f);
    CHECK(std::abs(p[0](i)) < 1e-16);
    CHECK(std::abs(p[1](i) - Complex(1.0)) < 1e-16);
  }
  SUBCASE("idempotent on random fields") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const VelocityField p = leray_project(random_field<FieldKind::Vector>(g, full_band(*g), 100 + s));
      CHECK(l2_norm(leray_project(p) - p) <= 1e-14 * l2_norm(p));
      CHECK(divergence_residual(p) <= 1e-10);
    }
  }
  SUBCASE("rejects mismatched component counts") {
    const GridPtr g3 = make_grid(3, 8);
    CHECK_THROWS_AS(VectorField(g3, {ArrayXc::Zero(g3->size()), ArrayXc::Zero(g3->size())}), StructuralError);
  }
}

TEST_CASE("pointwise deformation, vorticity and g_alpha") {
  Matrix<> G(2, 2);
  G << 0, 1, 0, 0;
  Matrix<> D(2, 2), W(2, 2);
  D << 0, 0.5, 0.5, 0;
  W << 0, 0.5, -0.5, 0;
  CHECK((deformation_pointwise(G) - D).norm() == 0.0);
  CHECK((vorticity_pointwise(G) - W).norm() == 0.0);

  Matrix<> tau(2, 2);
  tau << 1, 0, 0, -1;
  Matrix<> expect(2, 2);
  expect << 0, 1, 1, 0;
  CHECK((g_alpha_pointwise(tau, G, 0.0) - expect).norm() < 1e-15);

  const Matrix<> id = Matrix<>::Identity(2, 2);
  for (Scalar alpha : {-1.0, -0.3, 0.0, 0.7, 1.0})
    CHECK((g_alpha_pointwise(id, G, alpha) + 2 * alpha * D).norm() < 1e-15);
}

TEST_CASE("spectral derivatives of explicit fields") {
  const GridPtr g = make_grid(2, 32);
  const VelocityField u = field_of<FieldKind::Vector>(g, {[](const X& x) { return std::sin(x[1]); }, testing::zero()});
  const StressField D = deformation(u);
  const SpinField W = vorticity(u);
  const PhysicalArray half_cos = sample(*g, [](const X& x) { return 0.5 * std::cos(x[1]); });
  CHECK(testing::max_abs_diff(to_physical(D[sym_index(0, 1, 2)], *g), half_cos) < 1e-14);
  CHECK(testing::max_abs_diff(to_physical(D[sym_index(0, 0, 2)], *g), PhysicalArray::Zero(g->size())) < 1e-14);
  CHECK(testing::max_abs_diff(to_physical(W[0], *g), half_cos) < 1e-14);

  SUBCASE("gradient flows have zero vorticity") {
    const ScalarField phi = random_field<FieldKind::Scalar>(g, BandSpec{1, 10, 0}, 4);
    CHECK(l2_norm(vorticity(gradient(phi))) < 1e-13 * l2_norm(gradient(phi)));
  }
  SUBCASE("div tau for tau_11 = sin x") {
    const StressField tau = field_of<FieldKind::SymTensor>(
        g, {[](const X& x) { return std::sin(x[0]); }, testing::zero(), testing::zero()});
    const auto dv = to_physical(div_tensor(tau));
    CHECK(testing::max_abs_diff(dv[0], sample(*g, [](const X& x) { return std::cos(x[0]); })) < 1e-14);
    CHECK(dv[1].abs().maxCoeff() < 1e-14);
  }
  SUBCASE("div tau is linear") {
    const StressField t1 = random_field<FieldKind::SymTensor>(g, BandSpec{1, 12, 0}, 1);
    const StressField t2 = random_field<FieldKind::SymTensor>(g, BandSpec{1, 12, 0}, 2);
    const VectorField lhs = div_tensor(2.5 * t1 + (-1.25) * t2);
    const VectorField rhs = 2.5 * div_tensor(t1) + (-1.25) * div_tensor(t2);
    CHECK(l2_norm(lhs - rhs) <= 1e-13 * l2_norm(lhs));
  }
  SUBCASE("advection of sin x by (sin y, 0)") {
    const ScalarField f = field_of<FieldKind::Scalar>(g, {[](const X& x) { return std::sin(x[0]); }});
    const PhysicalArray a = to_physical(advect(u, f)[0], *g);
    CHECK(testing::max_abs_diff(a, sample(*g, [](const X& x) { return std::sin(x[1]) * std::cos(x[0]); })) < 1e-14);
    CHECK(l2_norm(advect(VelocityField(g), f)) == 0.0);
  }
}

TEST_CASE("g_alpha matches the pointwise kernel on the grid") {
  const GridPtr g = make_grid(2, 32);
  const BandSpec band{1, 5, 0};
  const VelocityField u = random_velocity(g, band, 21);
  const StressField tau = random_field<FieldKind::SymTensor>(g, band, 22);
  const Scalar alpha = 0.4;
  const StressField out = g_alpha(tau, u, alpha);
  CHECK(hermitian_residual(out) < 1e-14);

  // Oracle: gradients and stresses summed directly from the Fourier series at a few points.
  std::vector<ArrayXc> grad;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) grad.push_back(kI * g->wavenumber(j) * u[i]);
  VectorField gfield01(g, {grad[0], grad[1]});
  VectorField gfield23(g, {grad[2], grad[3]});
  for (Index p : {Index{0}, Index{77}, Index{513}, Index{1000}}) {
    Matrix<> G(2, 2), T(2, 2);
    G << oracle::evaluate(gfield01, 0, p), oracle::evaluate(gfield01, 1, p), oracle::evaluate(gfield23, 0, p),
        oracle::evaluate(gfield23, 1, p);
    T << oracle::evaluate(tau, 0, p), oracle::evaluate(tau, 1, p), oracle::evaluate(tau, 1, p), oracle::evaluate(tau, 2, p);
    const Matrix<> expect = g_alpha_pointwise(T, G, alpha);
    CHECK(oracle::evaluate(out, 0, p) == doctest::Approx(expect(0, 0)).epsilon(1e-12).scale(1));
    CHECK(oracle::evaluate(out, 1, p) == doctest::Approx(expect(0, 1)).epsilon(1e-12).scale(1));
    CHECK(oracle::evaluate(out, 2, p) == doctest::Approx(expect(1, 1)).epsilon(1e-12).scale(1));
  }
  CHECK(l2_norm(g_alpha(tau, VelocityField(g), alpha)) == 0.0);
}

TEST_CASE("inner products") {
  const GridPtr g = make_grid(2, 16);
  SUBCASE("single mode: (f, f) = 2 |a|^2 L^d") {
    ScalarField f(g);
    const Complex a(0.6, -0.2);
    f[0] = single_mode(*g, {3, 1, 0}, a);
    const PhysicalArray v = to_physical(f[0], *g);
    const Scalar quad = v.square().sum() * g->cell_volume();
    const Scalar expect = 2 * std::norm(a) * g->box_volume();
    CHECK(inner_product_L2(f, f) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(quad == doctest::Approx(expect).epsilon(1e-13));
  }
  SUBCASE("positivity") {
    CHECK(inner_product_L2(ScalarField(g), ScalarField(g)) == 0.0);
    const StressField t = random_field<FieldKind::SymTensor>(g, full_band(*g), 2);
    CHECK(inner_product_L2(t, t) > 0);
  }
}

TEST_CASE("property: Parseval against physical quadrature for every kind") {
  for (auto [d, n] : {std::pair{2, 32}, std::pair{3, 16}}) {
    const GridPtr g = make_grid(d, n);
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto check = [&](const auto& f, const auto& h) {
        const auto pf = to_physical(f);
        const auto ph = to_physical(h);
        Scalar quad = 0;
        for (int c = 0; c < f.components(); ++c) quad += f.multiplicity(c) * (pf[c] * ph[c]).sum();
        quad *= g->cell_volume();
        const InnerProduct ip = inner_product_detail(f, h);
        CHECK(std::abs(quad - ip.value) <= 1e-12 * l2_norm(f) * l2_norm(h));
        CHECK(ip.imag_residual <= 1e-12);
      };
      const BandSpec b = full_band(*g);
      check(random_field<FieldKind::Scalar>(g, b, 10 * s), random_field<FieldKind::Scalar>(g, b, 10 * s + 1));
      check(random_field<FieldKind::Vector>(g, b, 10 * s + 2), random_field<FieldKind::Vector>(g, b, 10 * s + 3));
      check(random_field<FieldKind::SymTensor>(g, b, 10 * s + 4), random_field<FieldKind::SymTensor>(g, b, 10 * s + 5));
      check(random_field<FieldKind::SkewTensor>(g, b, 10 * s + 6), random_field<FieldKind::SkewTensor>(g, b, 10 * s + 7));
    }
  }
}

TEST_CASE("property: cancellation relation over 200 random pairs") {
  const GridPtr g = make_grid(2, 32);
  for (std::uint64_t s = 0; s < 200; ++s) {
    BandSpec b{1.0 + hashed_uniform(s, 0) * 4, 6.0 + hashed_uniform(s, 1) * 10, 2 * hashed_uniform(s, 2)};
    const VelocityField u = random_velocity(g, b, 2 * s);
    const StressField tau = random_field<FieldKind::SymTensor>(g, b, 2 * s + 1);
    const Scalar sum = inner_product_L2(div_tensor(tau), u) + inner_product_L2(deformation(u), tau);
    CHECK(std::abs(sum) <= 1e-12 * l2_norm(tau) * gradient_l2_norm(u));
  }
}

TEST_CASE("property: advection is skew-symmetric for divergence-free u") {
  const GridPtr g = make_grid(2, 64);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const BandSpec b{1.0, 3.0 + 7.0 * hashed_uniform(s, 9), 1.0};
    const VelocityField u = random_velocity(g, b, 3 * s);
    const ScalarField f = random_field<FieldKind::Scalar>(g, b, 3 * s + 1);
    const VectorField v = random_field<FieldKind::Vector>(g, b, 3 * s + 2);
    CHECK(std::abs(inner_product_L2(advect(u, f), f)) <= 1e-12 * l2_norm(u) * l2_norm(gradient(f)) * l2_norm(f));
    CHECK(std::abs(inner_product_L2(advect(u, v), v)) <= 1e-12 * l2_norm(u) * gradient_l2_norm(v) * l2_norm(v));
  }
}

TEST_CASE("operations reject fields on different grids") {
  const GridPtr a = make_grid(2, 16);
  const GridPtr b = make_grid(2, 32);
  CHECK_THROWS_AS(g_alpha(StressField(a), VelocityField(b), 0.0), StructuralError);
  CHECK_THROWS_AS(advect(VelocityField(a), ScalarField(b)), StructuralError);
  CHECK_THROWS_AS(inner_product_L2(ScalarField(a), ScalarField(b)), StructuralError);
}
