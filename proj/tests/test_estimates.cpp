// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "oldroyd/estimates.hpp"
#include "oldroyd/random_fields.hpp"
#include "oldroyd/stability.hpp"

using namespace oldroyd;

TEST_CASE("estimate names and admissible ranges") {
  for (EstimateKind k : all_estimates()) CHECK(parse_estimate(estimate_name(k)) == k);
  CHECK_THROWS_AS(parse_estimate("bogus"), ConfigError);
  CHECK(admissible(EstimateKind::ProductSobolev, 2, 0.0));
  CHECK_FALSE(admissible(EstimateKind::ProductSobolev, 2, 1.0));
  CHECK_FALSE(admissible(EstimateKind::ProductSobolevShifted, 2, 0.0));
  CHECK(admissible(EstimateKind::ProductSobolevShifted, 2, -0.25));
  CHECK(admissible(EstimateKind::ProductSobolevShifted, 3, 0.25));
  CHECK(admissible(EstimateKind::Commutator, 2, -1.5));
  CHECK_FALSE(admissible(EstimateKind::Commutator, 2, 1.0));
}

TEST_CASE("estimate samples") {
  const GridPtr g = make_grid(2, 32);
  const DyadicPartition part(*g);
  const ScalarField u = random_field<FieldKind::Scalar>(g, {1, 5, 0}, 1);
  const ScalarField v = random_field<FieldKind::Scalar>(g, {1, 5, 0}, 2);
  for (EstimateKind k : {EstimateKind::ProductSobolev, EstimateKind::ProductBesov}) {
    const EstimateSample a = evaluate_product(k, u, v, 0.0, part);
    CHECK(a.ratio == doctest::Approx(a.lhs / a.rhs).epsilon(1e-15));
    // Bilinear in (u, v): the ratio is scale invariant.
    const EstimateSample b = evaluate_product(k, 3.0 * u, 0.5 * v, 0.0, part);
    CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-12));
  }
  CHECK(evaluate_product(EstimateKind::ProductSobolev, ScalarField(g), v, 0.0, part).lhs == 0.0);
  const VelocityField w = random_velocity(g, {1, 5, 0}, 3);
  const StressField t = random_field<FieldKind::SymTensor>(g, {1, 5, 0}, 4);
  const EstimateSample c = evaluate_commutator(w, t, -0.25, part);
  CHECK(c.lhs > 0);
  CHECK(c.rhs > 0);
  CHECK(evaluate_commutator(VelocityField(g), t, -0.25, part).lhs == 0.0);
}

TEST_CASE("fitted constants") {
  const EstimateFit f = fit_estimate(EstimateKind::ProductSobolev, 2, 32, 0.0, 10, 5);
  CHECK(f.samples == 10);
  CHECK(f.max_ratio >= f.min_ratio);
  CHECK(f.min_ratio > 0);
  const EstimateFit g = fit_estimate(EstimateKind::ProductSobolev, 2, 32, 0.0, 10, 5);
  CHECK(g.max_ratio == f.max_ratio);
  CHECK_THROWS_AS(fit_estimate(EstimateKind::ProductSobolev, 2, 32, 1.5, 10, 5), PreconditionError);
}

TEST_CASE("Gronwall fit on synthetic series") {
  TwinSeries s;
  for (int i = 0; i <= 20; ++i) {
    const Scalar t = 0.1 * i;
    s.times.push_back(t);
    s.weight.push_back(2.0);
    s.weight_integral.push_back(2.0 * t);
    s.difference.push_back(1e-6 * std::exp(0.75 * 2.0 * t));
  }
  CHECK(fit_gronwall(s) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(envelope_holds(s, fit_gronwall(s)));
  CHECK_FALSE(envelope_holds(s, 0.5));
  for (Scalar& d : s.difference) d = 0;
  CHECK(fit_gronwall(s) == 0.0);
}

TEST_CASE("stability experiment basics") {
  SolverConfig c;
  c.n = 16;
  c.dt = 0.05;
  c.t_end = 0.5;
  c.init.band = {1, 5, 0};
  const StabilityReport zero = stability_experiment(c, 0.0);
  CHECK(zero.identical);
  for (Scalar d : zero.series.difference) CHECK(d == 0.0);
  // d(0) is a quadratic form in delta.
  c.t_end = 0.0;
  const Scalar d1 = stability_experiment(c, 1e-3).d0;
  const Scalar d2 = stability_experiment(c, 5e-4).d0;
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(1e-10));
  CHECK_THROWS_AS(stability_experiment(c, -1.0), PreconditionError);
}
