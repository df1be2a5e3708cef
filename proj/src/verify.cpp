// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "oldroyd/errors.hpp"
#include "oldroyd/littlewood_paley.hpp"
#include "oldroyd/monitor.hpp"
#include "oldroyd/random_fields.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd {

namespace {

struct Accumulator {
  int cases = 0;
  Scalar worst = 0;
  void add(Scalar r) {
    ++cases;
    worst = std::max(worst, std::isnan(r) ? kInfinity : r);
  }
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t i) { return seed * 0x100000001b3ULL + i; }

// Bands that keep every quadratic product below the dealiasing cutoff.
BandSpec product_band(const TorusGrid& grid, std::uint64_t seed, std::uint64_t i) {
  const Scalar top = std::max(2, grid.dealias_cutoff() / 2);
  BandSpec b;
  b.k_max = 2.0 + hashed_uniform(seed, 3 * i) * (top - 2.0);
  b.k_min = 1.0 + hashed_uniform(seed, 3 * i + 1) * 0.5 * (b.k_max - 1.0);
  b.slope = 2.0 * hashed_uniform(seed, 3 * i + 2);
  return b;
}

BandSpec wide_band(const TorusGrid& grid) {
  BandSpec b;
  b.k_min = 1.0;
  b.k_max = grid.nyquist();
  return b;
}

Accumulator cancellation(std::uint64_t seed) {
  Accumulator acc;
  for (auto [d, n] : {std::pair{2, 128}, std::pair{3, 32}}) {
    const GridPtr g = make_grid(d, n);
    for (std::uint64_t i = 0; i < 200; ++i) {
      const VelocityField u = random_velocity(g, wide_band(*g), mix(seed, 2 * i));
      const StressField tau = random_field<FieldKind::SymTensor>(g, wide_band(*g), mix(seed, 2 * i + 1));
      acc.add(cancellation_residual(u, tau));
    }
  }
  return acc;
}

Accumulator partition(std::uint64_t) {
  Accumulator acc;
  for (auto [d, n] : {std::pair{2, 64}, std::pair{2, 128}, std::pair{2, 256}, std::pair{3, 32}, std::pair{3, 64}}) {
    const DyadicPartition p(*make_grid(d, n));
    acc.add(std::max(p.homogeneous_residual(), p.inhomogeneous_residual()));
  }
  return acc;
}

Accumulator reconstruction(std::uint64_t seed) {
  Accumulator acc;
  const GridPtr g = make_grid(2, 128);
  const DyadicPartition part(*g);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const ScalarField f = random_field<FieldKind::Scalar>(g, wide_band(*g), mix(seed, i));
    ScalarField sum(g);
    for (int q = part.q_min(); q <= part.q_max(); ++q) sum += dyadic_block(f, q, part).field;
    acc.add(l2_norm(sum - f) / l2_norm(f));
  }
  return acc;
}

Accumulator orthogonality(std::uint64_t seed) {
  Accumulator acc;
  const GridPtr g = make_grid(2, 128);
  const DyadicPartition part(*g);
  for (std::uint64_t i = 0; i < 5; ++i) {
    const ScalarField f = random_field<FieldKind::Scalar>(g, wide_band(*g), mix(seed, i));
    for (int p = part.q_min(); p <= part.q_max(); ++p) {
      const ScalarField fp = dyadic_block(f, p, part).field;
      for (int q = part.q_min(); q <= part.q_max(); ++q) {
        if (std::abs(p - q) < 2) continue;
        acc.add(dyadic_block(fp, q, part).field[0].abs().maxCoeff());
      }
    }
  }
  return acc;
}

Accumulator bony(std::uint64_t seed) {
  Accumulator acc;
  const GridPtr g = make_grid(2, 128);
  const DyadicPartition part(*g);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const ScalarField f = random_field<FieldKind::Scalar>(g, product_band(*g, seed, 2 * i), mix(seed, 2 * i));
    const ScalarField h = random_field<FieldKind::Scalar>(g, product_band(*g, seed, 2 * i + 1), mix(seed, 2 * i + 1));
    const ScalarField fg = multiply(f, h);
    const ScalarField sum = paraproduct(f, h, part) + paraproduct(h, f, part) + remainder(f, h, part);
    acc.add(l2_norm(fg - sum) / l2_norm(fg));
  }
  return acc;
}

template <FieldKind K>
Scalar parseval_case(const GridPtr& g, std::uint64_t s1, std::uint64_t s2) {
  const Field<K> f = random_field<K>(g, wide_band(*g), s1);
  const Field<K> h = random_field<K>(g, wide_band(*g), s2);
  const auto pf = to_physical(f);
  const auto ph = to_physical(h);
  Scalar quad = 0;
  for (int c = 0; c < f.components(); ++c) quad += f.multiplicity(c) * (pf[c] * ph[c]).sum();
  quad *= g->cell_volume();
  return std::abs(quad - inner_product_L2(f, h)) / (l2_norm(f) * l2_norm(h));
}

Accumulator parseval(std::uint64_t seed) {
  Accumulator acc;
  for (auto [d, n] : {std::pair{2, 64}, std::pair{3, 16}}) {
    const GridPtr g = make_grid(d, n);
    for (std::uint64_t i = 0; i < 10; ++i) {
      acc.add(parseval_case<FieldKind::Scalar>(g, mix(seed, 8 * i), mix(seed, 8 * i + 1)));
      acc.add(parseval_case<FieldKind::Vector>(g, mix(seed, 8 * i + 2), mix(seed, 8 * i + 3)));
      acc.add(parseval_case<FieldKind::SymTensor>(g, mix(seed, 8 * i + 4), mix(seed, 8 * i + 5)));
      acc.add(parseval_case<FieldKind::SkewTensor>(g, mix(seed, 8 * i + 6), mix(seed, 8 * i + 7)));
    }
  }
  return acc;
}

Accumulator leray(std::uint64_t seed) {
  Accumulator acc;
  for (auto [d, n] : {std::pair{2, 64}, std::pair{3, 16}}) {
    const GridPtr g = make_grid(d, n);
    for (std::uint64_t i = 0; i < 20; ++i) {
      const VectorField f = random_field<FieldKind::Vector>(g, wide_band(*g), mix(seed, i));
      const VelocityField p = leray_project(f);
      acc.add(l2_norm(leray_project(p) - p) / l2_norm(p));
    }
  }
  return acc;
}

Accumulator divergence(std::uint64_t seed) {
  Accumulator acc;
  for (auto [d, n] : {std::pair{2, 128}, std::pair{3, 32}}) {
    const GridPtr g = make_grid(d, n);
    for (std::uint64_t i = 0; i < 20; ++i)
      acc.add(divergence_residual(leray_project(random_field<FieldKind::Vector>(g, wide_band(*g), mix(seed, i)))));
  }
  return acc;
}

Accumulator advection(std::uint64_t seed) {
  Accumulator acc;
  for (auto [d, n] : {std::pair{2, 64}, std::pair{3, 32}}) {
    const GridPtr g = make_grid(d, n);
    for (std::uint64_t i = 0; i < 20; ++i) {
      const VelocityField u = random_velocity(g, product_band(*g, seed, 2 * i), mix(seed, 2 * i));
      const ScalarField f = random_field<FieldKind::Scalar>(g, product_band(*g, seed, 2 * i + 1), mix(seed, 2 * i + 1));
      const Scalar lhs = std::abs(inner_product_L2(advect(u, f), f));
      acc.add(lhs / (l2_norm(u) * l2_norm(gradient(f)) * l2_norm(f)));
    }
  }
  return acc;
}

struct Suite {
  std::function<Accumulator(std::uint64_t)> run;
  Scalar threshold;
};

const std::map<std::string, Suite>& registry() {
  static const std::map<std::string, Suite> r = {
      {"cancellation", {cancellation, 1e-12}}, {"partition", {partition, 1e-12}},
      {"reconstruction", {reconstruction, 1e-10}}, {"orthogonality", {orthogonality, 0.0}},
      {"bony", {bony, 1e-10}},                   {"parseval", {parseval, 1e-12}},
      {"leray", {leray, 1e-14}},                 {"divergence", {divergence, 1e-10}},
                     {"advection", {advection, 1e-12}},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown verification suite: " + name);
  const Accumulator acc = it->second.run(seed);
  SuiteResult r;
  r.suite = name;
  r.seed = seed;
  r.cases = acc.cases;
  r.max_residual = acc.worst;
  r.threshold = it->second.threshold;
  r.pass = acc.worst <= r.threshold;
  return r;
}

nlohmann::json to_json(const SuiteResult& r) {
  return {{"suite", r.suite},       {"seed", r.seed},           {"cases", r.cases},
          {"max_residual", r.max_residual}, {"threshold", r.threshold}, {"pass", r.pass}};
}

}  // namespace oldroyd
