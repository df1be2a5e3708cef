// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "oldroyd/random_fields.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd {

const char* estimate_name(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::ProductSobolev: return "product-sobolev";
    case EstimateKind::ProductSobolevShifted: return "product-sobolev-shifted";
    case EstimateKind::ProductBesov: return "product-besov";
    case EstimateKind::Commutator: return "commutator";
  }
  return "";
}

EstimateKind parse_estimate(const std::string& name) {
  for (EstimateKind k : all_estimates())
    if (name == estimate_name(k)) return k;
  throw ConfigError("unknown estimate: " + name);
}

std::vector<EstimateKind> all_estimates() {
  return {EstimateKind::ProductSobolev, EstimateKind::ProductSobolevShifted, EstimateKind::ProductBesov,
          EstimateKind::Commutator};
}

bool admissible(EstimateKind kind, int dim, Scalar s) {
  const Scalar h = 0.5 * dim;
  switch (kind) {
    case EstimateKind::ProductSobolev: return s > -h && s < h;
    case EstimateKind::ProductSobolevShifted: return s > -h && s < h - 1;
    case EstimateKind::ProductBesov: return true;
    case EstimateKind::Commutator: return s > -h - 1 && s < h;
  }
  return false;
}

namespace {

constexpr Scalar kSampleBandTop = 32.0;

Scalar sobolev(const BlockNorms& b, Scalar s) { return besov_from_blocks(b, s, 2); }

EstimateSample make_sample(Scalar lhs, Scalar rhs) {
  EstimateSample e{lhs, rhs, rhs > 0 ? lhs / rhs : 0.0};
  return e;
}

}  // namespace

EstimateSample evaluate_product(EstimateKind kind, const ScalarField& u, const ScalarField& v, Scalar s,
                                const DyadicPartition& part) {
  const Scalar h = 0.5 * u.dim();
  const BlockNorms bu = block_norms(u, part);
  const BlockNorms bv = block_norms(v, part);
  const BlockNorms buv = block_norms(multiply(u, v), part);
  switch (kind) {
    case EstimateKind::ProductSobolev:
      return make_sample(sobolev(buv, s), besov_from_blocks(bu, h, 1) * sobolev(bv, s));
    case EstimateKind::ProductSobolevShifted:
      return make_sample(sobolev(buv, s), sobolev(bu, s + 1) * besov_from_blocks(bv, h - 1, kInfinity));
    case EstimateKind::ProductBesov:
      return make_sample(besov_from_blocks(buv, h, 1), besov_from_blocks(bu, h, 1) * besov_from_blocks(bv, h, 1));
    case EstimateKind::Commutator: break;
  }
  throw PreconditionError("evaluate_product: not a product estimate");
}

EstimateSample evaluate_commutator(const VelocityField& u, const StressField& tau, Scalar s,
                                   const DyadicPartition& part) {
  const Scalar h = 0.5 * u.dim();
  const StressField transport = advect(u, tau);
  Scalar lhs2 = 0;
  for (int q = part.q_min(); q <= part.q_max(); ++q) {
    const ArrayXs m = part.block_multiplier(q);
    StressField a = transport;
    a.apply_multiplier(m);
    StressField tq = tau;
    tq.apply_multiplier(m);
    if (l2_norm(tq) == 0 && l2_norm(a) == 0) continue;
    const Scalar c = l2_norm(a - advect(u, tq));
    lhs2 += std::exp2(2 * q * s) * c * c;
  }
  const Scalar rhs = besov_from_blocks(block_norms(u, part, 1), h, 1) * sobolev(block_norms(tau, part), s);
  return make_sample(std::sqrt(lhs2), rhs);
}

EstimateFit fit_estimate(EstimateKind kind, int dim, int n, Scalar s, int samples, std::uint64_t seed) {
  if (samples <= 0) throw PreconditionError("fit_estimate: need at least one sample");
  if (!admissible(kind, dim, s)) throw PreconditionError("fit_estimate: s outside the admissible range");
  const GridPtr grid = make_grid(dim, n);
  const DyadicPartition part(*grid);
  const Scalar k_top = std::max(2, grid->dealias_cutoff() / 2);

  // The same continuum sample set at every n: bands are drawn in absolute
  // wavenumbers and truncated to the exactly resolved range k_top.
  auto band_for = [&](std::uint64_t counter) {
    BandSpec b;
    const Scalar u1 = hashed_uniform(seed, counter);
    const Scalar u2 = hashed_uniform(seed, counter + 1);
    const Scalar u3 = hashed_uniform(seed, counter + 2);
    b.k_min = std::min(1.0 + 3.0 * u2, k_top);
    b.k_max = std::min(std::max(b.k_min + 1.0, b.k_min * std::pow(kSampleBandTop / b.k_min, u1)), k_top);
    b.slope = 3.0 * u3;
    return b;
  };

  EstimateFit fit;
  fit.kind = kind;
  fit.dim = dim;
  fit.n = n;
  fit.s = s;
  fit.samples = samples;
  fit.min_ratio = kInfinity;
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t base = 16ULL * static_cast<std::uint64_t>(i);
    const BandSpec bu = band_for(base);
    const BandSpec bv = band_for(base + 8);
    const std::uint64_t su = seed * 1000003ULL + 2ULL * static_cast<std::uint64_t>(i);
    EstimateSample e;
    if (kind == EstimateKind::Commutator) {
      e = evaluate_commutator(random_velocity(grid, bu, su), random_field<FieldKind::SymTensor>(grid, bv, su + 1), s,
                              part);
    } else {
      e = evaluate_product(kind, random_field<FieldKind::Scalar>(grid, bu, su),
                           random_field<FieldKind::Scalar>(grid, bv, su + 1), s, part);
    }
    fit.max_ratio = std::max(fit.max_ratio, e.ratio);
    fit.min_ratio = std::min(fit.min_ratio, e.ratio);
  }
  return fit;
}

}  // namespace oldroyd
