// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oldroyd/littlewood_paley.hpp"

namespace oldroyd {

enum class EstimateKind {
  // ||uv||_{H^s} <= C ||u||_{B^{d/2}_{2,1}} ||v||_{H^s},       -d/2 < s < d/2
  ProductSobolev,
  // ||uv||_{H^s} <= C ||u||_{H^{s+1}} ||v||_{B^{d/2-1}_{2,inf}}, -d/2 < s < d/2 - 1
  ProductSobolevShifted,
  // ||uv||_{B^{d/2}_{2,1}} <= C ||u||_{B^{d/2}_{2,1}} ||v||_{B^{d/2}_{2,1}}
  ProductBesov,
  // (sum_q 2^{2qs} ||[Delta_q, u].grad tau||^2)^{1/2} <= C ||grad u||_{B^{d/2}_{2,1}} ||tau||_{H^s}
  Commutator,
};

const char* estimate_name(EstimateKind kind);
EstimateKind parse_estimate(const std::string& name);
std::vector<EstimateKind> all_estimates();

// Whether s lies in the open interval where the estimate is stated.
bool admissible(EstimateKind kind, int dim, Scalar s);

struct EstimateSample {
  Scalar lhs = 0;
  Scalar rhs = 0;
  Scalar ratio = 0;
};

EstimateSample evaluate_product(EstimateKind kind, const ScalarField& u, const ScalarField& v, Scalar s,
                                const DyadicPartition& part);
EstimateSample evaluate_commutator(const VelocityField& u, const StressField& tau, Scalar s,
                                   const DyadicPartition& part);

struct EstimateFit {
  EstimateKind kind = EstimateKind::ProductSobolev;
  int dim = 2;
  int n = 64;
  Scalar s = 0;
  int samples = 0;
  Scalar max_ratio = 0;  // the fitted constant
  Scalar min_ratio = 0;
};

// Fitted constant: the largest lhs/rhs over `samples` random pairs. Bands
// (log-uniform upper edge up to |k| = 32) and spectral slopes are drawn per
// sample from `seed` independently of n, then truncated to half the dealiasing
// cutoff so every product is resolved exactly.
EstimateFit fit_estimate(EstimateKind kind, int dim, int n, Scalar s, int samples, std::uint64_t seed);

}  // namespace oldroyd
